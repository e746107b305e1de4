#include "frostgrid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "frostgrid/errors.hpp"
#include "frostgrid/format.hpp"

namespace frostgrid {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void write_points(std::ostringstream& os, const char* key, const std::vector<Point2D>& pts) {
  os << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i == 0 ? "\n    " : ",\n    ") << '[' << format_fixed_min(pts[i].x) << ", "
       << format_fixed_min(pts[i].y) << ']';
  }
  os << (pts.empty() ? "],\n" : "\n  ],\n");
}

void write_values(std::ostringstream& os, const char* key, const std::vector<double>& v, bool last) {
  os << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i == 0 ? "" : ", ") << format_fixed_min(v[i]);
  os << (last ? "]\n" : "],\n");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<Point2D> points(const json& j, const char* key) {
  std::vector<Point2D> out;
  for (const auto& p : field<std::vector<std::vector<double>>>(j, key)) {
    if (p.size() != 2) throw ParseError(std::string("'") + key + "' entries must be [x, y]");
    out.push_back({p[0], p[1]});
  }
  return out;
}

void check_schema(const json& j) {
  if (!j.is_object()) throw ParseError("top-level JSON value must be an object");
  if (!j.contains("schema_version")) throw ParseError("missing field 'schema_version'");
  if (field<int>(j, "schema_version") != kSchemaVersion) {
    throw ParseError("unsupported schema_version (expected 1)");
  }
}

}  // namespace

std::string instance_to_json(const OrchardInstance& inst) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema_version\": " << kSchemaVersion << ",\n";
  os << "  \"length_m\": " << format_fixed_min(inst.length_m) << ",\n";
  os << "  \"width_m\": " << format_fixed_min(inst.width_m) << ",\n";
  os << "  \"k\": " << inst.k << ",\n";
  os << "  \"d_ht_m\": " << format_fixed_min(inst.d_ht_m) << ",\n";
  os << "  \"f_lo\": " << format_fixed_min(inst.f_lo) << ",\n";
  os << "  \"f_hi\": " << format_fixed_min(inst.f_hi) << ",\n";
  os << "  \"k_tun\": " << format_fixed_min(inst.k_tun) << ",\n";
  os << "  \"alpha\": " << format_fixed_min(inst.alpha) << ",\n";
  os << "  \"beta1_nor\": " << format_fixed_min(inst.beta1_nor) << ",\n";
  os << "  \"beta2_nor\": " << format_fixed_min(inst.beta2_nor) << ",\n";
  write_points(os, "trees", inst.trees);
  write_points(os, "candidate_sites", inst.candidate_sites);
  write_points(os, "check_points", inst.check_points);
  write_values(os, "ku_lo", inst.ku_lo, false);
  write_values(os, "ku_hi", inst.ku_hi, true);
  os << "}\n";
  return os.str();
}

OrchardInstance instance_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_schema(j);
  OrchardInstance inst;
  inst.length_m = field<double>(j, "length_m");
  inst.width_m = field<double>(j, "width_m");
  inst.k = field<int>(j, "k");
  inst.d_ht_m = field<double>(j, "d_ht_m");
  inst.f_lo = field<double>(j, "f_lo");
  inst.f_hi = field<double>(j, "f_hi");
  inst.k_tun = field<double>(j, "k_tun");
  inst.alpha = field<double>(j, "alpha");
  inst.beta1_nor = field<double>(j, "beta1_nor");
  inst.beta2_nor = field<double>(j, "beta2_nor");
  inst.trees = points(j, "trees");
  inst.candidate_sites = points(j, "candidate_sites");
  inst.check_points = points(j, "check_points");
  inst.ku_lo = field<std::vector<double>>(j, "ku_lo");
  inst.ku_hi = field<std::vector<double>>(j, "ku_hi");
  inst.validate();
  return inst;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw ExportError("write to '" + path.string() + "' failed");
}

void save_instance(const OrchardInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, instance_to_json(inst));
}

OrchardInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text_file(path));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_digest(const OrchardInstance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(instance_to_json(inst))));
  return buf;
}

std::string plan_to_json(const PlanFile& file) {
  const DesignPlan& p = file.plan;
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["provenance"] = to_string(p.provenance);
  j["instance_digest"] = file.instance_digest;
  j["alpha"] = p.alpha;
  j["obj_part1_m"] = p.obj_part1_m;
  j["obj_part2"] = p.obj_part2 ? ordered_json(*p.obj_part2) : ordered_json(nullptr);
  if (file.status) j["status"] = *file.status;
  if (file.rel_gap) j["rel_gap"] = *file.rel_gap;
  ordered_json heaters = ordered_json::array();
  for (Point2D h : p.heaters) heaters.push_back({h.x, h.y});
  j["heaters"] = std::move(heaters);
  j["site_ids"] = p.site_ids ? ordered_json(*p.site_ids) : ordered_json(nullptr);
  ordered_json edges = ordered_json::array();
  for (auto [a, b] : p.pipe_edges) edges.push_back({a, b});
  j["pipe_edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

PlanFile plan_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_schema(j);
  PlanFile f;
  DesignPlan& p = f.plan;
  try {
    p.provenance = provenance_from_string(field<std::string>(j, "provenance"));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  f.instance_digest = field<std::string>(j, "instance_digest");
  p.alpha = field<double>(j, "alpha");
  p.obj_part1_m = field<double>(j, "obj_part1_m");
  if (j.contains("obj_part2") && !j.at("obj_part2").is_null()) p.obj_part2 = field<double>(j, "obj_part2");
  if (j.contains("status")) f.status = field<std::string>(j, "status");
  if (j.contains("rel_gap")) f.rel_gap = field<double>(j, "rel_gap");
  p.heaters = points(j, "heaters");
  if (j.contains("site_ids") && !j.at("site_ids").is_null()) p.site_ids = field<std::vector<int>>(j, "site_ids");
  for (const auto& e : field<std::vector<std::vector<int>>>(j, "pipe_edges")) {
    if (e.size() != 2) throw ParseError("pipe_edges entries must be [i, j]");
    p.pipe_edges.emplace_back(e[0], e[1]);
  }
  if (p.site_ids && p.site_ids->size() != p.heaters.size()) {
    throw ParseError("site_ids and heaters differ in length");
  }
  try {
    validate_plan_structure(p);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("inconsistent plan: ") + e.what());
  }
  return f;
}

void save_plan(const PlanFile& file, const std::filesystem::path& path) {
  write_text_file(path, plan_to_json(file));
}

PlanFile load_plan(const std::filesystem::path& path) {
  return plan_from_json(read_text_file(path));
}

}  // namespace frostgrid
