// Free-format MPS writer and reader. The reader is written independently of
// the writer and accepts the general free-format subset used by common LP
// tools (no RANGES, minimization only).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "frostgrid/format.hpp"
#include "frostgrid/solver.hpp"

namespace frostgrid {

namespace {

bool encodable(const std::string& name) {
  if (name.empty() || name.front() == '$' || name.front() == '*') return false;
  return std::none_of(name.begin(), name.end(), [](unsigned char c) { return c <= ' ' || c >= 127; });
}

char row_type(Sense s) {
  switch (s) {
    case Sense::LessEqual: return 'L';
    case Sense::GreaterEqual: return 'G';
    case Sense::Equal: return 'E';
  }
  return 'E';
}

std::string objective_row_name(const MilpModel& model) {
  std::string name = "OBJ";
  for (;;) {
    const bool clash = std::any_of(model.constraints().begin(), model.constraints().end(),
                                   [&](const Constraint& c) { return c.name == name; });
    if (!clash) return name;
    name += "_";
  }
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double mps_value(const std::string& tok) {
  const double v = parse_double(tok);
  if (v >= 1e30) return kInfinity;
  if (v <= -1e30) return -kInfinity;
  return v;
}

}  // namespace

void write_mps(const MilpModel& model, std::ostream& out) {
  if (!encodable(model.name())) throw ExportError("model name '" + model.name() + "' is not MPS-encodable");
  for (const Variable& v : model.variables()) {
    if (!encodable(v.name)) throw ExportError("variable name '" + v.name + "' is not MPS-encodable");
  }
  for (const Constraint& c : model.constraints()) {
    if (!encodable(c.name)) throw ExportError("row name '" + c.name + "' is not MPS-encodable");
  }
  const std::string obj = objective_row_name(model);

  // Column-major view, rows in model order, duplicate terms merged.
  std::vector<std::vector<std::pair<int, double>>> columns(model.variable_count());
  for (int r = 0; r < model.constraint_count(); ++r) {
    std::map<int, double> merged;
    for (const Term& t : model.constraints()[r].terms) merged[t.var] += t.coeff;
    for (auto [var, coeff] : merged) {
      if (coeff != 0.0) columns[var].emplace_back(r, coeff);
    }
  }

  out << "NAME " << model.name() << "\n";
  out << "ROWS\n";
  out << " N " << obj << "\n";
  for (const Constraint& c : model.constraints()) out << " " << row_type(c.sense) << " " << c.name << "\n";

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (int j = 0; j < model.variable_count(); ++j) {
    const Variable& v = model.variables()[j];
    const bool integer = v.kind == VarKind::Binary;
    if (integer != in_integer_block) {
      out << " MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer_block = integer;
    }
    const double c = model.objective()[j];
    // Columns without entries still need one line to exist.
    if (c != 0.0 || columns[j].empty()) out << " " << v.name << " " << obj << " " << format_double(c) << "\n";
    for (auto [r, coeff] : columns[j]) {
      out << " " << v.name << " " << model.constraints()[r].name << " " << format_double(coeff) << "\n";
    }
  }
  if (in_integer_block) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (const Constraint& c : model.constraints()) {
    if (c.rhs != 0.0) out << " RHS " << c.name << " " << format_double(c.rhs) << "\n";
  }

  out << "BOUNDS\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::Binary) {
      out << " BV BND " << v.name << "\n";
      continue;
    }
    const bool lo_inf = std::isinf(v.lower);
    const bool hi_inf = std::isinf(v.upper);
    if (lo_inf && hi_inf) {
      out << " FR BND " << v.name << "\n";
    } else if (!lo_inf && !hi_inf && v.lower == v.upper) {
      out << " FX BND " << v.name << " " << format_double(v.lower) << "\n";
    } else {
      if (lo_inf) out << " MI BND " << v.name << "\n";
      else if (v.lower != 0.0) out << " LO BND " << v.name << " " << format_double(v.lower) << "\n";
      if (!hi_inf) out << " UP BND " << v.name << " " << format_double(v.upper) << "\n";
    }
  }
  out << "ENDATA\n";
}

void export_mps(const MilpModel& model, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_mps(model, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot open '" + path.string() + "' for writing");
  out << buffer.str();
  if (!out) throw ExportError("failed writing '" + path.string() + "'");
}

MilpModel read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  struct RowInfo {
    std::string name;
    char type = 'E';
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  struct ColInfo {
    std::string name;
    bool integer = false;
    bool binary = false;
    double lower = 0.0;
    double upper = kInfinity;
    bool upper_set = false;
    double cost = 0.0;
  };

  std::string model_name = "MODEL";
  std::string objective_row;
  std::vector<RowInfo> rows;
  std::map<std::string, int> row_index;
  std::vector<ColInfo> cols;
  std::map<std::string, int> col_index;
  bool integer_block = false;
  Section section = Section::None;

  auto column = [&](const std::string& name) -> int {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    const int id = static_cast<int>(cols.size());
    col_index.emplace(name, id);
    ColInfo c;
    c.name = name;
    c.integer = integer_block;
    cols.push_back(c);
    return id;
  };
  auto add_entry = [&](int col, const std::string& row, const std::string& value) {
    const double v = parse_double(value);
    if (row == objective_row) {
      cols[col].cost += v;
      return;
    }
    auto it = row_index.find(row);
    if (it == row_index.end()) throw ParseError("COLUMNS references unknown row '" + row + "'");
    rows[it->second].terms.push_back({col, v});
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '*') continue;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    const bool header = line.front() != ' ' && line.front() != '\t';
    if (header) {
      if (tok[0] == "NAME") {
        if (tok.size() > 1) model_name = tok[1];
      } else if (tok[0] == "ROWS") section = Section::Rows;
      else if (tok[0] == "COLUMNS") section = Section::Columns;
      else if (tok[0] == "RHS") section = Section::Rhs;
      else if (tok[0] == "BOUNDS") section = Section::Bounds;
      else if (tok[0] == "ENDATA") { section = Section::Done; break; }
      else throw ParseError("line " + std::to_string(line_no) + ": unsupported section '" + tok[0] + "'");
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": bad ROWS entry");
        const char type = tok[0].size() == 1 ? tok[0][0] : '?';
        if (type == 'N') {
          if (objective_row.empty()) objective_row = tok[1];
          continue;
        }
        if (type != 'L' && type != 'G' && type != 'E') {
          throw ParseError("line " + std::to_string(line_no) + ": bad row type '" + tok[0] + "'");
        }
        if (!row_index.emplace(tok[1], static_cast<int>(rows.size())).second) {
          throw ParseError("duplicate row '" + tok[1] + "'");
        }
        rows.push_back({tok[1], type, 0.0, {}});
        break;
      }
      case Section::Columns: {
        if (tok.size() == 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") integer_block = true;
          else if (tok[2] == "'INTEND'") integer_block = false;
          else throw ParseError("line " + std::to_string(line_no) + ": bad MARKER");
          continue;
        }
        if (tok.size() != 3 && tok.size() != 5) {
          throw ParseError("line " + std::to_string(line_no) + ": bad COLUMNS entry");
        }
        const int col = column(tok[0]);
        add_entry(col, tok[1], tok[2]);
        if (tok.size() == 5) add_entry(col, tok[3], tok[4]);
        break;
      }
      case Section::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) {
          throw ParseError("line " + std::to_string(line_no) + ": bad RHS entry");
        }
        for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
          if (tok[p] == objective_row) continue;
          auto it = row_index.find(tok[p]);
          if (it == row_index.end()) throw ParseError("RHS references unknown row '" + tok[p] + "'");
          rows[it->second].rhs = parse_double(tok[p + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) throw ParseError("line " + std::to_string(line_no) + ": bad BOUNDS entry");
        auto it = col_index.find(tok[2]);
        if (it == col_index.end()) throw ParseError("BOUNDS references unknown column '" + tok[2] + "'");
        ColInfo& c = cols[it->second];
        const std::string& type = tok[0];
        auto value = [&]() {
          if (tok.size() < 4) throw ParseError("line " + std::to_string(line_no) + ": bound needs a value");
          return mps_value(tok[3]);
        };
        if (type == "BV") {
          c.binary = true;
          c.lower = 0.0;
          c.upper = 1.0;
          c.upper_set = true;
        } else if (type == "UP") {
          c.upper = value();
          c.upper_set = true;
        } else if (type == "LO") {
          c.lower = value();
        } else if (type == "FX") {
          c.lower = c.upper = value();
          c.upper_set = true;
        } else if (type == "FR") {
          c.lower = -kInfinity;
          c.upper = kInfinity;
          c.upper_set = true;
        } else if (type == "MI") {
          c.lower = -kInfinity;
        } else if (type == "PL") {
          c.upper = kInfinity;
          c.upper_set = true;
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": unsupported bound type '" + type + "'");
        }
        break;
      }
      default: throw ParseError("line " + std::to_string(line_no) + ": data outside a section");
    }
  }
  if (section != Section::Done) throw ParseError("missing ENDATA");

  MilpModel model(model_name);
  for (const ColInfo& c : cols) {
    bool binary = c.binary;
    if (c.integer && !binary) {
      // Integer columns without explicit bounds are treated as [0, 1] only if declared so.
      if (c.lower == 0.0 && c.upper_set && c.upper == 1.0) binary = true;
      else throw ParseError("general integer column '" + c.name + "' is not supported");
    }
    const int id = model.add_variable(c.name, binary ? VarKind::Binary : VarKind::Continuous, c.lower, c.upper);
    model.set_objective(id, c.cost);
  }
  for (RowInfo& r : rows) {
    const Sense sense = r.type == 'L' ? Sense::LessEqual : r.type == 'G' ? Sense::GreaterEqual : Sense::Equal;
    model.add_constraint(r.name, std::move(r.terms), sense, r.rhs);
  }
  return model;
}

MilpModel import_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_mps(in);
}

}  // namespace frostgrid
