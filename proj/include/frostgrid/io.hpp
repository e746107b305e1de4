#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "frostgrid/instance.hpp"
#include "frostgrid/plan.hpp"

namespace frostgrid {

inline constexpr int kSchemaVersion = 1;

/// Instance JSON: OrchardInstance fields, points as [x, y] with at least two
/// decimals, mandatory "schema_version": 1. Output is canonical (fixed key
/// order, fixed formatting) so identical instances give identical bytes.
std::string instance_to_json(const OrchardInstance& inst);
OrchardInstance instance_from_json(const std::string& text);

void save_instance(const OrchardInstance& inst, const std::filesystem::path& path);
OrchardInstance load_instance(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical instance JSON, as 16 lowercase hex digits.
std::string instance_digest(const OrchardInstance& inst);
std::uint64_t fnv1a64(std::string_view bytes);

struct PlanFile {
  DesignPlan plan;
  std::string instance_digest;
  std::optional<std::string> status;  // solver status for MILP plans
  std::optional<double> rel_gap;
};

std::string plan_to_json(const PlanFile& file);
PlanFile plan_from_json(const std::string& text);

void save_plan(const PlanFile& file, const std::filesystem::path& path);
PlanFile load_plan(const std::filesystem::path& path);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
/// Writes bytes verbatim (binary mode); throws ExportError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace frostgrid
