#include <fstream>
#include <sstream>

#include "frostgrid/format.hpp"
#include "frostgrid/solver.hpp"

namespace frostgrid {

ImportedSolution read_solution(const MilpModel& model, std::istream& in) {
  ImportedSolution out;
  std::vector<double> values(model.variable_count(), 0.0);
  std::vector<char> seen(model.variable_count(), 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string name;
    std::string value;
    if (!(is >> name)) continue;
    if (!(is >> value)) throw ParseError("line " + std::to_string(line_no) + ": missing value for '" + name + "'");
    std::string extra;
    if (is >> extra) throw ParseError("line " + std::to_string(line_no) + ": trailing text after value");
    const auto id = model.find_variable(name);
    if (!id) throw MappingError("unknown variable '" + name + "' on line " + std::to_string(line_no));
    if (seen[*id]) throw ParseError("variable '" + name + "' listed twice");
    seen[*id] = 1;
    values[*id] = parse_double(value);
  }
  for (int j = 0; j < model.variable_count(); ++j) {
    if (!seen[j]) out.warnings.push_back("variable '" + model.variables()[j].name + "' missing; set to 0");
  }
  out.solution.values = std::move(values);
  out.solution.objective_value = evaluate_objective(model, out.solution.values);
  out.solution.status = SolveStatus::Feasible;
  ViolationReport report = validate_solution(model, out.solution);
  if (!report.empty()) throw RejectedSolution(std::move(report));
  return out;
}

ImportedSolution import_solution(const MilpModel& model, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_solution(model, in);
}

void write_solution(const MilpModel& model, const MilpSolution& sol, std::ostream& out) {
  if (sol.values.size() != static_cast<std::size_t>(model.variable_count())) {
    throw MappingError("solution does not match the model");
  }
  out << "# objective " << format_double(sol.objective_value) << "\n";
  for (int j = 0; j < model.variable_count(); ++j) {
    out << model.variables()[j].name << " " << format_double(sol.values[j]) << "\n";
  }
}

}  // namespace frostgrid
