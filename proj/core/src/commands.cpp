#include "paracon/commands.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "paracon/engine.hpp"
#include "paracon/errors.hpp"
#include "paracon/scenario.hpp"
#include "paracon/verify.hpp"

namespace paracon {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_summary(std::ostream& os, const Scenario& sc, const Trace& trace) {
  const TraceStep& last = trace.steps.back();
  os << "converged: " << (trace.converged ? "yes" : "no") << '\n';
  os << "final_time: " << trace.final_time() << '\n';
  os << "steps_taken: " << trace.final_time() - 1 << '\n';
  os << "horizon: " << sc.horizon << '\n';
  os << "agents: " << sc.agents() << '\n';
  os << "dimension: " << sc.dimension() << '\n';
  os << "norm_p: " << sc.norm.to_string() << '\n';
  os << "final_disagreement: " << format_double(last.disagreement) << '\n';
  os << "final_residual: " << format_double(last.residual) << '\n';
  if (last.distance_to_witness) os << "final_distance_to_witness: " << format_double(*last.distance_to_witness) << '\n';
  os << "final_state:";
  for (std::size_t i = 0; i < last.x.agents(); ++i) {
    os << "\n  agent " << i + 1 << ':';
    for (Eigen::Index c = 0; c < last.x.block(i).size(); ++c) os << ' ' << format_double(last.x.block(i)[c]);
  }
  os << '\n';
}

}  // namespace

int cmd_run(const fs::path& scenario_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioFile file = load_scenario(scenario_path);
    const Trace trace = run(file.scenario);
    fs::create_directories(out_dir);
    {
      auto os = open_output(out_dir / "trace.csv");
      write_trace_csv(os, trace);
    }
    {
      auto os = open_output(out_dir / "metrics.csv");
      write_metrics_csv(os, trace);
    }
    {
      auto os = open_output(out_dir / "summary.txt");
      write_summary(os, file.scenario, trace);
    }
    write_summary(out, file.scenario, trace);
    return trace.converged ? exit_code::kOk : exit_code::kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kError;
  }
}

int cmd_verify(const std::vector<std::string>& names, std::uint64_t seed, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  try {
    if (names.empty()) throw InvalidInput("no checks selected");
    const auto reports = run_suite(names, seed);
    write_report_text(out, reports);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      auto csv = open_output(out_dir / "report.csv");
      write_report_csv(csv, reports);
      auto txt = open_output(out_dir / "report.txt");
      write_report_text(txt, reports);
    }
    for (const auto& r : reports)
      if (!r.passed()) return exit_code::kNotConverged;
    return exit_code::kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kError;
  }
}

int cmd_certify(const fs::path& scenario_path, std::size_t l_max, std::size_t k_max, std::ostream& out,
                std::ostream& err) {
  try {
    if (l_max == 0 || k_max == 0) throw InvalidInput("--lmax and --kmax must be positive");
    const ScenarioFile file = load_scenario(scenario_path);
    RjscResult result;
    try {
      result = search_rjsc(file.scenario.schedule, l_max, k_max);
    } catch (const std::out_of_range&) {
      throw InvalidInput("schedule horizon too short for " + std::to_string(k_max) + " windows");
    }
    out << describe(result) << '\n';
    return std::holds_alternative<RjscCertificate>(result) ? exit_code::kOk : exit_code::kNoCertificate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kError;
  }
}

}  // namespace paracon
