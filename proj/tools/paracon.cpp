// paracon: run scenarios, verify properties, certify graph schedules.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paracon/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Distributed common fixed points of paracontractions over time-varying digraphs"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a scenario; exit 0 converged, 2 horizon exhausted, 1 error");
  run->add_option("file", scenario, "scenario JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::string> suite;
  std::uint64_t seed = 42;
  std::string report_dir;
  auto* verify = app.add_subcommand("verify", "run numerical checks; exit 0 all pass, 2 failures, 1 error");
  verify->add_option("--suite", suite, "check names or 'all'")->required()->delimiter(',');
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--out", report_dir, "directory for report.csv / report.txt");

  std::size_t l_max = 8;
  std::size_t k_max = 100;
  auto* certify = app.add_subcommand("certify", "search a window certificate; exit 0 found, 3 none, 1 error");
  certify->add_option("file", scenario, "scenario JSON")->required();
  certify->add_option("--lmax", l_max, "largest window length")->capture_default_str();
  certify->add_option("--kmax", k_max, "windows to check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) return paracon::cmd_run(scenario, out_dir, std::cout, std::cerr);
  if (*verify) return paracon::cmd_verify(suite, seed, report_dir, std::cout, std::cerr);
  return paracon::cmd_certify(scenario, l_max, k_max, std::cout, std::cerr);
}
