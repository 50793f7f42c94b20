#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

// Command implementations behind the `paracon` executable. Each returns the
// process exit code and writes human-readable output to `out` / `err`.

namespace paracon {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kNotConverged = 2;  // run: horizon exhausted; verify: a check failed
inline constexpr int kNoCertificate = 3;
}  // namespace exit_code

/// Runs the scenario and writes trace.csv, metrics.csv and summary.txt into
/// out_dir (created if missing).
int cmd_run(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

/// Runs the named checks; writes report.csv and report.txt into out_dir when
/// it is non-empty.
int cmd_verify(const std::vector<std::string>& names, std::uint64_t seed, const std::filesystem::path& out_dir,
               std::ostream& out, std::ostream& err);

/// Searches l = 1..l_max, rho0 = 1..l for a window certificate over k_max
/// windows of the scenario's schedule.
int cmd_certify(const std::filesystem::path& scenario_path, std::size_t l_max, std::size_t k_max, std::ostream& out,
                std::ostream& err);

}  // namespace paracon
