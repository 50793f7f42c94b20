#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "paracon/engine.hpp"
#include "paracon/errors.hpp"

// JSON scenario files. Schema (unknown keys are rejected everywhere):
//
//   agents          list of map objects, one per agent (see README)
//   graph_schedule  {kind: constant|periodic|seeded_random, graphs: [...],
//                    horizon?, seed?}; a graph is {arcs: [[j, i], ...]} with
//                    1-based "j is a neighbor of i" arcs, or {complete: true}.
//                    Self-arcs are always added.
//   weights         optional, one m x m matrix per schedule graph; entries are
//                   numbers or "a/b" strings
//   norm            {p}
//   init            {x0: [[...], ...]} or {random: {radius?, seed?}}
//   run             {T?, eps_consensus?, eps_residual?, seed?}
//   witness         optional common fixed point
//   verify          optional list of check names

namespace paracon {

/// Schema violation; `path` names the offending field, e.g.
/// "agents[1].set.radius".
class ScenarioError : public InvalidInput {
 public:
  ScenarioError(std::string path, const std::string& message)
      : InvalidInput(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ScenarioFile {
  Scenario scenario;
  std::vector<std::string> verify;
  std::uint64_t seed = 42;
};

/// Parses and validates a scenario document. Syntax errors report line and
/// column; schema errors report the field path.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Parses "a/b", "a" or a decimal literal. Integer quotients are computed as
/// one division of the two integers, so "1/3" equals 1.0 / 3.0 bit for bit.
double parse_weight(const std::string& text);

}  // namespace paracon
