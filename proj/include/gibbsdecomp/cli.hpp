#pragma once

// The gibbs-decomp command line: decompose, bound, fixpoint, verify and
// model-info. Each command builds a JSON report; the functions below are
// also used directly by the tests.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gibbsdecomp/cover.hpp"
#include "gibbsdecomp/io.hpp"
#include "gibbsdecomp/potential.hpp"

namespace gibbsdecomp {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitBudget = 3 };

struct RunConfig {
  std::string command;
  std::string model;
  std::string model_file;
  // Entries are positive numbers or "full" (twice the gradient diameter
  // over n, so the cover has a single part).
  std::vector<std::string> deltas{"0.2"};
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  std::size_t budget_states = kDefaultStateBudget;
  std::size_t budget_transport = 256;
  std::size_t budget_pairs = kDefaultPairBudget;
  std::vector<double> m0;
  std::string out;
  std::string format = "json";
};

// Resolves a delta entry against the potential; "full" uses the diameter.
double resolve_delta(const std::string& entry, const Potential& f, std::size_t pair_budget);

Json decompose_report(const ModelSpec& model, const RunConfig& config);
Json bound_report(const ModelSpec& model, const RunConfig& config);
Json fixpoint_report(const ModelSpec& model, const RunConfig& config);
// Adds "failures" (a list of failing check names) and "passed".
Json verify_report(const ModelSpec& model, const RunConfig& config);
Json model_info_report(const ModelSpec& model, const RunConfig& config);

// Flattens a report into key,value rows with dotted paths.
std::string render_csv(const Json& doc);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gibbsdecomp
