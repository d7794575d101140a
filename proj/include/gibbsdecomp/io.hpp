#pragma once

// Model specifications (inline strings and JSON files) and report rendering.
//
// Inline model grammar:  name[:key=value,...]
//   curie-weiss  n, beta, h, bias
//   random       n, k, seed, amplitude, bias
//   low-rank     n, k, rank, seed, bias
//   separable    n, k, seed, amplitude, bias
//   zero         n, k
// bias sets lambda_i(symbol 1) on every coordinate, the remaining mass split
// evenly over the other symbols.
//
// Model files are JSON objects, either {"model": "<inline spec>"} or
// {"space": {...}, "table": [...]} where the space carries "alphabets" and
// optionally "metrics", "reference_measures" and "reference_points" (a
// symbol name or index per coordinate).

#include <cstddef>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gibbsdecomp/potential.hpp"
#include "gibbsdecomp/space.hpp"

namespace gibbsdecomp {

using Json = nlohmann::json;

struct ModelSpec {
  std::string name;
  Potential potential;
  // Canonical description echoed into reports.
  Json description;
};

ModelSpec parse_model(const std::string& spec, std::size_t state_budget = kDefaultStateBudget);
ModelSpec parse_model_json(const Json& doc, std::size_t state_budget = kDefaultStateBudget);
ModelSpec load_model_file(const std::string& path,
                          std::size_t state_budget = kDefaultStateBudget);

SpacePtr parse_space(const Json& doc, std::size_t state_budget = kDefaultStateBudget);
Json space_to_json(const ProductSpace& space);

// Rounded to 12 significant digits; non-finite values become the strings
// "inf", "-inf" or "nan".
Json number(double v);
double round12(double v);

// Sorted keys, two-space indent, trailing newline.
std::string render_json(const Json& doc);

// Minimal CSV: a header row and value rows, numbers at 12 significant digits.
std::string csv_field(double v);

}  // namespace gibbsdecomp
