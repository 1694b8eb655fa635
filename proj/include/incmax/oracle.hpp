#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "incmax/io.hpp"
#include "incmax/rational.hpp"
#include "incmax/separable.hpp"

namespace incmax {

// Element subsets of a universe {0, ..., n-1}, bit e set when element e is present.
using Subset = std::uint32_t;

std::vector<int> elements_of(Subset s);
Subset subset_of(const std::vector<int>& elements);

inline constexpr int kExhaustiveLimit = 15;

// Monotone set function with eval(empty) = 0. A positive tolerance marks values that came from
// floating-point input; comparisons then allow that much slack (scaled by the larger side).
struct ObjectiveOracle {
  int universe_size = 0;
  std::function<Rational(Subset)> eval;
  double tolerance = 0.0;
};

// Greater-or-equal under the oracle's tolerance.
bool at_least(const ObjectiveOracle& oracle, const Rational& a, const Rational& b);

// All 2^n values, indexed by subset.
std::vector<Rational> tabulate(const ObjectiveOracle& oracle, int limit = kExhaustiveLimit);

struct OptProfile {
  std::vector<Rational> opt;      // opt[k] for k = 0..n
  std::vector<Subset> witnesses;  // lexicographically smallest maximizer of each size
};

OptProfile opt_profile(const ObjectiveOracle& oracle, int limit = kExhaustiveLimit);

struct AccountabilityReport {
  bool holds = true;
  std::optional<Subset> violating_set;
};

AccountabilityReport is_accountable(const ObjectiveOracle& oracle, int limit = kExhaustiveLimit);

// Elements of `x` ordered so every prefix of length i has value at least (i/|x|) f(x).
std::vector<int> accountable_ordering(const ObjectiveOracle& oracle, Subset x);

// Sets R_i with |R_i| = i and density Opt(i)/i.
SeparableInstance reduce_to_separable(const ObjectiveOracle& oracle, int limit = kExhaustiveLimit);

// Concatenates accountable orderings of the optimal witnesses for each block size, skipping
// repeated elements, then appends the unused elements in index order.
std::vector<int> lift_solution(const ObjectiveOracle& oracle, const SolutionSequence& sizes,
                               int limit = kExhaustiveLimit);

// Fixture families.
ObjectiveOracle modular_oracle(std::vector<Rational> values);
// Universe = edges; value = heaviest matching inside the chosen edges.
struct WeightedEdge {
  int u = 0, v = 0;
  Rational weight;
};
ObjectiveOracle matching_oracle(std::vector<WeightedEdge> edges);
// Universe = sets over weighted items; value = weight of the covered items.
ObjectiveOracle coverage_oracle(std::vector<std::vector<int>> sets, std::vector<Rational> item_weights);

// {"type": "modular", "values": [...]}
// {"type": "matching", "edges": [[u, v, w], ...]}
// {"type": "coverage", "sets": [[items], ...], "weights": [...]}
ObjectiveOracle oracle_from_json(const json& doc);

}  // namespace incmax
