#pragma once

#include <ostream>
#include <vector>

#include "incmax/io.hpp"
#include "incmax/rational.hpp"

namespace incmax {

// One uniform-density set: every element contributes `density`.
struct SeparableSet {
  long size = 0;
  Rational density;
};

// f(X) = max over sets of |X ∩ R| * density(R).
struct SeparableInstance {
  std::vector<SeparableSet> sets;

  // Instance with |R_i| = i and the given densities d_1, d_2, ...
  static SeparableInstance from_densities(const std::vector<Rational>& densities);

  long max_size() const;
  long total_elements() const;
  // True when |R_i| = i for i = 1..N, densities non-increasing with d_1 <= 1, values non-decreasing.
  bool is_normalized() const;
  // Highest density among sets with exactly `size` elements; throws if there is none.
  const Rational& density_of(long size) const;
};

// Block sizes in the order the solution adds them, strictly increasing.
using SolutionSequence = std::vector<long>;

SeparableInstance normalize(const SeparableInstance& instance);

// Opt(C) = max over sets of min(C, |R|) * density.
Rational optimum(const SeparableInstance& instance, long C);

// Value of the first C elements when the blocks are added in order.
Rational evaluate(const SeparableInstance& instance, const SolutionSequence& solution, long C);

struct RatioResult {
  Rational value;          // meaningful when !unbounded
  bool unbounded = false;  // some size has value zero
  long worst_size = 0;     // first size attaining the ratio (or the zero value)
};

RatioResult competitive_ratio(const SeparableInstance& instance, const SolutionSequence& solution);

struct BestSolution {
  SolutionSequence solution;
  RatioResult ratio;
  long visited = 0;
};

// Exhaustive search over strictly increasing block sequences whose sum before the last block is
// below N. Ties go to the lexicographically smallest sequence.
BestSolution best_deterministic(const SeparableInstance& instance, long size_cap = 24);

// Columns C, alg_value, opt_value, ratio for C = 1..N.
void write_profile_csv(std::ostream& out, const SeparableInstance& instance,
                       const SolutionSequence& solution);

SeparableInstance separable_from_json(const json& doc);
json to_json(const SeparableInstance& instance);

}  // namespace incmax
