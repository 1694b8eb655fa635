#pragma once

#include <cstdint>
#include <vector>

#include "incmax/io.hpp"
#include "incmax/rational.hpp"

namespace incmax {

// A distribution over the N prefix instances of one separable instance with densities d.
struct YaoCertificate {
  long N = 0;
  std::vector<Rational> d;  // d[i-1] is the density of the set of size i
  std::vector<Rational> p;  // p[i-1] is the probability of stopping at size i
  double claimed_rho = 0;

  void validate() const;
};

// Strictly increasing block sizes.
using DeterministicAlg = std::vector<long>;

enum class AlgClass {
  Generous,      // the sum of all blocks before the last is below N
  BudgetCapped,  // the sum of all blocks is at most N
};

enum class AlgReading {
  Clamped,  // block j contributes clamp(i - prefix, 0, c_j) * d(c_j)
  Literal,  // block j contributes max(i - prefix, c_j) * d(c_j)
};

std::vector<DeterministicAlg> enumerate_algorithms(long N, AlgClass cls = AlgClass::Generous);

Rational alg_value(const std::vector<Rational>& d, const DeterministicAlg& alg, long i,
                   AlgReading reading = AlgReading::Clamped);

struct YaoBound {
  Rational rho;
  DeterministicAlg argmin;
  std::size_t algorithms = 0;  // size of the class
  std::size_t skipped = 0;     // algorithms with a zero value at a size of positive probability
};

// Minimum over the class of sum_i p_i * i * d_i / Alg(i). Ties go to the first algorithm in
// enumeration order.
YaoBound yao_bound(const YaoCertificate& cert, AlgClass cls = AlgClass::Generous,
                   AlgReading reading = AlgReading::Clamped);

struct SearchOptions {
  long budget = 1000;  // candidate evaluations
  std::uint64_t seed = 1;
  bool monotone = true;  // keep d non-increasing
  AlgClass cls = AlgClass::Generous;
};

// Seeded local search over d (dyadic steps) and p (mass moves between two sizes). The returned
// certificate carries its exact bound in claimed_rho and is never worse than the start.
YaoCertificate search_certificate(long N, const SearchOptions& options = {});

// The ten-size certificate with value about 1.447.
YaoCertificate reference_certificate();

YaoCertificate certificate_from_json(const json& doc);
json to_json(const YaoCertificate& cert);

}  // namespace incmax
