#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "incmax/separable.hpp"

namespace incmax {

// Objective whose maximizer is the scaling base of the randomized algorithm.
double g_of(double x);
// The same function assembled from separately named terms.
double g_of_terms(double x);
// Golden-section search for the maximizer of g on [4, 7].
double optimal_r();

struct ScalingSchedule {
  double r = 0, eps = 0;
  std::vector<double> c_tilde;  // r^(i+eps)
  std::vector<long> c;          // floor(c_tilde)
  std::vector<double> t_tilde;  // r^eps (r^(i+1) - 1) / (r - 1)
  std::vector<long> t;          // prefix sums of c
};

ScalingSchedule schedule(double r, double eps, std::size_t length);

// Lower bound on E[f(X(C))] / v_C for 1 <= C <= floor(1 + r + r^2 + r^3), computed exactly over
// the intervals of eps on which the rounded sizes are constant.
double expected_ratio_lb_smallC(long C, double r);
long smallC_limit(double r);

struct MuNu {
  double mu = 0, nu = 0;
};
MuNu mu_nu(int i, int k, double delta, double r);

struct BoundEnvelope {
  int k = 0;
  double delta = 0;
  MuNu at_k_minus_1, at_k;
  std::array<double, 6> parts{};
  double integral_value = 0;
};

// Sum of the six piecewise integrals bounding the expected ratio at C = r^(k+delta).
BoundEnvelope integral_bound(int k, double delta, double r);

// Adaptive Simpson quadrature with an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol = 1e-10);

// Uniform draw from the open interval (0, 1) using the top 53 bits of a 64-bit generator.
double draw_epsilon(std::uint64_t seed);

// Block sizes floor(r^(i+eps)) up to the instance size; a last block of size N closes the run
// when the next size would exceed N.
SolutionSequence randomized_sizes(long N, double r, double eps);
SolutionSequence run_randomized(const SeparableInstance& instance, std::uint64_t seed, double r = 0);

}  // namespace incmax
