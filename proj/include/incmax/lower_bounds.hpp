#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include "incmax/continuous.hpp"
#include "incmax/io.hpp"

namespace incmax {

inline constexpr double kPhiPlusOne = 2.6180339887498948482;

enum class RecurrenceVariant { A, B };

enum class RecurrenceEnd {
  StepLimit,       // ran all requested steps
  Negative,        // stopped at the first negative term
  ZeroDenominator, // a reciprocal came within 1e-300 of zero
  Overflow         // a reciprocal stopped being finite
};
std::string to_string(RecurrenceEnd e);

struct RecurrenceTrace {
  RecurrenceVariant variant = RecurrenceVariant::A;
  double alpha = 0, beta = 1, rho = 0, eps = 0;
  std::vector<double> t;           // t_0, t_1, ...
  std::vector<double> reciprocal;  // 1/t_n, carried separately so it stays exact near zero
  std::optional<std::size_t> first_negative;
  RecurrenceEnd end = RecurrenceEnd::StepLimit;
  unsigned digits = 0;             // 0 for binary64, else decimal digits of the MPFR run
};

// Decimal digits requested through INCMAX_PRECISION, or 0 for binary64.
unsigned precision_from_env();

// t_0 = beta, t_{n+1} = 1 / (rho/(t_n(1-eps)) - sum_{j<=n} (rho+eps)^{j-n}/t_j - alpha/(rho+eps)^n).
RecurrenceTrace recurrence_a(double alpha, double beta, double rho, double eps, std::size_t n_max,
                             unsigned digits = precision_from_env());

// t_0 = 1, t_1 = (1-eps)/rho, t_n = (1-eps) / (rho/t_{n-1} - 1/t_{n-2} - (1/rho) sum_{j<=n-3} (rho+eps)^{j+2-n}/t_j).
RecurrenceTrace recurrence_b(double rho, double eps, std::size_t n_max, unsigned digits = precision_from_env());

enum class RootRegime { ComplexPair, AllReal };

struct CharacteristicAnalysis {
  RecurrenceVariant variant = RecurrenceVariant::A;
  std::vector<double> coefficients;  // monic, highest degree first
  double discriminant = 0;
  std::vector<std::complex<double>> roots;
  RootRegime regime = RootRegime::AllReal;
  // Weights with a_n = sum_k weights[k] * roots[k]^n for the reciprocal sequence.
  std::vector<std::complex<double>> weights;
};

// alpha and beta only matter for variant A's starting values.
CharacteristicAnalysis characteristic_analysis(RecurrenceVariant variant, double rho, double eps,
                                               double alpha = 0, double beta = 1);

// Closed forms of the discriminants at eps = 0.
double discriminant_a_at_zero(double rho);
double discriminant_b_at_zero(double rho);
// -4r^6 + 24r^4 - r^3 - 30r^2 + 31r - 4
double threshold_polynomial(double rho);
double rho_star();

// Reciprocal a_n = 1/t_n evaluated from the weights and roots of the analysis.
double closed_form_reciprocal(const CharacteristicAnalysis& analysis, std::size_t n);

// Base instance with breakpoints (2^k, 2^k (1 - tilt)^k), k = 0..count-1.
PiecewiseLinear<double> tilted_identity(double tilt = 0.05, int count = 60);

struct ExclusionResult {
  PiecewiseLinear<double> instance;
  bool base_already_fails = false;
  double safe_extension = 0;   // sizes at or beyond this may be changed freely
  double epsilon = 0;
  std::size_t k = 0;           // index of the first greedy size beyond the kept prefix
  std::size_t ell = 0;
  std::vector<double> t;       // t_0..t_{ell+1}
  std::vector<std::pair<double, double>> ladder;
};

// Extends `base` beyond keep_until (default c1) so that greedy scaling from c1 fails at ratio rho.
ExclusionResult build_exclusion_instance(const PiecewiseLinear<double>& base, double c1, double rho,
                                         std::optional<double> eps = std::nullopt,
                                         std::optional<double> keep_until = std::nullopt);

struct ChainResult {
  PiecewiseLinear<double> instance;
  std::vector<ExclusionResult> steps;
  double safe_extension = 0;
};

ChainResult chain_exclusions(const PiecewiseLinear<double>& base, const std::vector<double>& starts, double rho,
                             std::optional<double> eps = std::nullopt);

struct DetLowerBound {
  PiecewiseLinear<double> instance;
  double rho = 0, epsilon = 0;
  std::size_t ell = 0;
  std::vector<double> t;       // t_0..t_{ell+1}
  std::vector<double> levels;  // (rho+eps)^n for n = 0..ell
};

DetLowerBound build_det_lb_instance(double rho, std::optional<double> eps = std::nullopt);

struct Certificate {
  bool infeasible = true;
  std::size_t candidates_checked = 0;
  std::vector<double> feasible_sizes;  // a passing candidate, when one exists
};

// Tries every strictly decreasing choice of densities from t_0..t_ell with block sizes
// (rho+eps)^n / t_n. A candidate passes when it is competitive and covers the last breakpoint.
Certificate certify_no_solution(const PiecewiseLinear<double>& instance, double rho, double eps,
                                const std::vector<double>& t, std::size_t ell);

json certificate_json(const DetLowerBound& lb, const Certificate& cert);
void write_trace_csv(std::ostream& out, const RecurrenceTrace& trace);

}  // namespace incmax
