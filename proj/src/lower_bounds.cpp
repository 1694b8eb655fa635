#include "incmax/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <boost/multiprecision/mpfr.hpp>

namespace incmax {

namespace {

using boost::multiprecision::mpfr_float;

template <class Real>
double dbl(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) return x;
  else return x.template convert_to<double>();
}

template <class Real>
bool finite(const Real& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

template <class Real>
Real magnitude(const Real& x) {
  using std::abs;
  using boost::multiprecision::abs;
  return abs(x);
}

// Records a_n and stops on a negative, vanishing or non-finite term.
template <class Real>
bool push_term(RecurrenceTrace& trace, const Real& a) {
  trace.reciprocal.push_back(dbl(a));
  if (!finite(a)) {
    trace.t.push_back(std::nan(""));
    trace.end = RecurrenceEnd::Overflow;
    return false;
  }
  if (magnitude(a) < Real(1e-300)) {
    trace.t.push_back(std::copysign(std::numeric_limits<double>::infinity(), dbl(a)));
    trace.end = RecurrenceEnd::ZeroDenominator;
    return false;
  }
  trace.t.push_back(dbl(Real(1 / a)));
  if (a < 0) {
    trace.first_negative = trace.t.size() - 1;
    trace.end = RecurrenceEnd::Negative;
    return false;
  }
  return true;
}

template <class Real>
void run_a(RecurrenceTrace& trace, std::size_t n_max) {
  const Real rho = trace.rho, eps = trace.eps, alpha = trace.alpha;
  const Real q = rho + eps;
  Real a = 1 / Real(trace.beta);
  if (!push_term(trace, a)) return;
  Real sum = a;  // sum_{j<=n} q^{j-n} a_j
  Real decay = 1;  // q^{-n}
  for (std::size_t n = 0; n < n_max; ++n) {
    Real next = rho * a / (1 - eps) - sum - alpha * decay;
    if (!push_term(trace, next)) return;
    a = next;
    sum = sum / q + a;
    decay /= q;
  }
}

template <class Real>
void run_b(RecurrenceTrace& trace, std::size_t n_max) {
  const Real rho = trace.rho, eps = trace.eps;
  const Real q = rho + eps;
  std::vector<Real> a{Real(1), Real(rho / (1 - eps))};
  if (!push_term(trace, a[0]) || n_max == 0 || !push_term(trace, a[1])) return;
  Real tail = 0;  // sum_{j<=n-3} q^{j+2-n} a_j
  for (std::size_t n = 2; n <= n_max; ++n) {
    if (n >= 3) tail = (tail + a[n - 3]) / q;
    Real next = (rho * a[n - 1] - a[n - 2] - tail / rho) / (1 - eps);
    a.push_back(next);
    if (!push_term(trace, next)) return;
  }
}

template <class Fn>
void with_precision(unsigned digits, Fn&& fn) {
  if (digits == 0) {
    fn(double{});
    return;
  }
  mpfr_float::default_precision(digits);
  fn(mpfr_float{});
}

void check_rho(double rho) {
  if (!(rho > 1)) throw Error("InvalidArgument", "rho must exceed 1");
}

}  // namespace

std::string to_string(RecurrenceEnd e) {
  switch (e) {
    case RecurrenceEnd::StepLimit: return "StepLimit";
    case RecurrenceEnd::Negative: return "Negative";
    case RecurrenceEnd::ZeroDenominator: return "DivergedToZeroDenominator";
    case RecurrenceEnd::Overflow: return "Overflow";
  }
  return "?";
}

unsigned precision_from_env() {
  const char* text = std::getenv("INCMAX_PRECISION");
  if (!text || !*text) return 0;
  char* end = nullptr;
  long digits = std::strtol(text, &end, 10);
  if (*end != '\0' || digits < 0 || digits > 100000)
    throw Error("InvalidArgument", "INCMAX_PRECISION must be a digit count");
  return static_cast<unsigned>(digits);
}

RecurrenceTrace recurrence_a(double alpha, double beta, double rho, double eps, std::size_t n_max, unsigned digits) {
  check_rho(rho);
  if (!(beta > 0)) throw Error("InvalidArgument", "beta must be positive");
  if (eps < 0 || eps >= 1) throw Error("InvalidArgument", "eps must lie in [0, 1)");
  if (n_max > 100000) throw Error("InvalidArgument", "at most 1e5 steps");
  RecurrenceTrace trace;
  trace.variant = RecurrenceVariant::A;
  trace.alpha = alpha;
  trace.beta = beta;
  trace.rho = rho;
  trace.eps = eps;
  trace.digits = digits;
  with_precision(digits, [&](auto tag) { run_a<decltype(tag)>(trace, n_max); });
  return trace;
}

RecurrenceTrace recurrence_b(double rho, double eps, std::size_t n_max, unsigned digits) {
  check_rho(rho);
  if (eps < 0 || eps >= 1) throw Error("InvalidArgument", "eps must lie in [0, 1)");
  if (n_max > 100000) throw Error("InvalidArgument", "at most 1e5 steps");
  RecurrenceTrace trace;
  trace.variant = RecurrenceVariant::B;
  trace.rho = rho;
  trace.eps = eps;
  trace.digits = digits;
  with_precision(digits, [&](auto tag) { run_b<decltype(tag)>(trace, n_max); });
  return trace;
}

namespace {

using cd = std::complex<double>;

// Gaussian elimination with partial pivoting on a small dense complex system.
std::vector<cd> solve(std::vector<std::vector<cd>> m, std::vector<cd> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      cd f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<cd> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cd s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

// Roots of x^3 + a x^2 + b x + c; the real root comes first.
std::vector<cd> cubic_roots(double a, double b, double c, double disc) {
  const double p = b - a * a / 3;
  const double q = 2 * a * a * a / 27 - a * b / 3 + c;
  const double shift = -a / 3;
  if (disc > 0) {
    double s = std::sqrt(disc);
    double u = std::cbrt(-q / 2 + s), v = std::cbrt(-q / 2 - s);
    double re = -(u + v) / 2 + shift, im = std::sqrt(3.0) / 2 * (u - v);
    return {cd(u + v + shift, 0), cd(re, im), cd(re, -im)};
  }
  if (p == 0) return {cd(shift), cd(shift), cd(shift)};
  double m = 2 * std::sqrt(-p / 3);
  double arg = std::clamp(3 * q / (p * m), -1.0, 1.0);
  double theta = std::acos(arg) / 3;
  std::vector<cd> out;
  for (int k = 0; k < 3; ++k) out.emplace_back(m * std::cos(theta - 2 * std::numbers::pi * k / 3) + shift, 0);
  return out;
}

}  // namespace

CharacteristicAnalysis characteristic_analysis(RecurrenceVariant variant, double rho, double eps, double alpha,
                                               double beta) {
  check_rho(rho);
  if (eps < 0 || eps >= 1) throw Error("InvalidArgument", "eps must lie in [0, 1)");
  CharacteristicAnalysis out;
  out.variant = variant;
  const double q = rho + eps;
  if (variant == RecurrenceVariant::A) {
    const double sum = 1 / q + rho / (1 - eps) - 1;
    const double prod = rho / ((1 - eps) * q);
    out.coefficients = {1, -sum, prod};
    const double half = 1 / (2 * q) + rho / (2 * (1 - eps)) - 0.5;
    out.discriminant = half * half - prod;
    const double a0 = 1 / beta;
    const double a1 = rho / (beta * (1 - eps)) - 1 / beta - alpha;
    if (out.discriminant < 0) {
      double s = std::sqrt(-out.discriminant);
      cd x(half, -s), y(half, s);
      out.roots = {x, y};
      out.regime = RootRegime::ComplexPair;
      cd lambda(a0 / 2, (a0 / 2 * x.real() - a1 / 2) / x.imag());
      out.weights = {lambda, std::conj(lambda)};
    } else {
      double s = std::sqrt(out.discriminant);
      cd x(half - s), y(half + s);
      out.roots = {x, y};
      out.regime = RootRegime::AllReal;
      out.weights = s > 0 ? solve({{1, 1}, {x, y}}, {a0, a1}) : std::vector<cd>{a0, (a1 - a0 * x) / x};
    }
    return out;
  }
  const double den = (1 - eps) * q;
  const double a = -(rho * rho + 1 + rho * eps - eps) / den;
  const double b = (2 * rho + eps) / den;
  const double c = -(1 - 1 / rho) / den;
  out.coefficients = {1, a, b, c};
  const double first = a * a * a / 27 - a * b / 6 + c / 2;
  const double second = b / 3 - a * a / 9;
  out.discriminant = first * first + second * second * second;
  out.roots = cubic_roots(a, b, c, out.discriminant);
  out.regime = out.discriminant > 0 ? RootRegime::ComplexPair : RootRegime::AllReal;
  const double a0 = 1, a1 = rho / (1 - eps), a2 = (rho * rho - 1 + eps) / ((1 - eps) * (1 - eps));
  std::vector<std::vector<cd>> m(3, std::vector<cd>(3));
  for (int j = 0; j < 3; ++j) {
    m[0][j] = 1;
    m[1][j] = out.roots[j];
    m[2][j] = out.roots[j] * out.roots[j];
  }
  out.weights = solve(m, {a0, a1, a2});
  return out;
}

double closed_form_reciprocal(const CharacteristicAnalysis& analysis, std::size_t n) {
  if (analysis.variant == RecurrenceVariant::A && analysis.regime == RootRegime::ComplexPair)
    return 2 * (analysis.weights[0] * std::pow(analysis.roots[0], static_cast<double>(n))).real();
  cd sum = 0;
  for (std::size_t k = 0; k < analysis.roots.size(); ++k)
    sum += analysis.weights[k] * std::pow(analysis.roots[k], static_cast<double>(n));
  return sum.real();
}

double discriminant_a_at_zero(double rho) {
  return characteristic_analysis(RecurrenceVariant::A, rho, 0).discriminant;
}

double threshold_polynomial(double r) {
  const double r2 = r * r, r3 = r2 * r;
  return -4 * r3 * r3 + 24 * r2 * r2 - r3 - 30 * r2 + 31 * r - 4;
}

double discriminant_b_at_zero(double rho) {
  return characteristic_analysis(RecurrenceVariant::B, rho, 0).discriminant;
}

double rho_star() {
  double lo = 2, hi = 2.4;
  while (hi - lo > 1e-13) {
    double mid = (lo + hi) / 2;
    (threshold_polynomial(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

PiecewiseLinear<double> tilted_identity(double tilt, int count) {
  if (!(tilt > 0 && tilt < 1) || count < 1) throw Error("InvalidArgument", "tilt in (0,1) and count >= 1 required");
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < count; ++k) pts.emplace_back(std::ldexp(1.0, k), std::ldexp(std::pow(1 - tilt, k), k));
  return PiecewiseLinear<double>(std::move(pts));
}

namespace {

constexpr double kHugeHorizon = 1e300;
constexpr int kTailPoints = 60;
constexpr double kTailTilt = 0.05;

double touched_max(const GreedyRun<double>& run) {
  double m = 0;
  for (const auto& s : run.trace) {
    m = std::max({m, s.size, s.prefix_sum});
    if (std::isfinite(s.reach)) m = std::max(m, s.reach);
  }
  for (double c : run.sizes) m = std::max(m, c);
  return m;
}

std::vector<double> epsilon_schedule(std::optional<double> eps) {
  if (eps) return {*eps};
  std::vector<double> out;
  double e = 1e-3;
  for (int i = 0; i <= 40; ++i, e /= 2) out.push_back(e);
  return out;
}

}  // namespace

ExclusionResult build_exclusion_instance(const PiecewiseLinear<double>& base, double c1, double rho,
                                         std::optional<double> eps, std::optional<double> keep_until) {
  if (!(rho > 1 && rho < kPhiPlusOne)) throw Error("InvalidArgument", "rho must lie in (1, phi+1)");
  const double keep = keep_until.value_or(c1);
  if (!(c1 > 0) || keep < c1) throw Error("InvalidArgument", "need 0 < c1 <= keep_until");

  GreedyOptions<double> opts;
  opts.horizon = kHugeHorizon;
  opts.size_limit = keep;
  auto run = greedy_scaling(base, c1, rho, opts);
  ExclusionResult out;
  if (run.status == GreedyStatus::NotCompetitive) {
    out.instance = base;
    out.base_already_fails = true;
    out.safe_extension = touched_max(run) + 1;
    return out;
  }
  if (run.status != GreedyStatus::SizeLimitReached)
    throw Error("BaseUnsupported", "greedy run on the base ended with " + to_string(run.status) + " before passing " +
                                       format_double(keep));

  const std::size_t k = run.sizes.size();
  const double x0 = run.sizes.back();
  const double vk = value_at(base, x0);
  double z = 0;
  for (std::size_t j = 0; j + 1 < k; ++j) z += run.sizes[j];

  for (double e : epsilon_schedule(eps)) {
    auto trace = recurrence_a(z / vk, vk / x0, rho, e, 100000, 0);
    const auto& a = trace.reciprocal;
    std::optional<std::size_t> ell;
    for (std::size_t n = 0; n + 1 < a.size(); ++n)
      if (a[n] > a[n + 1]) {
        ell = n;
        break;
      }
    if (!ell) continue;
    std::vector<std::pair<double, double>> ladder;
    const double q = rho + e;
    for (std::size_t n = 0; n <= *ell; ++n) {
      double level = std::pow(q, static_cast<double>(n)) * vk;
      double even = n == 0 ? x0 : level * a[n];
      ladder.emplace_back(even, level);
      ladder.emplace_back(rho * level * a[n] / (1 - e), rho * level);
    }
    PiecewiseLinear<double> built;
    try {
      // Beyond the ladder the value keeps growing geometrically, so reaches stay finite and
      // later runs always find a finite next size.
      auto pts = build_from_points(base, ladder).breakpoints();
      for (int j = 0; j < kTailPoints; ++j)
        pts.emplace_back(2 * pts.back().first, 2 * (1 - kTailTilt) * pts.back().second);
      built = PiecewiseLinear<double>(std::move(pts));
    } catch (const Error&) {
      continue;
    }
    GreedyOptions<double> check;
    check.horizon = kHugeHorizon;
    if (greedy_scaling(built, c1, rho, check).status != GreedyStatus::NotCompetitive) continue;
    out.instance = std::move(built);
    out.epsilon = e;
    out.k = k;
    out.ell = *ell;
    for (std::size_t n = 0; n <= *ell + 1; ++n) out.t.push_back(1 / a[n]);
    out.safe_extension = ladder.back().first + 1;
    out.ladder = std::move(ladder);
    return out;
  }
  throw Error("EpsilonTooLarge", "no epsilon in the schedule produced a valid exclusion ladder");
}

ChainResult chain_exclusions(const PiecewiseLinear<double>& base, const std::vector<double>& starts, double rho,
                             std::optional<double> eps) {
  if (starts.empty()) throw Error("InvalidArgument", "need at least one starting value");
  if (!std::is_sorted(starts.begin(), starts.end())) throw Error("InvalidArgument", "starting values must be sorted");
  ChainResult out;
  out.instance = base;
  double keep = 0;
  for (double c1 : starts) {
    auto step = build_exclusion_instance(out.instance, c1, rho, eps, std::max(keep, c1));
    keep = std::max({keep, c1, step.safe_extension});
    out.instance = step.instance;
    out.steps.push_back(std::move(step));
  }
  out.safe_extension = keep;
  return out;
}

namespace {

// Smallest n with a_n >= a_{n+1}.
std::optional<std::size_t> first_drop(const std::vector<double>& a) {
  for (std::size_t n = 0; n + 1 < a.size(); ++n)
    if (a[n] >= a[n + 1]) return n;
  return std::nullopt;
}

}  // namespace

DetLowerBound build_det_lb_instance(double rho, std::optional<double> eps) {
  const double rs = rho_star();
  if (!(rho > 1 && rho < rs)) throw Error("InvalidArgument", "rho must lie in (1, rho*)");
  auto base = recurrence_b(rho, 0, 100000, 0);
  auto ell0 = first_drop(base.reciprocal);
  if (!ell0) throw Error("RhoTooLarge", "no drop in the reciprocal sequence within the step cap");

  for (double e : epsilon_schedule(eps)) {
    if (!(e > 0)) continue;
    auto tr = recurrence_b(rho, e, *ell0 + 2, 0);
    if (first_drop(tr.reciprocal) != ell0 || tr.reciprocal.size() < *ell0 + 2) continue;
    const auto& a = tr.reciprocal;
    const double q = rho + e;
    std::vector<double> levels;
    for (std::size_t n = 0; n <= *ell0; ++n) levels.push_back(std::pow(q, static_cast<double>(n)));
    bool ok = true;
    double weighted = 0;  // sum_{j<n} v_j a_j
    for (std::size_t n = 0; n < *ell0 && ok; ++n) {
      ok = a[n + 1] > e / q * (a[n] + weighted / levels[n]);
      weighted += levels[n] * a[n];
    }
    if (!ok) continue;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = 0; n <= *ell0; ++n) {
      pts.emplace_back(levels[n] * a[n], levels[n]);
      if (n < *ell0) pts.emplace_back(levels[n] * a[n + 1], levels[n]);
    }
    DetLowerBound out;
    try {
      out.instance = PiecewiseLinear<double>(std::move(pts), 0.0);
    } catch (const Error&) {
      continue;
    }
    out.rho = rho;
    out.epsilon = e;
    out.ell = *ell0;
    for (std::size_t n = 0; n <= *ell0 + 1; ++n) out.t.push_back(1 / a[n]);
    out.levels = std::move(levels);
    return out;
  }
  throw Error("EpsilonTooLarge", "no epsilon in the schedule satisfies the construction conditions");
}

Certificate certify_no_solution(const PiecewiseLinear<double>& instance, double rho, double eps,
                                const std::vector<double>& t, std::size_t ell) {
  if (t.size() < ell + 1) throw Error("InvalidArgument", "t-sequence shorter than ell + 1");
  if (ell > 30) throw Error("InvalidArgument", "too many densities to enumerate");
  std::vector<double> sizes;
  for (std::size_t n = 0; n <= ell; ++n) sizes.push_back(std::pow(rho + eps, static_cast<double>(n)) / t[n]);
  const double last = sizes.back();
  Certificate cert;
  const std::uint64_t count = std::uint64_t{1} << (ell + 1);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    std::vector<double> candidate;
    for (std::size_t n = 0; n <= ell; ++n)
      if (mask >> n & 1u) candidate.push_back(sizes[n]);
    ++cert.candidates_checked;
    auto verdict = check_competitive(instance, candidate, rho);
    if (verdict.ok && (!verdict.covered_until || *verdict.covered_until >= last)) {
      if (cert.infeasible) cert.feasible_sizes = candidate;
      cert.infeasible = false;
    }
  }
  return cert;
}

json certificate_json(const DetLowerBound& lb, const Certificate& cert) {
  json doc;
  doc["rho"] = lb.rho;
  doc["epsilon"] = lb.epsilon;
  doc["ell"] = lb.ell;
  doc["t"] = lb.t;
  doc["infeasible"] = cert.infeasible;
  doc["candidates_checked"] = cert.candidates_checked;
  return doc;
}

void write_trace_csv(std::ostream& out, const RecurrenceTrace& trace) {
  CsvWriter csv(out, {"n", "t_n", "1/t_n"});
  for (std::size_t n = 0; n < trace.t.size(); ++n)
    csv.row({std::to_string(n), format_double(trace.t[n]), format_double(trace.reciprocal[n])});
}

}  // namespace incmax
