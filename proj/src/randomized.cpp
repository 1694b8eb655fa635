#include "incmax/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace incmax {

double g_of(double x) {
  const double L = std::log(x);
  auto lg = [L](double y) { return std::log(y) / L; };
  const double z = lg((std::pow(x, 4) - 1) / (x - 1) - 1) - 3;
  const double delta = z;
  const double A = (std::pow(x, 3) - 1) / (x - 1) * std::pow(x, z);
  const double S = std::sqrt((A - 1) * (A - 1) + 4 * std::pow(x, 5 + 2 * z));
  return (1 - S) / (2 * L * std::pow(x, 3 + z)) - (1 - delta) * (1 - std::pow(x, -3)) / (x - 1) + z -
         (1 - std::pow(x, -3)) / (2 * (x - 1) * L) -
         ((1 - std::pow(x, -3)) / (x - 1) - 1 / std::pow(x, 3 + z)) * (lg(S - A + 1) - lg(2) - 3) -
         2 * std::pow(x, 2 + z) / ((S - A + 1) * L) + 2 / L -
         (1 + 1 / std::pow(x, 3 + z)) * (lg(std::pow(x, 3 + z) + 1) + lg(x - 1) - lg(std::pow(x, 4) - 1));
}

double g_of_terms(double x) {
  const double L = std::log(x);
  // x^(3+z) = x + x^2 + x^3 by the definition of z.
  const double top = x + x * x + x * x * x;
  const double z = std::log(top) / L - 3;
  const double xz = top / (x * x * x);
  const double geo3 = 1 + x + x * x;        // (x^3 - 1)/(x - 1)
  const double A = geo3 * xz;
  const double root = std::sqrt((A - 1) * (A - 1) + 4 * x * x * top * xz);  // 4 x^(5+2z)
  const double q = geo3 / (x * x * x);      // (1 - x^-3)/(x - 1)
  const double inv_top = 1 / top;
  const double gap = root - A + 1;

  const double head = (1 - root) * inv_top / (2 * L);
  const double linear = z - (1 - z) * q;
  const double q_log = -q / (2 * L);
  const double mixed = -(q - inv_top) * (std::log(gap / 2) / L - 3);
  const double reciprocal = -2 * x * x * xz / (gap * L);
  const double constant = 2 / L;
  const double tail = -(1 + inv_top) * std::log((top + 1) * (x - 1) / (std::pow(x, 4) - 1)) / L;
  return head + linear + q_log + mixed + reciprocal + constant + tail;
}

double optimal_r() {
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double a = 4, b = 7;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double gc = g_of(c), gd = g_of(d);
  while (b - a > 1e-10) {
    if (gc > gd) {
      b = d, d = c, gd = gc;
      c = b - invphi * (b - a), gc = g_of(c);
    } else {
      a = c, c = d, gc = gd;
      d = a + invphi * (b - a), gd = g_of(d);
    }
  }
  return (a + b) / 2;
}

ScalingSchedule schedule(double r, double eps, std::size_t length) {
  if (!(r > 2)) throw Error("InvalidArgument", "scaling base must exceed 2");
  if (!(eps > 0 && eps < 1)) throw Error("InvalidArgument", "eps must lie in (0, 1)");
  ScalingSchedule s;
  s.r = r;
  s.eps = eps;
  long prefix = 0;
  for (std::size_t i = 0; i < length; ++i) {
    double ct = std::pow(r, static_cast<double>(i) + eps);
    s.c_tilde.push_back(ct);
    s.c.push_back(static_cast<long>(std::floor(ct)));
    s.t_tilde.push_back(std::pow(r, eps) * (std::pow(r, static_cast<double>(i + 1)) - 1) / (r - 1));
    prefix += s.c.back();
    s.t.push_back(prefix);
  }
  return s;
}

long smallC_limit(double r) { return static_cast<long>(std::floor(1 + r + r * r + r * r * r)); }

double expected_ratio_lb_smallC(long C, double r) {
  if (C < 1 || C > smallC_limit(r)) throw Error("SizeOutOfRange", "size outside 1..floor(1+r+r^2+r^3)");
  // Enough blocks that even the smallest draw has prefix sum at least C.
  std::size_t blocks = 5;
  for (long sum = 0;; ++blocks) {
    sum = 0;
    for (std::size_t i = 0; i < blocks; ++i) sum += static_cast<long>(std::floor(std::pow(r, static_cast<double>(i))));
    if (sum >= C) break;
  }
  const double L = std::log(r);
  std::set<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i < blocks; ++i) {
    double lo = std::pow(r, static_cast<double>(i)), hi = std::pow(r, static_cast<double>(i + 1));
    for (long m = static_cast<long>(std::ceil(lo)); m <= hi; ++m) {
      double e = std::log(static_cast<double>(m)) / L - static_cast<double>(i);
      if (e > 0 && e < 1) cuts.insert(e);
    }
  }
  double total = 0;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const double a = *it, b = *std::next(it);
    const double mid = (a + b) / 2;
    long prev = 0, prefix = 0;
    for (std::size_t i = 0; i < blocks; ++i) {
      long c = static_cast<long>(std::floor(std::pow(r, static_cast<double>(i) + mid)));
      if (prefix < C && C <= prefix + c) {
        double lb = std::max(static_cast<double>(prev) / C,
                             static_cast<double>(C - prefix) / static_cast<double>(std::max(C, c)));
        total += lb * (b - a);
        break;
      }
      prefix += c;
      prev = c;
    }
  }
  return total;
}

MuNu mu_nu(int i, int k, double delta, double r) {
  const double L = std::log(r);
  const double R = std::pow(r, k + delta);
  MuNu out;
  out.mu = (std::log(R + 1) + std::log(r - 1) - std::log(std::pow(r, i + 1) - 1)) / L;
  const double w = R * (1 - std::pow(r, -(i + 1))) / (r - 1);
  const double root = std::sqrt((w - 1) * (w - 1) + 4 * std::pow(r, 2 * k + 2 * delta - 1));
  out.nu = std::log(root - w + 1) / L - std::log(2.0) / L - i;
  return out;
}

namespace {

double simpson_step(const std::function<double(double)>& fn, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = fn(lm), frm = fn(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15 * tol) return left + right + diff / 15;
  return simpson_step(fn, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(fn, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (a == b) return 0;
  const double fa = fn(a), fb = fn(b), fm = fn((a + b) / 2);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_step(fn, a, b, fa, fm, fb, whole, tol, 50);
}

BoundEnvelope integral_bound(int k, double delta, double r) {
  if (!(delta > 0 && delta <= 1)) throw Error("InvalidArgument", "delta must lie in (0, 1]");
  const double R = std::pow(r, k + delta);
  if (R < 1 + r + r * r + r * r * r)
    throw Error("HypothesisViolated", "r^(k+delta) is below 1 + r + r^2 + r^3");
  BoundEnvelope env;
  env.k = k;
  env.delta = delta;
  env.at_k_minus_1 = mu_nu(k - 1, k, delta, r);
  env.at_k = mu_nu(k, k, delta, r);
  auto c_tilde = [r](int i, double e) { return std::pow(r, i + e); };
  auto t_tilde = [r](int i, double e) { return std::pow(r, e) * (std::pow(r, i + 1) - 1) / (r - 1); };
  const double mu1 = std::min(1.0, env.at_k_minus_1.mu), nu1 = std::min(1.0, env.at_k_minus_1.nu);
  const double mu0 = std::max(0.0, env.at_k.mu), nu0 = std::max(0.0, env.at_k.nu);
  env.parts[0] = adaptive_simpson([&](double e) { return 1 - t_tilde(k - 2, e) / R; }, mu1, 1);
  env.parts[1] = adaptive_simpson([&](double e) { return (c_tilde(k - 1, e) - 1) / R; }, nu1, mu1);
  env.parts[2] = adaptive_simpson([&](double e) { return (R - t_tilde(k - 1, e)) / c_tilde(k, e); }, delta, nu1);
  env.parts[3] = adaptive_simpson([&](double e) { return 1 - t_tilde(k - 1, e) / R; }, mu0, delta);
  env.parts[4] = adaptive_simpson([&](double e) { return (c_tilde(k, e) - 1) / R; }, nu0, mu0);
  env.parts[5] = adaptive_simpson([&](double e) { return (R - t_tilde(k, e)) / c_tilde(k + 1, e); }, 0, nu0);
  env.integral_value = 0;
  for (double p : env.parts) env.integral_value += p;
  return env;
}

double draw_epsilon(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (;;) {
    double e = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (e > 0) return e;
  }
}

SolutionSequence randomized_sizes(long N, double r, double eps) {
  SolutionSequence sizes;
  for (int i = 0;; ++i) {
    long c = static_cast<long>(std::floor(std::pow(r, i + eps)));
    if (c > N) {
      if (sizes.empty() || sizes.back() < N) sizes.push_back(N);
      break;
    }
    sizes.push_back(c);
    if (c == N) break;
  }
  return sizes;
}

SolutionSequence run_randomized(const SeparableInstance& instance, std::uint64_t seed, double r) {
  if (instance.sets.empty()) throw Error("EmptyInstance", "instance has no sets");
  if (r == 0) r = optimal_r();
  return randomized_sizes(instance.max_size(), r, draw_epsilon(seed));
}

}  // namespace incmax
