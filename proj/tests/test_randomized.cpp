#include <doctest.h>

#include <cmath>

#include "incmax/randomized.hpp"

using namespace incmax;

namespace {

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Antiderivative-based values of the six pieces.
std::array<double, 6> closed_form_parts(int k, double delta, double r) {
  const double L = std::log(r), R = std::pow(r, k + delta);
  auto G = [r](int i) { return (std::pow(r, i + 1) - 1) / (r - 1); };
  auto rise = [r, L](double a, double b) { return (std::pow(r, b) - std::pow(r, a)) / L; };
  auto fall = [r, L](double a, double b) { return (std::pow(r, -a) - std::pow(r, -b)) / L; };
  auto m1 = mu_nu(k - 1, k, delta, r), m0 = mu_nu(k, k, delta, r);
  const double mu1 = std::min(1.0, m1.mu), nu1 = std::min(1.0, m1.nu);
  const double mu0 = std::max(0.0, m0.mu), nu0 = std::max(0.0, m0.nu);
  return {
      (1 - mu1) - G(k - 2) * rise(mu1, 1) / R,
      (std::pow(r, k - 1) * rise(nu1, mu1) - (mu1 - nu1)) / R,
      R * std::pow(r, -k) * fall(delta, nu1) - G(k - 1) * std::pow(r, -k) * (nu1 - delta),
      (delta - mu0) - G(k - 1) * rise(mu0, delta) / R,
      (std::pow(r, k) * rise(nu0, mu0) - (mu0 - nu0)) / R,
      R * std::pow(r, -k - 1) * fall(0, nu0) - G(k) * std::pow(r, -k - 1) * nu0,
  };
}

// Midpoint rule over eps with the rounded sizes recomputed at every point.
double grid_expectation(long C, double r, int cells) {
  double total = 0;
  for (int j = 0; j < cells; ++j) {
    const double eps = (j + 0.5) / cells;
    auto sizes = randomized_sizes(1000000, r, eps);
    long prefix = 0, prev = 0;
    for (long c : sizes) {
      if (prefix + c >= C) {
        total += std::max(static_cast<double>(prev) / C, static_cast<double>(C - prefix) / std::max(C, c));
        break;
      }
      prefix += c;
      prev = c;
    }
  }
  return total / cells;
}

}  // namespace

TEST_CASE("both assemblies of g agree") {
  for (double x = 2.5; x <= 9.0; x += 0.125) CHECK(g_of(x) == doctest::Approx(g_of_terms(x)).epsilon(1e-12));
}

TEST_CASE("scaling base") {
  const double r = optimal_r();
  CHECK(r >= 5.164);
  CHECK(r <= 5.165);
  CHECK(g_of(r) == doctest::Approx(0.5643796885).epsilon(1e-9));
  CHECK(g_of(r) > g_of(r - 0.01));
  CHECK(g_of(r) > g_of(r + 0.01));
  CHECK(1 / g_of(r) <= 1.772);
}

TEST_CASE("schedule") {
  auto s = schedule(5.0, 0.5, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(s.c_tilde[i] == doctest::Approx(std::pow(5.0, i + 0.5)));
    CHECK(s.c[i] == static_cast<long>(std::floor(s.c_tilde[i])));
    double sum = 0;
    long isum = 0;
    for (std::size_t j = 0; j <= i; ++j) sum += s.c_tilde[j], isum += s.c[j];
    CHECK(s.t_tilde[i] == doctest::Approx(sum));
    CHECK(s.t[i] == isum);
  }
  CHECK(code_of([] { schedule(2.0, 0.5, 3); }) == "InvalidArgument");
  CHECK(code_of([] { schedule(5.0, 1.0, 3); }) == "InvalidArgument");
}

TEST_CASE("small-size expectation agrees with a fine grid") {
  const double r = optimal_r();
  CHECK(smallC_limit(r) == 170);
  for (long C : {1L, 2L, 5L, 6L, 27L, 31L, 100L, 170L})
    CHECK(expected_ratio_lb_smallC(C, r) == doctest::Approx(grid_expectation(C, r, 20000)).epsilon(2e-4));
  double lo = 1;
  for (long C = 1; C <= 170; ++C) lo = std::min(lo, expected_ratio_lb_smallC(C, r));
  CHECK(lo >= 0.569 - 1e-6);
  double first = 0;
  for (int m = 1; m <= 5; ++m)
    first += (std::min(1.0, std::log(m + 1.0) / std::log(r)) - std::log(static_cast<double>(m)) / std::log(r)) / m;
  CHECK(expected_ratio_lb_smallC(1, r) == doctest::Approx(first).epsilon(1e-12));
  CHECK(code_of([&] { expected_ratio_lb_smallC(171, r); }) == "SizeOutOfRange");
  CHECK(code_of([&] { expected_ratio_lb_smallC(0, r); }) == "SizeOutOfRange");
}

TEST_CASE("quadrature") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0, 1) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0, 1) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(adaptive_simpson([](double) { return 1.0; }, 2, 2) == 0);
  CHECK(adaptive_simpson([](double x) { return x; }, 1, 0) == doctest::Approx(-0.5));
}

TEST_CASE("integral pieces match their antiderivatives") {
  const double r = optimal_r();
  int checked = 0;
  for (int k = 3; k <= 12; ++k)
    for (int j = 1; j <= 20; ++j) {
      const double delta = 0.05 * j;
      try {
        auto env = integral_bound(k, delta, r);
        auto ref = closed_form_parts(k, delta, r);
        double sum = 0;
        for (int p = 0; p < 6; ++p) {
          CHECK(env.parts[p] == doctest::Approx(ref[p]).epsilon(1e-9).scale(1.0));
          sum += ref[p];
        }
        CHECK(env.integral_value == doctest::Approx(sum).epsilon(1e-9));
        CHECK(env.integral_value >= g_of(r) - 1e-6);
        ++checked;
      } catch (const Error& e) {
        CHECK(e.code() == "HypothesisViolated");
        CHECK(k == 3);
      }
    }
  CHECK(checked == 198);
}

TEST_CASE("integral bound preconditions") {
  const double r = optimal_r();
  CHECK(code_of([&] { integral_bound(3, 0.05, r); }) == "HypothesisViolated");
  CHECK(code_of([&] { integral_bound(5, 0.0, r); }) == "InvalidArgument");
  CHECK(code_of([&] { integral_bound(5, 1.5, r); }) == "InvalidArgument");
}

TEST_CASE("random draws") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    double e = draw_epsilon(seed);
    CHECK(e > 0);
    CHECK(e < 1);
    CHECK(draw_epsilon(seed) == e);
  }
  CHECK(draw_epsilon(1) != draw_epsilon(2));
}

TEST_CASE("randomized block sizes") {
  const double r = optimal_r();
  for (double eps : {0.01, 0.3, 0.77, 0.999}) {
    for (long N : {1L, 5L, 100L, 5000L}) {
      auto sizes = randomized_sizes(N, r, eps);
      REQUIRE_FALSE(sizes.empty());
      CHECK(sizes.back() == N);
      for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        CHECK(sizes[i] < sizes[i + 1]);
        if (i + 2 < sizes.size()) CHECK(sizes[i] == static_cast<long>(std::floor(std::pow(r, i + eps))));
      }
    }
  }
  auto inst = SeparableInstance::from_densities({1, Rational(1, 2), Rational(1, 3)});
  CHECK(run_randomized(inst, 7) == run_randomized(inst, 7));
  CHECK(run_randomized(inst, 7).back() == 3);
  CHECK(code_of([] { run_randomized(SeparableInstance{}, 1); }) == "EmptyInstance");
}
