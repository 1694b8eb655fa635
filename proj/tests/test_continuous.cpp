#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "incmax/continuous.hpp"

using namespace incmax;

namespace {

using PL = PiecewiseLinear<double>;
using PQ = PiecewiseLinear<Rational>;

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

PQ sample_exact() { return PQ({{Rational(2), Rational(2)}, {Rational(4), Rational(3)}, {Rational(8), Rational(4)}}); }

}  // namespace

TEST_CASE("construction checks") {
  CHECK(code_of([] { PL(std::vector<PL::Point>{}); }) == "InvalidInstance");
  CHECK(code_of([] { PL({{2, 1}, {1, 2}}); }) == "InvalidInstance");
  CHECK(code_of([] { PL({{1, 1}, {2, 0.5}}); }) == "InvalidInstance");
  CHECK(code_of([] { PL({{1, 0.5}, {2, 1.5}}); }) == "InvalidInstance");
  CHECK(code_of([] { PL({{1, 1}}, -1.0); }) == "InvalidInstance");
  CHECK(code_of([] { PL({{1, 1}}, 2.0); }) == "InvalidInstance");
  CHECK(PL({{1, 1}, {3, 2}}).extension_slope() == doctest::Approx(0.5));
  CHECK(PL({{2, 1}}).extension_slope() == doctest::Approx(0.5));
}

TEST_CASE("values and densities") {
  auto f = sample_exact();
  CHECK(value_at(f, Rational(0)) == 0);
  CHECK(value_at(f, Rational(1)) == 1);
  CHECK(value_at(f, Rational(3)) == Rational(5, 2));
  CHECK(value_at(f, Rational(6)) == Rational(7, 2));
  CHECK(value_at(f, Rational(10)) == Rational(9, 2));
  CHECK(density_at(f, Rational(0)) == 1);
  CHECK(density_at(f, Rational(4)) == Rational(3, 4));
  CHECK(f.segment_of(Rational(1)) == 0);
  CHECK(f.segment_of(Rational(2)) == 0);
  CHECK(f.segment_of(Rational(5)) == 2);
  CHECK(f.segment_of(Rational(9)) == 3);
}

TEST_CASE("random instances are monotone in value and density") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 50; ++t) {
    auto f = fixtures::random_piecewise(gen);
    double prev_v = 0, prev_d = 1;
    const double top = f.breakpoints().back().first * 2;
    for (int i = 1; i <= 400; ++i) {
      double c = top * i / 400;
      double v = value_at(f, c), d = density_at(f, c);
      CHECK(v >= prev_v - 1e-9 * v);
      CHECK(d <= prev_d * (1 + 1e-9));
      prev_v = v;
      prev_d = d;
    }
  }
}

TEST_CASE("reach") {
  auto id = identity_value<Rational>();
  CHECK(reach(id, Rational(3), Rational(2)) == 6);
  auto f = sample_exact();
  CHECK(reach(f, Rational(2), Rational(2)) == 8);
  CHECK(reach(f, Rational(1), Rational(3, 2)) == Rational(3, 2));
  auto flat = PQ({{Rational(1), Rational(1)}}, Rational(0));
  CHECK_FALSE(reach_or_unbounded(flat, Rational(1), Rational(2)).has_value());
  CHECK(code_of([&] { reach(flat, Rational(1), Rational(2)); }) == "DomainExhausted");
  std::mt19937_64 gen(2);
  for (int t = 0; t < 50; ++t) {
    auto g = fixtures::random_piecewise(gen);
    double c = g.breakpoints()[3].first;
    double p = reach(g, c, 2.0);
    CHECK(value_at(g, p) == doctest::Approx(2 * value_at(g, c)));
    CHECK(value_at(g, p * (1 + 1e-6)) > 2 * value_at(g, c));
  }
}

TEST_CASE("density inversion returns the largest qualifying size") {
  auto f = sample_exact();
  auto a = largest_size_with_density(f, Rational(3, 4));
  CHECK(a.kind == InverseKind::Found);
  CHECK(a.size == 4);
  CHECK(largest_size_with_density(f, Rational(2)).kind == InverseKind::NoSize);
  CHECK(largest_size_with_density(f, Rational(1, 4)).kind == InverseKind::Unbounded);
  CHECK(largest_size_with_density(f, Rational(1)).size == 2);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    auto g = fixtures::random_piecewise(gen);
    const double lo = g.extension_slope();
    const double hi = g.breakpoints()[0].second / g.breakpoints()[0].first;
    const double target = lo + (hi - lo) * (0.01 + 0.98 * u(gen));
    auto inv = largest_size_with_density(g, target);
    REQUIRE(inv.kind == InverseKind::Found);
    CHECK(density_at(g, inv.size) == doctest::Approx(target).epsilon(1e-9));
    CHECK(density_at(g, inv.size * (1 + 1e-6)) < target);
  }
}

TEST_CASE("tilt changes only the extension") {
  auto flat = PL({{1, 1}, {2, 1.5}}, 0.0);
  auto t = tilted(flat, 0.01);
  CHECK(t.extension_slope() == doctest::Approx(0.0075));
  CHECK(t.breakpoints() == flat.breakpoints());
  auto id = identity_value<double>();
  CHECK(tilted(id, 0.01).extension_slope() == doctest::Approx(0.99));
  auto mid = PL({{1, 1}}, 0.5);
  CHECK(tilted(mid, 0.01).extension_slope() == 0.5);
}

TEST_CASE("instance from points") {
  auto base = identity_value<Rational>();
  std::vector<std::pair<Rational, Rational>> pts{{Rational(2), Rational(2)}, {Rational(4), Rational(3)}};
  auto f = build_from_points(base, pts);
  CHECK(value_at(f, Rational(1)) == 1);
  CHECK(value_at(f, Rational(3)) == Rational(5, 2));
  CHECK(value_at(f, Rational(6)) == 4);
  auto off = pts;
  off[0].second = 3;
  CHECK(code_of([&] { build_from_points(base, off); }) == "InvalidPoints");
  auto flat = pts;
  flat[1].second = 2;
  CHECK(code_of([&] { build_from_points(base, flat); }) == "InvalidPoints");
  auto steep = pts;
  steep[1].second = 5;
  CHECK(code_of([&] { build_from_points(base, steep); }) == "InvalidPoints");
}

TEST_CASE("greedy scaling on a geometric instance") {
  std::vector<PL::Point> pts;
  for (int k = 0; k < 30; ++k) pts.emplace_back(std::ldexp(1.0, k), std::ldexp(std::pow(0.9, k), k));
  PL f(pts);
  const double rho = 2.618034;
  auto run = greedy_scaling(f, 1.0, rho);
  CHECK(run.status == GreedyStatus::HorizonReached);
  REQUIRE(run.sizes.size() > 3);
  for (std::size_t i = 0; i + 1 < run.sizes.size(); ++i) CHECK(run.sizes[i + 1] >= rho * run.sizes[i]);
  CHECK(check_competitive(f, run.sizes, rho).ok);
  CHECK(run.trace.size() == run.sizes.size());

  auto low = greedy_scaling(f, 1e6, rho);
  CHECK(low.status == GreedyStatus::NotCompetitive);
  CHECK(low.sizes.size() == 1);
  GreedyOptions<double> capped;
  capped.size_limit = 100.0;
  CHECK(greedy_scaling(f, 1.0, rho, capped).status == GreedyStatus::SizeLimitReached);
  GreedyOptions<double> few;
  few.max_iterations = 2;
  CHECK(greedy_scaling(f, 1.0, rho, few).status == GreedyStatus::IterationLimit);
  CHECK(code_of([&] { greedy_scaling(f, 0.0, rho); }) == "InvalidStart");
}

TEST_CASE("greedy agrees in exact and binary64 arithmetic") {
  std::vector<PQ::Point> exact;
  std::vector<PL::Point> approx;
  Rational c = 1, v = 1;
  for (int k = 0; k < 12; ++k) {
    exact.emplace_back(c, v);
    approx.emplace_back(to_double(c), to_double(v));
    c *= 3;
    v *= 2;
  }
  GreedyOptions<Rational> eo;
  eo.horizon = 1000;
  GreedyOptions<double> ao;
  ao.horizon = 1000;
  auto er = greedy_scaling(PQ(exact), Rational(1), Rational(5, 2), eo);
  auto ar = greedy_scaling(PL(approx), 1.0, 2.5, ao);
  REQUIRE(er.sizes.size() == ar.sizes.size());
  CHECK(er.status == ar.status);
  for (std::size_t i = 0; i < er.sizes.size(); ++i) CHECK(to_double(er.sizes[i]) == doctest::Approx(ar.sizes[i]));
}

TEST_CASE("competitiveness conditions") {
  auto f = fixtures::gap_continuous();
  const Rational rho(57, 40);
  const Rational c1 = 1 / rho;
  auto ok = check_competitive(f, std::vector<Rational>{c1, Rational(4), 12 - c1}, rho);
  CHECK(ok.ok);
  CHECK_FALSE(ok.covered_until.has_value());
  auto low = check_competitive(f, std::vector<Rational>{Rational(3)}, rho);
  CHECK_FALSE(low.ok);
  CHECK(low.first_violation == 1);
  auto jump = check_competitive(f, std::vector<Rational>{c1, Rational(12)}, rho);
  CHECK_FALSE(jump.ok);
  CHECK(jump.first_violation == 2);
  CHECK_FALSE(check_competitive(f, std::vector<Rational>{}, rho).ok);
  auto id = identity_value<Rational>();
  auto slow = check_competitive(id, std::vector<Rational>{Rational(1), Rational(2)}, Rational(3, 2));
  CHECK_FALSE(slow.ok);
  CHECK(slow.first_violation == 2);
  CHECK(slow.condition == "d(c_{i+1}) >= v(c_i) / (p(c_i) - sum)");
  auto fast = check_competitive(id, std::vector<Rational>{Rational(1), Rational(3)}, Rational(2));
  CHECK(fast.ok);
  CHECK(fast.covered_until == Rational(6));
}

TEST_CASE("continuous evaluation") {
  auto f = sample_exact();
  std::vector<Rational> sizes{Rational(1), Rational(4)};
  CHECK(evaluate_continuous(f, sizes, Rational(0)) == 0);
  CHECK(evaluate_continuous(f, sizes, Rational(1, 2)) == Rational(1, 2));
  CHECK(evaluate_continuous(f, sizes, Rational(2)) == 1);
  CHECK(evaluate_continuous(f, sizes, Rational(4)) == Rational(9, 4));
  CHECK(evaluate_continuous(f, sizes, Rational(50)) == 3);
  Rational prev = 0;
  for (int i = 0; i <= 60; ++i) {
    Rational x = Rational(i, 10);
    Rational v = evaluate_continuous(f, sizes, x);
    CHECK(v >= prev);
    CHECK(v <= value_at(f, x));
    prev = v;
  }
}

TEST_CASE("discretize") {
  auto f = sample_exact();
  auto inst = discretize(f, 2, 8);
  REQUIRE(inst.sets.size() == 8);
  for (long i = 1; i <= 8; ++i) CHECK(inst.sets[i - 1].density == value_at(f, Rational(i, 2)) / i);
  CHECK(code_of([&] { discretize(f, 0, 3); }) == "InvalidArgument");
}

TEST_CASE("continuize follows the best partially filled set") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rational> d;
    for (int i = 0; i < 7; ++i) d.emplace_back(1 + static_cast<long>(gen() % 20), 1 + static_cast<long>(gen() % 20));
    auto inst = SeparableInstance::from_densities(d);
    auto f = continuize(inst);
    for (int k = 1; k <= 90; ++k) {
      Rational c(k, 10);
      Rational expected = 0;
      for (const auto& s : inst.sets) expected = std::max(expected, Rational(std::min(c, Rational(s.size)) * s.density));
      CHECK(value_at(f, c) == expected);
    }
  }
}

TEST_CASE("json round trip") {
  auto f = sample_exact();
  auto back = piecewise_from_json<Rational>(to_json(f));
  CHECK(back.breakpoints() == f.breakpoints());
  CHECK_FALSE(back.explicit_slope());
  auto g = piecewise_from_json<double>(json::parse(R"({"breakpoints": [[1, 1], ["4", "5/2"]], "extend_slope": 0})"));
  CHECK(g.breakpoints()[1].second == 2.5);
  CHECK(g.extension_slope() == 0);
}

TEST_CASE("greedy trace csv") {
  std::ostringstream out;
  write_greedy_csv(out, {{1, 1, 1, 2, 1}});
  CHECK(out.str() == "i,c_i,d(c_i),v(c_i),p(c_i),prefix_sum\n1,1,1,1,2,1\n");
}
