#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "incmax/continuous.hpp"
#include "incmax/oracle.hpp"
#include "incmax/separable.hpp"

namespace fixtures {

using incmax::Rational;

// Sixteen sets on which every discrete solution loses more than the best continuous one.
inline std::vector<Rational> gap_densities() {
  std::vector<Rational> d(17);
  d[1] = 1;
  d[3] = d[4] = Rational(17, 40);
  for (int i = 12; i <= 16; ++i) d[i] = Rational(16473, 107200);
  Rational prev_value = 0;
  for (int i = 1; i <= 16; ++i) {
    if (d[i] == 0) d[i] = prev_value / i;
    prev_value = d[i] * i;
  }
  return {d.begin() + 1, d.end()};
}

inline incmax::PiecewiseLinear<Rational> gap_continuous() {
  return incmax::continuize(incmax::SeparableInstance::from_densities(gap_densities()));
}

// Random value function with d(0) = 1, non-increasing density and non-decreasing value.
inline incmax::PiecewiseLinear<double> random_piecewise(std::mt19937_64& gen, int points = 12) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  double x = 0.2 + 1.8 * unit(gen);
  double density = 1.0;
  pts.emplace_back(x, x * density);
  for (int k = 1; k < points; ++k) {
    double nx = x * (1.1 + 3.0 * unit(gen));
    double floor_density = density * x / nx;
    double nd = floor_density + (density - floor_density) * unit(gen) * unit(gen);
    if (unit(gen) < 0.2) nd = density;
    if (unit(gen) < 0.1) nd = floor_density;
    const double value = std::max(nx * nd, pts.back().second);
    x = nx;
    density = value / nx;
    pts.emplace_back(x, value);
  }
  return incmax::PiecewiseLinear<double>(pts);
}

// Every strictly increasing sequence of sizes from 1..n with total at most n.
inline std::vector<incmax::SolutionSequence> budget_sequences(long n) {
  std::vector<incmax::SolutionSequence> out;
  incmax::SolutionSequence cur;
  auto rec = [&](auto&& self, long last, long sum) -> void {
    for (long c = last + 1; sum + c <= n; ++c) {
      cur.push_back(c);
      out.push_back(cur);
      self(self, c, sum + c);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

// Element-level simulation: adds the elements of the chosen sets one at a time and recounts.
inline Rational simulate_prefix(const incmax::SeparableInstance& inst, const incmax::SolutionSequence& sol, long C) {
  std::vector<std::size_t> stream;
  for (long c : sol) {
    std::size_t owner = 0;
    bool found = false;
    for (std::size_t s = 0; s < inst.sets.size(); ++s)
      if (inst.sets[s].size == c && (!found || inst.sets[s].density > inst.sets[owner].density)) {
        owner = s;
        found = true;
      }
    for (long e = 0; e < c; ++e) stream.push_back(owner);
  }
  std::vector<long> counts(inst.sets.size(), 0);
  for (long e = 0; e < C && e < static_cast<long>(stream.size()); ++e) ++counts[stream[e]];
  Rational best = 0;
  for (std::size_t s = 0; s < inst.sets.size(); ++s) best = std::max(best, Rational(counts[s] * inst.sets[s].density));
  return best;
}

inline incmax::ObjectiveOracle random_oracle(std::mt19937_64& gen, int n) {
  std::uniform_int_distribution<int> weight(1, 9);
  switch (gen() % 3) {
    case 0: {
      std::vector<Rational> v;
      for (int i = 0; i < n; ++i) v.push_back(weight(gen));
      return incmax::modular_oracle(v);
    }
    case 1: {
      std::uniform_int_distribution<int> node(0, 5);
      std::vector<incmax::WeightedEdge> edges;
      for (int i = 0; i < n; ++i) {
        int u = node(gen), v = node(gen);
        if (u == v) v = (u + 1) % 6;
        edges.push_back({u, v, Rational(weight(gen))});
      }
      return incmax::matching_oracle(edges);
    }
    default: {
      const int items = 8;
      std::vector<std::vector<int>> sets(n);
      for (auto& s : sets)
        for (int it = 0; it < items; ++it)
          if (gen() % 3 == 0) s.push_back(it);
      std::vector<Rational> w;
      for (int it = 0; it < items; ++it) w.push_back(weight(gen));
      return incmax::coverage_oracle(sets, w);
    }
  }
}

}  // namespace fixtures
