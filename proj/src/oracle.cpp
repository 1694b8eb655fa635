#include "incmax/oracle.hpp"

#include <algorithm>
#include <bit>
#include <memory>

namespace incmax {

std::vector<int> elements_of(Subset s) {
  std::vector<int> out;
  for (int e = 0; s; ++e, s >>= 1)
    if (s & 1u) out.push_back(e);
  return out;
}

Subset subset_of(const std::vector<int>& elements) {
  Subset s = 0;
  for (int e : elements) s |= Subset{1} << e;
  return s;
}

bool at_least(const ObjectiveOracle& oracle, const Rational& a, const Rational& b) {
  if (oracle.tolerance <= 0) return a >= b;
  Rational scale = std::max({Rational(1), Rational(abs(a)), Rational(abs(b))});
  return a >= b - from_double(oracle.tolerance) * scale;
}

namespace {

void check_size(const ObjectiveOracle& oracle, int limit) {
  if (oracle.universe_size < 0 || oracle.universe_size > limit)
    throw Error("UniverseTooLarge", "universe of " + std::to_string(oracle.universe_size) +
                                        " elements exceeds the exhaustive limit " + std::to_string(limit));
}

// For equal-size subsets: the one holding the lowest element where they differ comes first.
bool lex_smaller(Subset a, Subset b) {
  Subset diff = a ^ b;
  return diff && (a & (diff & (~diff + 1)));
}

}  // namespace

std::vector<Rational> tabulate(const ObjectiveOracle& oracle, int limit) {
  check_size(oracle, limit);
  const Subset count = Subset{1} << oracle.universe_size;
  std::vector<Rational> values(count);
  for (Subset s = 0; s < count; ++s) values[s] = oracle.eval(s);
  return values;
}

OptProfile opt_profile(const ObjectiveOracle& oracle, int limit) {
  auto values = tabulate(oracle, limit);
  const int n = oracle.universe_size;
  OptProfile out;
  out.opt.assign(n + 1, Rational(0));
  out.witnesses.assign(n + 1, 0);
  std::vector<bool> seen(n + 1, false);
  for (Subset s = 0; s < values.size(); ++s) {
    int k = std::popcount(s);
    if (!seen[k] || values[s] > out.opt[k] || (values[s] == out.opt[k] && lex_smaller(s, out.witnesses[k]))) {
      seen[k] = true;
      out.opt[k] = values[s];
      out.witnesses[k] = s;
    }
  }
  return out;
}

AccountabilityReport is_accountable(const ObjectiveOracle& oracle, int limit) {
  auto values = tabulate(oracle, limit);
  const int n = oracle.universe_size;
  // Sizes ascending, then lexicographic, so the reported set is the smallest violation.
  std::vector<Subset> order(values.size());
  for (Subset s = 0; s < values.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [](Subset a, Subset b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : lex_smaller(a, b);
  });
  for (Subset x : order) {
    if (!x) continue;
    const Rational& fx = values[x];
    Rational need = fx - fx / std::popcount(x);
    bool ok = false;
    for (int e = 0; e < n && !ok; ++e)
      if (x & (Subset{1} << e)) ok = at_least(oracle, values[x & ~(Subset{1} << e)], need);
    if (!ok) return {false, x};
  }
  return {true, std::nullopt};
}

std::vector<int> accountable_ordering(const ObjectiveOracle& oracle, Subset x) {
  std::vector<int> reversed;
  Subset cur = x;
  while (cur) {
    Rational fx = oracle.eval(cur);
    Rational need = fx - fx / std::popcount(cur);
    int pick = -1;
    for (int e : elements_of(cur)) {
      if (at_least(oracle, oracle.eval(cur & ~(Subset{1} << e)), need)) {
        pick = e;
        break;
      }
    }
    if (pick < 0) {
      std::string text;
      for (int e : elements_of(cur)) text += (text.empty() ? "" : ",") + std::to_string(e);
      throw Error("NotAccountable", "no removable element in {" + text + "}");
    }
    reversed.push_back(pick);
    cur &= ~(Subset{1} << pick);
  }
  return {reversed.rbegin(), reversed.rend()};
}

SeparableInstance reduce_to_separable(const ObjectiveOracle& oracle, int limit) {
  auto profile = opt_profile(oracle, limit);
  std::vector<Rational> densities;
  for (int k = 1; k <= oracle.universe_size; ++k) densities.push_back(profile.opt[k] / k);
  return SeparableInstance::from_densities(densities);
}

std::vector<int> lift_solution(const ObjectiveOracle& oracle, const SolutionSequence& sizes, int limit) {
  const int n = oracle.universe_size;
  long total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1]))
      throw Error("InvalidSizes", "block sizes must be positive and strictly increasing");
    total += sizes[i];
  }
  if (total > n)
    throw Error("InvalidSizes", "block sizes sum to " + std::to_string(total) + " > " + std::to_string(n));
  auto profile = opt_profile(oracle, limit);
  std::vector<int> order;
  Subset used = 0;
  for (long c : sizes) {
    for (int e : accountable_ordering(oracle, profile.witnesses[c])) {
      if (used & (Subset{1} << e)) continue;
      used |= Subset{1} << e;
      order.push_back(e);
    }
  }
  for (int e = 0; e < n; ++e)
    if (!(used & (Subset{1} << e))) order.push_back(e);
  return order;
}

ObjectiveOracle modular_oracle(std::vector<Rational> values) {
  ObjectiveOracle o;
  o.universe_size = static_cast<int>(values.size());
  auto vals = std::make_shared<const std::vector<Rational>>(std::move(values));
  o.eval = [vals](Subset s) {
    Rational sum = 0;
    for (int e : elements_of(s)) sum += (*vals)[e];
    return sum;
  };
  return o;
}

ObjectiveOracle matching_oracle(std::vector<WeightedEdge> edges) {
  const int m = static_cast<int>(edges.size());
  if (m > 20) throw Error("UniverseTooLarge", "matching fixture supports at most 20 edges");
  std::vector<Subset> conflicts(m, 0);
  for (int i = 0; i < m; ++i) {
    if (edges[i].weight < 0) throw Error("InvalidOracle", "edge weights must be nonnegative");
    for (int j = 0; j < m; ++j) {
      bool touch = edges[i].u == edges[j].u || edges[i].u == edges[j].v || edges[i].v == edges[j].u ||
                   edges[i].v == edges[j].v;
      if (touch) conflicts[i] |= Subset{1} << j;
    }
  }
  // best[X] = max(best[X - e], w(e) + best[X minus everything touching e]) for the lowest e in X.
  auto best = std::make_shared<std::vector<Rational>>(std::size_t{1} << m);
  for (Subset x = 1; x < best->size(); ++x) {
    int e = std::countr_zero(x);
    Subset without = x & ~(Subset{1} << e);
    Rational take = edges[e].weight + (*best)[x & ~conflicts[e]];
    (*best)[x] = std::max((*best)[without], take);
  }
  ObjectiveOracle o;
  o.universe_size = m;
  o.eval = [best = std::shared_ptr<const std::vector<Rational>>(best)](Subset s) { return (*best)[s]; };
  return o;
}

ObjectiveOracle coverage_oracle(std::vector<std::vector<int>> sets, std::vector<Rational> item_weights) {
  for (const auto& w : item_weights)
    if (w < 0) throw Error("InvalidOracle", "item weights must be nonnegative");
  for (const auto& s : sets)
    for (int item : s)
      if (item < 0 || static_cast<std::size_t>(item) >= item_weights.size())
        throw Error("InvalidOracle", "coverage item index out of range");
  ObjectiveOracle o;
  o.universe_size = static_cast<int>(sets.size());
  auto data = std::make_shared<const std::pair<std::vector<std::vector<int>>, std::vector<Rational>>>(
      std::move(sets), std::move(item_weights));
  o.eval = [data](Subset s) {
    std::vector<bool> covered(data->second.size(), false);
    for (int e : elements_of(s))
      for (int item : data->first[e]) covered[item] = true;
    Rational sum = 0;
    for (std::size_t i = 0; i < covered.size(); ++i)
      if (covered[i]) sum += data->second[i];
    return sum;
  };
  return o;
}

namespace {

bool is_float_number(const json& v) { return v.is_number_float(); }

}  // namespace

ObjectiveOracle oracle_from_json(const json& doc) {
  const std::string type = doc.at("type").get<std::string>();
  bool floating = false;
  auto read = [&](const json& v) {
    floating = floating || is_float_number(v);
    return rational_from_json(v);
  };
  ObjectiveOracle o;
  if (type == "modular") {
    std::vector<Rational> values;
    for (const auto& v : doc.at("values")) values.push_back(read(v));
    o = modular_oracle(std::move(values));
  } else if (type == "matching") {
    std::vector<WeightedEdge> edges;
    for (const auto& e : doc.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), read(e.at(2))});
    o = matching_oracle(std::move(edges));
  } else if (type == "coverage") {
    std::vector<std::vector<int>> sets;
    for (const auto& s : doc.at("sets")) sets.push_back(s.get<std::vector<int>>());
    std::vector<Rational> weights;
    for (const auto& w : doc.at("weights")) weights.push_back(read(w));
    o = coverage_oracle(std::move(sets), std::move(weights));
  } else {
    throw Error("ParseError", "unknown oracle type '" + type + "'");
  }
  if (floating) o.tolerance = 1e-12;
  return o;
}

}  // namespace incmax
