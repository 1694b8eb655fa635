#include "incmax/continuous.hpp"

#include <algorithm>
#include <cmath>

namespace incmax {

namespace {

template <class T>
constexpr bool kExact = std::is_same_v<T, Rational>;

template <class T>
double as_double(const T& x) {
  if constexpr (kExact<T>) return to_double(x);
  else return x;
}

template <class T>
T abs_of(const T& x) {
  return x < 0 ? T(-x) : x;
}

// a >= b, exact for rationals and with 1e-12 relative slack for doubles.
template <class T>
bool geq(const T& a, const T& b) {
  if constexpr (kExact<T>) return a >= b;
  else return a >= b - 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

template <class T>
T from_json_number(const json& v) {
  if constexpr (kExact<T>) return rational_from_json(v);
  else return v.is_number() ? v.get<double>() : to_double(rational_from_json(v));
}

template <class T>
json number_to_json(const T& x) {
  if constexpr (kExact<T>) return to_string(x);
  else return x;
}

}  // namespace

template <class T>
PiecewiseLinear<T>::PiecewiseLinear(std::vector<Point> breakpoints, std::optional<T> extend_slope)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw Error("InvalidInstance", "value function needs at least one breakpoint");
  T prev_c = 0, prev_v = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& [c, v] = points_[i];
    if (!(c > prev_c)) throw Error("InvalidInstance", "breakpoint sizes must be positive and increasing");
    if (!(v > 0) || !geq(v, prev_v))
      throw Error("InvalidInstance", "breakpoint values must be positive and non-decreasing");
    // d non-increasing across the segment: v_b / c_b <= v_a / c_a
    if (i > 0 && !geq(T(prev_v * c), T(v * prev_c)))
      throw Error("InvalidInstance", "density increases before breakpoint " + std::to_string(i));
    prev_c = c;
    prev_v = v;
  }
  if (extend_slope) {
    slope_ = *extend_slope;
    explicit_slope_ = true;
  } else if (points_.size() == 1) {
    slope_ = points_[0].second / points_[0].first;
  } else {
    const auto& [ca, va] = points_[points_.size() - 2];
    const auto& [cb, vb] = points_.back();
    slope_ = (vb - va) / (cb - ca);
  }
  if (slope_ < 0) throw Error("InvalidInstance", "extension slope must be nonnegative");
  if (!geq(T(points_.back().second), T(slope_ * points_.back().first)))
    throw Error("InvalidInstance", "extension slope exceeds the last density");
}

template <class T>
std::size_t PiecewiseLinear<T>::segment_of(const T& c) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), c,
                             [](const Point& p, const T& x) { return p.first < x; });
  return static_cast<std::size_t>(it - points_.begin());
}

template <class T>
T value_at(const PiecewiseLinear<T>& f, const T& c) {
  if (!(c > 0)) return T(0);
  const auto& pts = f.breakpoints();
  std::size_t k = f.segment_of(c);
  if (k == pts.size()) return pts.back().second + f.extension_slope() * (c - pts.back().first);
  if (pts[k].first == c) return pts[k].second;
  T ca = k == 0 ? T(0) : pts[k - 1].first;
  T va = k == 0 ? T(0) : pts[k - 1].second;
  return va + (pts[k].second - va) * (c - ca) / (pts[k].first - ca);
}

template <class T>
T density_at(const PiecewiseLinear<T>& f, const T& c) {
  if (!(c > 0)) return T(1);
  return value_at(f, c) / c;
}

template <class T>
std::optional<T> reach_or_unbounded(const PiecewiseLinear<T>& f, const T& c, const T& rho) {
  const T level = rho * value_at(f, c);
  const auto& pts = f.breakpoints();
  T ca = 0, va = 0;
  for (const auto& [cb, vb] : pts) {
    if (vb > level) return ca + (level - va) * (cb - ca) / (vb - va);
    ca = cb;
    va = vb;
  }
  if (f.extension_slope() == 0) return std::nullopt;
  return ca + (level - va) / f.extension_slope();
}

template <class T>
T reach(const PiecewiseLinear<T>& f, const T& c, const T& rho) {
  auto p = reach_or_unbounded(f, c, rho);
  if (!p) throw Error("DomainExhausted", "value never exceeds rho * v(c)");
  return *p;
}

template <class T>
DensityInverse<T> largest_size_with_density(const PiecewiseLinear<T>& f, const T& target) {
  const auto& pts = f.breakpoints();
  const T& tail = f.extension_slope();
  if (!(target > tail)) return {InverseKind::Unbounded, T(0)};
  // d is constant on the origin segment, so it is the supremum.
  if (target * pts[0].first > pts[0].second) return {InverseKind::NoSize, T(0)};
  std::size_t j = 0;
  while (j + 1 < pts.size() && !(target * pts[j + 1].first > pts[j + 1].second)) ++j;
  const auto& [ca, va] = pts[j];
  // On the next segment d(c) = s + K/c with K = v_a - s c_a.
  T s = j + 1 < pts.size() ? T((pts[j + 1].second - va) / (pts[j + 1].first - ca)) : tail;
  T K = va - s * ca;
  T c = K / (target - s);
  if (c < ca) c = ca;
  return {InverseKind::Found, c};
}

template <class T>
PiecewiseLinear<T> tilted(const PiecewiseLinear<T>& f, const T& tau) {
  const auto& last = f.breakpoints().back();
  const T d_last = last.second / last.first;
  T s = f.extension_slope();
  if (s == 0) s = tau * d_last;
  else if (!(s < d_last)) s = (T(1) - tau) * d_last;
  else return f;
  return PiecewiseLinear<T>(f.breakpoints(), s);
}

template <class T>
PiecewiseLinear<T> build_from_points(const PiecewiseLinear<T>& base, const std::vector<std::pair<T, T>>& points) {
  if (points.size() < 2) throw Error("InvalidPoints", "need at least two points");
  const auto& [x0, v0] = points[0];
  if (!(x0 > 0)) throw Error("InvalidPoints", "point 0 must have positive size");
  T base_v = value_at(base, x0);
  bool agrees;
  if constexpr (kExact<T>) agrees = base_v == v0;
  else agrees = std::fabs(base_v - v0) <= 1e-12 * std::max(1.0, std::fabs(v0));
  if (!agrees) throw Error("InvalidPoints", "point 0 is not on the base value function");
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& [xi, vi] = points[i];
    const auto& [xn, vn] = points[i + 1];
    if (!(vi < vn))
      throw Error("InvalidPoints", "v_" + std::to_string(i) + " < v_" + std::to_string(i + 1) + " fails");
    if (!(vn * xi < xn * vi))
      throw Error("InvalidPoints", "v_" + std::to_string(i + 1) + " < (x_" + std::to_string(i + 1) + "/x_" +
                                       std::to_string(i) + ") v_" + std::to_string(i) + " fails");
  }
  std::vector<std::pair<T, T>> out;
  for (const auto& p : base.breakpoints())
    if (p.first < x0) out.push_back(p);
  out.insert(out.end(), points.begin(), points.end());
  return PiecewiseLinear<T>(std::move(out));
}

std::string to_string(GreedyStatus s) {
  switch (s) {
    case GreedyStatus::HorizonReached: return "HorizonReached";
    case GreedyStatus::SizeLimitReached: return "SizeLimitReached";
    case GreedyStatus::NotCompetitive: return "NotCompetitive";
    case GreedyStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

template <class T>
GreedyRun<T> greedy_scaling(const PiecewiseLinear<T>& f, const T& c1, const T& rho, const GreedyOptions<T>& options) {
  if (!(c1 > 0)) throw Error("InvalidStart", "starting size must be positive");
  const PiecewiseLinear<T> g = tilted(f, options.tilt);
  GreedyRun<T> run;
  T prefix = c1;
  T current = c1;
  run.sizes.push_back(c1);
  auto finish = [&](GreedyStatus status, std::string reason, std::optional<T> p) {
    run.status = status;
    run.reason = std::move(reason);
    run.trace.push_back({as_double(current), as_double(density_at(g, current)), as_double(value_at(g, current)),
                         p ? as_double(*p) : std::numeric_limits<double>::infinity(), as_double(prefix)});
    return run;
  };
  if (!geq(density_at(g, c1), T(T(1) / rho)))
    return finish(GreedyStatus::NotCompetitive, "starting density below 1/rho", reach_or_unbounded(g, c1, rho));
  for (long iter = 0;; ++iter) {
    auto p = reach_or_unbounded(g, current, rho);
    if (options.size_limit && current > *options.size_limit)
      return finish(GreedyStatus::SizeLimitReached, "size limit exceeded", p);
    if (prefix > options.horizon) return finish(GreedyStatus::HorizonReached, "horizon exceeded", p);
    if (!p) return finish(GreedyStatus::HorizonReached, "value function never leaves the covered range", p);
    if (!(*p > prefix)) return finish(GreedyStatus::NotCompetitive, "reach does not exceed the prefix sum", p);
    if (iter >= options.max_iterations) return finish(GreedyStatus::IterationLimit, "iteration cap", p);
    T target = value_at(g, current) / (*p - prefix);
    auto next = largest_size_with_density(g, target);
    if (next.kind == InverseKind::NoSize)
      return finish(GreedyStatus::NotCompetitive, "no size has the required density", p);
    if (next.kind == InverseKind::Unbounded)
      return finish(GreedyStatus::HorizonReached, "every size meets the required density", p);
    if (!(next.size > current)) {
      run.trace.push_back({as_double(current), as_double(density_at(g, current)), as_double(value_at(g, current)),
                           as_double(*p), as_double(prefix)});
      run.sizes.push_back(next.size);
      current = next.size;
      prefix += next.size;
      return finish(GreedyStatus::NotCompetitive, "next size does not increase", reach_or_unbounded(g, current, rho));
    }
    run.trace.push_back({as_double(current), as_double(density_at(g, current)), as_double(value_at(g, current)),
                         as_double(*p), as_double(prefix)});
    run.sizes.push_back(next.size);
    current = next.size;
    prefix += next.size;
  }
}

template <class T>
CompetitiveVerdict<T> check_competitive(const PiecewiseLinear<T>& f, const std::vector<T>& sizes, const T& rho) {
  CompetitiveVerdict<T> out;
  if (sizes.empty()) {
    out.ok = false;
    out.first_violation = 1;
    out.condition = "empty solution";
    return out;
  }
  auto fail = [&](std::size_t index, std::string what) {
    out.ok = false;
    out.first_violation = index;
    out.condition = std::move(what);
    return out;
  };
  if (!geq(density_at(f, sizes[0]), T(T(1) / rho))) return fail(1, "d(c_1) >= 1/rho");
  T prefix = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    prefix += sizes[i];
    auto p = reach_or_unbounded(f, sizes[i], rho);
    out.covered_until = p;
    if (p && !(*p > prefix)) return fail(i + 1, "p(c_i) > sum of c_1..c_i");
    if (i + 1 < sizes.size() && p) {
      T need = value_at(f, sizes[i]) / (*p - prefix);
      if (!geq(density_at(f, sizes[i + 1]), need)) return fail(i + 2, "d(c_{i+1}) >= v(c_i) / (p(c_i) - sum)");
    }
  }
  return out;
}

template <class T>
T evaluate_continuous(const PiecewiseLinear<T>& f, const std::vector<T>& sizes, const T& c) {
  if (!(c > 0)) return T(0);
  T prefix = 0;
  T done = 0;
  for (const T& ci : sizes) {
    if (c <= prefix + ci) return std::max(done, T((c - prefix) * density_at(f, ci)));
    done = std::max(done, value_at(f, ci));
    prefix += ci;
  }
  return done;
}

template <class T>
SeparableInstance discretize(const PiecewiseLinear<T>& f, long n, long N) {
  if (n <= 0 || N <= 0) throw Error("InvalidArgument", "granularity and size must be positive");
  std::vector<Rational> d;
  for (long i = 1; i <= N; ++i) {
    Rational v;
    if constexpr (kExact<T>) v = value_at(f, T(Rational(i, n)));
    else v = from_double(value_at(f, static_cast<double>(i) / static_cast<double>(n)));
    d.push_back(v / i);
  }
  return SeparableInstance::from_densities(d);
}

template <class T>
PiecewiseLinear<T> piecewise_from_json(const json& doc) {
  std::vector<std::pair<T, T>> pts;
  for (const auto& bp : doc.at("breakpoints")) pts.emplace_back(from_json_number<T>(bp.at(0)), from_json_number<T>(bp.at(1)));
  std::optional<T> slope;
  if (doc.contains("extend_slope") && !doc.at("extend_slope").is_null()) slope = from_json_number<T>(doc.at("extend_slope"));
  return PiecewiseLinear<T>(std::move(pts), slope);
}

template <class T>
json to_json(const PiecewiseLinear<T>& f) {
  json doc;
  doc["breakpoints"] = json::array();
  for (const auto& [c, v] : f.breakpoints()) doc["breakpoints"].push_back({number_to_json(c), number_to_json(v)});
  if (f.explicit_slope()) doc["extend_slope"] = number_to_json(f.extension_slope());
  return doc;
}

void write_greedy_csv(std::ostream& out, const std::vector<GreedyStep>& trace) {
  CsvWriter csv(out, {"i", "c_i", "d(c_i)", "v(c_i)", "p(c_i)", "prefix_sum"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    csv.row({std::to_string(i + 1), format_double(s.size), format_double(s.density), format_double(s.value),
             format_double(s.reach), format_double(s.prefix_sum)});
  }
}

PiecewiseLinear<Rational> continuize(const SeparableInstance& instance) {
  if (instance.sets.empty()) throw Error("EmptyInstance", "instance has no sets");
  const Rational top = instance.max_size();
  std::vector<Rational> sizes;
  for (const auto& r : instance.sets) {
    sizes.emplace_back(r.size);
    if (r.density <= 0) continue;
    // Where the growing line of r meets the plateau of another set.
    for (const auto& s : instance.sets) {
      Rational x = s.density * s.size / r.density;
      if (x > 0 && x < top) sizes.push_back(x);
    }
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& c : sizes) {
    Rational v = 0;
    for (const auto& r : instance.sets) v = std::max(v, Rational(std::min(c, Rational(r.size)) * r.density));
    if (v > 0) pts.emplace_back(c, v);
  }
  return PiecewiseLinear<Rational>(std::move(pts), Rational(0));
}

#define INCMAX_INSTANTIATE(T)                                                                                \
  template class PiecewiseLinear<T>;                                                                         \
  template T value_at(const PiecewiseLinear<T>&, const T&);                                                  \
  template T density_at(const PiecewiseLinear<T>&, const T&);                                                \
  template std::optional<T> reach_or_unbounded(const PiecewiseLinear<T>&, const T&, const T&);               \
  template T reach(const PiecewiseLinear<T>&, const T&, const T&);                                           \
  template DensityInverse<T> largest_size_with_density(const PiecewiseLinear<T>&, const T&);                 \
  template PiecewiseLinear<T> tilted(const PiecewiseLinear<T>&, const T&);                                   \
  template PiecewiseLinear<T> build_from_points(const PiecewiseLinear<T>&, const std::vector<std::pair<T, T>>&); \
  template GreedyRun<T> greedy_scaling(const PiecewiseLinear<T>&, const T&, const T&, const GreedyOptions<T>&); \
  template CompetitiveVerdict<T> check_competitive(const PiecewiseLinear<T>&, const std::vector<T>&, const T&);  \
  template T evaluate_continuous(const PiecewiseLinear<T>&, const std::vector<T>&, const T&);               \
  template SeparableInstance discretize(const PiecewiseLinear<T>&, long, long);                              \
  template PiecewiseLinear<T> piecewise_from_json<T>(const json&);                                           \
  template json to_json(const PiecewiseLinear<T>&);

INCMAX_INSTANTIATE(double)
INCMAX_INSTANTIATE(Rational)

}  // namespace incmax
