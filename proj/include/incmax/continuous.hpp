#pragma once

#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "incmax/io.hpp"
#include "incmax/rational.hpp"
#include "incmax/separable.hpp"

namespace incmax {

// Continuous value function v(c): linear from the origin to the first breakpoint, linear between
// breakpoints, and linear with `extension_slope()` beyond the last one. Density d(c) = v(c)/c,
// with d(0) = 1 by convention. Instantiated for double and Rational.
template <class T>
class PiecewiseLinear {
 public:
  using Point = std::pair<T, T>;

  PiecewiseLinear() = default;
  // Throws InvalidInstance unless sizes increase, values are positive and non-decreasing, and
  // the induced density is non-increasing (including on the extension).
  explicit PiecewiseLinear(std::vector<Point> breakpoints, std::optional<T> extend_slope = std::nullopt);

  const std::vector<Point>& breakpoints() const { return points_; }
  const T& extension_slope() const { return slope_; }
  bool explicit_slope() const { return explicit_slope_; }

  // Segment index for size c > 0: 0 is the origin segment, points_.size() the extension.
  std::size_t segment_of(const T& c) const;

 private:
  std::vector<Point> points_;
  T slope_{};
  bool explicit_slope_ = false;
};

template <class T>
T value_at(const PiecewiseLinear<T>& f, const T& c);
template <class T>
T density_at(const PiecewiseLinear<T>& f, const T& c);

// max{c' : v(c') <= rho v(c)}; nullopt when v never exceeds that level.
template <class T>
std::optional<T> reach_or_unbounded(const PiecewiseLinear<T>& f, const T& c, const T& rho);
// As above; throws DomainExhausted when unbounded.
template <class T>
T reach(const PiecewiseLinear<T>& f, const T& c, const T& rho);

enum class InverseKind { Found, NoSize, Unbounded };
template <class T>
struct DensityInverse {
  InverseKind kind = InverseKind::NoSize;
  T size{};
};
// Largest c with d(c) >= target. NoSize when target exceeds every density, Unbounded when every
// size qualifies.
template <class T>
DensityInverse<T> largest_size_with_density(const PiecewiseLinear<T>& f, const T& target);

// Makes the extension strictly increasing in v and strictly decreasing in d.
template <class T>
PiecewiseLinear<T> tilted(const PiecewiseLinear<T>& f, const T& tau);

// Keeps f on [0, points[0].first] and interpolates the points, extending the last segment.
template <class T>
PiecewiseLinear<T> build_from_points(const PiecewiseLinear<T>& base, const std::vector<std::pair<T, T>>& points);

enum class GreedyStatus { HorizonReached, SizeLimitReached, NotCompetitive, IterationLimit };
std::string to_string(GreedyStatus s);

template <class T>
struct GreedyOptions {
  T horizon = T(1000000);
  std::optional<T> size_limit;  // stop once a chosen size exceeds this
  long max_iterations = 100000;
  T tilt = T(1) / T(1000000000);
};

struct GreedyStep {
  double size, density, value, reach, prefix_sum;
};

template <class T>
struct GreedyRun {
  std::vector<T> sizes;
  GreedyStatus status = GreedyStatus::HorizonReached;
  std::string reason;
  std::vector<GreedyStep> trace;
};

template <class T>
GreedyRun<T> greedy_scaling(const PiecewiseLinear<T>& f, const T& c1, const T& rho,
                            const GreedyOptions<T>& options = {});

template <class T>
struct CompetitiveVerdict {
  bool ok = true;
  std::size_t first_violation = 0;  // 1-based block index, 0 when ok
  std::string condition;
  std::optional<T> covered_until;   // reach of the last block; nullopt means unbounded
};

template <class T>
CompetitiveVerdict<T> check_competitive(const PiecewiseLinear<T>& f, const std::vector<T>& sizes, const T& rho);

template <class T>
T evaluate_continuous(const PiecewiseLinear<T>& f, const std::vector<T>& sizes, const T& c);

// Sets R_1..R_N with d_i = v(i/n)/i.
template <class T>
SeparableInstance discretize(const PiecewiseLinear<T>& f, long n, long N);

// v(c) = max over sets of min(c, |R|) * density, constant beyond the largest set.
PiecewiseLinear<Rational> continuize(const SeparableInstance& instance);

template <class T>
PiecewiseLinear<T> piecewise_from_json(const json& doc);
template <class T>
json to_json(const PiecewiseLinear<T>& f);

void write_greedy_csv(std::ostream& out, const std::vector<GreedyStep>& trace);

// v(c) = c.
template <class T>
PiecewiseLinear<T> identity_value() {
  return PiecewiseLinear<T>({{T(1), T(1)}}, T(1));
}

}  // namespace incmax
