#pragma once

#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

namespace jspec {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool bounded() const { return lo > -inf && hi < inf; }
};

// Finite union of disjoint open intervals, kept sorted. Endpoints may be +-inf.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(std::initializer_list<Interval> pieces);
  explicit IntervalUnion(std::vector<Interval> pieces);

  static IntervalUnion real_line() { return IntervalUnion{{-inf, inf}}; }

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool bounded() const;
  double length() const;
  bool contains(double t) const;

  IntervalUnion complement() const;
  IntervalUnion reflected() const;  // -S
  IntervalUnion intersect(const IntervalUnion& other) const;
  IntervalUnion unite(const IntervalUnion& other) const;

  // Points of a uniform grid of the given step covering every piece
  // (midpoints of cells, so endpoints are never sampled).
  std::vector<double> grid(double step) const;

  std::string str() const;

 private:
  std::vector<Interval> pieces_;
};

// Merge a sorted flagged grid into intervals: consecutive flagged points
// form one interval spanning half a cell beyond the extreme points.
IntervalUnion merge_flagged(const std::vector<double>& grid, const std::vector<bool>& flag);

}  // namespace jspec
