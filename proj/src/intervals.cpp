#include "jspec/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jspec/core.hpp"

namespace jspec {

namespace {

std::vector<Interval> normalize(std::vector<Interval> v) {
  for (const auto& p : v) {
    if (std::isnan(p.lo) || std::isnan(p.hi)) fail(ErrorKind::invalid_argument, "interval endpoint is NaN");
    if (!(p.lo < p.hi)) fail(ErrorKind::invalid_argument, "interval with lo >= hi");
  }
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const auto& p : v) {
    // open intervals sharing an endpoint stay separate
    if (!out.empty() && p.lo < out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

IntervalUnion::IntervalUnion(std::initializer_list<Interval> pieces)
    : pieces_(normalize(std::vector<Interval>(pieces))) {}

IntervalUnion::IntervalUnion(std::vector<Interval> pieces) : pieces_(normalize(std::move(pieces))) {}

bool IntervalUnion::bounded() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Interval& p) { return p.bounded(); });
}

double IntervalUnion::length() const {
  double s = 0;
  for (const auto& p : pieces_) s += p.length();
  return s;
}

bool IntervalUnion::contains(double t) const {
  return std::any_of(pieces_.begin(), pieces_.end(), [t](const Interval& p) { return p.lo < t && t < p.hi; });
}

IntervalUnion IntervalUnion::complement() const {
  std::vector<Interval> out;
  double left = -inf;
  for (const auto& p : pieces_) {
    if (left < p.lo) out.push_back({left, p.lo});
    left = p.hi;
  }
  if (left < inf) out.push_back({left, inf});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::reflected() const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({-p.hi, -p.lo});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) {
    for (const auto& q : other.pieces_) {
      double lo = std::max(p.lo, q.lo), hi = std::min(p.hi, q.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> v = pieces_;
  v.insert(v.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalUnion(std::move(v));
}

std::vector<double> IntervalUnion::grid(double step) const {
  if (!(step > 0)) fail(ErrorKind::invalid_argument, "grid step must be positive");
  if (!bounded()) fail(ErrorKind::invalid_argument, "grid over an unbounded set");
  std::vector<double> g;
  for (const auto& p : pieces_) {
    auto cells = static_cast<long>(std::ceil(p.length() / step - 1e-12));
    cells = std::max(cells, 1L);
    double h = p.length() / static_cast<double>(cells);
    for (long k = 0; k < cells; ++k) g.push_back(p.lo + (static_cast<double>(k) + 0.5) * h);
  }
  return g;
}

std::string IntervalUnion::str() const {
  std::ostringstream os;
  if (pieces_.empty()) return "{}";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << " u ";
    os << "(" << pieces_[i].lo << ", " << pieces_[i].hi << ")";
  }
  return os.str();
}

IntervalUnion merge_flagged(const std::vector<double>& grid, const std::vector<bool>& flag) {
  std::vector<Interval> out;
  const std::size_t n = grid.size();
  std::size_t i = 0;
  while (i < n) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && flag[j + 1]) ++j;
    double left_h = i > 0 ? 0.5 * (grid[i] - grid[i - 1]) : (j > i ? 0.5 * (grid[i + 1] - grid[i]) : 0.0);
    double right_h = j + 1 < n ? 0.5 * (grid[j + 1] - grid[j]) : (j > i ? 0.5 * (grid[j] - grid[j - 1]) : 0.0);
    double lo = grid[i] - left_h, hi = grid[j] + right_h;
    if (lo == hi) {
      lo -= 1e-12;
      hi += 1e-12;
    }
    out.push_back({lo, hi});
    i = j + 1;
  }
  return IntervalUnion(std::move(out));
}

}  // namespace jspec
