#include "jspec/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <utility>

#include "jspec/core.hpp"

namespace jspec::quad {

namespace {

Rule compute_gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1, p1 = 0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) fail(ErrorKind::insufficient_nodes, "Gauss-Legendre needs n >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(compute_gauss_legendre(n));
  return *slot;
}

Rule gauss_legendre(double a, double b, int n) {
  const Rule& g = gauss_legendre(n);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * g.x[i];
    r.w[i] = h * g.w[i];
  }
  return r;
}

Rule edge_rule(double a, double b, int n) {
  const Rule& g = gauss_legendre(n);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    double theta = 0.5 * pi * (g.x[i] + 1.0);
    r.x[i] = c - h * std::cos(theta);
    r.w[i] = 0.5 * pi * g.w[i] * h * std::sin(theta);
  }
  return r;
}

namespace {

// Globally adaptive Gauss-Kronrod: keep splitting the subinterval with the
// largest error estimate until the total estimate meets max(tol |value|, abs_tol) or the
// interval budget runs out. Infinite ends go to boost's mapped recursion.
template <class T>
std::pair<T, double> adapt(const std::function<T(double)>& f, double a, double b, double tol, unsigned max_intervals,
                           double abs_tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    double err = 0, l1 = 0;
    T v = GK::integrate(f, a, b, 15, tol, &err, &l1);
    return {v, err};
  }
  struct Cell {
    double a, b;
    T value;
    double error;
    bool operator<(const Cell& o) const { return error < o.error; }
  };
  auto rule = [&](double lo, double hi) {
    double err = 0, l1 = 0;
    T v = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    return Cell{lo, hi, v, err};
  };
  std::priority_queue<Cell> heap;
  Cell first = rule(a, b);
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  unsigned count = 1;
  while (total_err > std::max(tol * std::abs(total), abs_tol) && count < max_intervals) {
    Cell c = heap.top();
    if (c.b - c.a <= 1e-15 * (std::abs(c.a) + std::abs(c.b))) break;
    heap.pop();
    const double m = 0.5 * (c.a + c.b);
    Cell l = rule(c.a, m), r = rule(m, c.b);
    total += l.value + r.value - c.value;
    total_err += l.error + r.error - c.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // re-sum to shed the drift of the running updates
  T sum{};
  double err = 0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double tol, unsigned max_intervals,
                 double abs_tol) {
  Result res;
  if (a == b) return res;
  auto [v, e] = adapt<double>(f, a, b, tol, max_intervals, abs_tol);
  res.value = v;
  res.error = e;
  return res;
}

ComplexResult integrate_complex(const std::function<cplx(double)>& f, double a, double b, double tol,
                                unsigned max_intervals, double abs_tol) {
  ComplexResult res;
  if (a == b) return res;
  auto [v, e] = adapt<cplx>(f, a, b, tol, max_intervals, abs_tol);
  res.value = v;
  res.error = e;
  return res;
}

Result integrate_edge(const std::function<double(double)>& f, double a, double b, double tol, unsigned max_intervals) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  auto g = [&](double theta) { return f(c - h * std::cos(theta)) * h * std::sin(theta); };
  return integrate(g, 0.0, pi, tol, max_intervals);
}

}  // namespace jspec::quad
