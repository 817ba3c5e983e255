#include "jspec/inverse.hpp"

#include <algorithm>
#include <cmath>

#include "jspec/parallel.hpp"
#include "jspec/quadrature.hpp"
#include "jspec/weyl.hpp"

namespace jspec::inverse {

double DiscretizedMeasure::mass() const {
  double s = 0;
  for (double x : w) s += x;
  return s;
}

std::size_t DiscretizedMeasure::distinct_nodes() const {
  std::vector<double> s;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (w[i] > 0) s.push_back(t[i]);
  std::sort(s.begin(), s.end());
  return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

DiscretizedMeasure discretize(const herglotz::RealMeasure& m, int nodes_per_interval) {
  m.validate();
  DiscretizedMeasure dm;
  for (const auto& a : m.atoms) {
    dm.t.push_back(a.x);
    dm.w.push_back(a.mass);
  }
  for (const auto& p : m.pieces) {
    if (nodes_per_interval > 0 && p.density) {
      if (nodes_per_interval < 2) fail(ErrorKind::insufficient_nodes, "discretize needs >= 2 nodes per interval");
      quad::Rule r = quad::edge_rule(p.support.lo, p.support.hi, nodes_per_interval);
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        dm.t.push_back(r.x[i]);
        dm.w.push_back(r.w[i] * p.density(r.x[i]));
      }
    } else {
      for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        dm.t.push_back(p.nodes[i]);
        dm.w.push_back(p.weights[i] * p.values[i]);
      }
    }
  }
  return dm;
}

operators::Window Recovered::window(long offset) const {
  operators::Window w;
  w.offset = offset;
  for (std::size_t k = 0; k < a.size(); ++k) w.entries.push_back({a[k], b[k]});
  return w;
}

Recovered coefficients_from_measure(const DiscretizedMeasure& dm, int n_max) {
  if (n_max < 1) fail(ErrorKind::invalid_argument, "n_max must be >= 1");
  const double mass = dm.mass();
  if (!(mass > 0) || !std::isfinite(mass)) fail(ErrorKind::support_too_small, "measure has no mass");
  const std::size_t needed = 2 * static_cast<std::size_t>(n_max) + 1;
  if (dm.distinct_nodes() < needed)
    fail(ErrorKind::support_too_small, "measure has " + std::to_string(dm.distinct_nodes()) +
                                           " distinct support points, need " + std::to_string(needed));
  const std::size_t M = dm.t.size();
  const std::size_t K = static_cast<std::size_t>(n_max) + 1;  // a(n_max) needs one extra vector
  std::vector<std::vector<double>> Q;
  Q.reserve(K + 1);
  std::vector<double> q(M);
  for (std::size_t i = 0; i < M; ++i) q[i] = std::sqrt(dm.w[i] / mass);
  Q.push_back(q);
  Recovered r;
  r.c = 1.0 / mass;
  auto dot = [M](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < M; ++i) s += x[i] * y[i];
    return s;
  };
  for (std::size_t k = 0; k < K; ++k) {
    const auto& qk = Q[k];
    std::vector<double> v(M);
    for (std::size_t i = 0; i < M; ++i) v[i] = dm.t[i] * qk[i];
    const double bk = dot(v, qk);
    if (k < static_cast<std::size_t>(n_max)) r.b.push_back(bk);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qj : Q) {
        double h = dot(v, qj);
        for (std::size_t i = 0; i < M; ++i) v[i] -= h * qj[i];
      }
    const double ak = std::sqrt(dot(v, v));
    if (k + 1 == K) {
      r.a.push_back(ak);
      break;
    }
    if (k < static_cast<std::size_t>(n_max)) r.a.push_back(ak);
    if (!(ak > 1e-13 * (1.0 + std::abs(bk))))
      fail(ErrorKind::support_too_small, "recurrence terminated at step " + std::to_string(k + 1));
    for (auto& x : v) x /= ak;
    Q.push_back(std::move(v));
  }
  r.a.resize(static_cast<std::size_t>(n_max));
  double worst = 0;
  for (std::size_t i = 0; i < Q.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) worst = std::max(worst, std::abs(dot(Q[i], Q[j]) - (i == j ? 1.0 : 0.0)));
  r.orthogonality_defect = worst;
  if (worst > 1e-8) fail(ErrorKind::loss_of_orthogonality, "orthogonality defect " + std::to_string(worst));
  return r;
}

herglotz::RealMeasure measure_from_coefficients(const operators::CoefficientModel& model, const IntervalUnion& grid,
                                                double step, double y) {
  if (!(y > 0)) fail(ErrorKind::invalid_argument, "measure_from_coefficients needs y > 0");
  if (!grid.bounded()) fail(ErrorKind::invalid_argument, "measure_from_coefficients needs a bounded grid");
  herglotz::RealMeasure m;
  for (const auto& piece : grid.pieces()) {
    herglotz::DensityPiece p;
    p.support = piece;
    p.nodes = IntervalUnion{piece}.grid(step);
    const double h = piece.length() / static_cast<double>(p.nodes.size());
    p.weights.assign(p.nodes.size(), h);
    p.values.resize(p.nodes.size());
    parallel_for(p.nodes.size(), [&](std::size_t i) {
      p.values[i] = std::max(0.0, weyl::m_plus(model, 0, cplx(p.nodes[i], y)).z().imag() / pi);
    });
    m.pieces.push_back(std::move(p));
  }
  return m;
}

}  // namespace jspec::inverse
