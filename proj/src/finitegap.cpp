#include "jspec/finitegap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "jspec/parallel.hpp"

namespace jspec::finitegap {

IntervalUnion BandSet::interiors() const {
  std::vector<Interval> v(bands.begin(), bands.end());
  return IntervalUnion(v);
}

void BandSet::validate() const {
  if (bands.empty()) fail(ErrorKind::invalid_argument, "band set is empty");
  for (std::size_t j = 0; j < bands.size(); ++j) {
    if (!(bands[j].lo < bands[j].hi) || !bands[j].bounded()) fail(ErrorKind::invalid_argument, "bands must be bounded, lo < hi");
    if (j > 0 && !(bands[j - 1].hi < bands[j].lo)) fail(ErrorKind::invalid_argument, "bands must be disjoint and ordered");
  }
}

DirichletPoint circle_point(const BandSet& E, int j, double theta) {
  if (j < 1 || j > E.gaps()) fail(ErrorKind::invalid_argument, "gap index out of range");
  const Interval g = E.gap(j);
  const double th = std::fmod(std::fmod(theta, 2 * pi) + 2 * pi, 2 * pi);
  DirichletPoint p;
  p.mu = g.lo + g.length() * 0.5 * (1.0 - std::cos(th));
  p.s = th < pi ? 0 : 1;
  if (th == 0.0) p.mu = g.lo;
  return p;
}

void validate(const BandSet& E, const DirichletData& d) {
  E.validate();
  if (static_cast<int>(d.size()) != E.gaps())
    fail(ErrorKind::invalid_argument, "need one Dirichlet point per gap");
  for (int j = 1; j <= E.gaps(); ++j) {
    const auto& p = d[j - 1];
    const Interval g = E.gap(j);
    if (!(p.mu >= g.lo && p.mu <= g.hi)) fail(ErrorKind::invalid_argument, "mu_j must lie in gap j");
    if (p.s != 0 && p.s != 1) fail(ErrorKind::invalid_argument, "s_j must be 0 or 1");
  }
}

namespace {

std::vector<double> endpoints(const BandSet& E) {
  std::vector<double> e;
  for (const auto& b : E.bands) {
    e.push_back(b.lo);
    e.push_back(b.hi);
  }
  return e;
}

// prod_e sqrt(z - e) / prod_{k != skip} (z - mu_k), principal roots
cplx product(const BandSet& E, const std::vector<double>& mu, cplx z, int skip) {
  cplx num = 1.0;
  for (double e : endpoints(E)) num *= std::sqrt(z - e);
  cplx den = 1.0;
  for (std::size_t k = 0; k < mu.size(); ++k)
    if (static_cast<int>(k) != skip) den *= z - mu[k];
  return num / den;
}

std::vector<double> mus(const DirichletData& d) {
  std::vector<double> m;
  for (const auto& p : d) m.push_back(p.mu);
  return m;
}

}  // namespace

cplx H_finitegap(const BandSet& E, const std::vector<double>& mu, cplx z) {
  if (!(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, "H_finitegap needs Im z > 0");
  if (static_cast<int>(mu.size()) != E.gaps()) fail(ErrorKind::invalid_argument, "need one mu per gap");
  cplx h = product(E, mu, z, -1);
  if (!(h.imag() > 0)) fail(ErrorKind::branch_validation_failure, "H_finitegap left the upper half plane");
  return h;
}

cplx H_finitegap_boundary(const BandSet& E, const std::vector<double>& mu, double t) {
  return product(E, mu, cplx(t, 0.0), -1);
}

herglotz::HerglotzRep herglotz_finitegap(const BandSet& E, const std::vector<double>& mu, int nodes) {
  E.validate();
  herglotz::HerglotzRep H;
  H.linear = 1;
  const int N = E.gaps();
  H.offset = -(E.bands.front().lo + E.bands.back().hi) / 2;
  for (int j = 1; j <= N; ++j) H.offset += mu[j - 1] - (E.gap(j).lo + E.gap(j).hi) / 2;
  for (const auto& b : E.bands) {
    auto dens = [E, mu](double t) { return std::max(0.0, H_finitegap_boundary(E, mu, t).imag() / pi); };
    H.measure.pieces.push_back(herglotz::make_piece(b.lo, b.hi, dens, nodes));
  }
  for (int j = 1; j <= N; ++j) {
    const Interval g = E.gap(j);
    const double m = mu[j - 1];
    if (!(m > g.lo && m < g.hi)) continue;
    // mass = -Res_{z = mu_j} H
    const cplx res = product(E, mu, cplx(m, 0.0), j - 1);
    const double w = -res.real();
    if (!(w > 0)) fail(ErrorKind::branch_validation_failure, "nonpositive atom at mu_j");
    H.measure.atoms.push_back({m, w});
  }
  return H;
}

herglotz::RealMeasure rho_finitegap(const BandSet& E, const DirichletData& d, int nodes) {
  validate(E, d);
  return herglotz_finitegap(E, mus(d), nodes).measure;
}

reflectionless::SplitDensity torus_split(const BandSet& E, const DirichletData& d) {
  validate(E, d);
  reflectionless::SplitDensity f = reflectionless::SplitDensity::constant(0.5);
  for (int j = 1; j <= E.gaps(); ++j) {
    const Interval g = E.gap(j);
    const auto& p = d[j - 1];
    if (p.mu > g.lo && p.mu < g.hi) f.on_atoms.push_back(static_cast<double>(p.s));
  }
  f.half_on = E.interiors();
  return f;
}

reflectionless::JacobiPair torus_pair(const BandSet& E, const DirichletData& d, int n_max, int nodes) {
  validate(E, d);
  auto H = herglotz_finitegap(E, mus(d), nodes);
  reflectionless::PairOptions opt;
  opt.n_max = n_max;
  return reflectionless::jacobi_from_pair(H, torus_split(E, d), opt);
}

TorusPoint::TorusPoint(BandSet E, DirichletData d, int n_max, int nodes)
    : E_(std::move(E)), d_(std::move(d)), n_max_(n_max), nodes_(nodes) {
  validate(E_, d_);
}

const reflectionless::JacobiPair& TorusPoint::pair() const {
  std::call_once(once_, [this] {
    pair_ = std::make_unique<reflectionless::JacobiPair>(torus_pair(E_, d_, n_max_, nodes_));
  });
  return *pair_;
}

const operators::Window& TorusPoint::window() const { return pair().window; }

std::optional<operators::Anchor> TorusPoint::anchor() const { return pair().model().anchor(); }

std::string TorusPoint::describe() const {
  std::ostringstream os;
  os << "torus(E=" << E_.interiors().str() << ", mu=[";
  for (std::size_t k = 0; k < d_.size(); ++k) os << (k ? ", " : "") << d_[k].mu << "/" << d_[k].s;
  os << "])";
  return os.str();
}

operators::CoefficientModel torus_point(const BandSet& E, const DirichletData& d, int n_max, int nodes) {
  return operators::torus_model(std::make_shared<const TorusPoint>(E, d, n_max, nodes));
}

std::vector<DirichletData> torus_grid(const BandSet& E, int samples) {
  E.validate();
  if (samples < 1) fail(ErrorKind::invalid_argument, "need at least one sample per gap circle");
  std::vector<DirichletData> out{DirichletData{}};
  for (int j = 1; j <= E.gaps(); ++j) {
    std::vector<DirichletData> next;
    for (const auto& base : out)
      for (int k = 0; k < samples; ++k) {
        DirichletData d = base;
        d.push_back(circle_point(E, j, 2 * pi * k / samples));
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

TorusDistance distance_to_torus(const operators::Window& w, const BandSet& E, int samples, int n_max, int n_trunc) {
  auto grid = torus_grid(E, samples);
  std::vector<double> dist(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    auto pair = torus_pair(E, grid[i], n_max);
    dist[i] = operators::metric_d(w, pair.window, n_trunc);
  });
  auto it = std::min_element(dist.begin(), dist.end());
  return {*it, grid[static_cast<std::size_t>(it - dist.begin())]};
}

std::vector<double> truncation_eigenvalues(const operators::CoefficientModel& model, long lo, long hi) {
  if (hi < lo) fail(ErrorKind::invalid_argument, "truncation needs lo <= hi");
  const long n = hi - lo + 1;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1L));
  for (long k = 0; k < n; ++k) {
    Coeff c = model.coeff(lo + k);
    diag(k) = c.b;
    if (k + 1 < n) sub(k) = c.a;
  }
  if (n == 1) return {diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

SpectrumCheck check_spectrum(const std::vector<double>& eigs, const BandSet& E, double tol) {
  SpectrumCheck r;
  r.exceptional.assign(static_cast<std::size_t>(std::max(E.gaps(), 0)), 0);
  for (double x : eigs) {
    double d = inf;
    for (const auto& b : E.bands) d = std::min(d, x < b.lo ? b.lo - x : x > b.hi ? x - b.hi : 0.0);
    if (d <= tol) {
      r.max_distance = std::max(r.max_distance, d);
      continue;
    }
    bool in_gap = false;
    for (int j = 1; j <= E.gaps(); ++j)
      if (x > E.gap(j).lo && x < E.gap(j).hi) {
        ++r.exceptional[static_cast<std::size_t>(j - 1)];
        in_gap = true;
      }
    if (!in_gap) ++r.outside;
  }
  return r;
}

}  // namespace jspec::finitegap
