#include "jspec/reflectionless.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "jspec/inverse.hpp"
#include "jspec/parallel.hpp"
#include "jspec/weyl.hpp"

namespace jspec::reflectionless {

using herglotz::DensityPiece;
using herglotz::RealMeasure;

ReflectionlessReport reflectionless_defect(const operators::CoefficientModel& model, const IntervalUnion& A, double y,
                                           double step, long site) {
  if (!(y > 0)) fail(ErrorKind::invalid_argument, "reflectionless_defect needs y > 0");
  if (!A.bounded()) fail(ErrorKind::invalid_argument, "reflectionless_defect needs |A| < inf");
  ReflectionlessReport r;
  r.A = A;
  r.y = y;
  r.site = site;
  r.t = A.grid(step);
  r.defect.resize(r.t.size());
  parallel_for(r.t.size(), [&](std::size_t i) {
    cplx z(r.t[i], y);
    cplx mp = weyl::m_plus(model, site, z).z();
    cplx mm = weyl::m_minus_wholeline(model, site, z).z();
    r.defect[i] = std::abs(mp + std::conj(mm));
  });
  const double h = A.length() / static_cast<double>(std::max<std::size_t>(r.t.size(), 1));
  for (double d : r.defect) {
    r.sup = std::max(r.sup, d);
    r.l1 += d * h;
  }
  return r;
}

SplitDensity SplitDensity::constant(double v) {
  SplitDensity f;
  f.on_density = [v](double) { return v; };
  return f;
}

namespace {

double f_at_atom(const SplitDensity& f, const RealMeasure& m, std::size_t k) {
  if (!f.on_atoms.empty()) {
    if (f.on_atoms.size() != m.atoms.size()) fail(ErrorKind::invalid_f, "on_atoms must match the atoms of the measure");
    return f.on_atoms[k];
  }
  return f.on_density(m.atoms[k].x);
}

// Cut density pieces at the given points (pieces keep their node count).
RealMeasure cut_at(const RealMeasure& m, const std::vector<double>& breaks) {
  RealMeasure out;
  out.atoms = m.atoms;
  for (const auto& p : m.pieces) {
    std::vector<double> cuts{p.support.lo};
    for (double b : breaks)
      if (b > p.support.lo && b < p.support.hi) cuts.push_back(b);
    cuts.push_back(p.support.hi);
    std::sort(cuts.begin(), cuts.end());
    if (cuts.size() == 2) {
      out.pieces.push_back(p);
      continue;
    }
    if (!p.density) fail(ErrorKind::invalid_f, "cannot cut a sampled density piece at a break of f");
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      out.pieces.push_back(herglotz::make_piece(cuts[k], cuts[k + 1], p.density, static_cast<int>(p.nodes.size())));
  }
  return out;
}

DensityPiece weighted(const DensityPiece& p, const std::function<double(double)>& g) {
  DensityPiece q = p;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) q.values[i] = g(q.nodes[i]) * p.values[i];
  if (p.density) {
    auto d = p.density;
    q.density = [d, g](double t) { return g(t) * d(t); };
  }
  return q;
}

bool has_mass(const DensityPiece& p) {
  return std::any_of(p.values.begin(), p.values.end(), [](double v) { return v > 0; });
}

}  // namespace

void SplitDensity::validate(const RealMeasure& m) const {
  if (!on_density) fail(ErrorKind::invalid_f, "f has no density part");
  const double slack = 1e-12;
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    double v = f_at_atom(*this, m, k);
    if (!(v >= -slack && v <= 1 + slack)) fail(ErrorKind::invalid_f, "f outside [0, 1] at an atom");
  }
  for (const auto& p : m.pieces)
    for (double t : p.nodes) {
      double v = on_density(t);
      if (!(v >= -slack && v <= 1 + slack))
        fail(ErrorKind::invalid_f, "f(" + std::to_string(t) + ") = " + std::to_string(v) + " outside [0, 1]");
    }
  if (half_on)
    for (double t : half_on->grid(1e-2))
      if (std::abs(on_density(t) - 0.5) > slack) fail(ErrorKind::invalid_f, "f must equal 1/2 on A");
}

Split split_H(const HerglotzRep& H, const SplitDensity& f, double a_plus) {
  Split s;
  s.whole = H;
  s.whole.measure = cut_at(H.measure, f.breaks);
  f.validate(s.whole.measure);
  const auto& m = s.whole.measure;
  const auto g = f.on_density;
  s.plus.offset = a_plus;
  s.plus.linear = 0;
  s.minus.offset = H.offset - a_plus;
  s.minus.linear = H.linear;
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    const double v = std::clamp(f_at_atom(f, m, k), 0.0, 1.0);
    const auto& a = m.atoms[k];
    if (v > 0) s.plus.measure.atoms.push_back({a.x, v * a.mass});
    if (v < 1) s.minus.measure.atoms.push_back({a.x, a.mass - v * a.mass});
  }
  auto fp = [g](double t) { return std::clamp(g(t), 0.0, 1.0); };
  auto fm = [g](double t) { return 1.0 - std::clamp(g(t), 0.0, 1.0); };
  for (const auto& p : m.pieces) {
    DensityPiece q = weighted(p, fp);
    DensityPiece r = p.density ? weighted(p, fm) : p;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) r.values[i] = p.values[i] - q.values[i];
    if (has_mass(q)) s.plus.measure.pieces.push_back(std::move(q));
    if (has_mass(r)) s.minus.measure.pieces.push_back(std::move(r));
  }
  return s;
}

operators::CoefficientModel JacobiPair::model() const {
  operators::Anchor an;
  an.site = 0;
  const double cc = c;
  auto fp = std::make_shared<const HerglotzRep>(F_plus);
  auto fm = std::make_shared<const HerglotzRep>(F_minus);
  an.m_plus = [cc, fp](cplx z) { return cc * herglotz::evaluate(*fp, z); };
  an.m_minus = [cc, fm](cplx z) { return cc * herglotz::evaluate(*fm, z); };
  return operators::explicit_window(window, std::nullopt, an);
}

JacobiPair jacobi_from_pair(const HerglotzRep& H_in, const SplitDensity& f, const PairOptions& opt) {
  if (!(H_in.linear > 0)) fail(ErrorKind::invalid_argument, "jacobi_from_pair needs B > 0");
  HerglotzRep H = H_in;
  if (opt.nodes > 0)
    for (auto& p : H.measure.pieces) {
      if (!p.density) fail(ErrorKind::invalid_argument, "resampling needs density functions");
      p = herglotz::make_piece(p.support.lo, p.support.hi, p.density, opt.nodes);
    }
  Split s = split_H(H, f, 0.0);
  JacobiPair jp;
  jp.F_plus = s.plus;
  jp.F_minus = s.minus;
  const int N = opt.n_max;

  auto dm_plus = inverse::discretize(s.plus.measure);
  auto right = inverse::coefficients_from_measure(dm_plus, N);
  jp.c = right.c;
  jp.mass_plus = dm_plus.mass();
  const double B = s.minus.linear;
  const double a0 = 1.0 / std::sqrt(jp.c * B);
  const double b0 = -s.minus.offset / B;

  auto dm_minus = inverse::discretize(s.minus.measure);
  jp.mass_minus = dm_minus.mass();
  if (!(jp.mass_minus > 0)) fail(ErrorKind::support_too_small, "rho_- has no mass, the left half line is empty");
  const double am1 = std::sqrt(jp.mass_minus / B);
  auto left = inverse::coefficients_from_measure(dm_minus, N);

  jp.window.offset = -N;
  jp.window.entries.resize(static_cast<std::size_t>(2 * N + 1));
  auto put = [&](long n, Coeff c) { jp.window.entries[static_cast<std::size_t>(n + N)] = c; };
  put(0, {a0, b0});
  for (long n = 1; n <= N; ++n) put(n, {right.a[n - 1], right.b[n - 1]});
  // b(-k) = b~(k), a(-1) from the mass of rho_-, a(-k-1) = a~(k)
  for (long k = 1; k <= N; ++k) put(-k, {k == 1 ? am1 : left.a[k - 2], left.b[k - 1]});

  // cross-check a(0), b(0) from c F_-(iy) = (iy - b(0))/a(0)^2 + O(1/y)
  {
    double sy = 0, syy = 0, sr = 0;
    for (double y : {1e2, 1e3, 1e4}) {
      cplx v = jp.c * herglotz::evaluate(s.minus, cplx(0, y));
      sy += v.imag() * y;
      syy += y * y;
      sr += v.real();
    }
    const double inv_a2 = sy / syy;
    jp.fit_a0 = 1.0 / std::sqrt(inv_a2);
    jp.fit_b0 = -(sr / 3.0) / inv_a2;
  }

  auto bare = operators::explicit_window(jp.window);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    cplx z = std::polar(3.0, pi * (k + 0.5) / 20.0);
    cplx mp = weyl::m_plus(bare, 0, z).z();
    cplx mm = weyl::m_minus_wholeline(bare, 0, z).z();
    cplx ep = jp.c * herglotz::evaluate(s.plus, z);
    cplx em = jp.c * herglotz::evaluate(s.minus, z);
    worst = std::max(worst, std::abs(mp - ep) / std::max(1.0, std::abs(ep)));
    worst = std::max(worst, std::abs(mm - em) / std::max(1.0, std::abs(em)));
  }
  jp.roundtrip_error = worst;
  if (!(worst <= opt.roundtrip_tol))
    fail(ErrorKind::roundtrip_failure, "reconstructed m-functions miss c F_+- by " + std::to_string(worst));
  return jp;
}

HerglotzRep sqrt_rep(int nodes) {
  herglotz::XiProfile p;
  p.breaks = {-2.0, 2.0};
  p.values = {0.5};
  return herglotz::herglotz_rep_from_xi(p, nodes);
}

AcMismatch build_ac_mismatch(const IntervalUnion& A, const PairOptions& opt) {
  const IntervalUnion B{{-2.0, 2.0}};
  if (!(A.length() > 0)) fail(ErrorKind::invalid_argument, "A must have positive length");
  if (A.intersect(B).length() < A.length() - 1e-14) fail(ErrorKind::invalid_argument, "A must lie in (-2, 2)");
  if (!(B.length() - A.length() > 1e-12)) fail(ErrorKind::invalid_argument, "(-2, 2) minus A must have positive length");
  SplitDensity f;
  f.on_density = [A](double t) { return A.contains(t) ? 0.5 : 0.0; };
  for (const auto& p : A.pieces()) {
    f.breaks.push_back(p.lo);
    f.breaks.push_back(p.hi);
  }
  f.half_on = A;
  AcMismatch r;
  r.pair = jacobi_from_pair(sqrt_rep(), f, opt);
  auto model = r.pair.model();
  weyl::AcOptions ac;
  ac.side = weyl::Side::plus;
  r.ac_right = weyl::ac_support_estimate(model, IntervalUnion{{-3.0, 3.0}}, ac);
  ac.side = weyl::Side::minus;
  r.ac_left = weyl::ac_support_estimate(model, IntervalUnion{{-3.0, 3.0}}, ac);
  return r;
}

SharedRight build_shared_right(double eps, const PairOptions& opt, int grid) {
  const double eps_max = std::acos(0.5) / pi;
  if (!(eps > 0 && eps < eps_max)) fail(ErrorKind::ratio_bound_violation, "epsilon must lie in (0, 1/3)");
  SharedRight r;
  r.epsilon = eps;
  herglotz::XiProfile x1, x2;
  x1.breaks = x2.breaks = {-1.0, 0.0, 1.0};
  x1.values = {0.5, 0.5 - eps};
  x2.values = {0.5 + eps, 0.5};
  r.H1 = herglotz::herglotz_rep_from_xi(x1);
  r.H2 = herglotz::herglotz_rep_from_xi(x2);
  auto im1 = [x1](double t) { return herglotz::herglotz_from_xi_boundary(x1, t).imag(); };
  auto im2 = [x2](double t) { return herglotz::herglotz_from_xi_boundary(x2, t).imag(); };

  for (int k = 0; k < grid; ++k) {
    const double t = (k + 0.5) / grid;
    const double q = im2(t) / im1(t);
    const double q_mirror = im1(-t) / im2(-t);
    const double formula = std::pow((1 - t) / (1 + t), eps) / std::cos(eps * pi);
    r.ratio_max = std::max({r.ratio_max, q, q_mirror});
    r.ratio_formula_error =
        std::max({r.ratio_formula_error, std::abs(q - formula) / formula, std::abs(q_mirror - formula) / formula});
  }
  if (!(r.ratio_max <= 2.0)) fail(ErrorKind::ratio_bound_violation, "Im H2 / Im H1 exceeds 2");

  SplitDensity f1, f2;
  f1.breaks = f2.breaks = {-1.0, 0.0, 1.0};
  f1.on_density = [im1, im2](double t) { return t < 0 ? 0.5 : im2(t) / (2.0 * im1(t)); };
  f2.on_density = [im1, im2](double t) { return t > 0 ? 0.5 : im1(t) / (2.0 * im2(t)); };
  f1.half_on = IntervalUnion{{-1.0, 0.0}};
  f2.half_on = IntervalUnion{{0.0, 1.0}};
  r.W1 = jacobi_from_pair(r.H1, f1, opt);
  r.W2 = jacobi_from_pair(r.H2, f2, opt);

  const auto& w1 = r.W1.window;
  const auto& w2 = r.W2.window;
  for (long n = w1.lo(); n <= w1.hi(); ++n) {
    double d = std::max(std::abs(w1.at(n).a - w2.at(n).a), std::abs(w1.at(n).b - w2.at(n).b));
    r.whole_difference = std::max(r.whole_difference, d);
    if (n >= 1 && n <= 20) r.right_difference = std::max(r.right_difference, d);
  }
  return r;
}

}  // namespace jspec::reflectionless
