#include "jspec/herglotz.hpp"

#include <algorithm>
#include <cmath>

#include "jspec/quadrature.hpp"

namespace jspec::herglotz {

double DensityPiece::mass() const {
  double s = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * values[i];
  return s;
}

DensityPiece make_piece(double lo, double hi, std::function<double(double)> density, int nodes) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    fail(ErrorKind::invalid_argument, "density piece needs a bounded interval");
  if (nodes < 2) fail(ErrorKind::insufficient_nodes, "density piece needs at least 2 nodes");
  DensityPiece p;
  p.support = {lo, hi};
  quad::Rule r = quad::edge_rule(lo, hi, nodes);
  p.nodes = std::move(r.x);
  p.weights = std::move(r.w);
  p.values.resize(p.nodes.size());
  for (std::size_t i = 0; i < p.nodes.size(); ++i) p.values[i] = density(p.nodes[i]);
  p.density = std::move(density);
  return p;
}

double RealMeasure::mass() const {
  double s = 0;
  for (const auto& a : atoms) s += a.mass;
  for (const auto& p : pieces) s += p.mass();
  return s;
}

void RealMeasure::validate() const {
  for (const auto& a : atoms)
    if (!(a.mass > 0) || !std::isfinite(a.x)) fail(ErrorKind::invalid_argument, "atom masses must be positive");
  for (const auto& p : pieces)
    for (double v : p.values)
      if (!(v >= 0) || !std::isfinite(v)) fail(ErrorKind::invalid_argument, "density values must be nonnegative");
}

RealMeasure RealMeasure::scaled(double s) const {
  RealMeasure m = *this;
  for (auto& a : m.atoms) a.mass *= s;
  for (auto& p : m.pieces) {
    for (auto& v : p.values) v *= s;
    if (p.density) {
      auto f = p.density;
      p.density = [f, s](double t) { return s * f(t); };
    }
  }
  return m;
}

namespace {

// Gauss-Legendre convergence estimate for 1/(t - z) on [lo, hi]: rho^{-2n} with
// rho the Bernstein ellipse parameter through z.
double far_error_estimate(const DensityPiece& p, cplx z) {
  const double h = 0.5 * p.support.length(), c = 0.5 * (p.support.lo + p.support.hi);
  cplx u = (z - c) / h;
  cplx w = u + std::sqrt(u - 1.0) * std::sqrt(u + 1.0);
  double rho = std::max(std::abs(w), 1.0 / std::abs(w));
  double dist = std::max(std::abs(z.imag()), 1e-300);
  double n = static_cast<double>(p.nodes.size());
  return p.mass() / dist * std::exp(-2.0 * n * std::log(rho));
}

Value piece_transform(const DensityPiece& p, cplx z, double tol) {
  const double lo = p.support.lo, hi = p.support.hi;
  const double h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
  const double spacing = pi * h / static_cast<double>(p.nodes.size());
  const double x = z.real(), y = z.imag();
  const bool near = y < 10.0 * spacing && x > lo - 10.0 * spacing && x < hi + 10.0 * spacing;
  if (!near) {
    cplx s = 0;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) s += p.weights[i] * p.values[i] / (p.nodes[i] - z);
    return {s, far_error_estimate(p, z)};
  }
  if (!p.density)
    fail(ErrorKind::accuracy_unreachable, "evaluation point within 10 node spacings of a sampled-only density");
  const auto& g = p.density;
  const unsigned cap = 600;
  const double abs_tol = tol * (1.0 + p.mass());
  if (x > lo && x < hi) {
    const double gx = g(x);
    const double theta_x = std::acos(std::clamp((c - x) / h, -1.0, 1.0));
    auto f = [&](double theta) -> cplx {
      double t = c - h * std::cos(theta);
      return (g(t) - gx) / (t - z) * (h * std::sin(theta));
    };
    auto r1 = quad::integrate_complex(f, 0.0, theta_x, tol, cap, abs_tol);
    auto r2 = quad::integrate_complex(f, theta_x, pi, tol, cap, abs_tol);
    cplx tail = gx * (std::log(cplx(hi - x, -y)) - std::log(cplx(lo - x, -y)));
    return {r1.value + r2.value + tail, r1.error + r2.error};
  }
  auto f = [&](double theta) -> cplx {
    double t = c - h * std::cos(theta);
    return g(t) / (t - z) * (h * std::sin(theta));
  };
  // split where the integrand peaks so the adaptive rule sees the feature
  double theta_peak = x <= lo ? 0.0 : pi;
  double theta_mid = theta_peak == 0.0 ? std::min(0.5, pi / 2) : std::max(pi - 0.5, pi / 2);
  auto r1 = quad::integrate_complex(f, std::min(theta_peak, theta_mid), std::max(theta_peak, theta_mid), tol, cap, abs_tol);
  auto r2 = theta_peak == 0.0 ? quad::integrate_complex(f, theta_mid, pi, tol, cap, abs_tol)
                              : quad::integrate_complex(f, 0.0, theta_mid, tol, cap, abs_tol);
  return {r1.value + r2.value, r1.error + r2.error};
}

double omega_piece(double x, double y, double c, double d) {
  // angle subtended by (c, d) at x + iy, in a form accurate for small values
  if (c == -inf && d == inf) return 1.0;
  if (c == -inf) return std::atan2(y, x - d) / pi;
  if (d == inf) return std::atan2(y, c - x) / pi;
  return std::atan2(y * (d - c), (c - x) * (d - x) + y * y) / pi;
}

}  // namespace

cplx stieltjes(const RealMeasure& m, cplx z) {
  cplx s = 0;
  for (const auto& a : m.atoms) s += a.mass / (a.x - z);
  for (const auto& p : m.pieces)
    for (std::size_t i = 0; i < p.nodes.size(); ++i) s += p.weights[i] * p.values[i] / (p.nodes[i] - z);
  return s;
}

Value evaluate_with_error(const HerglotzRep& H, cplx z, double tol) {
  if (!(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, "evaluate needs Im z > 0");
  if (H.linear < 0) fail(ErrorKind::invalid_argument, "linear coefficient must be nonnegative");
  if (H.linear == 0 && H.measure.empty())
    fail(ErrorKind::accuracy_unreachable, "representation has no measure and no linear part (not Herglotz)");
  Value v{H.offset + H.linear * z, 0.0};
  for (const auto& a : H.measure.atoms) v.value += a.mass / (a.x - z);
  for (const auto& p : H.measure.pieces) {
    Value w = piece_transform(p, z, tol);
    v.value += w.value;
    v.error += w.error;
  }
  if (!(v.value.imag() > 0)) {
    if (v.value.imag() > -v.error - 1e-300 && v.error > 0) {
      fail(ErrorKind::accuracy_unreachable, "imaginary part below the quadrature error");
    }
    fail(ErrorKind::accuracy_unreachable, "evaluation lost the Herglotz property");
  }
  return v;
}

cplx evaluate(const HerglotzRep& H, cplx z) { return evaluate_with_error(H, z).value; }

Evaluator evaluator(const HerglotzRep& H) {
  return [H](cplx z) { return evaluate(H, z); };
}

double harmonic_measure(cplx z, const IntervalUnion& S) {
  if (!(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, "harmonic_measure needs Im z > 0");
  double s = 0;
  for (const auto& p : S.pieces()) s += omega_piece(z.real(), z.imag(), p.lo, p.hi);
  return std::clamp(s, 0.0, 1.0);
}

double harmonic_measure_boundary(double x, const IntervalUnion& S) {
  if (!std::isfinite(x)) return 0.0;
  for (const auto& p : S.pieces()) {
    if (p.lo < x && x < p.hi) return 1.0;
    if (x == p.lo || x == p.hi) return 0.5;
  }
  return 0.0;
}

namespace {

double omega_of_value(cplx w, const IntervalUnion& S) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return 0.0;
  if (w.imag() > 0) return harmonic_measure(w, S);
  return harmonic_measure_boundary(w.real(), S);
}

}  // namespace

BoundaryValue boundary_value(const Evaluator& F, double t, const Ladder& ladder) {
  if (!(ladder.r > 0 && ladder.r < 1) || ladder.rungs < 2 || !(ladder.y0 > 0))
    fail(ErrorKind::invalid_argument, "ladder must be decreasing geometric with >= 2 rungs");
  double y = ladder.y0;
  cplx prev = F(cplx(t, y));
  double defect = inf;
  for (int k = 1; k < ladder.rungs; ++k) {
    y *= ladder.r;
    cplx cur = F(cplx(t, y));
    defect = std::abs(cur - prev);
    if (defect < ladder.tol * std::max(1.0, std::abs(cur))) return {cur, y, defect, k};
    prev = cur;
  }
  fail(ErrorKind::no_convergence, "boundary value at t = " + std::to_string(t) + " (defect " + std::to_string(defect) + ")");
}

namespace {

// Composite 8-point Gauss-Legendre on cells no wider than max(4y, |A|/4096),
// each refined by bisection until the two levels agree.
class CompositeIntegrator {
 public:
  CompositeIntegrator(std::function<double(double)> f, double tol, long budget)
      : f_(std::move(f)), tol_(tol), budget_(budget) {}

  double run(double lo, double hi, double cell) {
    const long cells = std::max(1L, static_cast<long>(std::ceil((hi - lo) / cell)));
    const double h = (hi - lo) / static_cast<double>(cells);
    const double density = tol_ / (hi - lo);
    double total = 0;
    for (long k = 0; k < cells; ++k) {
      double a = lo + h * static_cast<double>(k), b = k + 1 == cells ? hi : a + h;
      total += refine(a, b, gl(a, b), density, 0);
    }
    return total;
  }

 private:
  double gl(double a, double b) {
    const auto& r = quad::gauss_legendre(8);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 8; ++i) s += r.w[i] * f_(c + h * r.x[i]);
    evals_ += 8;
    if (evals_ > budget_) fail(ErrorKind::quadrature_budget_exceeded, "value_distribution: evaluation budget exhausted");
    return h * s;
  }

  double refine(double a, double b, double whole, double density, int depth) {
    const double m = 0.5 * (a + b);
    const double l = gl(a, m), r = gl(m, b);
    if (std::abs(l + r - whole) <= std::max(density * (b - a), 1e-16) || depth >= 40) return l + r;
    return refine(a, m, l, density, depth + 1) + refine(m, b, r, density, depth + 1);
  }

  std::function<double(double)> f_;
  double tol_;
  long budget_;
  long evals_ = 0;
};

}  // namespace

double value_distribution(const Evaluator& F, const IntervalUnion& A, const IntervalUnion& S, double y, double tol) {
  if (!(y > 0)) fail(ErrorKind::invalid_argument, "value_distribution needs y > 0");
  if (!A.bounded()) fail(ErrorKind::invalid_argument, "value_distribution needs |A| < inf");
  double total = 0;
  const double len = A.length();
  for (const auto& p : A.pieces()) {
    CompositeIntegrator integ([&](double t) { return omega_of_value(F(cplx(t, y)), S); }, tol * p.length() / len,
                              4000000);
    total += integ.run(p.lo, p.hi, std::max(4.0 * y, len / 4096.0));
  }
  return total;
}

double smoothing_defect(const IntervalUnion& A, double y) {
  if (!(y > 0)) fail(ErrorKind::invalid_argument, "smoothing_defect needs y > 0");
  if (!A.bounded()) fail(ErrorKind::invalid_argument, "smoothing_defect needs |A| < inf");
  IntervalUnion Ac = A.complement();
  double total = 0;
  for (const auto& p : A.pieces()) {
    auto f = [&](double t) {
      double s = 0;
      for (const auto& q : Ac.pieces()) s += omega_piece(t, y, q.lo, q.hi);
      return s;
    };
    const double d = std::min(100.0 * y, p.length() / 3.0);
    total += quad::integrate(f, p.lo, p.lo + d, 1e-10).value;
    total += quad::integrate(f, p.lo + d, p.hi - d, 1e-10).value;
    total += quad::integrate(f, p.hi - d, p.hi, 1e-10).value;
  }
  return total;
}

double spectral_average(const Evaluator& F, const IntervalUnion& A, const IntervalUnion& S,
                        const AverageBudget& budget) {
  if (!A.bounded()) fail(ErrorKind::invalid_argument, "spectral_average needs |A| < inf");
  // rho^{(s)}(A) from the imaginary part of F^{(s)} = (1 + sF)/(s - F) just above A,
  // written with s = tan(u) so that ds/(1+s^2) = du and s = +-inf is harmless.
  auto inner = [&](double u, double eta) {
    const double cu = std::cos(u), su = std::sin(u);
    double total = 0;
    for (const auto& p : A.pieces()) {
      auto f = [&](double t) {
        cplx Fv = F(cplx(t, eta));
        cplx Fs = (cu + su * Fv) / (su - cu * Fv);
        return Fs.imag() / pi;
      };
      auto r = quad::integrate(f, p.lo, p.hi, budget.tol);
      total += r.value;
    }
    return total;
  };
  auto rho_A = [&](double u) {
    double eta = budget.eta;
    double prev = inner(u, eta);
    for (int k = 1; k < budget.ladder_rungs; ++k) {
      eta *= budget.ladder_r;
      double cur = inner(u, eta);
      if (std::abs(cur - prev) < 10 * budget.tol * std::max(1.0, std::abs(cur))) return cur;
      prev = cur;
    }
    fail(ErrorKind::quadrature_budget_exceeded, "spectral_average: inner mass did not settle along the eta ladder");
  };
  double total = 0;
  for (const auto& q : S.pieces()) {
    double u0 = q.lo == -inf ? -pi / 2 : std::atan(q.lo);
    double u1 = q.hi == inf ? pi / 2 : std::atan(q.hi);
    auto r = quad::integrate(rho_A, u0, u1, budget.tol);
    total += r.value;
  }
  return total;
}

XiValue xi_function(const Evaluator& F, double t, const Ladder& ladder) {
  double y = ladder.y0;
  auto xi_at = [&](double yy) { return std::arg(F(cplx(t, yy))) / pi; };
  double prev = xi_at(y);
  for (int k = 1; k < ladder.rungs; ++k) {
    y *= ladder.r;
    double cur = xi_at(y);
    if (std::abs(cur - prev) < ladder.tol) {
      XiValue v{std::clamp(cur, 0.0, 1.0), cur < -1e-6 || cur > 1.0 + 1e-6, cur};
      return v;
    }
    prev = cur;
  }
  fail(ErrorKind::no_convergence, "xi_function at t = " + std::to_string(t));
}

double XiProfile::at(double t) const {
  if (breaks.empty() || t < breaks.front()) return left_tail;
  if (t > breaks.back()) return right_tail;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  std::size_t k = static_cast<std::size_t>(it - breaks.begin());
  if (k == 0) return left_tail;
  if (k >= breaks.size()) return right_tail;
  return values[k - 1];
}

void XiProfile::validate() const {
  if (breaks.empty()) fail(ErrorKind::invalid_profile, "xi profile needs at least one break");
  if (values.size() + 1 != breaks.size()) fail(ErrorKind::invalid_profile, "values must number breaks - 1");
  for (std::size_t k = 1; k < breaks.size(); ++k)
    if (!(breaks[k - 1] < breaks[k])) fail(ErrorKind::invalid_profile, "breaks must increase");
  auto ok = [](double v) { return v >= 0 && v <= 1; };
  if (!ok(left_tail) || !ok(right_tail)) fail(ErrorKind::invalid_profile, "tails outside [0, 1]");
  if ((left_tail != 0 && left_tail != 1) || (right_tail != 0 && right_tail != 1))
    fail(ErrorKind::invalid_profile, "tails must be 0 or 1");
  for (double v : values)
    if (!ok(v)) fail(ErrorKind::invalid_profile, "xi outside [0, 1]");
  if (norm == Norm::asymptotic && (left_tail != 1 || right_tail != 0))
    fail(ErrorKind::invalid_profile, "H(z) = z + O(1) needs xi = 1 at -inf and 0 at +inf");
  if (norm == Norm::abs_at_i && !(abs_h_i > 0)) fail(ErrorKind::invalid_profile, "|H(i)| must be positive");
}

cplx herglotz_from_xi(const XiProfile& P, cplx z) {
  P.validate();
  if (!(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, "herglotz_from_xi needs Im z > 0");
  const bool asym = P.norm == XiProfile::Norm::asymptotic;
  auto L = [&](double c) { return std::log(c - z); };
  auto q = [](double c) { return 0.5 * std::log(c * c + 1.0); };
  const auto& b = P.breaks;
  cplx I = 0;
  if (P.left_tail != 0) I += P.left_tail * (L(b.front()) + cplx(0, pi) - (asym ? 0.0 : q(b.front())));
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    double v = P.values[k];
    if (v == 0) continue;
    I += v * (L(b[k + 1]) - L(b[k]) - (asym ? 0.0 : q(b[k + 1]) - q(b[k])));
  }
  if (P.right_tail != 0) I += P.right_tail * (-L(b.back()) + (asym ? 0.0 : q(b.back())));
  return (asym ? 1.0 : P.abs_h_i) * std::exp(I);
}

cplx herglotz_from_xi_boundary(const XiProfile& P, double t) {
  P.validate();
  const bool asym = P.norm == XiProfile::Norm::asymptotic;
  auto L = [&](double c) { return std::log(std::abs(c - t)); };
  auto q = [](double c) { return 0.5 * std::log(c * c + 1.0); };
  const auto& b = P.breaks;
  double lm = asym ? 0.0 : std::log(P.abs_h_i);
  if (P.left_tail != 0) lm += P.left_tail * (L(b.front()) - (asym ? 0.0 : q(b.front())));
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    double v = P.values[k];
    if (v == 0) continue;
    lm += v * (L(b[k + 1]) - L(b[k]) - (asym ? 0.0 : q(b[k + 1]) - q(b[k])));
  }
  if (P.right_tail != 0) lm += P.right_tail * (-L(b.back()) + (asym ? 0.0 : q(b.back())));
  return std::polar(std::exp(lm), pi * P.at(t));
}

HerglotzRep herglotz_rep_from_xi(const XiProfile& P, int nodes) {
  P.validate();
  const auto& b = P.breaks;
  HerglotzRep H;
  auto q = [](double c) { return 0.5 * std::log(c * c + 1.0); };
  double drop = 0;  // sum of the real constants removed by the asymptotic normalization
  if (P.left_tail != 0) drop -= q(b.front());
  for (std::size_t k = 0; k + 1 < b.size(); ++k) drop -= P.values[k] * (q(b[k + 1]) - q(b[k]));
  if (P.right_tail != 0) drop += q(b.back());
  const double K = P.norm == XiProfile::Norm::asymptotic ? 1.0 : P.abs_h_i * std::exp(drop);
  if (P.left_tail == 1 && P.right_tail == 0) {
    double a = -b.front();
    for (std::size_t k = 0; k + 1 < b.size(); ++k) a -= P.values[k] * (b[k + 1] - b[k]);
    H.linear = K;
    H.offset = K * a;
  } else if (P.left_tail == 0 && P.right_tail == 0) {
    H.linear = 0;
    H.offset = K;
  } else {
    fail(ErrorKind::invalid_profile, "representation needs xi = 0 at +inf");
  }
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    double v = P.values[k];
    if (v <= 0 || v >= 1) continue;
    auto dens = [P, v](double t) { return std::abs(herglotz_from_xi_boundary(P, t)) * std::sin(pi * v) / pi; };
    H.measure.pieces.push_back(make_piece(b[k], b[k + 1], dens, nodes));
  }
  // poles sit where xi jumps from 0 up to 1
  for (std::size_t k = 0; k < b.size(); ++k) {
    double left = k == 0 ? P.left_tail : P.values[k - 1];
    double right = k + 1 < b.size() ? P.values[k] : P.right_tail;
    if (left == 0 && right == 1) {
      Ladder ladder;
      ladder.rungs = 16;
      double m = atom_mass([&P](cplx z) { return herglotz_from_xi(P, z); }, b[k], ladder);
      if (m > 0) H.measure.atoms.push_back({b[k], m});
    }
  }
  return H;
}

double atom_mass(const Evaluator& F, double x, const Ladder& ladder) {
  double y = ladder.y0;
  auto v_at = [&](double yy) { return cplx(0, -1) * yy * F(cplx(x, yy)); };
  cplx prev = v_at(y);
  for (int k = 1; k < ladder.rungs; ++k) {
    y *= ladder.r;
    cplx cur = v_at(y);
    if (std::abs(cur - prev) < ladder.tol * std::max(1.0, std::abs(cur))) {
      double m = cur.real();
      return m < ladder.tol ? 0.0 : m;
    }
    prev = cur;
  }
  fail(ErrorKind::no_convergence, "atom_mass at x = " + std::to_string(x));
}

}  // namespace jspec::herglotz
