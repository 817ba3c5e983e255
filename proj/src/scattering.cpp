#include "jspec/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "jspec/parallel.hpp"

namespace jspec::scattering {

using operators::CoefficientModel;

Support perturbation_support(const CoefficientModel& model) {
  auto rt = model.right_tail();
  auto lt = model.left_tail();
  if (!model.is_whole_line() || !rt || !lt || rt->period != 1 || lt->period != 1)
    fail(ErrorKind::invalid_argument, "scattering needs a free-plus-compact whole-line model");
  const long hi_scan = rt->start == operators::kNoLower ? 0 : rt->start;
  const long lo_scan = lt->start == operators::kNoUpper ? 0 : lt->start;
  const Coeff free{1.0, 0.0};
  if (!(model.coeff(hi_scan) == free) || !(model.coeff(lo_scan) == free))
    fail(ErrorKind::invalid_argument, "scattering needs free coefficients outside a finite window");
  Support s;
  for (long n = std::min(lo_scan, hi_scan); n <= std::max(lo_scan, hi_scan); ++n)
    if (!(model.coeff(n) == free)) {
      if (s.empty()) s.lo = n;
      s.hi = n;
    }
  if (s.empty()) s = Support{};
  return s;
}

namespace {

void check_angle(double phi) {
  if (!(phi > 0 && phi < pi) || std::abs(std::sin(phi)) < 1e-12)
    fail(ErrorKind::degenerate_angle, "scattering needs phi in (0, pi)");
}

cplx wave(long n, double phi) { return std::polar(1.0, static_cast<double>(n) * phi); }

}  // namespace

JostPair jost_pair(const CoefficientModel& model, double phi, long margin) {
  check_angle(phi);
  if (margin < 2) fail(ErrorKind::invalid_argument, "jost_pair needs margin >= 2");
  Support s = perturbation_support(model);
  if (s.empty()) s = {1, 0};
  const double z = 2 * std::cos(phi);
  JostPair jp;
  jp.phi = phi;
  jp.lo = s.lo - margin;
  const long hi = s.hi + margin;
  const auto size = static_cast<std::size_t>(hi - jp.lo + 1);
  jp.f_plus.resize(size);
  jp.f_left.resize(size);
  auto idx = [&](long n) { return static_cast<std::size_t>(n - jp.lo); };
  auto a = [&](long n) { return model.coeff(n).a; };
  for (long n = s.hi + 1; n <= hi; ++n) jp.f_plus[idx(n)] = wave(n, phi);
  for (long n = s.hi + 1; n > jp.lo; --n) {
    Coeff c = model.coeff(n);
    jp.f_plus[idx(n - 1)] = ((z - c.b) * jp.f_plus[idx(n)] - c.a * jp.f_plus[idx(n + 1)]) / a(n - 1);
  }
  for (long n = jp.lo; n <= s.lo - 1; ++n) jp.f_left[idx(n)] = wave(n, phi);
  for (long n = s.lo - 1; n < hi; ++n) {
    Coeff c = model.coeff(n);
    jp.f_left[idx(n + 1)] = ((z - c.b) * jp.f_left[idx(n)] - a(n - 1) * jp.f_left[idx(n - 1)]) / c.a;
  }
  return jp;
}

cplx wronskian(const CoefficientModel& model, const std::vector<cplx>& u, const std::vector<cplx>& v, long lo, long n) {
  auto i = static_cast<std::size_t>(n - lo);
  return model.coeff(n).a * (u[i] * v[i + 1] - u[i + 1] * v[i]);
}

ScatteringData scattering_coefficients(const CoefficientModel& model, double phi) {
  check_angle(phi);
  ScatteringData d;
  d.phi = phi;
  const Support s = perturbation_support(model);
  if (s.empty()) return d;
  const double z = 2 * std::cos(phi);
  // propagate the left plane wave through the support
  long n = s.lo - 1;
  cplx u0 = wave(n - 1, phi), u1 = wave(n, phi);
  for (; n <= s.hi + 1; ++n) {
    Coeff c = model.coeff(n);
    cplx u2 = ((z - c.b) * u1 - model.coeff(n - 1).a * u0) / c.a;
    u0 = u1;
    u1 = u2;
  }
  // u0 = u(hi+1), u1 = u(hi+2) = c1 e^{in phi} + c2 e^{-in phi}
  const long n0 = s.hi + 1;
  const cplx e0 = wave(n0, phi), e1 = wave(n0 + 1, phi);
  const cplx det = e0 * std::conj(e1) - std::conj(e0) * e1;  // -2i sin phi
  const cplx c1 = (u0 * std::conj(e1) - std::conj(e0) * u1) / det;
  const cplx c2 = (e0 * u1 - e1 * u0) / det;
  if (std::abs(c1) < 1e-300 || !std::isfinite(std::abs(c1)))
    fail(ErrorKind::basis_degenerate, "left solution has no e^{in phi} component");
  d.T = 1.0 / c1;
  d.R = c2 / c1;
  d.psi = std::arg(d.T);
  d.unitarity_defect = std::abs(std::norm(d.T) + std::norm(d.R) - 1.0);
  return d;
}

IntervalUnion reflectionless_set_estimate(const CoefficientModel& model, int points, double tol) {
  if (points < 1) fail(ErrorKind::invalid_argument, "need at least one angle");
  std::vector<double> energy(static_cast<std::size_t>(points));
  std::vector<char> flag(energy.size());
  parallel_for(energy.size(), [&](std::size_t k) {
    // ascending energies: phi runs from pi down to 0
    const double phi = pi * (static_cast<double>(points - 1 - static_cast<long>(k)) + 0.5) / points;
    energy[k] = 2 * std::cos(phi);
    flag[k] = std::abs(scattering_coefficients(model, phi).R) < tol;
  });
  return merge_flagged(energy, std::vector<bool>(flag.begin(), flag.end())).intersect(IntervalUnion{{-2.0, 2.0}});
}

CoefficientModel free_padded(const CoefficientModel& source, long lo, long hi) {
  return operators::explicit_window(operators::extract_window(source, lo, hi), operators::free_model());
}

}  // namespace jspec::scattering
