#include "jspec/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jspec::hyperbolic {

using operators::CoefficientModel;

namespace {

double maxabs(cplx a, cplx b, cplx c, cplx d) {
  return std::max({std::abs(a.real()), std::abs(a.imag()), std::abs(b.real()), std::abs(b.imag()),
                   std::abs(c.real()), std::abs(c.imag()), std::abs(d.real()), std::abs(d.imag())});
}

}  // namespace

TransferMatrix TransferMatrix::operator*(const TransferMatrix& o) const {
  TransferMatrix r;
  r.m00 = m00 * o.m00 + m01 * o.m10;
  r.m01 = m00 * o.m01 + m01 * o.m11;
  r.m10 = m10 * o.m00 + m11 * o.m10;
  r.m11 = m10 * o.m01 + m11 * o.m11;
  r.sign = sign;
  r.log_scale = log_scale + o.log_scale;
  return r;
}

TransferMatrix TransferMatrix::inverse() const {
  cplx d = det();
  TransferMatrix r;
  r.m00 = m11 / d;
  r.m01 = -m01 / d;
  r.m10 = -m10 / d;
  r.m11 = m00 / d;
  r.sign = sign;
  r.log_scale = -log_scale;
  return r;
}

void TransferMatrix::normalize() {
  double s = maxabs(m00, m01, m10, m11);
  if (s == 0 || !std::isfinite(s)) return;
  m00 /= s;
  m01 /= s;
  m10 /= s;
  m11 /= s;
  log_scale += std::log(s);
}

TransferMatrix TransferMatrix::identity(Sign s) {
  TransferMatrix r;
  r.m00 = 1;
  r.m01 = 0;
  r.m10 = 0;
  r.m11 = 1;
  r.sign = s;
  return r;
}

cplx ProjectivePoint::value() const {
  if (is_infinite()) return {std::numeric_limits<double>::infinity(), 0.0};
  return z1 / z2;
}

void ProjectivePoint::normalize() {
  double s = std::max({std::abs(z1.real()), std::abs(z1.imag()), std::abs(z2.real()), std::abs(z2.imag())});
  if (s == 0 || !std::isfinite(s)) return;
  z1 /= s;
  z2 /= s;
}

TransferMatrix transfer_step(double a, double b, cplx z, Sign sign) {
  if (!(a > 0)) fail(ErrorKind::nonpositive_a, "transfer_step needs a > 0");
  const double s = sign == Sign::plus ? 1.0 : -1.0;
  TransferMatrix t;
  t.m00 = (z - b) / a;
  t.m01 = s / a;
  t.m10 = -s * a;
  t.m11 = 0.0;
  t.sign = sign;
  return t;
}

TransferMatrix transfer_product(const CoefficientModel& model, long n, cplx z, Sign sign) {
  if (n < 1) fail(ErrorKind::invalid_argument, "transfer_product needs n >= 1");
  TransferMatrix p = TransferMatrix::identity(sign);
  for (long k = 1; k <= n; ++k) {
    p = transfer_step(model.coeff(k), z, sign) * p;
    p.normalize();
  }
  return p;
}

ProjectivePoint mobius_apply(const TransferMatrix& M, const ProjectivePoint& p) {
  ProjectivePoint q{M.m00 * p.z1 + M.m01 * p.z2, M.m10 * p.z1 + M.m11 * p.z2};
  q.normalize();
  return q;
}

cplx mobius_apply(const TransferMatrix& M, cplx z) { return mobius_apply(M, ProjectivePoint::finite(z)).value(); }

Disk image_of_upper_half_plane(const TransferMatrix& M) {
  // the centre is the image of the reflection of the pole -d/c in the real axis
  const cplx& a = M.m00;
  const cplx& b = M.m01;
  const cplx& c = M.m10;
  const cplx& d = M.m11;
  cplx D = d * std::conj(c) - c * std::conj(d);
  if (std::abs(D) == 0) return {cplx(0, 0), std::numeric_limits<double>::infinity()};
  Disk k;
  k.centre = (b * std::conj(c) - a * std::conj(d)) / D;
  k.radius = std::abs(M.det()) / std::abs(D);
  return k;
}

double pseudo_distance(cplx w, cplx z) {
  if (!(w.imag() > 0) || !(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, "pseudo_distance");
  return std::abs(w - z) / std::sqrt(w.imag() * z.imag());
}

double prufer_log_radius(const CoefficientModel& model, double phi, long n, std::array<double, 2> initial,
                         long start) {
  const double s = std::sin(phi), c = std::cos(phi);
  if (std::abs(s) < 1e-12) fail(ErrorKind::degenerate_angle, "prufer_radius needs phi outside pi*Z");
  if (initial[0] == 0 && initial[1] == 0) fail(ErrorKind::invalid_argument, "prufer_radius: zero initial data");
  if (n < start) fail(ErrorKind::invalid_argument, "prufer_radius: n < start");
  const double z = 2.0 * c;
  auto a_at = [&](long k) { return model.domain().contains(k) ? model.coeff(k).a : 1.0; };
  double y0 = initial[0], y1 = initial[1], log_scale = 0;
  for (long k = start; k < n; ++k) {
    Coeff ck = model.coeff(k);
    double y2 = ((z - ck.b) * y1 - a_at(k - 1) * y0) / ck.a;
    y0 = y1;
    y1 = y2;
    double m = std::max(std::abs(y0), std::abs(y1));
    if (m > 1e100 || m < 1e-100) {
      y0 /= m;
      y1 /= m;
      log_scale += std::log(m);
    }
  }
  double Y1 = s * y0, Y2 = y1 - c * y0;
  return log_scale + std::log(std::hypot(Y1, Y2));
}

double prufer_radius(const CoefficientModel& model, double phi, long n, std::array<double, 2> initial, long start) {
  return std::exp(prufer_log_radius(model, phi, n, initial, start));
}

}  // namespace jspec::hyperbolic
