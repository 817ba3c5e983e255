#pragma once

#include <array>

#include "jspec/core.hpp"
#include "jspec/operators.hpp"

namespace jspec::hyperbolic {

enum class Sign { plus, minus };

struct TransferMatrix {
  cplx m00, m01, m10, m11;
  Sign sign = Sign::minus;
  double log_scale = 0;  // the represented matrix is exp(log_scale) * [m]

  cplx det() const { return m00 * m11 - m01 * m10; }
  TransferMatrix operator*(const TransferMatrix& o) const;
  TransferMatrix inverse() const;
  // Rescale entries to unit max-norm, folding the factor into log_scale.
  void normalize();
  static TransferMatrix identity(Sign s = Sign::minus);
};

// Homogeneous coordinates [z1 : z2] of a point of the Riemann sphere.
struct ProjectivePoint {
  cplx z1 = 1, z2 = 0;

  static ProjectivePoint infinity() { return {1.0, 0.0}; }
  static ProjectivePoint finite(cplx z) { return {z, 1.0}; }
  bool is_infinite() const { return z2 == cplx(0.0, 0.0); }
  // z1/z2; +inf real for the point at infinity
  cplx value() const;
  void normalize();
};

TransferMatrix transfer_step(double a, double b, cplx z, Sign sign);
inline TransferMatrix transfer_step(const Coeff& c, cplx z, Sign sign) { return transfer_step(c.a, c.b, z, sign); }

// P(n, z) = T(n) T(n-1) ... T(1), renormalized every step.
TransferMatrix transfer_product(const operators::CoefficientModel& model, long n, cplx z, Sign sign);

ProjectivePoint mobius_apply(const TransferMatrix& M, const ProjectivePoint& p);
cplx mobius_apply(const TransferMatrix& M, cplx z);

// Image of the closed upper half plane under M as a disk: centre and radius.
// Valid when M maps the real line to a bounded circle.
struct Disk {
  cplx centre;
  double radius;
};
Disk image_of_upper_half_plane(const TransferMatrix& M);

double pseudo_distance(cplx w, cplx z);

// Prufer radius |Y(n)| of the solution of the eigenvalue equation at z = 2 cos(phi)
// with initial data (y(start-1), y(start)); a(start-1) defaults to 1 outside the domain.
double prufer_radius(const operators::CoefficientModel& model, double phi, long n, std::array<double, 2> initial,
                     long start);
double prufer_log_radius(const operators::CoefficientModel& model, double phi, long n, std::array<double, 2> initial,
                         long start);

}  // namespace jspec::hyperbolic
