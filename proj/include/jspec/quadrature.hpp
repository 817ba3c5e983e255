#pragma once

#include <functional>
#include <vector>

#include "jspec/core.hpp"

namespace jspec::quad {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre on [-1, 1]; cached per n, safe to call concurrently.
const Rule& gauss_legendre(int n);

// Gauss-Legendre mapped affinely onto [a, b].
Rule gauss_legendre(double a, double b, int n);

// Gauss-Legendre in the angle of t = (a+b)/2 - (b-a)/2 cos(theta). The Jacobian
// sin(theta) absorbs square-root behaviour at both ends, so densities that vanish
// or blow up like |t - a|^{+-1/2} integrate at spectral rates. Nodes ascend.
Rule edge_rule(double a, double b, int n);

struct Result {
  double value = 0;
  double error = 0;
};

// Adaptive Gauss-Kronrod (15 points) on [a, b] until the error estimate is below
// max(tol |value|, abs_tol), using at most max_intervals subintervals; ends may
// be infinite.
Result integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 unsigned max_intervals = 2000, double abs_tol = 0);

struct ComplexResult {
  cplx value = 0;
  double error = 0;
};

ComplexResult integrate_complex(const std::function<cplx(double)>& f, double a, double b, double tol,
                                unsigned max_intervals = 2000, double abs_tol = 0);

// Same on [a, b] after the edge substitution above (a, b finite).
Result integrate_edge(const std::function<double(double)>& f, double a, double b, double tol,
                      unsigned max_intervals = 2000);

}  // namespace jspec::quad
