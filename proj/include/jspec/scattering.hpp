#pragma once

#include <vector>

#include "jspec/core.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"

namespace jspec::scattering {

// Indices [lo, hi] where (a(n), b(n)) differs from (1, 0); empty when lo > hi.
struct Support {
  long lo = 1, hi = 0;
  bool empty() const { return lo > hi; }
};

// Support of a free-plus-compact model. Throws invalid-argument unless both
// tails are free.
Support perturbation_support(const operators::CoefficientModel& model);

struct JostPair {
  long lo = 0;                    // first index of the stored windows
  std::vector<cplx> f_plus;       // e^{in phi} right of the support
  std::vector<cplx> f_left;       // e^{in phi} left of the support
  double phi = 0;

  long hi() const { return lo + static_cast<long>(f_plus.size()) - 1; }
};

JostPair jost_pair(const operators::CoefficientModel& model, double phi, long margin = 5);

// a(n) (u(n) v(n+1) - u(n+1) v(n))
cplx wronskian(const operators::CoefficientModel& model, const std::vector<cplx>& u, const std::vector<cplx>& v,
               long lo, long n);

struct ScatteringData {
  double phi = 0;
  cplx T = 1;
  cplx R = 0;
  double psi = 0;               // arg T
  double unitarity_defect = 0;  // ||T|^2 + |R|^2 - 1|
};

// The solution equal to e^{in phi} left of the support is T^{-1}(e^{in phi} + R e^{-in phi})
// right of it.
ScatteringData scattering_coefficients(const operators::CoefficientModel& model, double phi);

// {2 cos phi : |R(phi)| < tol} over phi_k = pi (k + 1/2)/points.
IntervalUnion reflectionless_set_estimate(const operators::CoefficientModel& model, int points = 400,
                                          double tol = 1e-3);

// Window [lo, hi] of `source` embedded in the free operator.
operators::CoefficientModel free_padded(const operators::CoefficientModel& source, long lo, long hi);

}  // namespace jspec::scattering
