#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "jspec/herglotz.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"

namespace jspec::reflectionless {

using herglotz::HerglotzRep;

struct ReflectionlessReport {
  IntervalUnion A;
  double y = 0;
  long site = 0;
  std::vector<double> t;
  std::vector<double> defect;  // |m_+(t+iy) + conj(m_-(t+iy))|
  double sup = 0;
  double l1 = 0;
};

ReflectionlessReport reflectionless_defect(const operators::CoefficientModel& model, const IntervalUnion& A,
                                           double y = 1e-4, double step = 1e-2, long site = 0);

// The function f of a splitting rho_+ = f rho, rho_- = (1 - f) rho.
struct SplitDensity {
  std::function<double(double)> on_density;
  // f at each atom of the measure being split, in order; empty means use on_density
  std::vector<double> on_atoms;
  // points where f may jump; density pieces are cut there before splitting
  std::vector<double> breaks;
  // where f is required to equal 1/2
  std::optional<IntervalUnion> half_on;

  static SplitDensity constant(double v);
  // Throws invalid-f unless 0 <= f <= 1 on the measure and f = 1/2 on half_on.
  void validate(const herglotz::RealMeasure& m) const;
};

struct Split {
  HerglotzRep plus;   // offset a_plus, no linear part, measure f rho
  HerglotzRep minus;  // offset A - a_plus, linear B, measure (1 - f) rho
  HerglotzRep whole;  // H with its density pieces cut at f.breaks
};

Split split_H(const HerglotzRep& H, const SplitDensity& f, double a_plus = 0);

struct PairOptions {
  int n_max = 40;
  int nodes = 0;  // > 0 resamples every density piece with this many nodes
  double roundtrip_tol = 1e-6;
};

struct JacobiPair {
  operators::Window window;  // coefficients on [-n_max, n_max]
  double c = 1;
  double mass_plus = 0, mass_minus = 0;
  HerglotzRep F_plus, F_minus;
  double roundtrip_error = 0;  // worst relative m-function mismatch on |z| = 3
  double fit_a0 = 0, fit_b0 = 0;  // large-z fit of c F_-, a cross-check on a(0), b(0)

  // Window model anchored with m_+(0) = c F_+, m_-(0) = c F_-.
  operators::CoefficientModel model() const;
};

// Whole-line coefficients whose m-functions at 0 are c F_+ and c F_-, with
// F_+ + F_- = H and F_+ carrying f rho. Throws roundtrip-failure when the
// coefficients do not reproduce both functions.
JacobiPair jacobi_from_pair(const HerglotzRep& H, const SplitDensity& f, const PairOptions& opt = {});

// sqrt(z^2 - 4) as a representation: offset 0, linear 1, density sqrt(4 - t^2)/pi.
HerglotzRep sqrt_rep(int nodes = 400);

struct AcMismatch {
  JacobiPair pair;
  IntervalUnion ac_right, ac_left;
};

AcMismatch build_ac_mismatch(const IntervalUnion& A, const PairOptions& opt = {});

struct SharedRight {
  double epsilon = 0;
  HerglotzRep H1, H2;
  JacobiPair W1, W2;
  double ratio_max = 0;            // sup of Im H2(t)/Im H1(t) on the check grid in (0, 1)
  double ratio_formula_error = 0;  // against ((1-t)/(1+t))^eps / cos(eps pi), both ratios
  double right_difference = 0;     // max coefficient difference for 1 <= n <= 20
  double whole_difference = 0;     // max coefficient difference on the window
};

SharedRight build_shared_right(double epsilon, const PairOptions& opt = {}, int grid = 200);

}  // namespace jspec::reflectionless
