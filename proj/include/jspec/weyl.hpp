#pragma once

#include "jspec/core.hpp"
#include "jspec/herglotz.hpp"
#include "jspec/hyperbolic.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"

namespace jspec::weyl {

using hyperbolic::ProjectivePoint;
using operators::CoefficientModel;

enum class Side { plus, minus };

// How a value was obtained.
//   disk:     truncated with a Dirichlet seed; error_radius is the Weyl disk radius
//   periodic: seeded with the exact fixed point on a periodic tail
//   anchor:   evolved from m-functions attached to the model
//   finite:   the domain ends, so the value is a finite computation
enum class Source { disk, periodic, anchor, finite };

struct MFunctionValue {
  ProjectivePoint value;
  double error_radius = 0;
  Side side = Side::plus;
  long site = 0;
  Source source = Source::disk;
  long depth = 0;  // transfer steps used

  cplx z() const { return value.value(); }
};

struct Budget {
  double target_error = 1e-10;
  long max_depth = 100000;
};

// m_+(n, z) = -f_+(n+1)/(a(n) f_+(n)), built from the coefficients at n+1, n+2, ...
MFunctionValue m_plus(const CoefficientModel& model, long n, cplx z, const Budget& budget = {});

// m_-(n, z) of the segment {1, ..., n} with m_-(0) = infinity; works for any z.
MFunctionValue m_minus_segment(const CoefficientModel& model, long n, cplx z);

// m_-(n, z) = f_-(n+1)/(a(n) f_-(n)) from the coefficients at n, n-1, ...
// A model whose domain starts at lo gets the segment value with m_-(lo-1) = infinity.
MFunctionValue m_minus_wholeline(const CoefficientModel& model, long n, cplx z, const Budget& budget = {});

// The same computation with an explicit seed placed `depth` sites to the left
// (no tails, no anchors); used to check seed independence.
MFunctionValue m_minus_seeded(const CoefficientModel& model, long n, cplx z, long depth, cplx seed);
MFunctionValue m_plus_seeded(const CoefficientModel& model, long n, cplx z, long depth, cplx seed);

// <delta_n, (J - z)^{-1} delta_n> = -1/(a(n)^2 (m_+(n) + m_-(n))).
cplx green_diag(const CoefficientModel& model, long n, cplx z, const Budget& budget = {});

struct AcOptions {
  double step = 1e-2;
  double y = 1e-4;
  double threshold = 1e-3;
  Side side = Side::plus;
  long site = 0;
};

// Grid proxy for the a.c. support of one half line: points t with
// Im m(t + iy) > threshold, merged into intervals.
IntervalUnion ac_support_estimate(const CoefficientModel& model, const IntervalUnion& grid, const AcOptions& opt = {});

// |int_A omega_{m_-(n, t+iy)}(-S) dt - int_A omega_{m_+(n, t+iy)}(S) dt| for a
// half-line model, m_- being the segment function.
double bp_defect(const CoefficientModel& model, long n, const IntervalUnion& A, const IntervalUnion& S, double y = 1e-3);

// Weyl m-functions as plain evaluators.
herglotz::Evaluator m_plus_evaluator(const CoefficientModel& model, long n, const Budget& budget = {});
herglotz::Evaluator m_minus_evaluator(const CoefficientModel& model, long n, const Budget& budget = {});

}  // namespace jspec::weyl
