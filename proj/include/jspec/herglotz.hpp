#pragma once

#include <functional>
#include <vector>

#include "jspec/core.hpp"
#include "jspec/intervals.hpp"

namespace jspec::herglotz {

using Evaluator = std::function<cplx(cplx)>;

struct Atom {
  double x;
  double mass;
};

// Density on one interval. `nodes`/`weights` come from quad::edge_rule and
// `values` are the density at the nodes; `density` is kept for adaptive work
// near the support and may be empty for purely sampled input.
struct DensityPiece {
  Interval support;
  std::function<double(double)> density;
  std::vector<double> nodes, weights, values;

  double mass() const;
};

DensityPiece make_piece(double lo, double hi, std::function<double(double)> density, int nodes = 400);

class RealMeasure {
 public:
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;

  double mass() const;
  bool empty() const { return atoms.empty() && pieces.empty(); }
  // Throws on negative densities or nonpositive atoms.
  void validate() const;
  RealMeasure scaled(double s) const;
};

struct HerglotzRep {
  double offset = 0;
  double linear = 0;
  RealMeasure measure;
};

struct Value {
  cplx value;
  double error;
};

// A + Bz + sum of atoms + Stieltjes transforms of the densities. Close to a
// density support the integral is redone adaptively after subtracting the
// density value at Re z.
Value evaluate_with_error(const HerglotzRep& H, cplx z, double tol = 1e-11);
cplx evaluate(const HerglotzRep& H, cplx z);
Evaluator evaluator(const HerglotzRep& H);

// Stieltjes transform of the measure alone (no offset, no linear part, no
// Herglotz check; usable anywhere off the support).
cplx stieltjes(const RealMeasure& m, cplx z);

double harmonic_measure(cplx z, const IntervalUnion& S);
// Convention on the boundary: indicator of S (1/2 at endpoints), 0 at infinity.
double harmonic_measure_boundary(double x, const IntervalUnion& S);

struct Ladder {
  double y0 = 1e-2;
  double r = 0.25;
  int rungs = 12;
  double tol = 1e-6;
};

struct BoundaryValue {
  cplx value;
  double y;        // ordinate of the accepted rung
  double defect;   // last successive difference
  int rung;
};

BoundaryValue boundary_value(const Evaluator& F, double t, const Ladder& ladder = {});

double value_distribution(const Evaluator& F, const IntervalUnion& A, const IntervalUnion& S, double y,
                          double tol = 1e-7);

double smoothing_defect(const IntervalUnion& A, double y);

struct AverageBudget {
  double eta = 1e-6;     // ordinate used for Im F^{(s)}(t + i eta)
  double ladder_r = 0.25;
  int ladder_rungs = 4;  // eta is refined until the inner mass settles
  double tol = 1e-6;
};

double spectral_average(const Evaluator& F, const IntervalUnion& A, const IntervalUnion& S,
                        const AverageBudget& budget = {});

struct XiValue {
  double value;
  bool clamped;      // raw value left [0, 1] by more than 1e-6
  double raw;
};

XiValue xi_function(const Evaluator& F, double t, const Ladder& ladder = {});

// Piecewise-constant xi: `left_tail` on (-inf, breaks[0]), values[k] on
// (breaks[k], breaks[k+1]), `right_tail` beyond the last break.
struct XiProfile {
  enum class Norm { abs_at_i, asymptotic };
  double left_tail = 1;
  std::vector<double> breaks;
  std::vector<double> values;
  double right_tail = 0;
  Norm norm = Norm::asymptotic;
  double abs_h_i = 1;

  double at(double t) const;
  void validate() const;
};

cplx herglotz_from_xi(const XiProfile& profile, cplx z);
// Boundary value H(t + i0) = |H(t)| exp(i pi xi(t)) for t off the breaks.
cplx herglotz_from_xi_boundary(const XiProfile& profile, double t);
// A, B and measure of the function defined by the profile.
HerglotzRep herglotz_rep_from_xi(const XiProfile& profile, int nodes = 400);

double atom_mass(const Evaluator& F, double x, const Ladder& ladder = {});

}  // namespace jspec::herglotz
