#pragma once

#include <vector>

#include "jspec/herglotz.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"

namespace jspec::inverse {

struct DiscretizedMeasure {
  std::vector<double> t;
  std::vector<double> w;

  double mass() const;
  std::size_t distinct_nodes() const;
};

// Atoms are copied; every density piece contributes its quadrature nodes times
// density values. nodes_per_interval > 0 resamples pieces that still carry
// their density function with that many edge-rule nodes.
DiscretizedMeasure discretize(const herglotz::RealMeasure& m, int nodes_per_interval = 0);

struct Recovered {
  std::vector<double> a;  // a(1), ..., a(n_max)
  std::vector<double> b;  // b(1), ..., b(n_max)
  double c = 1;           // 1 / total mass
  double orthogonality_defect = 0;

  operators::Window window(long offset = 1) const;
};

// Three-term recurrence of the orthonormal polynomials of dm (normalized to
// mass 1), by Lanczos with full reorthogonalization.
Recovered coefficients_from_measure(const DiscretizedMeasure& dm, int n_max = 40);

// Density (1/pi) Im m_+(0, t + iy) sampled at the midpoints of a grid over each
// piece of `grid`. Atoms are not detected.
herglotz::RealMeasure measure_from_coefficients(const operators::CoefficientModel& model, const IntervalUnion& grid,
                                                double step, double y);

}  // namespace jspec::inverse
