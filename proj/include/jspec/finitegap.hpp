#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "jspec/herglotz.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"
#include "jspec/reflectionless.hpp"

namespace jspec::finitegap {

// Bands [alpha_j, beta_{j+1}], j = 0..N, in increasing order.
struct BandSet {
  std::vector<Interval> bands;

  int gaps() const { return static_cast<int>(bands.size()) - 1; }
  // gap j = 1..N is (beta_j, alpha_j)
  Interval gap(int j) const { return {bands[j - 1].hi, bands[j].lo}; }
  IntervalUnion interiors() const;
  void validate() const;
};

struct DirichletPoint {
  double mu;
  int s;  // 0 or 1
};
using DirichletData = std::vector<DirichletPoint>;

// Point of the j-th gap circle: mu = beta + (alpha - beta)(1 - cos theta)/2,
// s = 0 on the upper half of the circle and 1 on the lower.
DirichletPoint circle_point(const BandSet& E, int j, double theta);
void validate(const BandSet& E, const DirichletData& d);

cplx H_finitegap(const BandSet& E, const std::vector<double>& mu, cplx z);
// Boundary value H(t + i0) for real t.
cplx H_finitegap_boundary(const BandSet& E, const std::vector<double>& mu, double t);

// A = -(alpha_0 + beta_{N+1})/2 + sum_j (mu_j - (alpha_j + beta_j)/2), B = 1,
// density Im H(t + i0)/pi on the bands, an atom at every interior mu_j.
herglotz::HerglotzRep herglotz_finitegap(const BandSet& E, const std::vector<double>& mu, int nodes = 400);
herglotz::RealMeasure rho_finitegap(const BandSet& E, const DirichletData& d, int nodes = 400);

// f = 1/2 on the bands and f(mu_j) = s_j.
reflectionless::SplitDensity torus_split(const BandSet& E, const DirichletData& d);
reflectionless::JacobiPair torus_pair(const BandSet& E, const DirichletData& d, int n_max = 40, int nodes = 400);

// Torus point as a window computed on first use, anchored at 0 by c F_+-.
class TorusPoint : public operators::LazyWindow {
 public:
  TorusPoint(BandSet E, DirichletData d, int n_max = 40, int nodes = 400);
  long lo() const override { return -n_max_; }
  long hi() const override { return n_max_; }
  const operators::Window& window() const override;
  std::optional<operators::Anchor> anchor() const override;
  std::string describe() const override;
  const reflectionless::JacobiPair& pair() const;
  const BandSet& bands() const { return E_; }
  const DirichletData& data() const { return d_; }

 private:
  BandSet E_;
  DirichletData d_;
  int n_max_, nodes_;
  mutable std::once_flag once_;
  mutable std::unique_ptr<reflectionless::JacobiPair> pair_;
};

operators::CoefficientModel torus_point(const BandSet& E, const DirichletData& d, int n_max = 40, int nodes = 400);

// All grid points of the torus: `samples` angles per gap circle.
std::vector<DirichletData> torus_grid(const BandSet& E, int samples);

struct TorusDistance {
  double distance;
  DirichletData best;
};

// Smallest metric distance from the window to the sampled torus points.
TorusDistance distance_to_torus(const operators::Window& w, const BandSet& E, int samples = 32, int n_max = 40,
                                int n_trunc = 60);

// Eigenvalues of the restriction of the model to [lo, hi].
std::vector<double> truncation_eigenvalues(const operators::CoefficientModel& model, long lo, long hi);

struct SpectrumCheck {
  double max_distance = 0;           // over eigenvalues not counted as exceptional
  std::vector<int> exceptional;      // per gap: eigenvalues farther than tol from E
  int outside = 0;                   // farther than tol from E and not inside a gap
};

SpectrumCheck check_spectrum(const std::vector<double>& eigs, const BandSet& E, double tol = 0.05);

}  // namespace jspec::finitegap
