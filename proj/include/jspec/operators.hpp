#pragma once

#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jspec/core.hpp"

namespace jspec::operators {

inline constexpr long kNoLower = LONG_MIN;
inline constexpr long kNoUpper = LONG_MAX;

// Inclusive index range; kNoLower / kNoUpper mark infinite ends.
struct Domain {
  long lo = kNoLower;
  long hi = kNoUpper;

  static Domain whole_line() { return {}; }
  static Domain half_line() { return {1, kNoUpper}; }
  bool contains(long n) const { return n >= lo && n <= hi; }
  bool is_whole_line() const { return lo == kNoLower && hi == kNoUpper; }
  bool left_infinite() const { return lo == kNoLower; }
  bool right_infinite() const { return hi == kNoUpper; }
  Domain shifted(long k) const;
  Domain intersect(const Domain& o) const;
  bool empty() const { return lo > hi; }
};

struct Window {
  long offset = 0;
  std::vector<Coeff> entries;

  long lo() const { return offset; }
  long hi() const { return offset + static_cast<long>(entries.size()) - 1; }
  bool contains(long n) const { return n >= lo() && n <= hi(); }
  const Coeff& at(long n) const;
  std::size_t size() const { return entries.size(); }
};

// Periodicity of a tail. Right tail: coeff(n + period) == coeff(n) for n >= start.
// Left tail: coeff(n - period) == coeff(n) for n <= start.
struct Tail {
  long start;
  long period;
};

// Known whole-line m-functions at one site, used when a model is materialized
// from spectral data rather than generated by a formula.
struct Anchor {
  long site = 0;
  std::function<cplx(cplx)> m_plus;
  std::function<cplx(cplx)> m_minus;
};

// A coefficient window computed on first use (torus points).
class LazyWindow {
 public:
  virtual ~LazyWindow() = default;
  virtual long lo() const = 0;
  virtual long hi() const = 0;
  virtual const Window& window() const = 0;
  virtual std::optional<Anchor> anchor() const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

enum class Kind {
  free,
  constant_offset,
  periodic,
  perturbed,
  slow_oscillation,
  sparse,
  explicit_window,
  torus_point,
};

const char* to_string(Kind k);

class CoefficientModel;
using ModelPtr = std::shared_ptr<const CoefficientModel>;

struct Perturbation {
  long index;
  double da;
  double db;
};

class CoefficientModel {
 public:
  struct FreeK {};
  struct ConstK {
    double c;
  };
  struct PeriodicK {
    std::vector<Coeff> entries;
    long phase;  // coeff(n) = entries[(n + phase) mod p]
  };
  struct PerturbedK {
    ModelPtr base;
    std::map<long, Coeff> delta;  // (da, db) per index
  };
  struct SlowK {
    long offset;  // b(n) = cos sqrt(n + offset)
  };
  struct SparseK {
    std::vector<long> positions;
    std::vector<double> values;
    ModelPtr base;
  };
  struct WindowK {
    Window window;
    ModelPtr fill;  // may be null: model is undefined outside the window
  };
  struct TorusK {
    std::shared_ptr<const LazyWindow> source;
    long offset;  // coeff(n) = source(n + offset)
  };
  using Data = std::variant<FreeK, ConstK, PeriodicK, PerturbedK, SlowK, SparseK, WindowK, TorusK>;

  CoefficientModel(Data data, Domain domain, std::optional<Anchor> anchor = std::nullopt);

  Kind kind() const;
  const Data& data() const { return data_; }
  const Domain& domain() const { return domain_; }
  bool is_whole_line() const { return domain_.is_whole_line(); }

  // Throws index-out-of-domain outside domain().
  Coeff coeff(long n) const;

  // A C with (C+1)^{-1} <= a <= C+1 and |b| <= C over the domain; exact
  // (smallest) for window, periodic and torus kinds.
  double bound() const;
  double max_a() const;

  std::optional<Tail> right_tail() const;
  std::optional<Tail> left_tail() const;
  std::optional<Anchor> anchor() const;

  CoefficientModel shift(long k) const;
  CoefficientModel restrict_to(Domain d) const;
  // Same coefficients with anchors dropped (forces computation from coefficients).
  CoefficientModel without_anchor() const;

  std::string describe() const;

 private:
  Coeff raw(long n) const;
  Data data_;
  Domain domain_;
  std::optional<Anchor> anchor_;
  double bound_ = 0;
  double max_a_ = 1;
};

CoefficientModel free_model(Domain d = Domain::whole_line());
CoefficientModel constant_offset(double c, Domain d = Domain::whole_line());
CoefficientModel periodic(std::vector<Coeff> entries, Domain d = Domain::whole_line());
CoefficientModel perturbed(const CoefficientModel& base, const std::vector<Perturbation>& delta);
CoefficientModel slow_oscillation();
CoefficientModel sparse(std::vector<long> positions, std::vector<double> values, const CoefficientModel& base);
CoefficientModel explicit_window(Window w, std::optional<CoefficientModel> fill = std::nullopt,
                                 std::optional<Anchor> anchor = std::nullopt);
CoefficientModel torus_model(std::shared_ptr<const LazyWindow> source);

// Tail bound of the truncated metric: (3C+2) 2^{-n_trunc}.
double metric_tail_bound(double C, int n_trunc = 60);

double metric_d(const CoefficientModel& v, const CoefficientModel& w, int n_trunc = 60);
double metric_d(const Window& v, const Window& w, int n_trunc = 60);
double metric_d(const Window& v, const CoefficientModel& w, int n_trunc = 60);

CoefficientModel shift(const CoefficientModel& m, long k);

// Coefficients of S^n V on [-radius, radius].
Window omega_limit_probe(const CoefficientModel& model, long n, long radius);

// Coefficients of the model on [lo, hi].
Window extract_window(const CoefficientModel& model, long lo, long hi);

}  // namespace jspec::operators
