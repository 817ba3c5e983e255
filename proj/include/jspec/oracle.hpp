#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jspec/core.hpp"
#include "jspec/operators.hpp"

namespace jspec::oracle {

struct Entry {
  std::vector<Coeff> key;  // positions -L..0
  Coeff next;              // position 1
};

struct OracleDictionary {
  int L = 0;
  double delta = 0;
  double C = 0;  // coefficient bound over the keys
  std::string provenance;
  std::vector<Entry> entries;
};

struct BuildOptions {
  int L = 8;
  double delta = 1e-3;
  long shift_lo = 0;  // shifts k: key is coeff(k-L..k), successor coeff(k+1)
  long shift_hi = 1;
  std::string provenance;
};

// Sum over window positions n = -L..0 of 2^{-|n|} (|da| + |db|).
double window_distance(const std::vector<Coeff>& u, const std::vector<Coeff>& v);

OracleDictionary build_oracle(const std::vector<operators::CoefficientModel>& family, const BuildOptions& opt);

enum class Mode { nearest, interpolate };

// Successor stored with the nearest key; ties go to the lowest entry index.
Coeff predict(const OracleDictionary& oracle, const std::vector<Coeff>& window);
std::size_t nearest(const OracleDictionary& oracle, const std::vector<Coeff>& window);

// Projects the window onto the segment from the nearest key to one of the next
// few keys (weighted least squares, parameter clamped to [0, 1]) and
// interpolates the two successors.
Coeff predict_interpolated(const OracleDictionary& oracle, const std::vector<Coeff>& window, int candidates = 4);
Coeff predict(const OracleDictionary& oracle, const std::vector<Coeff>& window, Mode mode);

struct ErrorPoint {
  long n;
  double error;  // |a(n+1) - a_pred| + |b(n+1) - b_pred|
};

struct Evaluation {
  std::vector<ErrorPoint> series;
  double max_error = 0;
  long sustained_from = -1;  // first n after which every error is < eps, -1 if none
};

Evaluation evaluate_oracle(const OracleDictionary& oracle, const operators::CoefficientModel& model, long n_lo,
                           long n_hi, double eps = 0.05, Mode mode = Mode::nearest);

// Text format: a JSON object with "format": "jspec-oracle" and "version": 1.
inline constexpr int kFormatVersion = 1;
std::string to_json(const OracleDictionary& oracle);
OracleDictionary from_json(const std::string& text);
void save(const OracleDictionary& oracle, const std::string& path);
OracleDictionary load(const std::string& path);

}  // namespace jspec::oracle
