#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace jspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Error categories. The CLI maps `config` to exit code 2 and the budget
// family to exit code 3; everything else is a programming or input error.
enum class ErrorKind {
  invalid_argument,
  index_out_of_domain,
  empty_domain_intersection,
  window_exceeds_domain,
  nonpositive_a,
  nonpositive_imaginary_part,
  degenerate_angle,
  accuracy_unreachable,
  no_convergence,
  quadrature_budget_exceeded,
  depth_budget_exceeded,
  invalid_profile,
  insufficient_nodes,
  support_too_small,
  loss_of_orthogonality,
  invalid_f,
  roundtrip_failure,
  ratio_bound_violation,
  branch_validation_failure,
  basis_degenerate,
  empty_family,
  config_invalid,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

  // True for errors caused by a numerical budget (depth, quadrature, ladder).
  bool is_budget() const;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

struct Coeff {
  double a = 1.0;
  double b = 0.0;
  friend bool operator==(const Coeff&, const Coeff&) = default;
};

}  // namespace jspec
