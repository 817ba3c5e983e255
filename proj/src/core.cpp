#include "jspec/core.hpp"

#include <atomic>
#include <thread>

#include "jspec/parallel.hpp"

namespace jspec {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::index_out_of_domain: return "index-out-of-domain";
    case ErrorKind::empty_domain_intersection: return "empty-domain-intersection";
    case ErrorKind::window_exceeds_domain: return "window-exceeds-domain";
    case ErrorKind::nonpositive_a: return "nonpositive-a";
    case ErrorKind::nonpositive_imaginary_part: return "nonpositive-imaginary-part";
    case ErrorKind::degenerate_angle: return "degenerate-angle";
    case ErrorKind::accuracy_unreachable: return "accuracy-unreachable";
    case ErrorKind::no_convergence: return "no-convergence-within-ladder";
    case ErrorKind::quadrature_budget_exceeded: return "quadrature-budget-exceeded";
    case ErrorKind::depth_budget_exceeded: return "depth-budget-exceeded";
    case ErrorKind::invalid_profile: return "invalid-profile";
    case ErrorKind::insufficient_nodes: return "insufficient-nodes";
    case ErrorKind::support_too_small: return "measure-support-too-small";
    case ErrorKind::loss_of_orthogonality: return "loss-of-orthogonality";
    case ErrorKind::invalid_f: return "invalid-f";
    case ErrorKind::roundtrip_failure: return "roundtrip-failure";
    case ErrorKind::ratio_bound_violation: return "ratio-bound-violation";
    case ErrorKind::branch_validation_failure: return "branch-validation-failure";
    case ErrorKind::basis_degenerate: return "basis-degenerate";
    case ErrorKind::empty_family: return "empty-family";
    case ErrorKind::config_invalid: return "config-invalid";
  }
  return "unknown";
}

bool Error::is_budget() const {
  switch (kind_) {
    case ErrorKind::accuracy_unreachable:
    case ErrorKind::no_convergence:
    case ErrorKind::quadrature_budget_exceeded:
    case ErrorKind::depth_budget_exceeded:
    case ErrorKind::loss_of_orthogonality:
    case ErrorKind::roundtrip_failure:
      return true;
    default:
      return false;
  }
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace jspec

namespace jspec {

namespace {
std::atomic<unsigned> g_workers{0};
}

unsigned default_workers() {
  unsigned w = g_workers.load();
  if (w) return w;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void set_default_workers(unsigned n) { g_workers = n; }

}  // namespace jspec
