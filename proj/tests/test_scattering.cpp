#include <cmath>
#include <random>

#include "doctest.h"
#include "jspec/reflectionless.hpp"
#include "jspec/scattering.hpp"

using namespace jspec;
using namespace jspec::scattering;
using operators::explicit_window;
using operators::free_model;
using operators::perturbed;

namespace {

operators::CoefficientModel random_window(std::mt19937_64& rng, long len) {
  std::uniform_real_distribution<double> ua(0.5, 1.5), ub(-1, 1), uo(-20, 20);
  operators::Window w{static_cast<long>(uo(rng)), {}};
  for (long n = 0; n < len; ++n) w.entries.push_back({ua(rng), ub(rng)});
  return explicit_window(w, free_model());
}

operators::CoefficientModel smooth_bump() {
  operators::Window w{-200, {}};
  for (long n = -200; n <= 200; ++n) w.entries.push_back({1.0, 0.3 * std::exp(-std::pow(n / 40.0, 2))});
  return explicit_window(w, free_model());
}

}  // namespace

TEST_CASE("support detection") {
  auto s = perturbation_support(perturbed(free_model(), {{2, 0.0, 1.0}, {-3, 0.1, 0.0}}));
  CHECK(s.lo == -3);
  CHECK(s.hi == 2);
  CHECK(perturbation_support(free_model()).empty());
  CHECK_THROWS_AS(perturbation_support(operators::slow_oscillation()), Error);
}

TEST_CASE("zero perturbation") {
  for (double phi : {0.1, 1.0, 3.0}) {
    auto d = scattering_coefficients(free_model(), phi);
    CHECK(d.T == cplx(1, 0));
    CHECK(d.R == cplx(0, 0));
    auto jp = jost_pair(free_model(), phi, 6);
    for (long n = jp.lo; n <= jp.hi(); ++n)
      CHECK(std::abs(jp.f_plus[n - jp.lo] - std::polar(1.0, n * phi)) < 1e-14);
  }
  CHECK_THROWS_AS(scattering_coefficients(free_model(), 0.0), Error);
  CHECK_THROWS_AS(jost_pair(free_model(), pi, 4), Error);
}

TEST_CASE("single site by hand") {
  // b(0) = 1 at phi = pi/2, z = 0: f(n) = i^n for n >= 1, then f(-1) = (z - b(0)) f(0) - f(1)
  auto m = perturbed(free_model(), {{0, 0.0, 1.0}});
  auto jp = jost_pair(m, pi / 2, 3);
  auto at = [&](long n) { return jp.f_plus[n - jp.lo]; };
  const cplx i(0, 1);
  CHECK(std::abs(at(1) - i) < 1e-15);
  CHECK(std::abs(at(2) + 1.0) < 1e-15);
  CHECK(std::abs(at(0) - (-at(2))) < 1e-15);
  CHECK(std::abs(at(-1) - (-at(0) - at(1))) < 1e-15);
  auto d = scattering_coefficients(m, pi / 2);
  CHECK(std::abs(d.R - 1.0 / (2.0 * i - 1.0)) < 1e-15);
  CHECK(reflectionless_set_estimate(m, 400, 1e-3).length() < 0.05);
}

TEST_CASE("Wronskian is constant") {
  std::mt19937_64 rng(8);
  auto m = random_window(rng, 15);
  auto jp = jost_pair(m, 1.1, 6);
  std::vector<cplx> conj_f(jp.f_plus.size());
  for (std::size_t k = 0; k < conj_f.size(); ++k) conj_f[k] = std::conj(jp.f_plus[k]);
  const cplx w0 = wronskian(m, jp.f_plus, conj_f, jp.lo, jp.lo);
  for (long n = jp.lo; n < jp.hi(); ++n) CHECK(std::abs(wronskian(m, jp.f_plus, conj_f, jp.lo, n) - w0) < 1e-12);
  const cplx v0 = wronskian(m, jp.f_plus, jp.f_left, jp.lo, jp.lo);
  for (long n = jp.lo; n < jp.hi(); ++n)
    CHECK(std::abs(wronskian(m, jp.f_plus, jp.f_left, jp.lo, n) - v0) < 1e-12 * std::max(1.0, std::abs(v0)));
}

TEST_CASE("unitarity over random perturbations") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(1e-3, pi - 1e-3);
  std::uniform_int_distribution<long> len(1, 30);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) worst = std::max(worst, scattering_coefficients(random_window(rng, len(rng)), ang(rng)).unitarity_defect);
  CHECK(worst <= 1e-10);
}

TEST_CASE("padding does not change T and R") {
  std::mt19937_64 rng(10);
  auto m = random_window(rng, 12);
  auto s = perturbation_support(m);
  auto wide = explicit_window(operators::extract_window(m, s.lo - 50, s.hi + 80), free_model());
  for (double phi : {0.3, 1.7, 2.8}) {
    auto a = scattering_coefficients(m, phi), b = scattering_coefficients(wide, phi);
    CHECK(std::abs(a.T - b.T) < 1e-12);
    CHECK(std::abs(a.R - b.R) < 1e-12);
  }
}

TEST_CASE("reflectionless set estimates") {
  auto free_set = reflectionless_set_estimate(free_model(), 400, 1e-3);
  REQUIRE(free_set.pieces().size() == 1);
  CHECK(free_set.pieces()[0].lo == doctest::Approx(-2).epsilon(1e-3));
  CHECK(free_set.pieces()[0].hi == doctest::Approx(2).epsilon(1e-3));
  // symmetric about the origin: R real up to phase, |R| symmetric under phi -> pi - phi for E -> -E symmetric models
  auto sym = explicit_window(operators::Window{-1, {{1.0, 0.0}, {1.6, 0.0}, {1.0, 0.0}}}, free_model());
  for (double phi : {0.3, 0.9, 1.4}) {
    CHECK(std::abs(scattering_coefficients(sym, phi).R) ==
          doctest::Approx(std::abs(scattering_coefficients(sym, pi - phi).R)).epsilon(1e-12));
  }
}

TEST_CASE("small reflection agrees with a small whole-line defect") {
  auto m = smooth_bump();
  auto set = reflectionless_set_estimate(m, 400, 1e-3);
  REQUIRE(set.contains(0.0));
  Interval band{-1.2, 1.5};
  for (double t = band.lo; t <= band.hi; t += 0.05)
    CHECK(std::abs(scattering_coefficients(m, std::acos(t / 2)).R) < 1e-3);
  CHECK(reflectionless::reflectionless_defect(m, IntervalUnion{band}, 1e-4, 0.05).sup < 1e-2);
}
