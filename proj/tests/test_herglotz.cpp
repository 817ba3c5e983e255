#include <cmath>
#include <random>

#include "doctest.h"
#include "jspec/herglotz.hpp"
#include "jspec/hyperbolic.hpp"
#include "jspec/quadrature.hpp"
#include "jspec/weyl.hpp"

using namespace jspec;
using namespace jspec::herglotz;

namespace {

RealMeasure semicircle(int nodes = 400) {
  RealMeasure m;
  m.pieces.push_back(make_piece(-2, 2, [](double t) { return std::sqrt(std::max(0.0, 4 - t * t)) / (2 * pi); }, nodes));
  return m;
}

cplx free_m(cplx z) { return (-z + std::sqrt(z - 2.0) * std::sqrt(z + 2.0)) / 2.0; }

}  // namespace

TEST_CASE("quadrature basics") {
  auto r = quad::integrate([](double t) { return std::exp(t); }, 0, 1, 1e-12);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
  auto e = quad::integrate_edge([](double t) { return std::sqrt(1 - t * t); }, -1, 1, 1e-12);
  CHECK(e.value == doctest::Approx(pi / 2).epsilon(1e-12));
  auto inf_tail = quad::integrate([](double t) { return 1 / (1 + t * t); }, -inf, inf, 1e-10);
  CHECK(inf_tail.value == doctest::Approx(pi).epsilon(1e-8));
}

TEST_CASE("harmonic measure") {
  const cplx i(0, 1);
  CHECK(harmonic_measure(i, IntervalUnion::real_line()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(harmonic_measure(i, IntervalUnion{{0, inf}}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(harmonic_measure(i, IntervalUnion{{-1, 1}}) == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 200; ++k) {
    cplx z(u(rng), std::abs(u(rng)) + 1e-3);
    double c = u(rng);
    double whole = harmonic_measure(z, IntervalUnion{{-inf, c}}) + harmonic_measure(z, IntervalUnion{{c, inf}});
    CHECK(whole == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("harmonic measure is Lipschitz in the pseudohyperbolic distance") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-4, 4), uy(1e-4, 4);
  int violations = 0;
  for (int k = 0; k < 100000; ++k) {
    cplx w(u(rng), uy(rng)), z(u(rng), uy(rng));
    double a = u(rng), b = u(rng);
    IntervalUnion S{{std::min(a, b), std::max(a, b) + 1e-9}};
    if (std::abs(harmonic_measure(w, S) - harmonic_measure(z, S)) > hyperbolic::pseudo_distance(w, z) + 1e-14)
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("evaluate: semicircle and atoms") {
  HerglotzRep H;
  H.measure = semicircle();
  CHECK(H.measure.mass() == doctest::Approx(1.0).epsilon(1e-12));
  const cplx v = evaluate(H, {0, 1});
  CHECK(std::abs(v - cplx(0, (std::sqrt(5.0) - 1) / 2)) < 1e-12);
  for (cplx z : {cplx(0.5, 1e-3), cplx(-1.9, 1e-5), cplx(3, 0.1)}) CHECK(std::abs(evaluate(H, z) - free_m(z)) < 1e-8);
  HerglotzRep A;
  A.measure.atoms.push_back({0.7, 2.5});
  const cplx z(0.1, 0.4);
  CHECK(std::abs(evaluate(A, z) - 2.5 / (0.7 - z)) < 1e-15);
}

TEST_CASE("evaluate rejects degenerate input") {
  HerglotzRep c;
  c.offset = 3;
  CHECK_THROWS_AS(evaluate(c, {0, 1}), Error);
  HerglotzRep H;
  H.measure = semicircle();
  CHECK_THROWS_AS(evaluate(H, {0, -1}), Error);
}

TEST_CASE("Herglotz property on random points") {
  HerglotzRep H;
  H.offset = -0.3;
  H.linear = 0.5;
  H.measure = semicircle();
  H.measure.atoms.push_back({2.5, 0.1});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4, 4), uy(1e-6, 3);
  for (int k = 0; k < 200; ++k) CHECK(evaluate(H, {u(rng), uy(rng)}).imag() > 0);
}

TEST_CASE("boundary values") {
  auto F = weyl::m_plus_evaluator(operators::free_model(), 0);
  auto b0 = boundary_value(F, 0.0);
  CHECK(std::abs(b0.value - cplx(0, 1)) < 1e-5);
  auto b1 = boundary_value(F, 1.0);
  CHECK(std::abs(b1.value - cplx(-0.5, std::sqrt(3.0) / 2)) < 1e-5);
  auto id = boundary_value([](cplx z) { return z; }, 0.7);
  // accepted once successive rungs agree to the ladder tolerance
  CHECK(id.value.real() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(id.value.imag() == doctest::Approx(id.y).epsilon(1e-12));
  CHECK(id.defect < Ladder{}.tol);
}

TEST_CASE("value distribution") {
  auto id = [](cplx z) { return z; };
  CHECK(value_distribution(id, IntervalUnion{{0, 2}}, IntervalUnion{{1, 3}}, 1e-6) ==
        doctest::Approx(1.0).epsilon(1e-4));
  auto F = weyl::m_plus_evaluator(operators::free_model(), 0);
  for (double y : {1e-1, 1e-3})
    CHECK(value_distribution(F, IntervalUnion{{-2, 2}}, IntervalUnion::real_line(), y) ==
          doctest::Approx(4.0).epsilon(1e-6));
  auto ci = [](cplx) { return cplx(0, 1); };
  CHECK(value_distribution(ci, IntervalUnion{{0, 1}}, IntervalUnion{{0, inf}}, 1e-3) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("smoothing defect") {
  CHECK(smoothing_defect(IntervalUnion{{0, 1}}, 1e-6) < 1e-4);
  const double e2 = smoothing_defect(IntervalUnion{{0, 1}, {2, 3}}, 1e-2);
  CHECK(e2 <= smoothing_defect(IntervalUnion{{0, 1}}, 1e-2) + smoothing_defect(IntervalUnion{{2, 3}}, 1e-2) + 1e-12);
  CHECK(smoothing_defect(IntervalUnion{{0, 1}}, 10) <= 1.0);
  CHECK(smoothing_defect(IntervalUnion{{0, 1}}, 1e-4) < smoothing_defect(IntervalUnion{{0, 1}}, 1e-2));
}

TEST_CASE("spectral averaging") {
  auto F = weyl::m_plus_evaluator(operators::free_model(), 0);
  const IntervalUnion A{{-1, 1}}, S{{0, 1}};
  const double rhs = spectral_average(F, A, S);
  const double lhs = value_distribution(F, A, S, 1e-6);
  CHECK(std::abs(lhs - rhs) < 1e-3);
  CHECK(spectral_average(F, A, IntervalUnion::real_line()) == doctest::Approx(2.0).epsilon(1e-6));
  auto ci = [](cplx) { return cplx(0, 1); };
  CHECK(spectral_average(ci, IntervalUnion{{0, 1}}, IntervalUnion{{0, inf}}) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("value distribution is continuous in F") {
  const IntervalUnion A{{-1, 1}}, S{{0, 1}};
  auto base = operators::free_model(operators::Domain::half_line());
  const double limit = value_distribution(weyl::m_plus_evaluator(base, 0), A, S, 1e-2);
  double prev = inf;
  for (int n : {1, 4, 16, 64}) {
    auto Fn = weyl::m_plus_evaluator(operators::perturbed(base, {{1, 0.0, 1.0 / n}}), 0);
    double d = std::abs(value_distribution(Fn, A, S, 1e-2) - limit);
    CHECK(d < prev + 1e-9);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("harmonic measure of the image: quadrature identity") {
  // omega_{F(z)}(S) = int omega_{F(t)}(S) d omega_z(t) for the free m-function
  const IntervalUnion S{{0, 1}};
  const cplx z(0.3, 0.8);
  auto F = [](cplx w) { return free_m(w); };
  const double y0 = 1e-7;
  auto g = [&](double t) {
    const double poisson = z.imag() / (pi * ((t - z.real()) * (t - z.real()) + z.imag() * z.imag()));
    return poisson * harmonic_measure(F(cplx(t, y0)), S);
  };
  double rhs = 0;
  for (auto [lo, hi] : {std::pair{-inf, -2.0}, {-2.0, 2.0}, {2.0, inf}}) rhs += quad::integrate(g, lo, hi, 1e-9).value;
  CHECK(std::abs(harmonic_measure(F(z), S) - rhs) < 1e-3);
}

TEST_CASE("xi function") {
  auto sq = [](cplx z) { return std::sqrt(z - 2.0) * std::sqrt(z + 2.0); };
  CHECK(xi_function(sq, -3).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(xi_function(sq, 0.5).value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(xi_function(sq, 3).value == doctest::Approx(0.0).epsilon(1e-6));
  auto id = [](cplx z) { return z; };
  CHECK(xi_function(id, -1).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(xi_function(id, 1).value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(xi_function([](cplx) { return cplx(0, 1); }, 0.3).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Herglotz function from a xi profile") {
  XiProfile p;
  p.left_tail = 1;
  p.breaks = {-2, 2};
  p.values = {0.5};
  p.right_tail = 0;
  const cplx h = herglotz_from_xi(p, {0, 1});
  CHECK(std::abs(h - cplx(0, std::sqrt(5.0))) < 1e-6);
  // two-step profile of a product of powers
  const double eps = 0.1;
  XiProfile q;
  q.breaks = {-1, 0, 1};
  q.values = {0.5, 0.5 + eps};
  const cplx z(0, 1);
  const cplx direct = std::pow(z + 1.0, 0.5) * std::pow(z, -eps) * std::pow(z - 1.0, 0.5 + eps);
  CHECK(std::abs(herglotz_from_xi(q, z) - direct) < 1e-6);
  auto rep = herglotz_rep_from_xi(p);
  CHECK(rep.linear == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(evaluate(rep, {0.4, 0.6}) - herglotz_from_xi(p, {0.4, 0.6})) < 1e-6);
  CHECK(std::abs(herglotz_from_xi_boundary(p, 0.5).real()) < 1e-8);
}

TEST_CASE("atom masses") {
  auto single = [](cplx z) { return 1.5 / (0.25 - z); };
  CHECK(atom_mass(single, 0.25) == doctest::Approx(1.5).epsilon(1e-6));
  auto H = [](cplx z) {
    return std::sqrt(z - 2.0) * std::sqrt(z + 2.0) * std::sqrt(z - 1.0) * std::sqrt(z + 1.0) / z;
  };
  CHECK(atom_mass(H, 0.0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(atom_mass([](cplx z) { return std::sqrt(z - 2.0) * std::sqrt(z + 2.0); }, 0.0) < 1e-5);
}
