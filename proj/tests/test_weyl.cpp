#include <cmath>

#include "doctest.h"
#include "jspec/reflectionless.hpp"
#include "jspec/weyl.hpp"

using namespace jspec;
using namespace jspec::weyl;
using operators::Domain;

TEST_CASE("m_plus of the free model") {
  auto f = operators::free_model();
  auto v = m_plus(f, 0, {0, 1});
  CHECK(std::abs(v.z() - cplx(0, (std::sqrt(5.0) - 1) / 2)) < 1e-12);
  CHECK(v.error_radius < 1e-10);
  auto v2 = m_plus(f, 3, {0, 2});
  CHECK(std::abs(v2.z() - cplx(0, std::sqrt(2.0) - 1)) < 1e-12);
}

TEST_CASE("m_plus by disk truncation") {
  // no periodic tail and no anchor: the Weyl disk path
  auto m = operators::slow_oscillation();
  const cplx z(0.2, 0.3);
  auto v = m_plus(m, 10, z);
  CHECK(v.source == Source::disk);
  CHECK(v.error_radius <= 1e-10);
  CHECK(v.z().imag() > 0);
  for (cplx seed : {cplx(0, 1), cplx(-3, 0.1), cplx(2, 5)}) {
    auto s = m_plus_seeded(m, 10, z, v.depth + 50, seed);
    CHECK(std::abs(s.z() - v.z()) <= 2 * v.error_radius + 1e-14);
  }
}

TEST_CASE("constant offset shifts the spectral parameter") {
  const double c = 0.4;
  const cplx z(0.1, 0.3);
  auto v = m_plus(operators::constant_offset(c), 0, z);
  auto f = m_plus(operators::free_model(), 0, z - c);
  CHECK(std::abs(v.z() - f.z()) < 1e-12);
}

TEST_CASE("segment m_minus") {
  auto f = operators::free_model(Domain::half_line());
  const cplx z(0.7, 0.2);
  CHECK(m_minus_segment(f, 0, z).value.is_infinite());
  CHECK(std::abs(m_minus_segment(f, 1, z).z() - z) < 1e-15);
  CHECK(std::abs(m_minus_segment(f, 2, z).z() - (z - 1.0 / z)) < 1e-14);
  CHECK(std::isfinite(std::abs(m_minus_segment(f, 2, 1.0).z())));
}

TEST_CASE("whole-line m_minus and the Green function") {
  auto f = operators::free_model();
  CHECK(std::abs(m_minus_wholeline(f, 0, {0, 1}).z() - cplx(0, (std::sqrt(5.0) + 1) / 2)) < 1e-12);
  CHECK(std::abs(green_diag(f, 0, {0, 1}) - cplx(0, 1 / std::sqrt(5.0))) < 1e-12);
  for (double t : {-1.5, 0.0, 0.8}) {
    cplx G = green_diag(f, 4, {t, 1e-8});
    CHECK(std::abs(G.real()) < 1e-6);
    CHECK(G.imag() == doctest::Approx(1 / std::sqrt(4 - t * t)).epsilon(1e-6));
  }
}

TEST_CASE("free whole line is reflectionless on (-2, 2)") {
  auto f = operators::free_model();
  for (double t = -1.9; t <= 1.9; t += 0.1) {
    cplx z(t, 1e-9);
    CHECK(std::abs(m_plus(f, 0, z).z() + std::conj(m_minus_wholeline(f, 0, z).z())) < 1e-6);
  }
}

TEST_CASE("seed independence") {
  auto m = operators::perturbed(operators::free_model(), {{-3, 0.2, 0.5}});
  const cplx z(0.4, 0.2);
  auto a = m_minus_seeded(m, 0, z, 400, cplx(0, 1));
  auto b = m_minus_seeded(m, 0, z, 400, cplx(3, 0.01));
  auto ref = m_minus_wholeline(m, 0, z);
  CHECK(std::abs(a.z() - b.z()) <= 2 * (a.error_radius + b.error_radius) + 1e-12);
  CHECK(std::abs(a.z() - ref.z()) < 1e-8);
  auto p = m_plus_seeded(m, 0, z, 400, cplx(0, 1));
  CHECK(std::abs(p.z() - m_plus(m, 0, z).z()) < 1e-8);
}

TEST_CASE("error contract and Riccati consistency") {
  auto slow = operators::slow_oscillation();
  const cplx z(0.1, 0.2);
  Budget coarse{1e-6, 100000}, fine{5e-7, 100000};
  auto c = m_plus(slow, 50, z, coarse), f = m_plus(slow, 50, z, fine);
  CHECK(std::abs(c.z() - f.z()) <= c.error_radius + f.error_radius);
  // m_+(n-1) = -1/(a(n)^2 m_+(n) + z - b(n))
  auto n1 = m_plus(slow, 51, z), n0 = m_plus(slow, 50, z);
  Coeff k = slow.coeff(51);
  cplx back = -1.0 / (k.a * k.a * n1.z() + z - k.b);
  CHECK(std::abs(back - n0.z()) <= 2 * (n0.error_radius + n1.error_radius) + 1e-12);
  CHECK(f.depth >= c.depth);
}

TEST_CASE("a.c. support estimates") {
  const IntervalUnion grid{{-4, 4}};
  auto e = ac_support_estimate(operators::free_model(), grid);
  REQUIRE(e.pieces().size() == 1);
  CHECK(e.pieces()[0].lo == doctest::Approx(-2).epsilon(0.01));
  CHECK(e.pieces()[0].hi == doctest::Approx(2).epsilon(0.01));
  auto o = ac_support_estimate(operators::constant_offset(0.5), grid);
  REQUIRE(o.pieces().size() == 1);
  CHECK(o.pieces()[0].lo == doctest::Approx(-1.5).epsilon(0.01));
  CHECK(o.pieces()[0].hi == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("bp defect") {
  const IntervalUnion A{{-1, 1}}, S{{0, 1}};
  auto pert = operators::perturbed(operators::free_model(Domain::half_line()), {{1, 0.0, 1.0}});
  double d10 = bp_defect(pert, 10, A, S), d100 = bp_defect(pert, 100, A, S);
  CHECK(d100 < d10);
  auto f = operators::free_model(Domain::half_line());
  CHECK(bp_defect(f, 200, A, S) < 1e-2);
  CHECK(bp_defect(pert, 20, IntervalUnion{{5, 6}}, S) < 1e-3);
}

TEST_CASE("reflectionless defect is small at every site of the free and one-gap models") {
  auto f = operators::free_model();
  for (long n = -10; n <= 10; n += 5)
    CHECK(reflectionless::reflectionless_defect(f, IntervalUnion{{-1.9, 1.9}}, 1e-6, 0.05, n).sup < 1e-3);
}
