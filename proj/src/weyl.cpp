#include "jspec/weyl.hpp"

#include <cmath>
#include <limits>

#include "jspec/parallel.hpp"

namespace jspec::weyl {

using hyperbolic::Sign;
using hyperbolic::TransferMatrix;

namespace {

// m_+(k-1) = T(k)^{-1} m_+(k): w -> -1/(a^2 w + z - b)
TransferMatrix plus_back(const Coeff& c, cplx z) {
  TransferMatrix t;
  t.m00 = 0.0;
  t.m01 = -1.0 / c.a;
  t.m10 = c.a;
  t.m11 = (z - c.b) / c.a;
  t.sign = Sign::plus;
  return t;
}

// m_-(k) = T(k) m_-(k-1): w -> (z - b - 1/w)/a^2
TransferMatrix minus_fwd(const Coeff& c, cplx z) { return hyperbolic::transfer_step(c, z, Sign::minus); }

// Fixed point of the Mobius map P in the upper half plane (the attracting one
// when P maps the upper half plane into itself).
std::optional<cplx> upper_fixed_point(const TransferMatrix& P) {
  const cplx a = P.m00, b = P.m01, c = P.m10, d = P.m11;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(c) <= 1e-300 * scale) return std::nullopt;
  // c w^2 + (d - a) w - b = 0, roots written to avoid cancellation
  const cplx p = d - a;
  cplx s = std::sqrt(p * p + 4.0 * b * c);
  if ((std::conj(p) * s).real() < 0) s = -s;
  const cplx q = -0.5 * (p + s);
  cplx w1 = q / c;
  cplx w2 = q != cplx(0, 0) ? -b / q : w1;
  cplx w = w1.imag() >= w2.imag() ? w1 : w2;
  if (!(w.imag() > 0) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) return std::nullopt;
  return w;
}

double rounding_radius(cplx v) { return 1e-13 * (1.0 + std::abs(v)); }

void need_upper(cplx z, const char* what) {
  if (!(z.imag() > 0)) fail(ErrorKind::nonpositive_imaginary_part, std::string(what) + " needs Im z > 0");
}

MFunctionValue make(ProjectivePoint p, double err, Side side, long site, Source src, long depth) {
  MFunctionValue v;
  v.value = p;
  v.error_radius = err;
  v.side = side;
  v.site = site;
  v.source = src;
  v.depth = depth;
  return v;
}

MFunctionValue plus_from_anchor(const CoefficientModel& model, const operators::Anchor& an, long n, cplx z) {
  ProjectivePoint w = ProjectivePoint::finite(an.m_plus(z));
  if (n <= an.site) {
    for (long k = an.site; k > n; --k) w = hyperbolic::mobius_apply(plus_back(model.coeff(k), z), w);
  } else {
    for (long k = an.site + 1; k <= n; ++k)
      w = hyperbolic::mobius_apply(hyperbolic::transfer_step(model.coeff(k), z, Sign::plus), w);
  }
  return make(w, 0.0, Side::plus, n, Source::anchor, std::abs(n - an.site));
}

MFunctionValue minus_from_anchor(const CoefficientModel& model, const operators::Anchor& an, long n, cplx z) {
  ProjectivePoint w = ProjectivePoint::finite(an.m_minus(z));
  if (n >= an.site) {
    for (long k = an.site + 1; k <= n; ++k) w = hyperbolic::mobius_apply(minus_fwd(model.coeff(k), z), w);
  } else {
    for (long k = an.site; k > n; --k) w = hyperbolic::mobius_apply(minus_fwd(model.coeff(k), z).inverse(), w);
  }
  return make(w, 0.0, Side::minus, n, Source::anchor, std::abs(n - an.site));
}

}  // namespace

MFunctionValue m_plus(const CoefficientModel& model, long n, cplx z, const Budget& budget) {
  need_upper(z, "m_plus");
  const auto& dom = model.domain();
  if (n + 1 < dom.lo || n > dom.hi) fail(ErrorKind::index_out_of_domain, "m_plus(" + std::to_string(n) + ")");
  if (auto an = model.anchor(); an && an->m_plus) return plus_from_anchor(model, *an, n, z);

  const auto tail = model.right_tail();
  const long k0 = !tail ? std::numeric_limits<long>::max()
                : tail->start == operators::kNoLower ? n
                                                     : std::max(n, tail->start - 1);
  TransferMatrix M = TransferMatrix::identity(Sign::plus);
  long s = n;  // M maps m_+(s) to m_+(n)
  for (;;) {
    if (s == k0) {
      TransferMatrix P = TransferMatrix::identity(Sign::plus);
      for (long k = s + 1; k <= s + tail->period; ++k) {
        P = P * plus_back(model.coeff(k), z);
        P.normalize();
      }
      if (auto w = upper_fixed_point(P)) {
        ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::finite(*w));
        return make(v, rounding_radius(v.value()), Side::plus, n, Source::periodic, s - n + tail->period);
      }
    }
    if (s == dom.hi) {
      // f_+(hi+1) = 0
      ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::finite(0.0));
      return make(v, 0.0, Side::plus, n, Source::finite, s - n);
    }
    if (s > n) {
      auto disk = hyperbolic::image_of_upper_half_plane(M);
      if (disk.radius <= budget.target_error) {
        ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::finite(0.0));
        return make(v, disk.radius, Side::plus, n, Source::disk, s - n);
      }
    }
    if (s - n >= budget.max_depth)
      fail(ErrorKind::depth_budget_exceeded, "m_plus: Weyl disk still above target after " +
                                                  std::to_string(budget.max_depth) + " steps (Im z too small)");
    M = M * plus_back(model.coeff(s + 1), z);
    M.normalize();
    ++s;
  }
}

MFunctionValue m_minus_segment(const CoefficientModel& model, long n, cplx z) {
  if (n < 0) fail(ErrorKind::invalid_argument, "m_minus_segment needs n >= 0");
  ProjectivePoint w = ProjectivePoint::infinity();
  for (long k = 1; k <= n; ++k) w = hyperbolic::mobius_apply(minus_fwd(model.coeff(k), z), w);
  return make(w, 0.0, Side::minus, n, Source::finite, n);
}

MFunctionValue m_minus_wholeline(const CoefficientModel& model, long n, cplx z, const Budget& budget) {
  need_upper(z, "m_minus_wholeline");
  const auto& dom = model.domain();
  if ((!dom.left_infinite() && n < dom.lo - 1) || n > dom.hi) fail(ErrorKind::index_out_of_domain, "m_minus(" + std::to_string(n) + ")");
  if (auto an = model.anchor(); an && an->m_minus) return minus_from_anchor(model, *an, n, z);

  const auto tail = model.left_tail();
  const long k0 = tail ? std::min(n, tail->start) : std::numeric_limits<long>::min();
  TransferMatrix M = TransferMatrix::identity(Sign::minus);
  long s = n;  // M maps m_-(s) to m_-(n)
  for (;;) {
    if (s == k0) {
      TransferMatrix Q = TransferMatrix::identity(Sign::minus);
      for (long k = s; k > s - tail->period; --k) {
        Q = Q * minus_fwd(model.coeff(k), z);
        Q.normalize();
      }
      if (auto w = upper_fixed_point(Q)) {
        ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::finite(*w));
        return make(v, rounding_radius(v.value()), Side::minus, n, Source::periodic, n - s + tail->period);
      }
    }
    if (!dom.left_infinite() && s == dom.lo - 1) {
      ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::infinity());
      return make(v, 0.0, Side::minus, n, Source::finite, n - s);
    }
    if (s < n) {
      auto disk = hyperbolic::image_of_upper_half_plane(M);
      if (disk.radius <= budget.target_error) {
        ProjectivePoint v = hyperbolic::mobius_apply(M, ProjectivePoint::infinity());
        return make(v, disk.radius, Side::minus, n, Source::disk, n - s);
      }
    }
    if (n - s >= budget.max_depth)
      fail(ErrorKind::depth_budget_exceeded, "m_minus: Weyl disk still above target after " +
                                                  std::to_string(budget.max_depth) + " steps (Im z too small)");
    M = M * minus_fwd(model.coeff(s), z);
    M.normalize();
    --s;
  }
}

MFunctionValue m_plus_seeded(const CoefficientModel& model, long n, cplx z, long depth, cplx seed) {
  TransferMatrix M = TransferMatrix::identity(Sign::plus);
  for (long k = n + 1; k <= n + depth; ++k) {
    M = M * plus_back(model.coeff(k), z);
    M.normalize();
  }
  auto disk = hyperbolic::image_of_upper_half_plane(M);
  return make(hyperbolic::mobius_apply(M, ProjectivePoint::finite(seed)), disk.radius, Side::plus, n, Source::disk,
              depth);
}

MFunctionValue m_minus_seeded(const CoefficientModel& model, long n, cplx z, long depth, cplx seed) {
  TransferMatrix M = TransferMatrix::identity(Sign::minus);
  for (long k = n; k > n - depth; --k) {
    M = M * minus_fwd(model.coeff(k), z);
    M.normalize();
  }
  auto disk = hyperbolic::image_of_upper_half_plane(M);
  return make(hyperbolic::mobius_apply(M, ProjectivePoint::finite(seed)), disk.radius, Side::minus, n, Source::disk,
              depth);
}

cplx green_diag(const CoefficientModel& model, long n, cplx z, const Budget& budget) {
  need_upper(z, "green_diag");
  const double a = model.coeff(n).a;
  auto mp = m_plus(model, n, z, budget);
  auto mm = m_minus_wholeline(model, n, z, budget);
  if (mp.value.is_infinite() || mm.value.is_infinite()) return 0.0;
  cplx g = -1.0 / (a * a * (mp.z() + mm.z()));
  if (!(g.imag() > 0)) fail(ErrorKind::accuracy_unreachable, "green_diag lost positivity of Im G");
  return g;
}

IntervalUnion ac_support_estimate(const CoefficientModel& model, const IntervalUnion& grid, const AcOptions& opt) {
  if (!(opt.y > 0) || !(opt.step > 0)) fail(ErrorKind::invalid_argument, "ac_support_estimate needs y, step > 0");
  std::vector<double> t = grid.grid(opt.step);
  std::vector<char> flag(t.size(), 0);
  parallel_for(t.size(), [&](std::size_t i) {
    cplx z(t[i], opt.y);
    auto m = opt.side == Side::plus ? m_plus(model, opt.site, z) : m_minus_wholeline(model, opt.site, z);
    flag[i] = !m.value.is_infinite() && m.z().imag() > opt.threshold;
  });
  return merge_flagged(t, std::vector<bool>(flag.begin(), flag.end()));
}

double bp_defect(const CoefficientModel& model, long n, const IntervalUnion& A, const IntervalUnion& S, double y) {
  if (n < 1) fail(ErrorKind::invalid_argument, "bp_defect needs n >= 1");
  if (model.domain().lo != 1 || !model.domain().right_infinite())
    fail(ErrorKind::invalid_argument, "bp_defect needs a half-line model on {1, 2, ...}");
  auto mm = [&](cplx z) { return m_minus_segment(model, n, z).z(); };
  auto mp = [&](cplx z) { return m_plus(model, n, z).z(); };
  const double left = herglotz::value_distribution(mm, A, S.reflected(), y);
  const double right = herglotz::value_distribution(mp, A, S, y);
  return std::abs(left - right);
}

herglotz::Evaluator m_plus_evaluator(const CoefficientModel& model, long n, const Budget& budget) {
  return [model, n, budget](cplx z) { return m_plus(model, n, z, budget).z(); };
}

herglotz::Evaluator m_minus_evaluator(const CoefficientModel& model, long n, const Budget& budget) {
  return [model, n, budget](cplx z) { return m_minus_wholeline(model, n, z, budget).z(); };
}

}  // namespace jspec::weyl
