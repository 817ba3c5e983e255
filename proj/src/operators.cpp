#include "jspec/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jspec::operators {

const char* to_string(Kind k) {
  switch (k) {
    case Kind::free: return "free";
    case Kind::constant_offset: return "constant-offset";
    case Kind::periodic: return "periodic";
    case Kind::perturbed: return "perturbed";
    case Kind::slow_oscillation: return "slow-oscillation";
    case Kind::sparse: return "sparse";
    case Kind::explicit_window: return "explicit-window";
    case Kind::torus_point: return "torus-point";
  }
  return "?";
}

Domain Domain::shifted(long k) const {
  Domain d;
  d.lo = lo == kNoLower ? kNoLower : lo - k;
  d.hi = hi == kNoUpper ? kNoUpper : hi - k;
  return d;
}

Domain Domain::intersect(const Domain& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }

const Coeff& Window::at(long n) const {
  if (!contains(n)) fail(ErrorKind::index_out_of_domain, "window index " + std::to_string(n));
  return entries[static_cast<std::size_t>(n - offset)];
}

namespace {

double bound_of(const Coeff& c) {
  if (!(c.a > 0)) fail(ErrorKind::nonpositive_a, "coefficient a must be positive");
  return std::max({std::abs(c.b), c.a - 1.0, 1.0 / c.a - 1.0, 0.0});
}

long pmod(long x, long p) {
  long r = x % p;
  return r < 0 ? r + p : r;
}

}  // namespace

CoefficientModel::CoefficientModel(Data data, Domain domain, std::optional<Anchor> anchor)
    : data_(std::move(data)), domain_(domain), anchor_(std::move(anchor)) {
  if (domain_.empty()) fail(ErrorKind::invalid_argument, "empty model domain");
  std::visit(
      [this](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeK>) {
          bound_ = 0;
          max_a_ = 1;
        } else if constexpr (std::is_same_v<T, ConstK>) {
          bound_ = std::abs(d.c);
          max_a_ = 1;
        } else if constexpr (std::is_same_v<T, PeriodicK>) {
          if (d.entries.empty()) fail(ErrorKind::invalid_argument, "periodic model needs entries");
          bound_ = 0;
          max_a_ = 0;
          for (const auto& c : d.entries) {
            bound_ = std::max(bound_, bound_of(c));
            max_a_ = std::max(max_a_, c.a);
          }
        } else if constexpr (std::is_same_v<T, PerturbedK>) {
          bound_ = d.base->bound();
          max_a_ = d.base->max_a();
          for (const auto& [n, delta] : d.delta) {
            if (!domain_.contains(n)) fail(ErrorKind::index_out_of_domain, "perturbation outside domain");
            Coeff c = d.base->coeff(n);
            c.a += delta.a;
            c.b += delta.b;
            bound_ = std::max(bound_, bound_of(c));
            max_a_ = std::max(max_a_, c.a);
          }
        } else if constexpr (std::is_same_v<T, SlowK>) {
          bound_ = 1;
          max_a_ = 1;
        } else if constexpr (std::is_same_v<T, SparseK>) {
          if (d.positions.size() != d.values.size()) fail(ErrorKind::invalid_argument, "sparse: size mismatch");
          double u = 0;
          for (double v : d.values) u = std::max(u, std::abs(v));
          bound_ = d.base->bound() + u;
          max_a_ = d.base->max_a();
        } else if constexpr (std::is_same_v<T, WindowK>) {
          if (d.window.entries.empty()) fail(ErrorKind::invalid_argument, "window entries must be nonempty");
          bound_ = 0;
          max_a_ = 0;
          for (const auto& c : d.window.entries) {
            bound_ = std::max(bound_, bound_of(c));
            max_a_ = std::max(max_a_, c.a);
          }
          if (d.fill) {
            bound_ = std::max(bound_, d.fill->bound());
            max_a_ = std::max(max_a_, d.fill->max_a());
          }
        } else if constexpr (std::is_same_v<T, TorusK>) {
          bound_ = -1;  // computed from the window on demand
          max_a_ = -1;
        }
      },
      data_);
}

Kind CoefficientModel::kind() const { return static_cast<Kind>(data_.index()); }

Coeff CoefficientModel::raw(long n) const {
  return std::visit(
      [n](const auto& d) -> Coeff {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeK>) {
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<T, ConstK>) {
          return {1.0, d.c};
        } else if constexpr (std::is_same_v<T, PeriodicK>) {
          long p = static_cast<long>(d.entries.size());
          return d.entries[static_cast<std::size_t>(pmod(n + d.phase, p))];
        } else if constexpr (std::is_same_v<T, PerturbedK>) {
          Coeff c = d.base->coeff(n);
          auto it = d.delta.find(n);
          if (it != d.delta.end()) {
            c.a += it->second.a;
            c.b += it->second.b;
          }
          return c;
        } else if constexpr (std::is_same_v<T, SlowK>) {
          return {1.0, std::cos(std::sqrt(static_cast<double>(n + d.offset)))};
        } else if constexpr (std::is_same_v<T, SparseK>) {
          Coeff c = d.base->coeff(n);
          for (std::size_t j = 0; j < d.positions.size(); ++j)
            if (d.positions[j] == n) c.b += d.values[j];
          return c;
        } else if constexpr (std::is_same_v<T, WindowK>) {
          if (d.window.contains(n)) return d.window.at(n);
          return d.fill->coeff(n);
        } else {
          return d.source->window().at(n + d.offset);
        }
      },
      data_);
}

Coeff CoefficientModel::coeff(long n) const {
  if (!domain_.contains(n))
    fail(ErrorKind::index_out_of_domain, "index " + std::to_string(n) + " outside domain of " + describe());
  return raw(n);
}

double CoefficientModel::bound() const {
  if (bound_ >= 0) return bound_;
  const auto& t = std::get<TorusK>(data_);
  double C = 0;
  for (const auto& c : t.source->window().entries) C = std::max(C, bound_of(c));
  return C;
}

double CoefficientModel::max_a() const {
  if (max_a_ >= 0) return max_a_;
  const auto& t = std::get<TorusK>(data_);
  double A = 0;
  for (const auto& c : t.source->window().entries) A = std::max(A, c.a);
  return A;
}

std::optional<Tail> CoefficientModel::right_tail() const {
  if (!domain_.right_infinite()) return std::nullopt;
  return std::visit(
      [this](const auto& d) -> std::optional<Tail> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeK> || std::is_same_v<T, ConstK>) {
          return Tail{domain_.lo, 1};
        } else if constexpr (std::is_same_v<T, PeriodicK>) {
          return Tail{domain_.lo, static_cast<long>(d.entries.size())};
        } else if constexpr (std::is_same_v<T, PerturbedK>) {
          auto t = d.base->right_tail();
          if (!t) return std::nullopt;
          long last = d.delta.empty() ? kNoLower : d.delta.rbegin()->first + 1;
          return Tail{std::max(t->start, last), t->period};
        } else if constexpr (std::is_same_v<T, SparseK>) {
          auto t = d.base->right_tail();
          if (!t) return std::nullopt;
          long last = kNoLower;
          for (long p : d.positions) last = std::max(last, p + 1);
          return Tail{std::max(t->start, last), t->period};
        } else if constexpr (std::is_same_v<T, WindowK>) {
          if (!d.fill) return std::nullopt;
          auto t = d.fill->right_tail();
          if (!t) return std::nullopt;
          return Tail{std::max(t->start, d.window.hi() + 1), t->period};
        } else {
          return std::nullopt;
        }
      },
      data_);
}

std::optional<Tail> CoefficientModel::left_tail() const {
  if (!domain_.left_infinite()) return std::nullopt;
  return std::visit(
      [this](const auto& d) -> std::optional<Tail> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeK> || std::is_same_v<T, ConstK>) {
          return Tail{domain_.hi, 1};
        } else if constexpr (std::is_same_v<T, PeriodicK>) {
          return Tail{domain_.hi, static_cast<long>(d.entries.size())};
        } else if constexpr (std::is_same_v<T, PerturbedK>) {
          auto t = d.base->left_tail();
          if (!t) return std::nullopt;
          long first = d.delta.empty() ? kNoUpper : d.delta.begin()->first - 1;
          return Tail{std::min(t->start, first), t->period};
        } else if constexpr (std::is_same_v<T, SparseK>) {
          auto t = d.base->left_tail();
          if (!t) return std::nullopt;
          long first = kNoUpper;
          for (long p : d.positions) first = std::min(first, p - 1);
          return Tail{std::min(t->start, first), t->period};
        } else if constexpr (std::is_same_v<T, WindowK>) {
          if (!d.fill) return std::nullopt;
          auto t = d.fill->left_tail();
          if (!t) return std::nullopt;
          return Tail{std::min(t->start, d.window.lo() - 1), t->period};
        } else {
          return std::nullopt;
        }
      },
      data_);
}

std::optional<Anchor> CoefficientModel::anchor() const {
  if (anchor_) return anchor_;
  if (const auto* t = std::get_if<TorusK>(&data_)) {
    auto a = t->source->anchor();
    if (a) a->site -= t->offset;
    return a;
  }
  return std::nullopt;
}

CoefficientModel CoefficientModel::shift(long k) const {
  Data nd = std::visit(
      [k](const auto& d) -> Data {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeK> || std::is_same_v<T, ConstK>) {
          return d;
        } else if constexpr (std::is_same_v<T, PeriodicK>) {
          long p = static_cast<long>(d.entries.size());
          return PeriodicK{d.entries, pmod(d.phase + k, p)};
        } else if constexpr (std::is_same_v<T, PerturbedK>) {
          std::map<long, Coeff> delta;
          for (const auto& [n, c] : d.delta) delta[n - k] = c;
          return PerturbedK{std::make_shared<const CoefficientModel>(d.base->shift(k)), std::move(delta)};
        } else if constexpr (std::is_same_v<T, SlowK>) {
          return SlowK{d.offset + k};
        } else if constexpr (std::is_same_v<T, SparseK>) {
          std::vector<long> pos;
          for (long p : d.positions) pos.push_back(p - k);
          return SparseK{std::move(pos), d.values, std::make_shared<const CoefficientModel>(d.base->shift(k))};
        } else if constexpr (std::is_same_v<T, WindowK>) {
          Window w = d.window;
          w.offset -= k;
          ModelPtr fill = d.fill ? std::make_shared<const CoefficientModel>(d.fill->shift(k)) : nullptr;
          return WindowK{std::move(w), fill};
        } else {
          return TorusK{d.source, d.offset + k};
        }
      },
      data_);
  std::optional<Anchor> a = anchor_;
  if (a) a->site -= k;
  return CoefficientModel(std::move(nd), domain_.shifted(k), std::move(a));
}

CoefficientModel CoefficientModel::restrict_to(Domain d) const {
  CoefficientModel m = *this;
  m.domain_ = domain_.intersect(d);
  if (m.domain_.empty()) fail(ErrorKind::empty_domain_intersection, "restriction leaves no indices");
  if (m.anchor_) {
    // an anchor side survives only if that half of the line is untouched
    if (m.domain_.hi != domain_.hi || m.domain_.lo > m.anchor_->site + 1) m.anchor_->m_plus = nullptr;
    if (m.domain_.lo != domain_.lo || m.domain_.hi < m.anchor_->site) m.anchor_->m_minus = nullptr;
    if (!m.anchor_->m_plus && !m.anchor_->m_minus) m.anchor_.reset();
  }
  return m;
}

CoefficientModel CoefficientModel::without_anchor() const {
  if (const auto* t = std::get_if<TorusK>(&data_)) {
    // materialize as a plain window so no anchor can be recovered
    Window w = t->source->window();
    w.offset -= t->offset;
    return CoefficientModel(WindowK{std::move(w), nullptr}, domain_);
  }
  CoefficientModel m = *this;
  m.anchor_.reset();
  return m;
}

std::string CoefficientModel::describe() const {
  std::ostringstream os;
  os << to_string(kind());
  if (const auto* t = std::get_if<TorusK>(&data_)) os << "[" << t->source->describe() << ", shift " << t->offset << "]";
  os << " on [";
  if (domain_.left_infinite()) os << "-inf"; else os << domain_.lo;
  os << ", ";
  if (domain_.right_infinite()) os << "inf"; else os << domain_.hi;
  os << "]";
  return os.str();
}

CoefficientModel free_model(Domain d) { return CoefficientModel(CoefficientModel::FreeK{}, d); }

CoefficientModel constant_offset(double c, Domain d) { return CoefficientModel(CoefficientModel::ConstK{c}, d); }

CoefficientModel periodic(std::vector<Coeff> entries, Domain d) {
  return CoefficientModel(CoefficientModel::PeriodicK{std::move(entries), 0}, d);
}

CoefficientModel perturbed(const CoefficientModel& base, const std::vector<Perturbation>& delta) {
  std::map<long, Coeff> m;
  for (const auto& p : delta) {
    auto& c = m.try_emplace(p.index, Coeff{0.0, 0.0}).first->second;
    c.a += p.da;
    c.b += p.db;
  }
  return CoefficientModel(CoefficientModel::PerturbedK{std::make_shared<const CoefficientModel>(base), std::move(m)},
                          base.domain());
}

CoefficientModel slow_oscillation() { return CoefficientModel(CoefficientModel::SlowK{0}, Domain::half_line()); }

CoefficientModel sparse(std::vector<long> positions, std::vector<double> values, const CoefficientModel& base) {
  for (long p : positions)
    if (!base.domain().contains(p)) fail(ErrorKind::index_out_of_domain, "sparse position outside domain");
  return CoefficientModel(
      CoefficientModel::SparseK{std::move(positions), std::move(values), std::make_shared<const CoefficientModel>(base)},
      base.domain());
}

CoefficientModel explicit_window(Window w, std::optional<CoefficientModel> fill, std::optional<Anchor> anchor) {
  if (w.entries.empty()) fail(ErrorKind::invalid_argument, "window entries must be nonempty");
  Domain d{w.lo(), w.hi()};
  ModelPtr f;
  if (fill) {
    d = fill->domain();
    if (!d.contains(w.lo()) || !d.contains(w.hi())) fail(ErrorKind::window_exceeds_domain, "fill does not cover window");
    f = std::make_shared<const CoefficientModel>(fill->without_anchor());
  }
  return CoefficientModel(CoefficientModel::WindowK{std::move(w), f}, d, std::move(anchor));
}

CoefficientModel torus_model(std::shared_ptr<const LazyWindow> source) {
  Domain d{source->lo(), source->hi()};
  return CoefficientModel(CoefficientModel::TorusK{std::move(source), 0}, d);
}

double metric_tail_bound(double C, int n_trunc) { return (3.0 * C + 2.0) * std::ldexp(1.0, -n_trunc); }

double metric_d(const CoefficientModel& v, const CoefficientModel& w, int n_trunc) {
  Domain d = v.domain().intersect(w.domain()).intersect({-static_cast<long>(n_trunc), n_trunc});
  if (d.empty()) fail(ErrorKind::empty_domain_intersection, "metric_d: no common indices within truncation");
  double s = 0;
  for (long n = d.lo; n <= d.hi; ++n) {
    Coeff x = v.coeff(n), y = w.coeff(n);
    s += std::ldexp(std::abs(x.a - y.a) + std::abs(x.b - y.b), -static_cast<int>(std::abs(n)));
  }
  return s;
}

double metric_d(const Window& v, const Window& w, int n_trunc) {
  return metric_d(explicit_window(v), explicit_window(w), n_trunc);
}

double metric_d(const Window& v, const CoefficientModel& w, int n_trunc) {
  return metric_d(explicit_window(v), w, n_trunc);
}

CoefficientModel shift(const CoefficientModel& m, long k) { return m.shift(k); }

Window extract_window(const CoefficientModel& model, long lo, long hi) {
  if (lo > hi) fail(ErrorKind::invalid_argument, "extract_window: lo > hi");
  if (!model.domain().contains(lo) || !model.domain().contains(hi))
    fail(ErrorKind::window_exceeds_domain,
         "window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] outside " + model.describe());
  Window w;
  w.offset = lo;
  w.entries.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long n = lo; n <= hi; ++n) w.entries.push_back(model.coeff(n));
  return w;
}

Window omega_limit_probe(const CoefficientModel& model, long n, long radius) {
  if (radius < 0) fail(ErrorKind::invalid_argument, "radius must be nonnegative");
  if (!model.domain().contains(n - radius) || !model.domain().contains(n + radius))
    fail(ErrorKind::window_exceeds_domain, "probe window leaves the model domain");
  Window w = extract_window(model, n - radius, n + radius);
  w.offset = -radius;
  return w;
}

}  // namespace jspec::operators
