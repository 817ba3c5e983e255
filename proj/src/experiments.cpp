#include "jspec/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>

#include "jspec/finitegap.hpp"
#include "jspec/herglotz.hpp"
#include "jspec/hyperbolic.hpp"
#include "jspec/oracle.hpp"
#include "jspec/parallel.hpp"
#include "jspec/reflectionless.hpp"
#include "jspec/scattering.hpp"
#include "jspec/weyl.hpp"

namespace jspec::experiments {

using operators::CoefficientModel;
using operators::Domain;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::config_invalid, what); }

// Reads keys from a JSON object and rejects anything left unread.
class Params {
 public:
  Params(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) bad(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) bad(where_ + ": missing key '" + key + "'");
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return as<T>(j_.at(key), key);
  }

  template <class T>
  T get(const std::string& key) {
    return as<T>(raw(key), key);
  }

  double positive(const std::string& key, double fallback) {
    double v = get<double>(key, fallback);
    if (!(v > 0)) bad(where_ + ": '" + key + "' must be positive");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) bad(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  template <class T>
  T as(const json& v, const std::string& key) const {
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      bad(where_ + ": bad value for '" + key + "'");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

double number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return inf;
    if (s == "-inf") return -inf;
  }
  bad("expected a number or \"inf\"/\"-inf\"");
}

std::vector<Coeff> coeff_list(const json& v) {
  if (!v.is_array()) bad("coefficient list must be an array of [a, b]");
  std::vector<Coeff> out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2) bad("coefficient entries are [a, b]");
    out.push_back({number(e[0]), number(e[1])});
  }
  return out;
}

finitegap::BandSet parse_bands(const json& v) {
  finitegap::BandSet E;
  const auto set = parse_set(v);
  E.bands = set.pieces();
  try {
    E.validate();
  } catch (const Error& e) {
    bad(std::string("bands: ") + e.what());
  }
  return E;
}

finitegap::DirichletData parse_mu(const json& v, int gaps) {
  finitegap::DirichletData d;
  if (!v.is_array()) bad("mu must be an array of [mu, s]");
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[1].is_number_integer()) bad("mu entries are [mu, s]");
    d.push_back({number(e[0]), e[1].get<int>()});
  }
  if (static_cast<int>(d.size()) != gaps) bad("mu needs one entry per gap");
  return d;
}

Domain parse_domain(const json& v) {
  if (v.is_string()) {
    if (v == "whole") return Domain::whole_line();
    if (v == "half") return Domain::half_line();
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer())
    return {v[0].get<long>(), v[1].get<long>()};
  bad("domain must be \"whole\", \"half\" or [lo, hi]");
}

std::vector<long> long_list(const json& v, const std::string& key) {
  if (!v.is_array()) bad(key + " must be an array of integers");
  std::vector<long> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad(key + " must be an array of integers");
    out.push_back(e.get<long>());
  }
  return out;
}

std::vector<double> double_list(const json& v, const std::string& key) {
  if (!v.is_array()) bad(key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e));
  return out;
}

// Either an explicit list or {"from", "to", "points"} spaced geometrically.
std::vector<long> index_sweep(const json& v, const std::string& key) {
  if (v.is_array()) return long_list(v, key);
  Params p(v, key);
  double from = p.positive("from", 1), to = p.positive("to", 1);
  int points = p.get<int>("points", 10);
  p.finish();
  if (points < 1 || to < from) bad(key + ": bad sweep");
  std::vector<long> out;
  for (int k = 0; k < points; ++k) {
    double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    long n = std::lround(from * std::pow(to / from, t));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

std::vector<double> angle_grid(int points) {
  std::vector<double> phi(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) phi[k] = pi * (k + 0.5) / points;
  return phi;
}

CoefficientModel model_or(Params& p, const std::string& key, const json& fallback) {
  return parse_model(p.has(key) ? p.raw(key) : fallback);
}

IntervalUnion set_or(Params& p, const std::string& key, const json& fallback) {
  return parse_set(p.has(key) ? p.raw(key) : fallback);
}

json intervals_json(const IntervalUnion& u) {
  json out = json::array();
  for (const auto& p : u.pieces()) out.push_back({p.lo, p.hi});
  return out;
}

// ---------------------------------------------------------------------------

Table run_bp(Params& p) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"perturbed","base":{"kind":"free","domain":"half"},
                                                    "delta":[[1,0,1]]})"));
  auto A = set_or(p, "A", json::parse("[[-1,1]]"));
  auto S = set_or(p, "S", json::parse("[[0,1]]"));
  double y = p.positive("y", 1e-3);
  auto ns = p.has("n") ? index_sweep(p.raw("n"), "n") : std::vector<long>{1, 10, 50, 100, 200};
  p.finish();
  Table t{"bp", {{"n", "index"}, {"defect", "1"}, {"y", "1"}}};
  std::vector<double> D(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) { D[i] = weyl::bp_defect(model, ns[i], A, S, y); });
  for (std::size_t i = 0; i < ns.size(); ++i) t.rows.push_back({double(ns[i]), D[i], y});
  t.summary["model"] = model.describe();
  t.summary["last_defect"] = D.empty() ? 0.0 : D.back();
  return t;
}

Table run_dr(Params& p) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"geometric","amplitude":1,"ratio":0.5,"count":200,
                                                    "base":{"kind":"free","domain":"half"}})"));
  auto E = parse_bands(p.has("bands") ? p.raw("bands") : json::parse("[[-2,2]]"));
  int samples = p.get<int>("samples", 32);
  long radius = p.get<long>("radius", 4);
  int n_max = p.get<int>("n_max", 40);
  int n_trunc = p.get<int>("n_trunc", 60);
  auto ns = p.has("n") ? index_sweep(p.raw("n"), "n") : std::vector<long>{5, 10, 15, 20, 25, 30};
  p.finish();
  if (samples < 1 || radius < 0 || n_max < 1) bad("dr: samples, radius, n_max out of range");
  Table t{"dr", {{"n", "index"}, {"distance", "metric d"}}};
  std::vector<double> dist(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto w = operators::omega_limit_probe(model, ns[i], radius);
    dist[i] = finitegap::distance_to_torus(w, E, samples, n_max, n_trunc).distance;
    t.rows.push_back({double(ns[i]), dist[i]});
  }
  t.summary["model"] = model.describe();
  t.summary["gaps"] = E.gaps();
  return t;
}

Table run_stolz(Params& p) {
  auto ns = p.has("n") ? index_sweep(p.raw("n"), "n")
                       : index_sweep(json::parse(R"({"from":100,"to":1000000,"points":400})"), "n");
  long radius = p.get<long>("radius", 50);
  double net = p.positive("net", 0.1);
  int offset = p.get<int>("offset", 0);
  p.finish();
  if (radius < 0) bad("stolz: radius must be >= 0");
  auto model = offset == 0 ? operators::slow_oscillation()
                           : CoefficientModel(CoefficientModel::SlowK{offset}, Domain::half_line());
  Table t{"stolz", {{"n", "index"}, {"deviation", "1"}, {"constant", "1"}}};
  std::vector<double> dev(ns.size()), con(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    auto w = operators::omega_limit_probe(model, ns[i], radius);
    double lo = inf, hi = -inf, da = 0;
    for (const auto& c : w.entries) {
      lo = std::min(lo, c.b);
      hi = std::max(hi, c.b);
      da = std::max(da, std::abs(c.a - 1));
    }
    con[i] = 0.5 * (lo + hi);
    dev[i] = std::max(0.5 * (hi - lo), da);
  });
  const int net_points = static_cast<int>(std::lround(2 / net)) + 1;
  int hit = 0;
  for (int k = 0; k < net_points; ++k) {
    double x = -1 + k * net;
    bool found = std::any_of(con.begin(), con.end(), [&](double c) { return std::abs(c - x) <= net / 2; });
    hit += found;
  }
  for (std::size_t i = 0; i < ns.size(); ++i) t.rows.push_back({double(ns[i]), dev[i], con[i]});
  t.summary["coverage"] = double(hit) / net_points;
  t.summary["net"] = net;
  t.summary["max_deviation"] = dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
  return t;
}

Table run_sparse(Params& p) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"sparse","positions":[4,16,64,256,1024,4096],
                                                    "values":[1,1,1,1,1,1],"base":{"kind":"free","domain":"half"}})"));
  auto phis = p.has("phi") ? double_list(p.raw("phi"), "phi") : std::vector<double>{0.4, 0.8, 1.2, 1.6, 2.0, 2.4};
  auto ns = p.has("n") ? index_sweep(p.raw("n"), "n")
                       : index_sweep(json::parse(R"({"from":2,"to":8000,"points":24})"), "n");
  double bump = p.get<double>("bump", 1.0);
  p.finish();
  for (double phi : phis)
    if (!(phi > 0 && phi < pi)) bad("sparse: phi must lie in (0, pi)");
  Table t{"sparse", {{"phi", "rad"}, {"energy", "1"}, {"n", "index"}, {"log_prufer_radius", "1"}, {"bump_abs_R", "1"}}};
  auto single = operators::perturbed(operators::free_model(), {{0, 0.0, bump}});
  const long start = model.domain().left_infinite() ? 0 : model.domain().lo;
  std::vector<std::vector<double>> block(phis.size());
  parallel_for(phis.size(), [&](std::size_t i) {
    double R = std::abs(scattering::scattering_coefficients(single, phis[i]).R);
    for (long n : ns) {
      double lr = hyperbolic::prufer_log_radius(model, phis[i], start + n, {0.0, 1.0}, start);
      block[i].insert(block[i].end(), {phis[i], 2 * std::cos(phis[i]), double(n), lr, R});
    }
  });
  for (auto& b : block)
    for (std::size_t k = 0; k < b.size(); k += 5) t.rows.push_back({b.begin() + k, b.begin() + k + 5});
  t.summary["diagnostic_only"] = true;
  t.summary["model"] = model.describe();
  return t;
}

Table run_reflectionless(Params& p) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"free"})"));
  auto A = set_or(p, "A", json::parse("[[-1.9,1.9]]"));
  double y = p.positive("y", 1e-4);
  double step = p.positive("step", 1e-2);
  long site = p.get<long>("site", 0);
  p.finish();
  auto rep = reflectionless::reflectionless_defect(model, A, y, step, site);
  Table t{"reflectionless", {{"t", "1"}, {"defect", "1"}}};
  for (std::size_t i = 0; i < rep.t.size(); ++i) t.rows.push_back({rep.t[i], rep.defect[i]});
  t.summary["sup"] = rep.sup;
  t.summary["l1"] = rep.l1;
  t.summary["y"] = y;
  t.summary["model"] = model.describe();
  return t;
}

Table run_finitegap(Params& p) {
  auto E = parse_bands(p.has("bands") ? p.raw("bands") : json::parse("[[-2,-1],[1,2]]"));
  auto mu = parse_mu(p.has("mu") ? p.raw("mu") : json::parse("[[0,0]]"), E.gaps());
  int n_max = p.get<int>("n_max", 100);
  long radius = p.get<long>("radius", 10);
  double y = p.positive("y", 1e-4);
  double margin = p.positive("margin", 0.05);
  double tol = p.positive("tol", 0.05);
  auto trunc = p.has("truncation") ? long_list(p.raw("truncation"), "truncation") : std::vector<long>{-100, 99};
  p.finish();
  if (trunc.size() != 2 || trunc[0] > trunc[1] || trunc[0] < -n_max || trunc[1] > n_max)
    bad("finitegap: truncation must be [lo, hi] inside [-n_max, n_max]");
  try {
    finitegap::validate(E, mu);
  } catch (const Error& e) {
    bad(std::string("finitegap: ") + e.what());
  }
  auto model = finitegap::torus_point(E, mu, n_max);
  std::vector<Interval> inner;
  for (const auto& b : E.bands) inner.push_back({b.lo + margin, b.hi - margin});
  auto rep = reflectionless::reflectionless_defect(model, IntervalUnion(inner), y);
  auto check = finitegap::check_spectrum(finitegap::truncation_eigenvalues(model, trunc[0], trunc[1]), E, tol);
  Table t{"finitegap", {{"n", "index"}, {"a", "1"}, {"b", "1"}}};
  for (long n = -radius; n <= radius; ++n) {
    Coeff c = model.coeff(n);
    t.rows.push_back({double(n), c.a, c.b});
  }
  t.summary["defect_sup"] = rep.sup;
  t.summary["spectrum_max_distance"] = check.max_distance;
  t.summary["gap_eigenvalues"] = check.exceptional;
  t.summary["outside"] = check.outside;
  return t;
}

Table run_scattering(Params& p, std::uint64_t seed) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"bump","amplitude":0.3,"width":40,"radius":200})"));
  int points = p.get<int>("points", 400);
  double tol = p.positive("tol", 1e-3);
  int trials = p.get<int>("random_trials", 0);
  long support = p.get<long>("random_support", 20);
  double amplitude = p.positive("random_amplitude", 0.5);
  p.finish();
  if (points < 1 || trials < 0 || support < 1) bad("scattering: points, random_trials, random_support out of range");
  Table t{"scattering",
          {{"phi", "rad"}, {"energy", "1"}, {"abs_T", "1"}, {"abs_R", "1"}, {"psi", "rad"}, {"unitarity_defect", "1"}}};
  auto phis = angle_grid(points);
  std::vector<scattering::ScatteringData> d(phis.size());
  parallel_for(phis.size(), [&](std::size_t i) { d[i] = scattering::scattering_coefficients(model, phis[i]); });
  double worst = 0;
  for (const auto& s : d) {
    t.rows.push_back({s.phi, 2 * std::cos(s.phi), std::abs(s.T), std::abs(s.R), s.psi, s.unitarity_defect});
    worst = std::max(worst, s.unitarity_defect);
  }
  t.summary["reflectionless_set"] = intervals_json(scattering::reflectionless_set_estimate(model, points, tol));
  t.summary["max_unitarity_defect"] = worst;
  if (trials > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1), ang(0, pi);
    double rw = 0;
    for (int k = 0; k < trials; ++k) {
      operators::Window w;
      w.offset = 0;
      for (long n = 0; n < support; ++n) w.entries.push_back({1 + 0.5 * amplitude * (1 + u(rng)), amplitude * u(rng)});
      auto m = operators::explicit_window(w, operators::free_model());
      double phi = ang(rng);
      if (phi <= 0 || phi >= pi) continue;
      rw = std::max(rw, scattering::scattering_coefficients(m, phi).unitarity_defect);
    }
    t.summary["random_trials"] = trials;
    t.summary["random_max_unitarity_defect"] = rw;
  }
  return t;
}

Table run_oracle(Params& p) {
  auto E = parse_bands(p.has("bands") ? p.raw("bands") : json::parse("[[-2,-1],[1,2]]"));
  int samples = p.get<int>("samples", 32);
  oracle::BuildOptions bo;
  bo.L = p.get<int>("L", 8);
  bo.delta = p.positive("delta", 1e-3);
  auto shifts = p.has("shifts") ? long_list(p.raw("shifts"), "shifts") : std::vector<long>{-8, 8};
  int n_max = p.get<int>("n_max", 40);
  auto mode_s = p.get<std::string>("mode", "interpolate");
  double eps = p.positive("eps", 0.05);
  std::vector<double> offsets =
      p.has("held_out") ? double_list(p.raw("held_out"), "held_out") : std::vector<double>{0.5};
  auto delta = p.has("perturbation") ? p.raw("perturbation") : json::array();
  p.finish();
  if (shifts.size() != 2 || shifts[0] > shifts[1]) bad("oracle: shifts must be [lo, hi]");
  if (samples < 1 || bo.L < 0 || n_max <= bo.L + shifts[1] + 1 || -n_max > shifts[0] - bo.L)
    bad("oracle: samples, L, shifts and n_max are inconsistent");
  if (mode_s != "nearest" && mode_s != "interpolate") bad("oracle: mode must be nearest or interpolate");
  if (E.gaps() != 1) bad("oracle: held-out sampling supports one-gap band sets");
  const auto mode = mode_s == "nearest" ? oracle::Mode::nearest : oracle::Mode::interpolate;
  std::vector<operators::Perturbation> pert;
  long support_end = 0;
  for (const auto& e : delta) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()) bad("perturbation entries are [n, da, db]");
    pert.push_back({e[0].get<long>(), number(e[1]), number(e[2])});
    support_end = std::max(support_end, e[0].get<long>());
    if (e[0].get<long>() < 1 || e[0].get<long>() > n_max) bad("perturbation index outside [1, n_max]");
  }
  bo.shift_lo = shifts[0];
  bo.shift_hi = shifts[1];
  std::vector<CoefficientModel> family;
  for (const auto& d : finitegap::torus_grid(E, samples)) family.push_back(finitegap::torus_point(E, d, n_max));
  char prov[128];
  std::snprintf(prov, sizeof prov, "one-gap torus, %d samples per circle, shifts [%ld, %ld]", samples, shifts[0],
                shifts[1]);
  bo.provenance = prov;
  auto dict = oracle::build_oracle(family, bo);
  Table t{"oracle", {{"theta", "rad"}, {"n", "index"}, {"error", "1"}}};
  const long n_lo = std::max<long>(bo.L + 1, support_end + bo.L + 1);
  double worst = 0;
  for (double off : offsets) {
    const double theta = 2 * pi * off / samples;
    for (int k = 0; k < samples; ++k) {
      const double th = theta + 2 * pi * k / samples;
      auto m = finitegap::torus_point(E, {finitegap::circle_point(E, 1, th)}, n_max);
      if (!pert.empty()) m = operators::perturbed(m, pert);
      auto ev = oracle::evaluate_oracle(dict, m.restrict_to({1, n_max}), n_lo, n_max - 1, eps, mode);
      for (const auto& e : ev.series) t.rows.push_back({th, double(e.n), e.error});
      worst = std::max(worst, ev.max_error);
    }
  }
  t.summary["entries"] = dict.entries.size();
  t.summary["max_error"] = worst;
  t.summary["mode"] = mode_s;
  t.summary["eps"] = eps;
  t.summary["below_eps"] = worst < eps;
  t.attachments["oracle_dictionary.json"] = oracle::to_json(dict);
  return t;
}

Table run_spectral_average(Params& p) {
  auto model = model_or(p, "model", json::parse(R"({"kind":"free"})"));
  long site = p.get<long>("site", 0);
  auto A = set_or(p, "A", json::parse("[[-1,1]]"));
  auto S = set_or(p, "S", json::parse("[[0,1]]"));
  auto ys = p.has("y") ? double_list(p.raw("y"), "y") : std::vector<double>{1e-2, 1e-3, 1e-4, 1e-6};
  herglotz::AverageBudget budget;
  budget.eta = p.positive("eta", budget.eta);
  p.finish();
  if (!A.bounded()) bad("spectral-average: A must be bounded");
  for (double y : ys)
    if (!(y > 0)) bad("spectral-average: y values must be positive");
  auto F = weyl::m_plus_evaluator(model, site);
  const double rhs = herglotz::spectral_average(F, A, S, budget);
  Table t{"spectral-average", {{"y", "1"}, {"value_distribution", "1"}, {"spectral_average", "1"}, {"difference", "1"}}};
  std::vector<double> vd(ys.size());
  parallel_for(ys.size(), [&](std::size_t i) { vd[i] = herglotz::value_distribution(F, A, S, ys[i]); });
  for (std::size_t i = 0; i < ys.size(); ++i) t.rows.push_back({ys[i], vd[i], rhs, vd[i] - rhs});
  t.summary["spectral_average"] = rhs;
  return t;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"bp",         "dr",      "stolz",  "sparse",          "reflectionless",
                                                 "finitegap", "scattering", "oracle", "spectral-average"};
  return names;
}

json parse_config(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) bad("config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
}

CoefficientModel parse_model(const json& j) {
  Params p(j, "model");
  const auto kind = p.get<std::string>("kind");
  const Domain dom = p.has("domain") ? parse_domain(p.raw("domain")) : Domain::whole_line();
  std::optional<CoefficientModel> m;
  try {
    if (kind == "free") {
      m = operators::free_model(dom);
    } else if (kind == "constant") {
      m = operators::constant_offset(p.get<double>("c"), dom);
    } else if (kind == "periodic") {
      m = operators::periodic(coeff_list(p.raw("entries")), dom);
    } else if (kind == "perturbed") {
      auto base = parse_model(p.raw("base"));
      std::vector<operators::Perturbation> d;
      for (const auto& e : p.raw("delta")) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()) bad("delta entries are [n, da, db]");
        d.push_back({e[0].get<long>(), number(e[1]), number(e[2])});
      }
      m = operators::perturbed(base, d);
    } else if (kind == "slow") {
      m = operators::slow_oscillation();
    } else if (kind == "sparse") {
      auto base = parse_model(p.raw("base"));
      auto pos = long_list(p.raw("positions"), "positions");
      auto val = double_list(p.raw("values"), "values");
      if (pos.size() != val.size()) bad("sparse: positions and values differ in length");
      m = operators::sparse(pos, val, base);
    } else if (kind == "geometric") {
      // b(n) += amplitude * ratio^n for n = 1..count
      auto base = parse_model(p.raw("base"));
      double amp = p.get<double>("amplitude", 1.0), ratio = p.get<double>("ratio", 0.5);
      long count = p.get<long>("count", 200);
      std::vector<long> pos;
      std::vector<double> val;
      for (long n = 1; n <= count; ++n) {
        pos.push_back(n);
        val.push_back(amp * std::pow(ratio, static_cast<double>(n)));
      }
      m = operators::sparse(pos, val, base);
    } else if (kind == "bump") {
      // b(n) = amplitude exp(-(n/width)^2) on [-radius, radius], free outside
      double amp = p.get<double>("amplitude", 0.3), width = p.positive("width", 40);
      long radius = p.get<long>("radius", 200);
      operators::Window w;
      w.offset = -radius;
      for (long n = -radius; n <= radius; ++n) w.entries.push_back({1.0, amp * std::exp(-std::pow(n / width, 2))});
      m = operators::explicit_window(w, operators::free_model());
    } else if (kind == "window") {
      operators::Window w;
      w.offset = p.get<long>("offset", 0);
      w.entries = coeff_list(p.raw("entries"));
      std::optional<CoefficientModel> fill;
      if (p.has("fill")) fill = parse_model(p.raw("fill"));
      m = operators::explicit_window(w, fill);
    } else if (kind == "torus") {
      auto E = parse_bands(p.raw("bands"));
      auto mu = parse_mu(p.raw("mu"), E.gaps());
      finitegap::validate(E, mu);
      m = finitegap::torus_point(E, mu, p.get<int>("n_max", 40));
    } else {
      bad("unknown model kind '" + kind + "'");
    }
    p.finish();
    if (p.has("domain") && !dom.is_whole_line()) m = m->restrict_to(dom.intersect(m->domain()));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config_invalid) throw;
    bad(std::string("model: ") + e.what());
  }
  return *m;
}

IntervalUnion parse_set(const json& j) {
  if (!j.is_array()) bad("sets are arrays of [lo, hi]");
  std::vector<Interval> pieces;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) bad("set pieces are [lo, hi]");
    Interval iv{number(e[0]), number(e[1])};
    if (!(iv.lo < iv.hi)) bad("set pieces need lo < hi");
    pieces.push_back(iv);
  }
  return IntervalUnion(std::move(pieces));
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const json& config) { return fnv1a64(config.dump()); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& t, std::uint64_t hash, std::uint64_t seed) {
  char h[17];
  std::snprintf(h, sizeof h, "%016" PRIx64, hash);
  out << "# experiment=" << t.experiment << " config_hash=" << h << " version=" << kVersion << " seed=" << seed
      << "\n# units:";
  for (const auto& c : t.columns) out << ' ' << c.name << '=' << c.unit;
  out << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i].name;
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

Table run(const std::string& experiment, const json& config, std::uint64_t seed) {
  json params = config;
  if (params.contains("experiment")) {
    if (params["experiment"] != experiment) bad("config is for experiment " + params["experiment"].dump());
    params.erase("experiment");
  }
  params.erase("seed");
  Params p(params, experiment);
  if (experiment == "bp") return run_bp(p);
  if (experiment == "dr") return run_dr(p);
  if (experiment == "stolz") return run_stolz(p);
  if (experiment == "sparse") return run_sparse(p);
  if (experiment == "reflectionless") return run_reflectionless(p);
  if (experiment == "finitegap") return run_finitegap(p);
  if (experiment == "scattering") return run_scattering(p, seed);
  if (experiment == "oracle") return run_oracle(p);
  if (experiment == "spectral-average") return run_spectral_average(p);
  bad("unknown experiment '" + experiment + "'");
}

}  // namespace jspec::experiments
