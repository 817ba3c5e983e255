#include "jspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace jspec::oracle {

using operators::CoefficientModel;
using nlohmann::json;

double window_distance(const std::vector<Coeff>& u, const std::vector<Coeff>& v) {
  if (u.size() != v.size()) fail(ErrorKind::invalid_argument, "windows differ in length");
  double d = 0, w = 1;
  for (std::size_t i = u.size(); i-- > 0;) {
    d += w * (std::abs(u[i].a - v[i].a) + std::abs(u[i].b - v[i].b));
    w *= 0.5;
  }
  return d;
}

namespace {

std::vector<Coeff> window_at(const CoefficientModel& m, long k, int L) {
  std::vector<Coeff> key;
  key.reserve(static_cast<std::size_t>(L) + 1);
  for (long n = k - L; n <= k; ++n) key.push_back(m.coeff(n));
  return key;
}

double key_bound(const std::vector<Coeff>& key) {
  double c = 0;
  for (const Coeff& x : key) c = std::max({c, std::abs(x.b), x.a - 1, 1 / x.a - 1});
  return c;
}

}  // namespace

OracleDictionary build_oracle(const std::vector<CoefficientModel>& family, const BuildOptions& opt) {
  if (family.empty()) fail(ErrorKind::empty_family, "oracle family is empty");
  if (opt.L < 0 || !(opt.delta >= 0) || opt.shift_hi < opt.shift_lo)
    fail(ErrorKind::invalid_argument, "bad oracle options");
  OracleDictionary o;
  o.L = opt.L;
  o.delta = opt.delta;
  o.provenance = opt.provenance;
  for (const auto& member : family) {
    for (long k = opt.shift_lo; k <= opt.shift_hi; ++k) {
      Entry e{window_at(member, k, opt.L), member.coeff(k + 1)};
      bool duplicate = false;
      for (const Entry& old : o.entries)
        if (window_distance(old.key, e.key) < opt.delta / 2) {
          duplicate = true;
          break;
        }
      if (duplicate) continue;
      o.C = std::max(o.C, key_bound(e.key));
      o.entries.push_back(std::move(e));
    }
  }
  return o;
}

std::size_t nearest(const OracleDictionary& oracle, const std::vector<Coeff>& window) {
  if (oracle.entries.empty()) fail(ErrorKind::empty_family, "oracle has no entries");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < oracle.entries.size(); ++i) {
    double d = window_distance(oracle.entries[i].key, window);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Coeff predict(const OracleDictionary& oracle, const std::vector<Coeff>& window) {
  return oracle.entries[nearest(oracle, window)].next;
}

Coeff predict_interpolated(const OracleDictionary& oracle, const std::vector<Coeff>& window, int candidates) {
  if (oracle.entries.empty()) fail(ErrorKind::empty_family, "oracle has no entries");
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(oracle.entries.size());
  for (std::size_t i = 0; i < oracle.entries.size(); ++i)
    order.push_back({window_distance(oracle.entries[i].key, window), i});
  std::stable_sort(order.begin(), order.end(), [](auto& x, auto& y) { return x.first < y.first; });
  const Entry& e0 = oracle.entries[order[0].second];
  const auto& k0 = e0.key;
  double best = std::numeric_limits<double>::infinity(), lambda = 0;
  const Entry* e1 = &e0;
  const std::size_t top = std::min(order.size(), static_cast<std::size_t>(candidates) + 1);
  for (std::size_t r = 1; r < top; ++r) {
    const Entry& ej = oracle.entries[order[r].second];
    const auto& kj = ej.key;
    double num = 0, den = 0, w = 1;
    for (std::size_t p = k0.size(); p-- > 0; w *= 0.5) {
      double da = kj[p].a - k0[p].a, db = kj[p].b - k0[p].b;
      num += w * (da * (window[p].a - k0[p].a) + db * (window[p].b - k0[p].b));
      den += w * (da * da + db * db);
    }
    double lam = den > 0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    double res = 0;
    w = 1;
    for (std::size_t p = k0.size(); p-- > 0; w *= 0.5) {
      double ra = window[p].a - k0[p].a - lam * (kj[p].a - k0[p].a);
      double rb = window[p].b - k0[p].b - lam * (kj[p].b - k0[p].b);
      res += w * (ra * ra + rb * rb);
    }
    if (res < best) {
      best = res;
      lambda = lam;
      e1 = &ej;
    }
  }
  return {e0.next.a + lambda * (e1->next.a - e0.next.a), e0.next.b + lambda * (e1->next.b - e0.next.b)};
}

Coeff predict(const OracleDictionary& oracle, const std::vector<Coeff>& window, Mode mode) {
  return mode == Mode::nearest ? predict(oracle, window) : predict_interpolated(oracle, window);
}

Evaluation evaluate_oracle(const OracleDictionary& oracle, const CoefficientModel& model, long n_lo, long n_hi,
                           double eps, Mode mode) {
  const auto& dom = model.domain();
  if (n_lo - oracle.L < dom.lo || n_hi + 1 > dom.hi)
    fail(ErrorKind::window_exceeds_domain, "oracle windows leave the model domain");
  Evaluation ev;
  for (long n = n_lo; n <= n_hi; ++n) {
    Coeff p = predict(oracle, window_at(model, n, oracle.L), mode);
    Coeff t = model.coeff(n + 1);
    double e = std::abs(t.a - p.a) + std::abs(t.b - p.b);
    ev.series.push_back({n, e});
    ev.max_error = std::max(ev.max_error, e);
  }
  for (std::size_t i = ev.series.size(); i-- > 0;) {
    if (ev.series[i].error >= eps) break;
    ev.sustained_from = ev.series[i].n;
  }
  return ev;
}

std::string to_json(const OracleDictionary& o) {
  json j;
  j["format"] = "jspec-oracle";
  j["version"] = kFormatVersion;
  j["L"] = o.L;
  j["delta"] = o.delta;
  j["C"] = o.C;
  j["provenance"] = o.provenance;
  json entries = json::array();
  for (const Entry& e : o.entries) {
    json key = json::array();
    for (const Coeff& c : e.key) key.push_back({c.a, c.b});
    entries.push_back({{"key", key}, {"next", {e.next.a, e.next.b}}});
  }
  j["entries"] = std::move(entries);
  return j.dump();
}

OracleDictionary from_json(const std::string& text) {
  OracleDictionary o;
  try {
    json j = json::parse(text);
    if (j.at("format") != "jspec-oracle") fail(ErrorKind::invalid_argument, "not an oracle dictionary");
    if (j.at("version").get<int>() != kFormatVersion)
      fail(ErrorKind::invalid_argument, "unsupported oracle format version");
    o.L = j.at("L").get<int>();
    o.delta = j.at("delta").get<double>();
    o.C = j.at("C").get<double>();
    o.provenance = j.at("provenance").get<std::string>();
    for (const auto& e : j.at("entries")) {
      Entry en;
      for (const auto& c : e.at("key")) en.key.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      en.next = {e.at("next").at(0).get<double>(), e.at("next").at(1).get<double>()};
      if (en.key.size() != static_cast<std::size_t>(o.L) + 1)
        fail(ErrorKind::invalid_argument, "oracle key has the wrong length");
      o.entries.push_back(std::move(en));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed oracle dictionary: ") + e.what());
  }
  return o;
}

void save(const OracleDictionary& oracle, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + path);
  out << to_json(oracle) << '\n';
}

OracleDictionary load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_argument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace jspec::oracle
