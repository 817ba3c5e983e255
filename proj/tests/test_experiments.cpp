#include <cmath>
#include <sstream>

#include "doctest.h"
#include "jspec/experiments.hpp"

using namespace jspec;
using namespace jspec::experiments;

namespace {

ErrorKind kind_of(const std::string& experiment, const std::string& config) {
  try {
    run(experiment, parse_config(config), 0);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(config_hash(json::parse(R"({"b":1,"a":2})")) == config_hash(json::parse(R"({"a":2,"b":1})")));
}

TEST_CASE("config errors") {
  CHECK(kind_of("bp", R"({"A":[[-1,1]],"bogus":1})") == ErrorKind::config_invalid);
  CHECK(kind_of("bp", R"({"model":{"kind":"nope"}})") == ErrorKind::config_invalid);
  CHECK(kind_of("bp", R"({"model":{"kind":"free","extra":0}})") == ErrorKind::config_invalid);
  CHECK(kind_of("bp", R"({"y":-1})") == ErrorKind::config_invalid);
  CHECK(kind_of("nonexistent", "{}") == ErrorKind::config_invalid);
  CHECK_THROWS_AS(parse_config("{"), Error);
  CHECK(kind_of("finitegap", R"({"bands":[[-2,-1],[1,2]],"mu":[]})") == ErrorKind::config_invalid);
}

TEST_CASE("model and set parsing") {
  auto m = parse_model(json::parse(R"({"kind":"periodic","entries":[[1,0.5],[2,-0.5]]})"));
  CHECK(m.coeff(3).a == 2.0);
  CHECK(m.coeff(-2).b == 0.5);
  auto half = parse_model(json::parse(R"({"kind":"free","domain":"half"})"));
  CHECK(half.domain().lo == 1);
  auto s = parse_set(json::parse(R"([[0,1],[2,"inf"]])"));
  CHECK(s.contains(5e300));
  CHECK(!s.contains(1.5));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("CSV layout") {
  Table t{"demo", {{"n", "index"}, {"x", "1"}}};
  t.rows = {{1, 0.5}, {2, 0.25}};
  std::ostringstream os;
  write_csv(os, t, 0xabcull, 42);
  std::istringstream in(os.str());
  std::string l1, l2, l3, l4;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  std::getline(in, l4);
  CHECK(l1 == std::string("# experiment=demo config_hash=0000000000000abc version=") + kVersion + " seed=42");
  CHECK(l2 == "# units: n=index x=1");
  CHECK(l3 == "n,x");
  CHECK(l4 == "1.0000000000000000e+00,5.0000000000000000e-01");
}

TEST_CASE("every experiment runs on defaults") {
  for (const auto& name : experiment_names()) {
    if (name == "oracle" || name == "finitegap" || name == "dr" || name == "sparse") continue;  // covered by config runs
    CAPTURE(name);
    auto t = run(name, json::object(), 1);
    CHECK(t.experiment == name);
    CHECK(!t.rows.empty());
    for (const auto& r : t.rows) CHECK(r.size() == t.columns.size());
  }
}

TEST_CASE("scattering runs are seed-reproducible") {
  auto cfg = json::parse(R"({"points":40,"random_trials":20})");
  auto a = run("scattering", cfg, 5), b = run("scattering", cfg, 5);
  CHECK(a.summary.dump() == b.summary.dump());
  CHECK(a.summary["random_max_unitarity_defect"].get<double>() < 1e-10);
}

TEST_CASE("frozen outputs") {
  auto bp = run("bp", json::parse(R"({"n":[10,50]})"), 0);
  REQUIRE(bp.rows.size() == 2);
  CHECK(bp.rows[0][1] == doctest::Approx(0.062606431322887124).epsilon(1e-9));
  CHECK(bp.rows[1][1] == doctest::Approx(0.0047188498007952329).epsilon(1e-9));
  auto sa = run("spectral-average", json::object(), 0);
  REQUIRE(sa.rows.size() == 4);
  CHECK(sa.rows[3][1] == doctest::Approx(0.50000017484957593).epsilon(1e-10));
  CHECK(sa.rows[3][2] == doctest::Approx(0.50000004371239415).epsilon(1e-10));
  // the smoothing defect is linear in y
  CHECK(sa.rows[0][3] / sa.rows[1][3] == doctest::Approx(10).epsilon(1e-2));
}
