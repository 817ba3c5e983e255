#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jspec/core.hpp"
#include "jspec/experiments.hpp"
#include "jspec/parallel.hpp"

namespace fs = std::filesystem;
using namespace jspec;

namespace {

int run_one(const std::string& name, const std::string& config_path, std::string out_dir, bool have_seed,
            std::uint64_t seed, bool json_summary) {
  std::ifstream in(config_path);
  if (!in) fail(ErrorKind::config_invalid, "cannot read config " + config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto config = experiments::parse_config(ss.str());
  if (!have_seed) {
    if (config.contains("seed") && !config["seed"].is_number_unsigned())
      fail(ErrorKind::config_invalid, "seed must be an unsigned integer");
    seed = config.value("seed", std::uint64_t{0});
  }
  if (out_dir.empty()) {
    const char* env = std::getenv("JSPEC_OUT_DIR");
    out_dir = env && *env ? env : "out";
  }
  auto table = experiments::run(name, config, seed);
  fs::create_directories(out_dir);
  const auto hash = experiments::config_hash(config);
  const fs::path csv = fs::path(out_dir) / (name + ".csv");
  {
    std::ofstream out(csv);
    if (!out) fail(ErrorKind::config_invalid, "cannot write " + csv.string());
    experiments::write_csv(out, table, hash, seed);
  }
  if (json_summary) {
    auto summary = table.summary;
    summary["experiment"] = name;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    summary["config_hash"] = hex;
    summary["seed"] = seed;
    summary["version"] = experiments::kVersion;
    summary["rows"] = table.rows.size();
    std::ofstream(fs::path(out_dir) / (name + ".json")) << summary.dump(2) << '\n';
  }
  for (const auto& [file, text] : table.attachments) std::ofstream(fs::path(out_dir) / file) << text << '\n';
  std::printf("%s: %zu rows -> %s\n", name.c_str(), table.rows.size(), csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi operator spectral experiments"};
  app.require_subcommand(1);
  std::string config, out;
  std::uint64_t seed = 0;
  bool no_json = false;
  int threads = 0;
  for (const auto& name : experiments::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output directory (default $JSPEC_OUT_DIR, else ./out)");
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_flag("--no-json", no_json, "skip the JSON summary");
    sub->add_option("--threads", threads, "worker threads (default: hardware)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const auto* sub = app.get_subcommands().front();
  try {
    if (threads > 0) set_default_workers(static_cast<unsigned>(threads));
    return run_one(sub->get_name(), config, out, sub->count("--seed") > 0, seed, !no_json);
  } catch (const Error& e) {
    std::fprintf(stderr, "jspec %s: %s (%s)\n", sub->get_name().c_str(), e.what(), to_string(e.kind()));
    if (e.kind() == ErrorKind::config_invalid) return 2;
    if (e.is_budget()) return 3;
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "jspec %s: %s\n", sub->get_name().c_str(), e.what());
    return 1;
  }
}
