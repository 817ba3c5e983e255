#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "jspec/intervals.hpp"
#include "jspec/operators.hpp"

namespace jspec::experiments {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

struct Column {
  std::string name;
  std::string unit;
};

struct Table {
  Table(std::string name, std::vector<Column> cols) : experiment(std::move(name)), columns(std::move(cols)) {}

  std::string experiment;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  json summary = json::object();
  std::map<std::string, std::string> attachments;  // extra files: name -> contents
};

const std::vector<std::string>& experiment_names();

// Throws config_invalid on unknown experiments, unknown keys or bad values.
Table run(const std::string& experiment, const json& config, std::uint64_t seed);

// Config documents: see configs/README.md for the schema.
json parse_config(const std::string& text);
operators::CoefficientModel parse_model(const json& j);
IntervalUnion parse_set(const json& j);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t config_hash(const json& config);

// 17 significant digits, scientific notation.
std::string format_number(double x);
void write_csv(std::ostream& out, const Table& t, std::uint64_t hash, std::uint64_t seed);

}  // namespace jspec::experiments
