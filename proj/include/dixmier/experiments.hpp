#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dixmier/symbol.hpp"
#include "dixmier/torus_function.hpp"

namespace dixmier {

// Experiment ids accepted by run_experiment.
const std::vector<std::string>& experiment_ids();

// Validated configuration: defaults for the id merged with the user document.
struct ExperimentConfig {
  std::string id;
  nlohmann::json doc;
  std::uint64_t hash = 0;  // FNV-1a 64 of doc.dump()

  // Throws Validation for unknown ids, unknown keys or malformed entries, and Infeasible
  // (with sizing advice) when a requested cutoff exceeds the dense-matrix cap.
  static ExperimentConfig make(const std::string& id, const nlohmann::json& user = nlohmann::json::object());
  std::string hash_hex() const;
};

nlohmann::json default_config(const std::string& id);

// {"kind": "constant"|"trig_poly"|"power_singularity"|"log_power", ...}
TorusFunction parse_function(const nlohmann::json& spec, int n);
// {"kind": "power_resolvent"|"inverse_power", "order": x}
SymbolFunction parse_symbol(const nlohmann::json& spec);

struct ResultRow {
  std::string experiment;
  std::string route;
  long long N_or_k = 0;
  double value = 0.0;
  double err = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const ResultRow&) const = default;
};

struct Predicate {
  std::string name;
  bool pass = false;
  std::string detail;
  bool operator==(const Predicate&) const = default;
};

struct ResultRecord {
  std::string experiment;
  nlohmann::json config;
  std::string config_hash;
  std::vector<ResultRow> rows;
  std::vector<Predicate> predicates;
  double wall_clock = 0.0;  // seconds; excluded from the CSV
  bool passed() const;
};

ResultRecord run_experiment(const ExperimentConfig& config);

// Fixed schema, %.17g, LF line endings.
std::string to_csv(const ResultRecord& r);
// Non-finite numbers are written as the strings "nan", "inf", "-inf".
nlohmann::json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);

}  // namespace dixmier
