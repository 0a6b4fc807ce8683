#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kobalab/spec_io.hpp"

namespace kobalab {

inline constexpr const char* kToolVersion = "0.1.0";

/// verify-ladder, cauchy-demo, slice-check, psh-verify, visibility-demo, ball-calibration.
const std::vector<std::string>& experiment_names();

/// Validated experiment configuration: every allowed key is present, with
/// defaults filled in. Schema violations throw SpecError naming the key path.
struct ExperimentConfig {
  std::string experiment;
  Json values;

  const Json& operator[](const std::string& key) const { return values.at(key); }
  bool operator==(const ExperimentConfig& other) const = default;
};

ExperimentConfig make_config(const Json& document);
/// Parses a JSON document; malformed text is a SpecError with an empty path.
ExperimentConfig parse_config(std::string_view text);
/// Canonical text (sorted keys); parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

enum class Status { pass, fail, indeterminate };
const char* to_string(Status s) noexcept;

struct CheckResult {
  std::string name;
  Status status = Status::indeterminate;
  std::string detail;
};

/// CSV cell; +infinity prints as "inf".
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Columns of the plot series; empty when the table is not plotted.
  std::vector<std::string> plot_columns;

  std::string csv() const;
  std::string csv(const std::vector<std::string>& columns) const;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  /// Extra JSON documents written next to the report (file name -> content).
  std::map<std::string, Json> documents;
  Json results = Json::object();
  double wall_seconds = 0.0;

  /// 0 all pass, 1 a certified failure, 2 indeterminate.
  int exit_code() const;
  const CheckResult* check(const std::string& name) const;
  const Table* table(const std::string& name) const;
  /// Deterministic: excludes wall time.
  Json to_json() const;
};

/// Runs the experiment. Module errors become a failed "run" check, undecidable
/// certificates an indeterminate one; SpecError (bad inputs) propagates.
RunReport run(const ExperimentConfig& config);

/// report.json, one CSV per table, the extra documents and timing.json.
/// Returns the file names written. Throws Error on I/O failure.
std::vector<std::string> write_outputs(const RunReport& report, const std::filesystem::path& dir);

/// plot_<table>.csv for every plotted table. Throws Error("no tabular artifacts")
/// when there is none.
std::vector<std::string> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

}  // namespace kobalab
