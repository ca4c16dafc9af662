#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lilx/excursion.hpp"

namespace lilx {

using Json = nlohmann::ordered_json;

enum class Command { Scale, GumbelTable, Simulate, Expectation, StrongLaw };
const char* to_string(Command c);

enum class OutputFormat { Csv, Json };

/// Everything a report depends on. Reports are pure functions of this.
struct RunConfig {
  Command command = Command::GumbelTable;
  std::vector<double> ln_n_ladder;
  double x_min = -2.0;
  double x_max = 8.0;
  int x_steps = 101;
  Sided sided = Sided::One;
  std::uint64_t seed = 42;
  std::size_t replicates = 1;
  std::map<std::string, double> tolerances;
  /// Command-specific numeric flags (mode parameters, c, rho, ...).
  std::map<std::string, double> parameters;
  std::map<std::string, std::string> options;
  std::string output;  ///< empty: standard output
  OutputFormat format = OutputFormat::Csv;

  [[nodiscard]] Json to_json() const;
};

/// 10^4, 10^8, 10^16, 10^32, 10^64 as ln n.
std::vector<double> default_ln_n_ladder();

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  /// Numeric column by name; DomainError if missing or non-numeric.
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

struct ExperimentReport {
  RunConfig config;
  std::vector<Table> tables;
  Json provenance = Json::object();
  std::vector<std::string> notes;

  [[nodiscard]] const Table& table(const std::string& name) const;

  /// One top-level object {config, tables, provenance}.
  [[nodiscard]] std::string to_json() const;
  /// "# table <name>" header line per table, then a header row and data
  /// rows; numbers with 17 significant digits; LF line endings.
  [[nodiscard]] std::string to_csv() const;
};

/// Round-trip decimal with 17 significant digits.
std::string format_double(double v);

/// Line plot of the named y columns against x_column. Non-finite points
/// are skipped.
std::string render_svg(const Table& table, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& title);

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace lilx
