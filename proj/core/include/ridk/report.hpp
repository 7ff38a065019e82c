#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ridk {

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_number(double x);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  Table(std::string name, std::vector<std::string> columns);
  /// Append a row; values are formatted with format_number unless they are
  /// already strings.
  template <class... Cells>
  void add(const Cells&... cells) {
    rows.push_back({cell(cells)...});
  }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(long long x) { return std::to_string(x); }
  static std::string cell(unsigned x) { return std::to_string(x); }
  static std::string cell(unsigned long x) { return std::to_string(x); }
  static std::string cell(unsigned long long x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "true" : "false"; }
};

void write_csv(std::ostream& out, const Table& table);

struct Check {
  std::string name;
  double value = 0.0;
  std::string criterion;  ///< human-readable threshold, e.g. "< 1e-12"
  bool pass = false;
};

/// A figure: columns x, y, yerr of a table plus an optional reference curve.
struct Figure {
  std::string name;
  std::string table;
  std::string x;
  std::string y;
  std::string yerr;  ///< may be empty
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  nlohmann::ordered_json reference;  ///< e.g. {"kind": "power", "slope": -0.15}
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json config;  ///< echo of the configuration
  std::vector<Table> tables;
  nlohmann::ordered_json fits = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  std::vector<Figure> figures;
  /// Extra output files (plain file name, raw bytes), e.g. field snapshots.
  std::vector<std::pair<std::string, std::string>> attachments;

  bool passed() const noexcept;
  const Table* find_table(const std::string& name) const noexcept;
  nlohmann::ordered_json summary() const;
};

/// Write `content` to `path` via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes <table>.csv for every table, the attachments and summary.json into `dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// Writes plot_<figure>.csv (x, y, yerr) for each figure and plot_manifest.json.
void emit_plotdata(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace ridk
