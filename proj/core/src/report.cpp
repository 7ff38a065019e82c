#include "ridk/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ridk/errors.hpp"

namespace ridk {

namespace {

bool safe_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

void require_safe(const std::string& name) {
  if (!safe_name(name)) throw ConfigError("output name '" + name + "' is not a plain file stem");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Table::Table(std::string name_, std::vector<std::string> columns_)
    : name(std::move(name_)), columns(std::move(columns_)) {}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << csv_field(table.columns[c]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
    out << "\r\n";
  }
}

bool ExperimentReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Table* ExperimentReport::find_table(const std::string& name) const noexcept {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

nlohmann::ordered_json ExperimentReport::summary() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config"] = config;
  j["fits"] = fits;
  auto checks_json = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name}, {"value", c.value}, {"criterion", c.criterion}, {"pass", c.pass}});
  }
  j["checks"] = checks_json;
  auto tables_json = nlohmann::ordered_json::array();
  for (const auto& t : tables) {
    tables_json.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"rows", t.rows.size()}});
  }
  j["tables"] = tables_json;
  j["passed"] = passed();
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& table : report.tables) {
    require_safe(table.name);
    std::ostringstream csv;
    write_csv(csv, table);
    write_file_atomic(dir / (table.name + ".csv"), csv.str());
  }
  for (const auto& [name, bytes] : report.attachments) {
    const auto dot = name.find('.');
    require_safe(name.substr(0, dot));
    if (dot != std::string::npos) require_safe(name.substr(dot + 1));
    write_file_atomic(dir / name, bytes);
  }
  write_file_atomic(dir / "summary.json", report.summary().dump(2) + "\n");
}

void emit_plotdata(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto figures = nlohmann::ordered_json::array();
  for (const auto& fig : report.figures) {
    require_safe(fig.name);
    const Table* table = report.find_table(fig.table);
    if (table == nullptr) throw ConfigError("figure '" + fig.name + "' refers to a missing table");
    auto column = [&](const std::string& name) -> std::ptrdiff_t {
      if (name.empty()) return -1;
      const auto it = std::find(table->columns.begin(), table->columns.end(), name);
      if (it == table->columns.end()) throw ConfigError("figure column '" + name + "' missing");
      return it - table->columns.begin();
    };
    const auto cx = column(fig.x);
    const auto cy = column(fig.y);
    const auto ce = column(fig.yerr);
    Table plot("plot_" + fig.name, {"x", "y", "yerr"});
    for (const auto& row : table->rows) {
      plot.rows.push_back({row[static_cast<std::size_t>(cx)], row[static_cast<std::size_t>(cy)],
                           ce < 0 ? std::string("0") : row[static_cast<std::size_t>(ce)]});
    }
    std::ostringstream csv;
    write_csv(csv, plot);
    write_file_atomic(dir / (plot.name + ".csv"), csv.str());

    nlohmann::ordered_json entry;
    entry["name"] = fig.name;
    entry["file"] = plot.name + ".csv";
    entry["x"] = {{"label", fig.x_label}, {"log", fig.log_x}};
    entry["y"] = {{"label", fig.y_label}, {"log", fig.log_y}};
    entry["reference"] = fig.reference;
    figures.push_back(std::move(entry));
  }
  nlohmann::ordered_json manifest;
  manifest["experiment"] = report.experiment;
  manifest["figures"] = figures;
  write_file_atomic(dir / "plot_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace ridk
