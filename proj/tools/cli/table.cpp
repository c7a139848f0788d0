#include "cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "mcdelay/errors.hpp"

namespace mcdelay::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table::add_row: " + std::to_string(row.size()) + " cells for " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column_index(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column '" + name + "' is not numeric");
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", d);
  return buf;
}

namespace {

nlohmann::ordered_json to_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  if (!std::isfinite(d)) return format_cell(c);
  // Round-trip through the CSV formatting so both outputs carry the same digits.
  return std::stod(format_cell(c));
}

std::string render_csv(const Table& t) {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& c : t.columns) {
    sep();
    out << c;
  }
  for (const auto& [k, v] : t.params) {
    sep();
    out << k;
  }
  out << '\n';
  for (const auto& row : t.rows) {
    first = true;
    for (const auto& c : row) {
      sep();
      out << format_cell(c);
    }
    for (const auto& [k, v] : t.params) {
      sep();
      out << format_cell(v);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json doc;
  doc["command"] = t.command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.params) params[k] = to_json(v);
  doc["params"] = params;
  nlohmann::ordered_json cols = nlohmann::ordered_json::object();
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) arr.push_back(to_json(row[j]));
    cols[t.columns[j]] = arr;
  }
  doc["columns"] = cols;
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render(const Table& t, Format f) {
  return f == Format::Csv ? render_csv(t) : render_json(t);
}

}  // namespace mcdelay::cli
