#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mcdelay::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

/// Column-oriented result of one command. `params` holds the resolved
/// parameter set; CSV repeats it on every row, JSON stores it once.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> params;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string format_cell(const Cell& c);
std::string render(const Table& t, Format f);

}  // namespace mcdelay::cli
