#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace bosemix {

// 17 significant digits in scientific notation; "nan" for withheld values.
std::string format_number(double x);

using Cell = std::variant<double, std::int64_t, bool, std::string>;

// Row-oriented table with a fixed header. CSV and JSON views hold the same
// values (JSON doubles round-trip exactly).
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace bosemix
