#ifndef TRPAPR_TABLE_HPP
#define TRPAPR_TABLE_HPP

// Column-named result tables, written as CSV or as a JSON array of records
// with the same field names.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace trpapr {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline void write_csv(std::ostream& out, const Table& t) {
  const auto old = out.precision(17);
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit([&](const auto& v) { out << v; }, row[c]);
    }
    out << '\n';
  }
  out.precision(old);
}

inline nlohmann::ordered_json to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) {
      std::visit([&](const auto& v) { rec[t.columns[c]] = v; }, row[c]);
    }
    arr.push_back(std::move(rec));
  }
  return arr;
}

inline void write_json(std::ostream& out, const Table& t) { out << to_json(t).dump(2) << '\n'; }

}  // namespace trpapr

#endif  // TRPAPR_TABLE_HPP
