#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace mksim {

using Cell = std::variant<std::int64_t, double, std::string>;

// A typed result table plus the campaign metadata needed to trace it back to
// its exact inputs. CSV output carries only the header and the rows, so two
// runs with the same seed produce byte-identical files; seed, digest and
// timestamp go into the side-car metadata writer instead.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
  std::string timestamp;  // ISO-8601 UTC, set at construction

  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> column_names);

  void add_row(std::vector<Cell> row);

  std::string to_csv() const;  // RFC-4180 quoting, '\n' line ends
  void write_csv(const std::filesystem::path& path) const;
};

std::string format_cell(const Cell& cell);
std::string csv_escape(const std::string& field);
std::string current_utc_timestamp();

}  // namespace mksim
