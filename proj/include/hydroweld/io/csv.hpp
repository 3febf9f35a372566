#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace hydroweld::io {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Header row plus rows of numbers or text. Numbers are written at full
/// precision; text cells are quoted only when needed.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace hydroweld::io
