#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace leaksim::csv {

/// A parsed CSV document: header plus rows, cells trimmed of surrounding
/// whitespace. Quoted cells may contain commas and doubled quotes.
class Document {
 public:
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name, std::string_view context) const;
};

Document read(std::istream& in);

/// Strict decimal parse of a whole cell, ignoring surrounding blanks; rejects
/// trailing junk, empty cells and thousands separators.
std::optional<double> parse_number(std::string_view cell);

std::string trim(std::string_view s);

/// Quote a cell if it contains a comma, quote or newline.
std::string escape(std::string_view cell);

}  // namespace leaksim::csv
