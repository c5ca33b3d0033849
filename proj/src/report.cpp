#include "leaksim/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "leaksim/csv.hpp"
#include "leaksim/error.hpp"

namespace leaksim {

std::string format_fixed2(double value) {
  if (!std::isfinite(value)) return value != value ? "nan" : (value > 0 ? "inf" : "-inf");

  // Round the shortest decimal that reproduces the double, so 848.145 prints
  // as 848.15 even though its binary value sits just below the half.
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(value), std::chars_format::fixed);
  std::string digits(buf, res.ptr);
  auto dot = digits.find('.');
  if (dot == std::string::npos) {
    digits += ".";
    dot = digits.size() - 1;
  }
  digits.append(3, '0');
  const bool round_up = digits[dot + 3] >= '5';
  digits.resize(dot + 3);

  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    for (; i >= 0; --i) {
      if (digits[i] == '.') continue;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
    }
    if (i < 0) digits.insert(digits.begin(), '1');
  }
  const bool zero = digits.find_first_not_of("0.") == std::string::npos;
  return (value < 0 && !zero ? "-" : "") + digits;
}

std::string emit_table(const ResultTable& table, TableFormat format) {
  if (format == TableFormat::json) {
    auto doc = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t c = 0; c < table.label_columns.size(); ++c) {
        obj[table.label_columns[c]] = c < row.labels.size() ? row.labels[c] : "";
      }
      const double values[] = {row.full_lca, row.full_pog, row.limited_lca, row.limited_pog};
      for (std::size_t c = 0; c < kValueColumns.size(); ++c) {
        obj[std::string(kValueColumns[c])] = std::stod(format_fixed2(values[c]));
      }
      doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  bool first = true;
  for (const auto& col : table.label_columns) {
    out << (first ? "" : ",") << csv::escape(col);
    first = false;
  }
  for (auto col : kValueColumns) {
    out << (first ? "" : ",") << col;
    first = false;
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.label_columns.size(); ++c) {
      out << csv::escape(c < row.labels.size() ? row.labels[c] : "") << ',';
    }
    out << format_fixed2(row.full_lca) << ',' << format_fixed2(row.full_pog) << ','
        << format_fixed2(row.limited_lca) << ',' << format_fixed2(row.limited_pog) << '\n';
  }
  return out.str();
}

std::string_view map_class(double delta_kt) noexcept {
  if (std::abs(delta_kt) <= kNeutralBandKt) return "neutral";
  return delta_kt > 0.0 ? "backfire" : "effective";
}

nlohmann::json emit_map_data(std::span<const MapDatum> rows, const RegionRegistry& registry,
                             double baseline_kt) {
  auto doc = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto* region = registry.find(row.region_id);
    nlohmann::json iso = nullptr;
    if (region != nullptr && region->iso_code) iso = *region->iso_code;
    nlohmann::json percent = nullptr;
    if (baseline_kt > 0.0) percent = percent_of_global(row.delta_kt, baseline_kt);
    doc.push_back({{"region_id", row.region_id},
                   {"iso_code", iso},
                   {"delta_kt", row.delta_kt},
                   {"percent", percent},
                   {"class", map_class(row.delta_kt)}});
  }
  return doc;
}

double percent_of_global(double delta_kt, double baseline_kt) {
  if (!(baseline_kt > 0.0)) {
    throw Error(ErrorCode::non_positive_baseline, "baseline emissions must be positive");
  }
  return 100.0 * delta_kt / baseline_kt;
}

namespace {

// Fixture cells are two-decimal values; this absorbs binary representation
// noise in |limited - full/2| without widening the printed tolerance.
constexpr double kRepresentationSlack = 1e-9;

std::string row_name(const TableRow& row) {
  std::string s;
  for (const auto& l : row.labels) {
    if (l.empty() || l == "-") continue;
    if (!s.empty()) s += " / ";
    s += l;
  }
  return s;
}

}  // namespace

std::vector<FixtureFinding> check_fixtures(std::span<const FixtureTable> fixtures) {
  std::vector<FixtureFinding> out;
  for (const auto& fx : fixtures) {
    for (const auto& row : fx.table.rows) {
      auto half = [&](double full, double limited, std::string_view basis) {
        const double gap = std::abs(limited - full / 2.0);
        if (gap > kFixtureTolerance + kRepresentationSlack) {
          out.push_back({fx.id, row_name(row),
                         std::string(basis) + " limited " + format_fixed2(limited) +
                             " differs from half of full " + format_fixed2(full)});
        }
      };
      half(row.full_lca, row.limited_lca, "LCA");
      half(row.full_pog, row.limited_pog, "POG");
      if (fx.id == TableId::IV) {
        const double values[] = {row.full_lca, row.full_pog, row.limited_lca, row.limited_pog};
        for (std::size_t c = 0; c < 4; ++c) {
          if (values[c] < 0.0) {
            out.push_back({fx.id, row_name(row),
                           std::string(kValueColumns[c]) + " is negative: " +
                               format_fixed2(values[c])});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace leaksim
