#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "leaksim/ingest.hpp"
#include "leaksim/registry.hpp"
#include "leaksim/types.hpp"

namespace leaksim {

enum class TableFormat { csv, json };

/// Two decimals, rounded half away from zero, no grouping, never "-0.00".
std::string format_fixed2(double value);

std::string emit_table(const ResultTable& table, TableFormat format);

struct MapDatum {
  std::string region_id;
  double delta_kt = 0.0;
};

/// |delta| at or below this prints as 0.00 and is classed neutral.
inline constexpr double kNeutralBandKt = 0.005;

std::string_view map_class(double delta_kt) noexcept;

/// Choropleth join rows. `percent` is null when the baseline is not positive.
nlohmann::json emit_map_data(std::span<const MapDatum> rows, const RegionRegistry& registry,
                             double baseline_kt);

/// Throws non_positive_baseline.
double percent_of_global(double delta_kt, double baseline_kt);

inline constexpr double kFixtureTolerance = 0.01;

struct FixtureFinding {
  TableId table = TableId::I;
  std::string row;
  std::string message;
};

/// Limited columns must be half the full ones within print rounding; the
/// one-off table must also be non-negative.
std::vector<FixtureFinding> check_fixtures(std::span<const FixtureTable> fixtures);

}  // namespace leaksim
