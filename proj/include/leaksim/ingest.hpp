#pragma once

// Parsers for every external dataset. Each parser takes a stream so tests can
// feed literal text; the *_file overloads open a path and tag I/O failures.
//
// Parsers reject malformed input instead of repairing it. The one exception is
// hash-rate snapshot drift of at most 1e-6, which is renormalized and reported
// back to the caller through Snapshot::renormalized.

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "leaksim/error.hpp"
#include "leaksim/registry.hpp"
#include "leaksim/types.hpp"

namespace leaksim {

/// Country-keyed hash-rate shares. `post_cbeci_adjusted` tags a snapshot that
/// already went through the China/Kazakhstan update.
struct Snapshot {
  std::map<std::string, double> shares;
  bool post_cbeci_adjusted = false;
  double input_sum = 1.0;
  bool renormalized = false;
};

inline constexpr double kSnapshotDriftTolerance = 1e-6;
inline constexpr double kMixSumTolerance = 1e-6;

enum class GridSchema { country, us_state, cn_province };

struct GridMixSet {
  std::vector<GridMix> mixes;
  std::vector<DirectIntensity> direct;
};

struct HashrateThs {
  double value;
};
struct PowerMw {
  double value;
};
using FacilityCapacity = std::variant<HashrateThs, PowerMw>;

struct Facility {
  std::string facility_id;
  std::string region_id;
  FacilityCapacity capacity;
  EnergySource source = EnergySource::hydro;
  Counterfactual counterfactual = Counterfactual::none;
  std::string start_date;  // ISO yyyy-mm-dd
};

struct Equipment {
  std::string model;
  double efficiency_j_per_th = 0.0;
};

struct NetworkParams {
  double hashrate_ths = 0.0;
  double subsidy_btc_per_block = 0.0;
  double fees_btc_per_block = 0.0;
  double btc_price_usd = 0.0;
  double electricity_price_usd_per_kwh = 0.0;
  double pue = 1.0;
  double blocks_per_day = 144.0;
  double profitability_threshold = 1.0;  // cost/revenue ceiling
};

/// Throws invalid_argument when a field is out of its domain.
void validate(const NetworkParams& params);

enum class TableId { I, II, III, IV };

std::string_view to_string(TableId id) noexcept;
std::optional<TableId> parse_table_id(std::string_view text) noexcept;

struct FixtureTable {
  TableId id = TableId::I;
  ResultTable table;
};

/// country_id -> leaf_id -> weight
using LeafWeights = std::map<std::string, std::map<std::string, double>>;

Snapshot parse_hashrate_snapshot(std::istream& in);
GridMixSet parse_grid_mix(std::istream& in, GridSchema schema);
std::vector<Facility> parse_facilities(std::istream& in);
std::vector<Equipment> parse_equipment(std::istream& in);
NetworkParams parse_network_params(std::istream& in);
FixtureTable parse_fixture(std::istream& in, TableId id);
LeafWeights parse_leaf_weights(std::istream& in);
std::vector<Region> parse_regions(std::istream& in);
std::vector<GroupMembership> parse_groups(std::istream& in);
IntensityTable parse_intensity_table(std::istream& in);

/// Flat `key = value` text, '#' starts a comment. Used for network params and
/// dataset configuration.
std::map<std::string, std::string> parse_key_values(std::istream& in);

std::ifstream open_input(const std::filesystem::path& path);

/// Facility start dates are compared as validated ISO dates.
bool is_iso_date(std::string_view text) noexcept;

/// Opens `path` and runs `parser` over it, prefixing errors with the path.
template <typename Parser>
auto parse_file(const std::filesystem::path& path, Parser&& parser) {
  auto in = open_input(path);
  try {
    return parser(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

/// table_I.csv .. table_IV.csv from `dir`.
std::vector<FixtureTable> load_fixture_dir(const std::filesystem::path& dir);

}  // namespace leaksim
