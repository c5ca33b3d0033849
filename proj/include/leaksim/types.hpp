#pragma once

// Core value types shared by every module. All of them are plain immutable
// values once built; nothing here owns threads or mutable caches.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace leaksim {

enum class RegionLevel { country, us_state, cn_province, aggregate };

/// Grid sources come first so they can index a fixed array; methane is only
/// ever an off-grid source.
enum class EnergySource {
  coal,
  gas,
  other_fossil,
  solar,
  wind,
  nuclear,
  hydro,
  other_renewable,
  methane,
};

inline constexpr std::size_t kGridSourceCount = 8;

inline constexpr std::array<EnergySource, kGridSourceCount> kGridSources = {
    EnergySource::coal,  EnergySource::gas,     EnergySource::other_fossil,
    EnergySource::solar, EnergySource::wind,    EnergySource::nuclear,
    EnergySource::hydro, EnergySource::other_renewable,
};

enum class Supply { grid, offgrid };

/// What the methane would have done without the miner.
enum class Counterfactual { none, vented, flared };

enum class Basis { pog, lca };

std::string_view to_string(RegionLevel level) noexcept;
std::string_view to_string(EnergySource source) noexcept;
std::string_view to_string(Supply supply) noexcept;
std::string_view to_string(Counterfactual cf) noexcept;
std::string_view to_string(Basis basis) noexcept;

std::optional<RegionLevel> parse_region_level(std::string_view text) noexcept;
std::optional<EnergySource> parse_source(std::string_view text) noexcept;
std::optional<Supply> parse_supply(std::string_view text) noexcept;
std::optional<Counterfactual> parse_counterfactual(std::string_view text) noexcept;
std::optional<Basis> parse_basis(std::string_view text) noexcept;

constexpr bool is_grid_source(EnergySource s) noexcept {
  return s != EnergySource::methane;
}

struct Region {
  std::string id;
  std::string name;
  RegionLevel level = RegionLevel::country;
  std::optional<std::string> parent;
  std::optional<std::string> iso_code;
};

/// A slice of global hash rate. `share` is a fraction of the whole network.
struct HashRateEntry {
  std::string region_id;
  double share = 0.0;
  Supply supply = Supply::grid;
  std::optional<EnergySource> source;  // off-grid only
  Counterfactual counterfactual = Counterfactual::none;  // methane only

  /// Identity of an entry within an atlas, ignoring its share.
  auto key() const {
    return std::tuple(std::string_view(region_id), supply,
                      source.value_or(EnergySource::coal), source.has_value(),
                      counterfactual);
  }
};

/// Canonical entry order: region id, then supply kind, then source.
bool entry_less(const HashRateEntry& a, const HashRateEntry& b) noexcept;

struct Atlas {
  std::vector<HashRateEntry> entries;
  std::string as_of;
  std::string row_region_id = "ROW";

  double total_share() const noexcept;
};

/// Sort entries into canonical order so that every downstream summation runs
/// in the same sequence regardless of how the atlas was assembled.
Atlas canonicalize(Atlas atlas);

struct GridMix {
  std::string region_id;
  std::array<double, kGridSourceCount> shares{};

  double share(EnergySource s) const { return shares.at(static_cast<std::size_t>(s)); }
};

/// A published grid emission factor that bypasses mix decomposition.
struct DirectIntensity {
  std::string region_id;
  double pog = 0.0;
  std::optional<double> lca;
};

/// Per-source intensities in g CO2eq/kWh.
struct IntensityTable {
  std::array<double, kGridSourceCount> pog{};
  std::array<double, kGridSourceCount> lca{};
  double methane_flared = 0.0;
  double methane_vented = 0.0;

  /// Ember point-of-generation and life-cycle factors, plus the methane
  /// counterfactual credits.
  static IntensityTable standard() noexcept;

  double grid_source(EnergySource s, Basis basis) const;
};

/// One row of a result table in the fixture layout: label columns followed
/// by full/limited effectiveness deltas under each basis.
struct TableRow {
  std::string region_id;  // not printed; empty for fixture rows
  std::vector<std::string> labels;
  double full_lca = 0.0;
  double full_pog = 0.0;
  double limited_lca = 0.0;
  double limited_pog = 0.0;
};

struct ResultTable {
  std::vector<std::string> label_columns;
  std::vector<TableRow> rows;
};

inline constexpr std::array<std::string_view, 4> kValueColumns = {
    "Full_LCA", "Full_POG", "Limited_LCA", "Limited_POG"};

}  // namespace leaksim
