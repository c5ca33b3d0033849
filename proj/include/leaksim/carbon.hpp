#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leaksim/types.hpp"

namespace leaksim {

/// Everything needed to turn an atlas entry into g CO2eq/kWh.
struct CarbonInputs {
  IntensityTable table = IntensityTable::standard();
  std::map<std::string, GridMix, std::less<>> mixes;
  std::map<std::string, DirectIntensity, std::less<>> direct;
  /// Explicit ROW intensities; when absent a "ROW" mix is used, then the
  /// hash-weighted average over the atlas's other grid entries.
  std::optional<double> row_pog;
  std::optional<double> row_lca;

  void add(const GridMix& mix) { mixes.insert_or_assign(mix.region_id, mix); }
  void add(const DirectIntensity& d) { direct.insert_or_assign(d.region_id, d); }
};

double grid_intensity(const GridMix& mix, Basis basis, const IntensityTable& table);

/// Throws missing_counterfactual for Counterfactual::none.
double methane_counterfactual_intensity(Counterfactual cf, const IntensityTable& table);

/// Intensity of the region's grid. `row_fallback` supplies the ROW value when
/// the inputs carry none. Throws missing_intensity.
double region_grid_intensity(std::string_view region_id, const CarbonInputs& inputs,
                             Basis basis, std::string_view row_region_id = "ROW",
                             std::optional<double> row_fallback = std::nullopt);

double entry_intensity(const HashRateEntry& entry, const CarbonInputs& inputs,
                       Basis basis, std::string_view row_region_id = "ROW",
                       std::optional<double> row_fallback = std::nullopt);

/// Share-weighted mean grid intensity of every non-ROW grid entry.
double row_average_intensity(const Atlas& atlas, const CarbonInputs& inputs, Basis basis);

/// Intensity of every atlas entry, in entry order.
std::vector<double> resolve_intensities(const Atlas& atlas, const CarbonInputs& inputs,
                                        Basis basis);

/// Direct-factor regions whose LCA value is borrowed from their POG value.
std::vector<std::string> lca_fallback_regions(const Atlas& atlas,
                                              const CarbonInputs& inputs);

/// Thousand tonnes CO2eq per year. 1 TWh at 1 g/kWh is exactly 1 kt.
constexpr double entry_emissions_kt(double energy_twh, double share,
                                    double intensity_g_per_kwh) noexcept {
  return energy_twh * share * intensity_g_per_kwh;
}

struct EmissionsLedger {
  Basis basis = Basis::pog;
  double energy_twh = 0.0;
  std::map<std::string, double> per_region_kt;
  double global_kt = 0.0;
  std::vector<std::string> lca_fallback_regions;
};

/// Entries are summed per region in canonical entry order and regions in id
/// order, so the ledger is bitwise reproducible.
EmissionsLedger baseline_emissions(const Atlas& atlas, double energy_twh, Basis basis,
                                   const CarbonInputs& inputs);

}  // namespace leaksim
