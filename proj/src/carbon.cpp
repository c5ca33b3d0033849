#include "leaksim/carbon.hpp"

#include <algorithm>
#include <set>

#include "leaksim/error.hpp"

namespace leaksim {

double grid_intensity(const GridMix& mix, Basis basis, const IntensityTable& table) {
  double g = 0.0;
  for (auto source : kGridSources) g += mix.share(source) * table.grid_source(source, basis);
  return g;
}

double methane_counterfactual_intensity(Counterfactual cf, const IntensityTable& table) {
  switch (cf) {
    case Counterfactual::flared: return table.methane_flared;
    case Counterfactual::vented: return table.methane_vented;
    case Counterfactual::none: break;
  }
  throw Error(ErrorCode::missing_counterfactual,
              "methane intensity needs a vented or flared counterfactual");
}

double region_grid_intensity(std::string_view region_id, const CarbonInputs& inputs,
                             Basis basis, std::string_view row_region_id,
                             std::optional<double> row_fallback) {
  if (region_id == row_region_id) {
    const auto& pinned = basis == Basis::pog ? inputs.row_pog : inputs.row_lca;
    if (pinned) return *pinned;
  }
  if (auto it = inputs.direct.find(region_id); it != inputs.direct.end()) {
    const auto& d = it->second;
    return basis == Basis::pog ? d.pog : d.lca.value_or(d.pog);
  }
  if (auto it = inputs.mixes.find(region_id); it != inputs.mixes.end()) {
    return grid_intensity(it->second, basis, inputs.table);
  }
  if (region_id == row_region_id && row_fallback) return *row_fallback;
  throw Error(ErrorCode::missing_intensity,
              "no grid mix or emission factor for region '" + std::string(region_id) + "'");
}

double entry_intensity(const HashRateEntry& entry, const CarbonInputs& inputs, Basis basis,
                       std::string_view row_region_id, std::optional<double> row_fallback) {
  if (entry.supply == Supply::grid) {
    return region_grid_intensity(entry.region_id, inputs, basis, row_region_id, row_fallback);
  }
  if (!entry.source) {
    throw Error(ErrorCode::missing_intensity,
                "off-grid entry in '" + entry.region_id + "' has no energy source");
  }
  if (*entry.source == EnergySource::methane) {
    return methane_counterfactual_intensity(entry.counterfactual, inputs.table);
  }
  return inputs.table.grid_source(*entry.source, basis);
}

double row_average_intensity(const Atlas& atlas, const CarbonInputs& inputs, Basis basis) {
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto& e : atlas.entries) {
    if (e.supply != Supply::grid || e.region_id == atlas.row_region_id) continue;
    weighted += e.share * region_grid_intensity(e.region_id, inputs, basis, atlas.row_region_id);
    weight += e.share;
  }
  if (weight <= 0.0) {
    throw Error(ErrorCode::missing_intensity,
                "cannot derive a rest-of-world intensity: no other grid entries");
  }
  return weighted / weight;
}

std::vector<double> resolve_intensities(const Atlas& atlas, const CarbonInputs& inputs,
                                        Basis basis) {
  const auto& row = atlas.row_region_id;
  const bool row_pinned = (basis == Basis::pog ? inputs.row_pog : inputs.row_lca).has_value() ||
                          inputs.direct.contains(row) || inputs.mixes.contains(row);
  std::optional<double> row_fallback;
  if (!row_pinned) {
    const bool has_row_grid = std::any_of(atlas.entries.begin(), atlas.entries.end(), [&](const auto& e) {
      return e.region_id == row && e.supply == Supply::grid;
    });
    if (has_row_grid) row_fallback = row_average_intensity(atlas, inputs, basis);
  }
  std::vector<double> out;
  out.reserve(atlas.entries.size());
  for (const auto& e : atlas.entries) {
    out.push_back(entry_intensity(e, inputs, basis, row, row_fallback));
  }
  return out;
}

std::vector<std::string> lca_fallback_regions(const Atlas& atlas, const CarbonInputs& inputs) {
  std::set<std::string> out;
  for (const auto& e : atlas.entries) {
    if (e.supply != Supply::grid) continue;
    if (auto it = inputs.direct.find(e.region_id); it != inputs.direct.end() && !it->second.lca) {
      out.insert(e.region_id);
    }
  }
  return {out.begin(), out.end()};
}

EmissionsLedger baseline_emissions(const Atlas& atlas, double energy_twh, Basis basis,
                                   const CarbonInputs& inputs) {
  const Atlas canonical = canonicalize(atlas);
  const auto intensity = resolve_intensities(canonical, inputs, basis);

  EmissionsLedger ledger;
  ledger.basis = basis;
  ledger.energy_twh = energy_twh;
  for (std::size_t i = 0; i < canonical.entries.size(); ++i) {
    const auto& e = canonical.entries[i];
    ledger.per_region_kt[e.region_id] += entry_emissions_kt(energy_twh, e.share, intensity[i]);
  }
  for (const auto& [id, kt] : ledger.per_region_kt) ledger.global_kt += kt;
  if (basis == Basis::lca) ledger.lca_fallback_regions = lca_fallback_regions(canonical, inputs);
  return ledger;
}

}  // namespace leaksim
