#pragma once

#include <filesystem>
#include <optional>

#include "leaksim/carbon.hpp"
#include "leaksim/power.hpp"
#include "leaksim/registry.hpp"
#include "leaksim/types.hpp"

namespace leaksim {

/// An immutable, fully resolved dataset as served by the CLI and HTTP API.
///
/// Directory layout (all CSV unless noted):
///   regions.csv            required
///   groups.csv             optional coalitions
///   atlas.json             required, as written by `leaksim ingest`
///   intensity_table.csv    optional, standard factors otherwise
///   grid/country.csv, grid/us_state.csv, grid/cn_province.csv   optional
///   dataset.conf           optional key = value: energy_twh, row_intensity_pog,
///                          row_intensity_lca
///   network_params.txt + equipment.csv   used for energy when energy_twh is unset
struct Dataset {
  std::filesystem::path root;
  RegionRegistry registry;
  Atlas atlas;
  CarbonInputs carbon;
  double energy_twh = 0.0;
  std::optional<PowerEstimate> power;
};

Dataset load_dataset(const std::filesystem::path& dir);

/// Load the grid/ directory files that exist into `inputs`.
void load_grid_dir(const std::filesystem::path& dir, CarbonInputs& inputs);

}  // namespace leaksim
