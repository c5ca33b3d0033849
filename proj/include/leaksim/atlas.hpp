#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "leaksim/ingest.hpp"
#include "leaksim/power.hpp"
#include "leaksim/registry.hpp"

namespace leaksim {

/// China is pinned to a fixed share and Kazakhstan scaled down; the mass this
/// frees (or draws) is spread over every other snapshot region in proportion
/// to its own share.
struct CbeciUpdateRule {
  std::string china_id = "CN";
  std::string kazakhstan_id = "KZ";
  double china_share = 0.15;
  double kazakhstan_factor = 0.5;
};

/// One-shot: an input already tagged post_cbeci_adjusted skips the
/// Kazakhstan scaling (the China pin is then a no-op if already applied).
/// Errors: missing_region, not_normalized, no_destination.
Snapshot apply_post_cbeci_adjustments(const Snapshot& snapshot,
                                      const CbeciUpdateRule& rule = {});

/// Hash share represented by a facility, using the network hash rate for
/// TH/s capacities and best-guess network power for MW capacities.
double facility_share(const Facility& facility, const PowerEstimate& power);

/// Overlay the facility registry on a country-level snapshot.
///
/// Facilities are compared with the snapshot per country (leaf facilities
/// count toward their parent). Where the facility total exceeds the snapshot
/// the country becomes entirely off-grid and the excess is taken from the ROW
/// entry; otherwise the remainder stays a country-level grid entry. Facilities
/// starting after `as_of` are ignored.
Atlas merge_facilities(const Snapshot& shares, std::span<const Facility> facilities,
                       const PowerEstimate& power, const RegionRegistry& registry,
                       std::string as_of);

/// Replace `country`'s grid entry by leaf grid entries weighted by
/// `leaf_weights`. Off-grid entries are left where they are.
Atlas distribute_national_to_leaves(const Atlas& atlas, std::string_view country,
                                    const std::map<std::string, double>& leaf_weights,
                                    const RegionRegistry& registry);

inline constexpr double kLeafWeightTolerance = 1e-6;

struct AtlasInputs {
  Snapshot snapshot;
  std::vector<Facility> facilities;
  LeafWeights leaf_weights;
  PowerEstimate power;
  std::string as_of;
  CbeciUpdateRule rule;
};

/// Full pipeline: update rule, facility merge, then sub-national breakdown
/// for every country listed in the leaf weights.
Atlas build_atlas(const AtlasInputs& inputs, const RegionRegistry& registry);

nlohmann::json atlas_to_json(const Atlas& atlas);
Atlas atlas_from_json(const nlohmann::json& doc, std::string row_region_id = "ROW");

}  // namespace leaksim
