#include "leaksim/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "leaksim/error.hpp"

namespace leaksim {

namespace {

double sum_values(const std::map<std::string, double>& m) {
  double s = 0.0;
  for (const auto& [k, v] : m) s += v;
  return s;
}

}  // namespace

Snapshot apply_post_cbeci_adjustments(const Snapshot& snapshot, const CbeciUpdateRule& rule) {
  const auto cn = snapshot.shares.find(rule.china_id);
  const auto kz = snapshot.shares.find(rule.kazakhstan_id);
  if (cn == snapshot.shares.end() || kz == snapshot.shares.end()) {
    throw Error(ErrorCode::missing_region, "snapshot must contain both '" + rule.china_id +
                                               "' and '" + rule.kazakhstan_id + "'");
  }
  if (std::abs(sum_values(snapshot.shares) - 1.0) > kShareSumTolerance) {
    throw Error(ErrorCode::not_normalized, "snapshot shares do not sum to 1");
  }

  const double new_cn = rule.china_share;
  const double new_kz =
      snapshot.post_cbeci_adjusted ? kz->second : kz->second * rule.kazakhstan_factor;
  const double freed = (cn->second - new_cn) + (kz->second - new_kz);

  double others = 0.0;
  for (const auto& [id, s] : snapshot.shares) {
    if (id != rule.china_id && id != rule.kazakhstan_id) others += s;
  }
  if (freed != 0.0 && others <= 0.0) {
    throw Error(ErrorCode::no_destination, "no other regions to absorb the adjusted share");
  }

  Snapshot out = snapshot;
  out.post_cbeci_adjusted = true;
  for (auto& [id, s] : out.shares) {
    if (id == rule.china_id) {
      s = new_cn;
    } else if (id == rule.kazakhstan_id) {
      s = new_kz;
    } else if (freed != 0.0) {
      s += freed * (s / others);
    }
  }
  for (const auto& [id, s] : out.shares) {
    if (s < 0.0) {
      throw Error(ErrorCode::negative_share, "adjustment drives '" + id + "' negative");
    }
  }
  return out;
}

double facility_share(const Facility& facility, const PowerEstimate& power) {
  if (const auto* ths = std::get_if<HashrateThs>(&facility.capacity)) {
    return ths->value / power.network_hashrate_ths;
  }
  // Facility MW read as wall power, same footing as the network total.
  return std::get<PowerMw>(facility.capacity).value / (power.best_gw * 1000.0);
}

Atlas merge_facilities(const Snapshot& shares, std::span<const Facility> facilities,
                       const PowerEstimate& power, const RegionRegistry& registry,
                       std::string as_of) {
  const auto& row_id = registry.row_id();
  for (const auto& [id, s] : shares.shares) registry.at(id);
  if (!shares.shares.contains(row_id)) {
    throw Error(ErrorCode::missing_region, "snapshot has no '" + row_id + "' entry");
  }
  if (!facilities.empty() && (power.network_hashrate_ths <= 0.0 || power.best_gw <= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "facility merge needs a positive power estimate");
  }

  // Sort a copy so that floating-point sums do not depend on input row order.
  std::vector<const Facility*> active;
  for (const auto& f : facilities) {
    const auto& region = registry.at(f.region_id);
    if (region.level == RegionLevel::aggregate) {
      throw Error(ErrorCode::invalid_argument,
                  "facility '" + f.facility_id + "' sits in aggregate region '" + f.region_id + "'");
    }
    if (!as_of.empty() && f.start_date > as_of) continue;
    active.push_back(&f);
  }
  std::sort(active.begin(), active.end(), [](const Facility* a, const Facility* b) {
    return a->facility_id < b->facility_id;
  });

  struct OffgridKey {
    std::string region;
    EnergySource source;
    Counterfactual cf;
    auto operator<=>(const OffgridKey&) const = default;
  };
  std::map<std::string, std::map<OffgridKey, double>> by_country;
  for (const auto* f : active) {
    const auto& country = registry.top_level_of(f->region_id);
    by_country[country][{f->region_id, f->source, f->counterfactual}] += facility_share(*f, power);
  }

  Atlas atlas;
  atlas.as_of = std::move(as_of);
  atlas.row_region_id = row_id;

  std::set<std::string> countries;
  for (const auto& [id, s] : shares.shares) countries.insert(id);
  for (const auto& [id, m] : by_country) countries.insert(id);

  double row_deduction = 0.0;
  for (const auto& country : countries) {
    if (country == row_id) continue;
    const auto snap_it = shares.shares.find(country);
    const double snapshot_share = snap_it == shares.shares.end() ? 0.0 : snap_it->second;

    double facility_total = 0.0;
    if (auto it = by_country.find(country); it != by_country.end()) {
      for (const auto& [key, s] : it->second) {
        facility_total += s;
        atlas.entries.push_back({key.region, s, Supply::offgrid, key.source, key.cf});
      }
    }
    if (facility_total > snapshot_share) {
      row_deduction += facility_total - snapshot_share;
    } else if (snapshot_share - facility_total > 0.0) {
      atlas.entries.push_back({country, snapshot_share - facility_total, Supply::grid,
                               std::nullopt, Counterfactual::none});
    }
  }

  double row_share = shares.shares.at(row_id) - row_deduction;
  if (row_share < 0.0) {
    if (row_share < -kShareSumTolerance) {
      throw Error(ErrorCode::negative_residual,
                  "facility data exceeds the rest-of-world residual by " +
                      std::to_string(-row_share));
    }
    row_share = 0.0;
  }
  if (row_share > 0.0) {
    atlas.entries.push_back({row_id, row_share, Supply::grid, std::nullopt, Counterfactual::none});
  }
  return canonicalize(std::move(atlas));
}

Atlas distribute_national_to_leaves(const Atlas& atlas, std::string_view country,
                                    const std::map<std::string, double>& leaf_weights,
                                    const RegionRegistry& registry) {
  const auto leaves = registry.children_of(country);
  if (leaves.empty()) {
    throw Error(ErrorCode::no_leaves, "'" + std::string(country) + "' has no leaf regions");
  }
  double weight_sum = 0.0;
  for (const auto& [leaf, w] : leaf_weights) {
    if (std::find(leaves.begin(), leaves.end(), leaf) == leaves.end()) {
      throw Error(ErrorCode::unknown_region,
                  "'" + leaf + "' is not a leaf of '" + std::string(country) + "'");
    }
    if (w < 0.0) throw Error(ErrorCode::negative_share, "negative weight for '" + leaf + "'");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kLeafWeightTolerance) {
    throw Error(ErrorCode::weight_sum, "leaf weights for '" + std::string(country) +
                                           "' sum to " + std::to_string(weight_sum));
  }

  Atlas out;
  out.as_of = atlas.as_of;
  out.row_region_id = atlas.row_region_id;
  double national = 0.0;
  for (const auto& e : atlas.entries) {
    if (e.region_id == country && e.supply == Supply::grid) {
      national += e.share;
    } else {
      out.entries.push_back(e);
    }
  }
  if (national == 0.0) return canonicalize(std::move(out));

  for (const auto& [leaf, w] : leaf_weights) {
    if (w == 0.0) continue;
    const double share = national * (w / weight_sum);
    auto existing = std::find_if(out.entries.begin(), out.entries.end(), [&](const auto& e) {
      return e.region_id == leaf && e.supply == Supply::grid;
    });
    if (existing != out.entries.end()) {
      existing->share += share;
    } else {
      out.entries.push_back({leaf, share, Supply::grid, std::nullopt, Counterfactual::none});
    }
  }
  return canonicalize(std::move(out));
}

Atlas build_atlas(const AtlasInputs& inputs, const RegionRegistry& registry) {
  const auto adjusted = apply_post_cbeci_adjustments(inputs.snapshot, inputs.rule);
  auto atlas = merge_facilities(adjusted, inputs.facilities, inputs.power, registry, inputs.as_of);
  for (const auto& [country, weights] : inputs.leaf_weights) {
    atlas = distribute_national_to_leaves(atlas, country, weights, registry);
  }
  return atlas;
}

nlohmann::json atlas_to_json(const Atlas& atlas) {
  auto doc = nlohmann::json::array();
  for (const auto& e : atlas.entries) {
    doc.push_back({
        {"region_id", e.region_id},
        {"share", e.share},
        {"supply", to_string(e.supply)},
        {"source", e.source ? nlohmann::json(to_string(*e.source)) : nlohmann::json(nullptr)},
        {"counterfactual", to_string(e.counterfactual)},
    });
  }
  return doc;
}

Atlas atlas_from_json(const nlohmann::json& doc, std::string row_region_id) {
  if (!doc.is_array()) throw Error(ErrorCode::parse, "atlas JSON must be an array of entries");
  Atlas atlas;
  atlas.row_region_id = std::move(row_region_id);
  for (const auto& item : doc) {
    try {
      HashRateEntry e;
      e.region_id = item.at("region_id").get<std::string>();
      e.share = item.at("share").get<double>();
      const auto supply = parse_supply(item.at("supply").get<std::string>());
      if (!supply) throw Error(ErrorCode::parse, "bad supply in atlas entry");
      e.supply = *supply;
      if (item.contains("source") && !item["source"].is_null()) {
        const auto s = parse_source(item["source"].get<std::string>());
        if (!s) throw Error(ErrorCode::unknown_source, "bad source in atlas entry");
        e.source = s;
      }
      if (item.contains("counterfactual") && !item["counterfactual"].is_null()) {
        const auto cf = parse_counterfactual(item["counterfactual"].get<std::string>());
        if (!cf) throw Error(ErrorCode::parse, "bad counterfactual in atlas entry");
        e.counterfactual = *cf;
      }
      atlas.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::parse, std::string("atlas entry: ") + ex.what());
    }
  }
  return canonicalize(std::move(atlas));
}

}  // namespace leaksim
