#include "leaksim/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "leaksim/error.hpp"

namespace leaksim {

void validate(const Scenario& scenario, const RegionRegistry& registry) {
  if (scenario.banned_regions.empty()) {
    throw Error(ErrorCode::invalid_argument, "ban set is empty");
  }
  if (!(scenario.effectiveness >= 0.0 && scenario.effectiveness <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "effectiveness must lie in [0, 1]");
  }
  if (!(scenario.suppression_months >= 0.0) || !std::isfinite(scenario.suppression_months)) {
    throw Error(ErrorCode::invalid_argument, "suppression_months must be non-negative");
  }
  for (const auto& id : scenario.banned_regions) registry.at(id);
}

kernels::BanMask ban_mask(const Atlas& atlas, const std::set<std::string>& banned,
                          const RegionRegistry& registry) {
  kernels::BanMask mask(atlas.entries.size(), 0);
  for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
    const auto& id = atlas.entries[i].region_id;
    for (const auto& b : banned) {
      if (registry.covers(b, id)) {
        mask[i] = 1;
        break;
      }
    }
  }
  return mask;
}

Atlas apply_ban(const Atlas& atlas, const Scenario& scenario, const RegionRegistry& registry) {
  validate(scenario, registry);
  Atlas out = canonicalize(atlas);
  const auto mask = ban_mask(out, scenario.banned_regions, registry);

  double banned = 0.0;
  double rest = 0.0;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    (mask[i] ? banned : rest) += out.entries[i].share;
  }
  if (banned > 0.0 && !(rest > 0.0)) {
    throw Error(ErrorCode::no_destination,
                "ban covers all hash rate: nowhere for it to relocate");
  }
  const double e = scenario.effectiveness;
  const double moved = e * banned;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& s = out.entries[i].share;
    if (mask[i]) {
      s *= 1.0 - e;
    } else if (moved > 0.0) {
      s += s * moved / rest;
    }
  }
  return out;
}

namespace {

struct Prepared {
  Atlas atlas;
  kernels::EntryColumns columns;
  kernels::BanMask mask;
};

Prepared prepare(const Atlas& atlas, const Scenario& scenario, const CarbonInputs& inputs,
                 const RegionRegistry& registry) {
  validate(scenario, registry);
  Prepared p;
  p.atlas = canonicalize(atlas);
  // Intensities are fixed by the pre-ban atlas: receivers keep their own.
  const auto intensity = resolve_intensities(p.atlas, inputs, scenario.basis);
  p.columns = kernels::make_columns(p.atlas, intensity);
  p.mask = ban_mask(p.atlas, scenario.banned_regions, registry);
  return p;
}

std::optional<double> rate_of(const kernels::UnitBan& unit, double effectiveness) {
  if (effectiveness == 0.0 || !(unit.removed > 0.0)) return std::nullopt;
  return unit.gained / unit.removed;
}

}  // namespace

ScenarioResult evaluate(const Atlas& atlas, double energy_twh, const Scenario& scenario,
                        const CarbonInputs& inputs, const RegionRegistry& registry) {
  const auto p = prepare(atlas, scenario, inputs, registry);
  const auto unit = kernels::unit_ban(p.columns, p.mask);
  const double e = scenario.effectiveness;

  ScenarioResult r;
  r.baseline_kt = baseline_emissions(p.atlas, energy_twh, scenario.basis, inputs).global_kt;
  r.delta_kt_per_year = e * (energy_twh * unit.total);
  for (std::size_t k = 0; k < unit.region_delta.size(); ++k) {
    r.per_region_delta[p.columns.region_ids[k]] = e * (energy_twh * unit.region_delta[k]);
  }
  if (r.baseline_kt > 0.0) r.percent_of_baseline = 100.0 * r.delta_kt_per_year / r.baseline_kt;
  r.one_off_avoidance_kt = (scenario.suppression_months / 12.0) * e * (energy_twh * unit.removed);
  r.leakage_rate = rate_of(unit, e);
  r.post_atlas = apply_ban(p.atlas, scenario, registry);
  return r;
}

double one_off_avoidance(const Atlas& atlas, double energy_twh, const Scenario& scenario,
                         const CarbonInputs& inputs, const RegionRegistry& registry) {
  const auto p = prepare(atlas, scenario, inputs, registry);
  double removed = 0.0;
  for (std::size_t i = 0; i < p.mask.size(); ++i) {
    if (p.mask[i]) removed += p.columns.share[i] * p.columns.intensity[i];
  }
  return (scenario.suppression_months / 12.0) * scenario.effectiveness * (energy_twh * removed);
}

std::optional<double> leakage_rate(const Atlas& atlas, const Scenario& scenario,
                                   const CarbonInputs& inputs,
                                   const RegionRegistry& registry) {
  const auto p = prepare(atlas, scenario, inputs, registry);
  return rate_of(kernels::unit_ban(p.columns, p.mask), scenario.effectiveness);
}

std::set<std::string> resolve_group(std::string_view group_id, const RegionRegistry& registry) {
  const auto it = registry.groups().find(group_id);
  if (it == registry.groups().end()) {
    throw Error(ErrorCode::unknown_group, "unknown group '" + std::string(group_id) + "'");
  }
  return {it->second.begin(), it->second.end()};
}

std::optional<SweepLevel> parse_sweep_level(std::string_view text) noexcept {
  if (text == "country") return SweepLevel::country;
  if (text == "us-state" || text == "us_state") return SweepLevel::us_state;
  if (text == "cn-province" || text == "cn_province") return SweepLevel::cn_province;
  return std::nullopt;
}

namespace {

RegionLevel region_level(SweepLevel level) {
  switch (level) {
    case SweepLevel::country: return RegionLevel::country;
    case SweepLevel::us_state: return RegionLevel::us_state;
    case SweepLevel::cn_province: return RegionLevel::cn_province;
  }
  return RegionLevel::country;
}

struct SweepUnit {
  std::string id;
  std::string label;
  kernels::BanMask mask;
};

}  // namespace

ResultTable sweep_single_bans(const Atlas& atlas, double energy_twh, SweepLevel level,
                              const CarbonInputs& inputs, const RegionRegistry& registry,
                              const SweepOptions& options) {
  const Atlas canonical = canonicalize(atlas);

  std::vector<SweepUnit> units;
  for (const auto& id : registry.ids_at_level(region_level(level))) {
    auto mask = ban_mask(canonical, {id}, registry);
    if (std::find(mask.begin(), mask.end(), 1) == mask.end()) continue;
    units.push_back({id, registry.at(id).name, std::move(mask)});
  }
  if (level == SweepLevel::country) {
    for (const auto& group : options.groups) {
      if (!registry.groups().contains(group)) continue;
      units.push_back({group, registry.group_display_name(group),
                       ban_mask(canonical, resolve_group(group, registry), registry)});
    }
  }

  std::vector<kernels::BanMask> masks;
  masks.reserve(units.size());
  for (const auto& u : units) masks.push_back(u.mask);

  auto totals_for = [&](Basis basis) {
    const auto intensity = resolve_intensities(canonical, inputs, basis);
    const auto columns = kernels::make_columns(canonical, intensity);
    return options.execution == Execution::parallel
               ? kernels::sweep_totals_parallel(columns, masks)
               : kernels::sweep_totals_serial(columns, masks);
  };
  const auto lca = totals_for(Basis::lca);
  const auto pog = totals_for(Basis::pog);

  ResultTable table;
  table.label_columns = {level == SweepLevel::country ? "Country" : "State"};
  for (std::size_t k = 0; k < units.size(); ++k) {
    TableRow row;
    row.region_id = units[k].id;
    row.labels = {units[k].label};
    row.full_lca = 1.0 * (energy_twh * lca[k]);
    row.full_pog = 1.0 * (energy_twh * pog[k]);
    row.limited_lca = kLimitedEffectiveness * (energy_twh * lca[k]);
    row.limited_pog = kLimitedEffectiveness * (energy_twh * pog[k]);
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const TableRow& a, const TableRow& b) {
    if (a.full_lca != b.full_lca) return a.full_lca > b.full_lca;
    return a.region_id < b.region_id;
  });
  return table;
}

double sum_of_single_bans(const Atlas& atlas, double energy_twh,
                          const std::set<std::string>& members, const Scenario& base,
                          const CarbonInputs& inputs, const RegionRegistry& registry) {
  double sum = 0.0;
  for (const auto& m : members) {
    Scenario single = base;
    single.banned_regions = {m};
    sum += evaluate(atlas, energy_twh, single, inputs, registry).delta_kt_per_year;
  }
  return sum;
}

}  // namespace leaksim
