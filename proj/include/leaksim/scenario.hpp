#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "leaksim/carbon.hpp"
#include "leaksim/kernels.hpp"
#include "leaksim/registry.hpp"
#include "leaksim/types.hpp"

namespace leaksim {

/// A ban on one or more jurisdictions. Banning a country bans its leaves.
struct Scenario {
  std::set<std::string> banned_regions;
  double effectiveness = 1.0;  // 1.0 full, 0.5 limited
  Basis basis = Basis::pog;
  double suppression_months = 1.0;
};

/// Throws invalid_argument for an empty ban set or e outside [0, 1], and
/// unknown_region for ids missing from the registry.
void validate(const Scenario& scenario, const RegionRegistry& registry);

struct ScenarioResult {
  double baseline_kt = 0.0;
  double delta_kt_per_year = 0.0;  // positive: the ban backfires
  std::map<std::string, double> per_region_delta;
  std::optional<double> percent_of_baseline;  // absent for a non-positive baseline
  double one_off_avoidance_kt = 0.0;
  std::optional<double> leakage_rate;  // absent means undefined
  Atlas post_atlas;
};

/// Per-entry flag: 1 when the entry's region is covered by the ban.
kernels::BanMask ban_mask(const Atlas& atlas, const std::set<std::string>& banned,
                          const RegionRegistry& registry);

/// Banned entries keep (1 - e) of their share; the removed mass goes to every
/// other entry in proportion to its current share. Throws no_destination.
Atlas apply_ban(const Atlas& atlas, const Scenario& scenario,
                const RegionRegistry& registry);

/// Annual emission change with network energy held constant.
ScenarioResult evaluate(const Atlas& atlas, double energy_twh, const Scenario& scenario,
                        const CarbonInputs& inputs, const RegionRegistry& registry);

/// Emissions of the banned entries over the suppression window, scaled by e.
double one_off_avoidance(const Atlas& atlas, double energy_twh, const Scenario& scenario,
                         const CarbonInputs& inputs, const RegionRegistry& registry);

/// Emissions gained elsewhere per unit removed in the banned regions; absent
/// when nothing positive is removed.
std::optional<double> leakage_rate(const Atlas& atlas, const Scenario& scenario,
                                   const CarbonInputs& inputs,
                                   const RegionRegistry& registry);

/// Members of a named coalition. Throws unknown_group.
std::set<std::string> resolve_group(std::string_view group_id,
                                    const RegionRegistry& registry);

enum class SweepLevel { country, us_state, cn_province };

std::optional<SweepLevel> parse_sweep_level(std::string_view text) noexcept;

enum class Execution { serial, parallel };

struct SweepOptions {
  Execution execution = Execution::parallel;
  /// Coalitions to append as rows to a country sweep.
  std::vector<std::string> groups = {"EU"};
};

/// One row per region at `level` present in the atlas: full (e = 1) and
/// limited (e = 0.5) deltas under both bases, sorted by full LCA descending.
/// The country sweep also carries a coalition row per configured group that
/// the registry defines.
ResultTable sweep_single_bans(const Atlas& atlas, double energy_twh, SweepLevel level,
                              const CarbonInputs& inputs, const RegionRegistry& registry,
                              const SweepOptions& options = {});

/// Sum of each member's single-ban delta, for comparison with the coalition.
double sum_of_single_bans(const Atlas& atlas, double energy_twh,
                          const std::set<std::string>& members, const Scenario& base,
                          const CarbonInputs& inputs, const RegionRegistry& registry);

inline constexpr double kLimitedEffectiveness = 0.5;

}  // namespace leaksim
