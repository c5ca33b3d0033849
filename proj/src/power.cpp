#include "leaksim/power.hpp"

#include <algorithm>

#include "leaksim/error.hpp"

namespace leaksim {

double revenue_per_ths_day(const NetworkParams& params) {
  return params.blocks_per_day * (params.subsidy_btc_per_block + params.fees_btc_per_block) *
         params.btc_price_usd / params.hashrate_ths;
}

double electricity_cost_per_ths_day(const Equipment& model, const NetworkParams& params) {
  // J/TH is W per TH/s; 24 h of that in kWh, times the price.
  return model.efficiency_j_per_th * 24.0 * params.electricity_price_usd_per_kwh / 1000.0;
}

std::vector<Equipment> profitable_set(std::span<const Equipment> equipment,
                                      const NetworkParams& params) {
  if (equipment.empty()) {
    throw Error(ErrorCode::invalid_argument, "equipment list is empty");
  }
  const double ceiling = params.profitability_threshold * revenue_per_ths_day(params);
  std::vector<Equipment> out;
  for (const auto& model : equipment) {
    if (electricity_cost_per_ths_day(model, params) <= ceiling) out.push_back(model);
  }
  if (out.empty()) {
    throw Error(ErrorCode::empty_profitable_set,
                "no mining equipment is profitable at the given parameters");
  }
  return out;
}

PowerEstimate estimate_power(const NetworkParams& params, std::span<const Equipment> equipment) {
  validate(params);
  const auto basket = profitable_set(equipment, params);

  double min_eff = basket.front().efficiency_j_per_th;
  double max_eff = min_eff;
  double sum_eff = 0.0;
  for (const auto& m : basket) {
    min_eff = std::min(min_eff, m.efficiency_j_per_th);
    max_eff = std::max(max_eff, m.efficiency_j_per_th);
    sum_eff += m.efficiency_j_per_th;
  }
  // An equal-weight basket can round a hair outside [min, max]; keep the
  // ordering invariant exact.
  const double mean_eff =
      std::clamp(sum_eff / static_cast<double>(basket.size()), min_eff, max_eff);

  const double watts_per_eff = params.hashrate_ths * params.pue;
  PowerEstimate est;
  est.lower_gw = watts_per_eff * min_eff / 1e9;
  est.best_gw = watts_per_eff * mean_eff / 1e9;
  est.upper_gw = watts_per_eff * max_eff / 1e9;
  est.annual_twh = est.best_gw * kHoursPerYear / 1000.0;
  est.network_hashrate_ths = params.hashrate_ths;
  for (const auto& m : basket) est.profitable_models.push_back(m.model);
  return est;
}

}  // namespace leaksim
