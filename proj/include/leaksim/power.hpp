#pragma once

#include <span>
#include <string>
#include <vector>

#include "leaksim/ingest.hpp"

namespace leaksim {

inline constexpr double kHoursPerYear = 8760.0;

/// Network power bounds. Watts come from J/TH x TH/s; `annual_twh` is the
/// best guess held for a full 8760-hour year.
struct PowerEstimate {
  double lower_gw = 0.0;
  double best_gw = 0.0;
  double upper_gw = 0.0;
  double annual_twh = 0.0;
  double network_hashrate_ths = 0.0;
  std::vector<std::string> profitable_models;
};

/// USD earned per TH/s per day: blocks/day x (subsidy + fees) x price / hashrate.
double revenue_per_ths_day(const NetworkParams& params);

/// USD of electricity per TH/s per day for one model.
double electricity_cost_per_ths_day(const Equipment& model, const NetworkParams& params);

/// Models whose daily electricity cost stays within threshold x daily revenue.
/// Throws empty_profitable_set when nothing qualifies.
std::vector<Equipment> profitable_set(std::span<const Equipment> equipment,
                                      const NetworkParams& params);

/// Lower/upper from the most/least efficient profitable model, best from the
/// equally weighted mean efficiency of the profitable basket; all times PUE.
PowerEstimate estimate_power(const NetworkParams& params,
                             std::span<const Equipment> equipment);

}  // namespace leaksim
