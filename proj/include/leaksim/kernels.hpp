#pragma once

// Ban-evaluation kernels. A sweep evaluates hundreds of independent bans over
// the same atlas, so each ban is a pure function of (columns, mask) and the
// sweep over bans has an OpenMP version and a serial reference. Both call the
// same per-ban routine, so their outputs are bitwise identical.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "leaksim/types.hpp"

namespace leaksim::kernels {

/// Column layout of a canonical atlas under one basis.
struct EntryColumns {
  std::vector<double> share;
  std::vector<double> intensity;
  std::vector<std::size_t> region;  // index into region_ids
  std::vector<std::string> region_ids;  // ascending
};

/// `atlas` must be canonical; `intensities` follows its entry order.
EntryColumns make_columns(const Atlas& atlas, std::span<const double> intensities);

using BanMask = std::vector<unsigned char>;

/// Outcome of a full-effectiveness ban per TWh of network energy. Every
/// physical quantity for effectiveness e and energy E is e * E * (unit value),
/// which is what makes deltas exactly linear in e.
struct UnitBan {
  std::vector<double> region_delta;  // g/kWh-weighted share change per region
  double total = 0.0;                // sum of region_delta, region order
  double banned_share = 0.0;
  double rest_share = 0.0;
  double removed = 0.0;  // emissions intensity mass leaving banned entries
  double gained = 0.0;   // emissions intensity mass arriving elsewhere
};

/// Throws no_destination when the mask covers all positive-share entries and
/// there is something to move.
UnitBan unit_ban(const EntryColumns& columns, std::span<const unsigned char> banned);

/// Full-effectiveness global delta (per TWh) for each mask.
std::vector<double> sweep_totals_serial(const EntryColumns& columns,
                                        std::span<const BanMask> masks);
std::vector<double> sweep_totals_parallel(const EntryColumns& columns,
                                          std::span<const BanMask> masks);

int max_threads() noexcept;

}  // namespace leaksim::kernels
