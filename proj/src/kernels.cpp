#include "leaksim/kernels.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

#include "leaksim/error.hpp"

namespace leaksim::kernels {

EntryColumns make_columns(const Atlas& atlas, std::span<const double> intensities) {
  if (intensities.size() != atlas.entries.size()) {
    throw Error(ErrorCode::invalid_argument, "one intensity per atlas entry required");
  }
  EntryColumns cols;
  const auto n = atlas.entries.size();
  cols.share.reserve(n);
  cols.intensity.assign(intensities.begin(), intensities.end());
  cols.region.reserve(n);
  for (const auto& e : atlas.entries) cols.region_ids.push_back(e.region_id);
  std::sort(cols.region_ids.begin(), cols.region_ids.end());
  cols.region_ids.erase(std::unique(cols.region_ids.begin(), cols.region_ids.end()),
                        cols.region_ids.end());
  for (const auto& e : atlas.entries) {
    cols.share.push_back(e.share);
    const auto it = std::lower_bound(cols.region_ids.begin(), cols.region_ids.end(), e.region_id);
    cols.region.push_back(static_cast<std::size_t>(it - cols.region_ids.begin()));
  }
  return cols;
}

UnitBan unit_ban(const EntryColumns& columns, std::span<const unsigned char> banned) {
  const auto n = columns.share.size();
  if (banned.size() != n) {
    throw Error(ErrorCode::invalid_argument, "ban mask length differs from entry count");
  }
  UnitBan out;
  for (std::size_t i = 0; i < n; ++i) {
    (banned[i] ? out.banned_share : out.rest_share) += columns.share[i];
  }
  if (out.banned_share > 0.0 && !(out.rest_share > 0.0)) {
    throw Error(ErrorCode::no_destination,
                "ban covers all hash rate: nowhere for it to relocate");
  }
  const double ratio = out.banned_share > 0.0 ? out.banned_share / out.rest_share : 0.0;

  out.region_delta.assign(columns.region_ids.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = columns.share[i];
    const double g = columns.intensity[i];
    if (banned[i]) {
      out.region_delta[columns.region[i]] -= s * g;
      out.removed += s * g;
    } else {
      const double gain = s * ratio * g;
      out.region_delta[columns.region[i]] += gain;
      out.gained += gain;
    }
  }
  for (double d : out.region_delta) out.total += d;
  return out;
}

std::vector<double> sweep_totals_serial(const EntryColumns& columns,
                                        std::span<const BanMask> masks) {
  std::vector<double> totals(masks.size(), 0.0);
  for (std::size_t k = 0; k < masks.size(); ++k) totals[k] = unit_ban(columns, masks[k]).total;
  return totals;
}

std::vector<double> sweep_totals_parallel(const EntryColumns& columns,
                                          std::span<const BanMask> masks) {
  const auto count = static_cast<std::ptrdiff_t>(masks.size());
  std::vector<double> totals(masks.size(), 0.0);
  std::vector<std::exception_ptr> errors(masks.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      totals[idx] = unit_ban(columns, masks[idx]).total;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return totals;
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace leaksim::kernels
