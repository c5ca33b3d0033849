#pragma once

// Entry-by-entry reference for the scenario engine: literal redistribution of
// shares, then emissions before and after, in long double. Uses only the
// instance's own truth data.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "random_atlas.hpp"

namespace leaksim::testing {

struct OracleResult {
  bool no_destination = false;
  long double baseline = 0;
  long double delta = 0;
  long double one_off = 0;
  std::optional<long double> leakage;
  std::vector<long double> post_share;
  long double gross = 0;  // E * sum s|I|, the scale of every emission term
};

inline bool oracle_banned(const RandomInstance& inst, const std::string& region,
                          const std::set<std::string>& ban) {
  if (ban.contains(region)) return true;
  const auto it = inst.parent.find(region);
  return it != inst.parent.end() && ban.contains(it->second);
}

inline OracleResult oracle_evaluate(const RandomInstance& inst, const std::set<std::string>& ban,
                                    double e, Basis basis, double months = 1.0) {
  const auto& entries = inst.atlas.entries;
  const auto& inten = inst.truth(basis);
  const long double E = inst.energy_twh;
  OracleResult r;

  long double sb = 0, sr = 0;
  std::vector<bool> banned(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    banned[i] = oracle_banned(inst, entries[i].region_id, ban);
    (banned[i] ? sb : sr) += entries[i].share;
  }
  if (sb > 0 && sr <= 0) {
    r.no_destination = true;
    return r;
  }

  const long double moved = e * sb;
  long double pre = 0, post = 0, removed = 0, gained = 0;
  r.post_share.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const long double s = entries[i].share;
    const long double s2 = banned[i] ? s * (1 - (long double)e) : s + s * moved / sr;
    r.post_share[i] = s2;
    pre += E * s * inten[i];
    post += E * s2 * inten[i];
    r.gross += E * s * std::fabs(inten[i]);
    if (banned[i]) {
      removed += (s - s2) * inten[i];
      r.one_off += E * s * inten[i];
    } else {
      gained += (s2 - s) * inten[i];
    }
  }
  r.baseline = pre;
  r.delta = post - pre;
  r.one_off *= (long double)months / 12 * e;
  if (removed > 0) r.leakage = gained / removed;
  return r;
}

/// |a - b| relative to |b|, with the denominator floored at 1e-6 of the
/// instance's gross emissions so cancellation near zero is not mistaken for
/// an engine error.
inline double relative_error(long double a, long double b, long double scale) {
  const long double denom = std::max(std::fabs(b), scale * 1e-6L);
  if (denom == 0) return static_cast<double>(std::fabs(a - b));
  return static_cast<double>(std::fabs(a - b) / denom);
}

}  // namespace leaksim::testing
