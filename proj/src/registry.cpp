#include "leaksim/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "leaksim/error.hpp"

namespace leaksim {

const Region* RegionRegistry::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &regions_[it->second];
}

const Region& RegionRegistry::at(std::string_view id) const {
  if (const auto* r = find(id)) return *r;
  throw Error(ErrorCode::unknown_region, "unknown region '" + std::string(id) + "'");
}

std::vector<std::string> RegionRegistry::children_of(std::string_view country) const {
  std::vector<std::string> out;
  for (const auto& r : regions_) {
    if (r.parent && *r.parent == country) out.push_back(r.id);
  }
  return out;
}

std::vector<std::string> RegionRegistry::ids_at_level(RegionLevel level) const {
  std::vector<std::string> out;
  for (const auto& r : regions_) {
    if (r.level == level) out.push_back(r.id);
  }
  return out;
}

const std::string& RegionRegistry::top_level_of(std::string_view id) const {
  const auto& r = at(id);
  return r.parent ? at(*r.parent).id : r.id;
}

bool RegionRegistry::covers(std::string_view ancestor, std::string_view region) const {
  if (ancestor == region) return true;
  const auto* r = find(region);
  return r != nullptr && r->parent && *r->parent == ancestor;
}

std::string RegionRegistry::group_display_name(std::string_view group_id) const {
  if (const auto* r = find(group_id); r != nullptr && r->level == RegionLevel::aggregate) {
    return r->name;
  }
  return std::string(group_id);
}

RegionRegistry build_registry(std::vector<Region> records,
                              std::vector<GroupMembership> groups) {
  RegionRegistry reg;
  std::sort(records.begin(), records.end(),
            [](const Region& a, const Region& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id.empty()) throw Error(ErrorCode::parse, "region with empty id");
    if (i > 0 && records[i].id == records[i - 1].id) {
      throw Error(ErrorCode::duplicate_id, "duplicate region id '" + records[i].id + "'");
    }
  }
  reg.regions_ = std::move(records);
  for (std::size_t i = 0; i < reg.regions_.size(); ++i) {
    reg.index_.emplace(reg.regions_[i].id, i);
  }

  for (const auto& r : reg.regions_) {
    if (!r.parent) continue;
    const auto* parent = reg.find(*r.parent);
    if (parent == nullptr) {
      throw Error(ErrorCode::dangling_parent,
                  "region '" + r.id + "' has unknown parent '" + *r.parent + "'");
    }
    if (parent->level != RegionLevel::country) {
      throw Error(ErrorCode::dangling_parent,
                  "region '" + r.id + "' has non-country parent '" + *r.parent + "'");
    }
  }

  const auto* row = reg.find("ROW");
  if (row == nullptr || row->level != RegionLevel::aggregate) {
    throw Error(ErrorCode::missing_aggregate, "registry has no 'ROW' aggregate region");
  }
  reg.row_id_ = row->id;

  for (auto& g : groups) {
    if (!reg.contains(g.member_id)) {
      throw Error(ErrorCode::unknown_region, "group '" + g.group_id + "' member '" +
                                                 g.member_id + "' is not a known region");
    }
    auto& members = reg.groups_[g.group_id];
    if (std::find(members.begin(), members.end(), g.member_id) == members.end()) {
      members.push_back(std::move(g.member_id));
    }
  }
  for (auto& [id, members] : reg.groups_) std::sort(members.begin(), members.end());
  return reg;
}

namespace {

std::string format_sum(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string describe(const HashRateEntry& e) {
  std::string s = e.region_id + " (" + std::string(to_string(e.supply));
  if (e.source) s += ", " + std::string(to_string(*e.source));
  if (e.counterfactual != Counterfactual::none) {
    s += ", " + std::string(to_string(e.counterfactual));
  }
  return s + ")";
}

}  // namespace

ValidationReport validate_atlas(const Atlas& atlas, const RegionRegistry& registry) {
  ValidationReport report;
  auto add = [&](FindingKind kind, std::string msg) {
    report.findings.push_back({kind, std::move(msg)});
  };

  // Summing a sorted copy keeps the reported total independent of entry order.
  std::vector<double> shares;
  shares.reserve(atlas.entries.size());
  for (const auto& e : atlas.entries) shares.push_back(e.share);
  std::sort(shares.begin(), shares.end());
  double sum = 0.0;
  for (double s : shares) sum += s;
  if (std::abs(sum - 1.0) > kShareSumTolerance) {
    add(FindingKind::share_sum, "share sum = " + format_sum(sum));
  }

  std::vector<const HashRateEntry*> sorted;
  for (const auto& e : atlas.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return entry_less(*a, *b); });

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = *sorted[i];
    if (e.share < 0.0) {
      add(FindingKind::negative_share, "negative share " + format_sum(e.share) + " at " + describe(e));
    }
    if (!registry.contains(e.region_id)) {
      add(FindingKind::unknown_region, "unknown region '" + e.region_id + "'");
    }
    if (e.supply == Supply::grid && e.source) {
      add(FindingKind::unexpected_source, "grid entry carries a source at " + describe(e));
    }
    if (e.supply == Supply::offgrid && !e.source) {
      add(FindingKind::missing_source, "off-grid entry without source at " + describe(e));
    }
    if (e.source == EnergySource::methane && e.counterfactual == Counterfactual::none) {
      add(FindingKind::missing_counterfactual, "methane counterfactual missing at " + describe(e));
    }
    if (i > 0 && sorted[i - 1]->key() == e.key()) {
      add(FindingKind::duplicate_entry, "duplicate entry " + describe(e));
    }
  }

  std::sort(report.findings.begin(), report.findings.end(),
            [](const Finding& a, const Finding& b) {
              return std::tie(a.kind, a.message) < std::tie(b.kind, b.message);
            });
  return report;
}

}  // namespace leaksim
