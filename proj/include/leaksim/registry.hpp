#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "leaksim/types.hpp"

namespace leaksim {

struct GroupMembership {
  std::string group_id;
  std::string member_id;
};

/// Hierarchical region lookup: countries, their sub-national leaves, the
/// rest-of-world aggregate, and named coalitions.
class RegionRegistry {
 public:
  const Region* find(std::string_view id) const;
  const Region& at(std::string_view id) const;  // throws unknown_region
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  /// Leaves whose parent is `country`, sorted by id.
  std::vector<std::string> children_of(std::string_view country) const;
  std::vector<std::string> ids_at_level(RegionLevel level) const;

  /// The country a region belongs to: its parent for leaves, itself otherwise.
  const std::string& top_level_of(std::string_view id) const;

  /// True when `region` is `ancestor` or one of its leaves.
  bool covers(std::string_view ancestor, std::string_view region) const;

  const std::string& row_id() const { return row_id_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::map<std::string, std::vector<std::string>, std::less<>>& groups() const {
    return groups_;
  }
  std::size_t size() const { return regions_.size(); }

  /// Display name for a group: the name of a same-id aggregate region when
  /// one exists ("EU" -> "European Union"), the group id otherwise.
  std::string group_display_name(std::string_view group_id) const;

 private:
  friend RegionRegistry build_registry(std::vector<Region>, std::vector<GroupMembership>);

  std::vector<Region> regions_;  // sorted by id
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::vector<std::string>, std::less<>> groups_;
  std::string row_id_;
};

/// Errors: duplicate_id, dangling_parent (missing parent or parent that is
/// not a country), missing_aggregate (no "ROW"), unknown_region for group
/// members that are not registered.
RegionRegistry build_registry(std::vector<Region> records,
                              std::vector<GroupMembership> groups = {});

enum class FindingKind {
  share_sum,
  negative_share,
  unknown_region,
  missing_counterfactual,
  missing_source,
  unexpected_source,
  duplicate_entry,
};

struct Finding {
  FindingKind kind;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const noexcept { return findings.empty(); }
};

inline constexpr double kShareSumTolerance = 1e-9;

/// Pure check of an atlas against the registry. Findings are sorted so the
/// report does not depend on entry order.
ValidationReport validate_atlas(const Atlas& atlas, const RegionRegistry& registry);

}  // namespace leaksim
