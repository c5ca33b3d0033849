#include "leaksim/types.hpp"

#include <algorithm>

#include "leaksim/error.hpp"

namespace leaksim {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text,
                           const std::array<std::pair<std::string_view, Enum>, N>& names) {
  for (const auto& [name, value] : names) {
    if (name == text) return value;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, RegionLevel>, 4> kLevelNames = {{
    {"country", RegionLevel::country},
    {"us_state", RegionLevel::us_state},
    {"cn_province", RegionLevel::cn_province},
    {"aggregate", RegionLevel::aggregate},
}};

constexpr std::array<std::pair<std::string_view, EnergySource>, 9> kSourceNames = {{
    {"coal", EnergySource::coal},
    {"gas", EnergySource::gas},
    {"other_fossil", EnergySource::other_fossil},
    {"solar", EnergySource::solar},
    {"wind", EnergySource::wind},
    {"nuclear", EnergySource::nuclear},
    {"hydro", EnergySource::hydro},
    {"other_renewable", EnergySource::other_renewable},
    {"methane", EnergySource::methane},
}};

constexpr std::array<std::pair<std::string_view, Supply>, 2> kSupplyNames = {{
    {"grid", Supply::grid},
    {"offgrid", Supply::offgrid},
}};

constexpr std::array<std::pair<std::string_view, Counterfactual>, 3> kCounterfactualNames = {{
    {"none", Counterfactual::none},
    {"vented", Counterfactual::vented},
    {"flared", Counterfactual::flared},
}};

constexpr std::array<std::pair<std::string_view, Basis>, 2> kBasisNames = {{
    {"pog", Basis::pog},
    {"lca", Basis::lca},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value,
                         const std::array<std::pair<std::string_view, Enum>, N>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

}  // namespace

std::string_view to_string(RegionLevel level) noexcept { return name_of(level, kLevelNames); }
std::string_view to_string(EnergySource source) noexcept { return name_of(source, kSourceNames); }
std::string_view to_string(Supply supply) noexcept { return name_of(supply, kSupplyNames); }
std::string_view to_string(Counterfactual cf) noexcept {
  return name_of(cf, kCounterfactualNames);
}
std::string_view to_string(Basis basis) noexcept { return name_of(basis, kBasisNames); }

std::optional<RegionLevel> parse_region_level(std::string_view text) noexcept {
  return lookup(text, kLevelNames);
}
std::optional<EnergySource> parse_source(std::string_view text) noexcept {
  return lookup(text, kSourceNames);
}
std::optional<Supply> parse_supply(std::string_view text) noexcept {
  return lookup(text, kSupplyNames);
}
std::optional<Counterfactual> parse_counterfactual(std::string_view text) noexcept {
  if (text.empty()) return Counterfactual::none;
  return lookup(text, kCounterfactualNames);
}
std::optional<Basis> parse_basis(std::string_view text) noexcept {
  if (text == "POG") return Basis::pog;
  if (text == "LCA") return Basis::lca;
  return lookup(text, kBasisNames);
}

bool entry_less(const HashRateEntry& a, const HashRateEntry& b) noexcept {
  return a.key() < b.key();
}

double Atlas::total_share() const noexcept {
  double total = 0.0;
  for (const auto& e : entries) total += e.share;
  return total;
}

Atlas canonicalize(Atlas atlas) {
  std::stable_sort(atlas.entries.begin(), atlas.entries.end(), entry_less);
  return atlas;
}

IntensityTable IntensityTable::standard() noexcept {
  IntensityTable t;
  //          coal   gas    oth_f  solar wind nuclear hydro oth_r
  t.pog = {820.0, 490.0, 700.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  t.lca = {820.0, 490.0, 700.0, 48.0, 11.0, 12.0, 24.0, 38.0};
  t.methane_flared = -0.49;
  t.methane_vented = -5.55;
  return t;
}

double IntensityTable::grid_source(EnergySource s, Basis basis) const {
  if (!is_grid_source(s)) {
    throw Error(ErrorCode::invalid_argument, "methane has no grid intensity");
  }
  const auto i = static_cast<std::size_t>(s);
  return basis == Basis::pog ? pog[i] : lca[i];
}

}  // namespace leaksim
