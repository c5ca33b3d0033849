#include "leaksim/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <regex>
#include <set>

#include "leaksim/csv.hpp"
#include "leaksim/error.hpp"

namespace leaksim {

namespace {

[[noreturn]] void fail_at(ErrorCode code, const csv::Document& doc, std::size_t row,
                          const std::string& msg) {
  throw Error(code, "line " + std::to_string(doc.line_numbers[row]) + ": " + msg);
}

double number_at(const csv::Document& doc, std::size_t row, std::size_t col) {
  const auto& cell = doc.rows[row][col];
  auto v = csv::parse_number(cell);
  if (!v) {
    fail_at(ErrorCode::parse, doc, row,
            "column '" + doc.header[col] + "': not a number: '" + cell + "'");
  }
  return *v;
}

std::optional<double> optional_number_at(const csv::Document& doc, std::size_t row,
                                         std::size_t col) {
  if (doc.rows[row][col].empty()) return std::nullopt;
  return number_at(doc, row, col);
}

double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

std::string_view schema_prefix(GridSchema schema) {
  switch (schema) {
    case GridSchema::us_state: return "US-";
    case GridSchema::cn_province: return "CN-";
    case GridSchema::country: break;
  }
  return "";
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  return in;
}

bool is_iso_date(std::string_view text) noexcept {
  static const std::regex pattern(R"(\d{4}-\d{2}-\d{2})");
  if (!std::regex_match(text.begin(), text.end(), pattern)) return false;
  const int y = std::stoi(std::string(text.substr(0, 4)));
  const unsigned m = static_cast<unsigned>(std::stoi(std::string(text.substr(5, 2))));
  const unsigned d = static_cast<unsigned>(std::stoi(std::string(text.substr(8, 2))));
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

Snapshot parse_hashrate_snapshot(std::istream& in) {
  const auto doc = csv::read(in);
  const auto region_col = doc.require_column("region_id", "snapshot");
  const auto share_col = doc.require_column("share", "snapshot");

  Snapshot snap;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& id = doc.rows[r][region_col];
    if (id.empty()) fail_at(ErrorCode::parse, doc, r, "empty region_id");
    const double share = number_at(doc, r, share_col);
    if (share < 0.0) {
      fail_at(ErrorCode::negative_share, doc, r, "negative share for '" + id + "'");
    }
    if (!snap.shares.emplace(id, share).second) {
      fail_at(ErrorCode::duplicate_region, doc, r, "duplicate region '" + id + "'");
    }
  }

  std::vector<double> values;
  for (const auto& [id, s] : snap.shares) values.push_back(s);
  const double sum = sorted_sum(values);
  snap.input_sum = sum;
  if (std::abs(sum - 1.0) > kSnapshotDriftTolerance) {
    throw Error(ErrorCode::share_sum, "snapshot shares sum to " + std::to_string(sum) +
                                          ", drift exceeds 1e-6");
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    for (auto& [id, s] : snap.shares) s /= sum;
    snap.renormalized = true;
  }
  return snap;
}

GridMixSet parse_grid_mix(std::istream& in, GridSchema schema) {
  const auto doc = csv::read(in);
  const auto region_col = doc.require_column("region_id", "grid mix");

  std::vector<std::pair<std::size_t, EnergySource>> source_cols;
  std::optional<std::size_t> pog_col;
  std::optional<std::size_t> lca_col;
  for (std::size_t c = 0; c < doc.header.size(); ++c) {
    if (c == region_col) continue;
    const auto& name = doc.header[c];
    if (schema == GridSchema::cn_province && name == "intensity_pog") {
      pog_col = c;
    } else if (schema == GridSchema::cn_province && name == "intensity_lca") {
      lca_col = c;
    } else if (auto s = parse_source(name); s && is_grid_source(*s)) {
      source_cols.emplace_back(c, *s);
    } else {
      throw Error(ErrorCode::unknown_source, "grid mix: unknown source column '" + name + "'");
    }
  }
  if (lca_col && !pog_col) {
    throw Error(ErrorCode::parse, "grid mix: intensity_lca given without intensity_pog");
  }

  GridMixSet out;
  std::set<std::string> seen;
  const auto prefix = schema_prefix(schema);
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& id = doc.rows[r][region_col];
    if (id.empty()) fail_at(ErrorCode::parse, doc, r, "empty region_id");
    if (!id.starts_with(prefix)) {
      fail_at(ErrorCode::parse, doc, r,
              "region '" + id + "' does not belong to this schema (expected prefix '" +
                  std::string(prefix) + "')");
    }
    if (!seen.insert(id).second) {
      fail_at(ErrorCode::duplicate_region, doc, r, "duplicate region '" + id + "'");
    }

    const bool has_mix_cells = std::any_of(source_cols.begin(), source_cols.end(),
                                           [&](const auto& sc) { return !doc.rows[r][sc.first].empty(); });
    if (pog_col && !doc.rows[r][*pog_col].empty()) {
      if (has_mix_cells) {
        fail_at(ErrorCode::parse, doc, r, "row gives both a mix and a direct intensity");
      }
      DirectIntensity d{id, number_at(doc, r, *pog_col), std::nullopt};
      if (lca_col) d.lca = optional_number_at(doc, r, *lca_col);
      out.direct.push_back(std::move(d));
      continue;
    }

    GridMix mix{id, {}};
    std::vector<double> values;
    for (const auto& [c, source] : source_cols) {
      const double v = optional_number_at(doc, r, c).value_or(0.0);
      if (v < 0.0 || v > 1.0) {
        fail_at(ErrorCode::mix_sum, doc, r,
                "share of " + std::string(to_string(source)) + " outside [0, 1]");
      }
      mix.shares[static_cast<std::size_t>(source)] = v;
      values.push_back(v);
    }
    const double sum = sorted_sum(values);
    if (std::abs(sum - 1.0) > kMixSumTolerance) {
      fail_at(ErrorCode::mix_sum, doc, r,
              "mix for '" + id + "' sums to " + std::to_string(sum));
    }
    out.mixes.push_back(std::move(mix));
  }
  return out;
}

std::vector<Facility> parse_facilities(std::istream& in) {
  const auto doc = csv::read(in);
  const auto id_col = doc.require_column("facility_id", "facilities");
  const auto region_col = doc.require_column("region_id", "facilities");
  const auto ths_col = doc.require_column("hashrate_ths", "facilities");
  const auto mw_col = doc.require_column("power_mw", "facilities");
  const auto source_col = doc.require_column("source", "facilities");
  const auto cf_col = doc.require_column("counterfactual", "facilities");
  const auto date_col = doc.require_column("start_date", "facilities");

  std::vector<Facility> out;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    Facility f;
    f.facility_id = row[id_col];
    f.region_id = row[region_col];
    if (f.facility_id.empty() || f.region_id.empty()) {
      fail_at(ErrorCode::parse, doc, r, "facility_id and region_id are required");
    }
    if (!ids.insert(f.facility_id).second) {
      fail_at(ErrorCode::duplicate_id, doc, r, "duplicate facility '" + f.facility_id + "'");
    }

    const auto ths = optional_number_at(doc, r, ths_col);
    const auto mw = optional_number_at(doc, r, mw_col);
    if (ths.has_value() == mw.has_value()) {
      fail_at(ErrorCode::ambiguous_capacity, doc, r,
              "facility '" + f.facility_id + "' must set exactly one of hashrate_ths, power_mw");
    }
    const double capacity = ths ? *ths : *mw;
    if (!(capacity > 0.0)) {
      fail_at(ErrorCode::invalid_argument, doc, r, "capacity must be positive");
    }
    f.capacity = ths ? FacilityCapacity{HashrateThs{*ths}} : FacilityCapacity{PowerMw{*mw}};

    const auto source = parse_source(row[source_col]);
    if (!source) {
      fail_at(ErrorCode::unknown_source, doc, r, "unknown source '" + row[source_col] + "'");
    }
    f.source = *source;
    const auto cf = parse_counterfactual(row[cf_col]);
    if (!cf) {
      fail_at(ErrorCode::parse, doc, r, "unknown counterfactual '" + row[cf_col] + "'");
    }
    f.counterfactual = *cf;
    if (f.source == EnergySource::methane && f.counterfactual == Counterfactual::none) {
      fail_at(ErrorCode::missing_counterfactual, doc, r,
              "methane facility '" + f.facility_id + "' needs vented or flared");
    }
    if (f.source != EnergySource::methane && f.counterfactual != Counterfactual::none) {
      fail_at(ErrorCode::invalid_argument, doc, r, "counterfactual only applies to methane");
    }

    f.start_date = row[date_col];
    if (!is_iso_date(f.start_date)) {
      fail_at(ErrorCode::parse, doc, r, "start_date '" + f.start_date + "' is not yyyy-mm-dd");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Equipment> parse_equipment(std::istream& in) {
  const auto doc = csv::read(in);
  const auto model_col = doc.require_column("model", "equipment");
  const auto eff_col = doc.require_column("efficiency_j_per_th", "equipment");
  std::vector<Equipment> out;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    Equipment e{doc.rows[r][model_col], number_at(doc, r, eff_col)};
    if (e.model.empty()) fail_at(ErrorCode::parse, doc, r, "empty model name");
    if (!(e.efficiency_j_per_th > 0.0)) {
      fail_at(ErrorCode::invalid_argument, doc, r, "efficiency must be positive");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (csv::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = csv::trim(std::string_view(line).substr(0, eq));
    auto value = csv::trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!out.emplace(key, value).second) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

void validate(const NetworkParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::invalid_argument, std::string("network params: ") + what);
  };
  require(p.hashrate_ths > 0.0, "hashrate_ths must be positive");
  require(p.btc_price_usd > 0.0, "btc_price_usd must be positive");
  require(p.subsidy_btc_per_block >= 0.0, "subsidy_btc_per_block must be non-negative");
  require(p.fees_btc_per_block >= 0.0, "fees_btc_per_block must be non-negative");
  require(p.electricity_price_usd_per_kwh >= 0.0,
          "electricity_price_usd_per_kwh must be non-negative");
  require(p.pue >= 1.0, "pue must be at least 1");
  require(p.blocks_per_day > 0.0, "blocks_per_day must be positive");
  require(p.profitability_threshold > 0.0, "profitability_threshold must be positive");
}

NetworkParams parse_network_params(std::istream& in) {
  auto kv = parse_key_values(in);
  NetworkParams p;
  const std::array<std::pair<std::string_view, double NetworkParams::*>, 8> fields = {{
      {"hashrate_ths", &NetworkParams::hashrate_ths},
      {"subsidy_btc_per_block", &NetworkParams::subsidy_btc_per_block},
      {"fees_btc_per_block", &NetworkParams::fees_btc_per_block},
      {"btc_price_usd", &NetworkParams::btc_price_usd},
      {"electricity_price_usd_per_kwh", &NetworkParams::electricity_price_usd_per_kwh},
      {"pue", &NetworkParams::pue},
      {"blocks_per_day", &NetworkParams::blocks_per_day},
      {"profitability_threshold", &NetworkParams::profitability_threshold},
  }};
  for (const auto& [name, member] : fields) {
    auto it = kv.find(std::string(name));
    if (it == kv.end()) {
      if (name == "blocks_per_day" || name == "profitability_threshold") continue;
      throw Error(ErrorCode::parse, "network params: missing key '" + std::string(name) + "'");
    }
    auto v = csv::parse_number(it->second);
    if (!v) {
      throw Error(ErrorCode::parse, "network params: '" + it->first + "' is not a number");
    }
    p.*member = *v;
    kv.erase(it);
  }
  if (!kv.empty()) {
    throw Error(ErrorCode::parse, "network params: unknown key '" + kv.begin()->first + "'");
  }
  validate(p);
  return p;
}

std::string_view to_string(TableId id) noexcept {
  switch (id) {
    case TableId::I: return "I";
    case TableId::II: return "II";
    case TableId::III: return "III";
    case TableId::IV: return "IV";
  }
  return "?";
}

std::optional<TableId> parse_table_id(std::string_view text) noexcept {
  if (text == "I") return TableId::I;
  if (text == "II") return TableId::II;
  if (text == "III") return TableId::III;
  if (text == "IV") return TableId::IV;
  return std::nullopt;
}

FixtureTable parse_fixture(std::istream& in, TableId id) {
  static const std::regex two_decimals(R"(-?\d+\.\d\d)");
  const auto doc = csv::read(in);
  const std::size_t label_count = id == TableId::IV ? 2 : 1;
  const std::string context = "table " + std::string(to_string(id));

  std::array<std::size_t, 4> value_cols{};
  for (std::size_t i = 0; i < kValueColumns.size(); ++i) {
    value_cols[i] = doc.require_column(kValueColumns[i], context);
  }
  if (doc.header.size() != label_count + kValueColumns.size()) {
    throw Error(ErrorCode::parse, context + ": expected " + std::to_string(label_count) +
                                      " label column(s) and four value columns");
  }

  FixtureTable out;
  out.id = id;
  for (std::size_t c = 0; c < doc.header.size(); ++c) {
    if (std::find(value_cols.begin(), value_cols.end(), c) == value_cols.end()) {
      out.table.label_columns.push_back(doc.header[c]);
    }
  }
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    TableRow row;
    for (std::size_t c = 0; c < doc.header.size(); ++c) {
      if (std::find(value_cols.begin(), value_cols.end(), c) == value_cols.end()) {
        row.labels.push_back(doc.rows[r][c]);
      }
    }
    std::array<double, 4> values{};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& cell = doc.rows[r][value_cols[i]];
      if (!std::regex_match(cell, two_decimals)) {
        fail_at(ErrorCode::parse, doc, r,
                context + " column " + std::string(kValueColumns[i]) +
                    ": expected a two-decimal number, got '" + cell + "'");
      }
      values[i] = number_at(doc, r, value_cols[i]);
    }
    row.full_lca = values[0];
    row.full_pog = values[1];
    row.limited_lca = values[2];
    row.limited_pog = values[3];
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

LeafWeights parse_leaf_weights(std::istream& in) {
  const auto doc = csv::read(in);
  const auto country_col = doc.require_column("country_id", "leaf weights");
  const auto leaf_col = doc.require_column("leaf_id", "leaf weights");
  const auto weight_col = doc.require_column("weight", "leaf weights");
  LeafWeights out;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& country = doc.rows[r][country_col];
    const auto& leaf = doc.rows[r][leaf_col];
    const double w = number_at(doc, r, weight_col);
    if (w < 0.0) fail_at(ErrorCode::negative_share, doc, r, "negative weight for '" + leaf + "'");
    if (!out[country].emplace(leaf, w).second) {
      fail_at(ErrorCode::duplicate_region, doc, r, "duplicate leaf '" + leaf + "'");
    }
  }
  return out;
}

std::vector<Region> parse_regions(std::istream& in) {
  const auto doc = csv::read(in);
  const auto id_col = doc.require_column("id", "regions");
  const auto name_col = doc.require_column("name", "regions");
  const auto level_col = doc.require_column("level", "regions");
  const auto parent_col = doc.require_column("parent", "regions");
  const auto iso_col = doc.require_column("iso_code", "regions");
  std::vector<Region> out;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    Region region;
    region.id = row[id_col];
    region.name = row[name_col].empty() ? row[id_col] : row[name_col];
    const auto level = parse_region_level(row[level_col]);
    if (!level) fail_at(ErrorCode::parse, doc, r, "unknown level '" + row[level_col] + "'");
    region.level = *level;
    if (!row[parent_col].empty()) region.parent = row[parent_col];
    if (!row[iso_col].empty()) region.iso_code = row[iso_col];
    out.push_back(std::move(region));
  }
  return out;
}

std::vector<GroupMembership> parse_groups(std::istream& in) {
  const auto doc = csv::read(in);
  const auto group_col = doc.require_column("group_id", "groups");
  const auto member_col = doc.require_column("member_region_id", "groups");
  std::vector<GroupMembership> out;
  for (const auto& row : doc.rows) out.push_back({row[group_col], row[member_col]});
  return out;
}

IntensityTable parse_intensity_table(std::istream& in) {
  const auto doc = csv::read(in);
  const auto source_col = doc.require_column("source", "intensity table");
  const auto pog_col = doc.require_column("pog", "intensity table");
  const auto lca_col = doc.require_column("lca", "intensity table");

  IntensityTable t;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& name = doc.rows[r][source_col];
    if (!seen.insert(name).second) {
      fail_at(ErrorCode::parse, doc, r, "duplicate source row '" + name + "'");
    }
    const double pog = number_at(doc, r, pog_col);
    const double lca = number_at(doc, r, lca_col);
    if (name == "methane_flared" || name == "methane_vented") {
      if (pog != lca) {
        fail_at(ErrorCode::parse, doc, r, "methane intensities must match across bases");
      }
      (name == "methane_flared" ? t.methane_flared : t.methane_vented) = pog;
      continue;
    }
    const auto source = parse_source(name);
    if (!source || !is_grid_source(*source)) {
      fail_at(ErrorCode::unknown_source, doc, r, "unknown source row '" + name + "'");
    }
    t.pog[static_cast<std::size_t>(*source)] = pog;
    t.lca[static_cast<std::size_t>(*source)] = lca;
  }
  if (seen.size() != kGridSourceCount + 2) {
    throw Error(ErrorCode::parse,
                "intensity table needs one row per grid source plus methane_flared and "
                "methane_vented");
  }
  return t;
}

std::vector<FixtureTable> load_fixture_dir(const std::filesystem::path& dir) {
  std::vector<FixtureTable> tables;
  for (auto id : {TableId::I, TableId::II, TableId::III, TableId::IV}) {
    const auto path = dir / ("table_" + std::string(to_string(id)) + ".csv");
    tables.push_back(parse_file(path, [id](std::istream& in) { return parse_fixture(in, id); }));
  }
  return tables;
}

}  // namespace leaksim
