#include "leaksim/dataset.hpp"

#include "json.hpp"

#include "leaksim/atlas.hpp"
#include "leaksim/csv.hpp"
#include "leaksim/error.hpp"
#include "leaksim/ingest.hpp"

namespace leaksim {

namespace fs = std::filesystem;

namespace {

double config_number(const std::map<std::string, std::string>& conf, const std::string& key,
                     const fs::path& file) {
  const auto v = csv::parse_number(conf.at(key));
  if (!v) {
    throw Error(ErrorCode::parse, file.string() + ": '" + key + "' is not a number");
  }
  return *v;
}

}  // namespace

void load_grid_dir(const fs::path& dir, CarbonInputs& inputs) {
  const std::pair<const char*, GridSchema> files[] = {
      {"country.csv", GridSchema::country},
      {"us_state.csv", GridSchema::us_state},
      {"cn_province.csv", GridSchema::cn_province},
  };
  for (const auto& [name, schema] : files) {
    const auto path = dir / name;
    if (!fs::exists(path)) continue;
    const auto set = parse_file(path, [&](std::istream& in) { return parse_grid_mix(in, schema); });
    for (const auto& m : set.mixes) inputs.add(m);
    for (const auto& d : set.direct) inputs.add(d);
  }
}

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "data directory '" + dir.string() + "' does not exist");
  }
  Dataset ds;
  ds.root = dir;

  auto regions = parse_file(dir / "regions.csv", parse_regions);
  std::vector<GroupMembership> groups;
  if (fs::exists(dir / "groups.csv")) groups = parse_file(dir / "groups.csv", parse_groups);
  ds.registry = build_registry(std::move(regions), std::move(groups));

  {
    auto in = open_input(dir / "atlas.json");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse, (dir / "atlas.json").string() + ": " + e.what());
    }
    ds.atlas = atlas_from_json(doc, ds.registry.row_id());
  }
  const auto report = validate_atlas(ds.atlas, ds.registry);
  if (!report.ok()) {
    throw Error(ErrorCode::invalid_argument,
                (dir / "atlas.json").string() + ": " + report.findings.front().message);
  }

  if (fs::exists(dir / "intensity_table.csv")) {
    ds.carbon.table = parse_file(dir / "intensity_table.csv", parse_intensity_table);
  }
  if (fs::is_directory(dir / "grid")) load_grid_dir(dir / "grid", ds.carbon);

  std::map<std::string, std::string> conf;
  const auto conf_path = dir / "dataset.conf";
  if (fs::exists(conf_path)) conf = parse_file(conf_path, parse_key_values);
  if (conf.contains("row_intensity_pog")) {
    ds.carbon.row_pog = config_number(conf, "row_intensity_pog", conf_path);
  }
  if (conf.contains("row_intensity_lca")) {
    ds.carbon.row_lca = config_number(conf, "row_intensity_lca", conf_path);
  }

  const auto params_path = dir / "network_params.txt";
  const auto equipment_path = dir / "equipment.csv";
  if (fs::exists(params_path) && fs::exists(equipment_path)) {
    const auto params = parse_file(params_path, parse_network_params);
    const auto equipment = parse_file(equipment_path, parse_equipment);
    ds.power = estimate_power(params, equipment);
  }
  if (conf.contains("energy_twh")) {
    ds.energy_twh = config_number(conf, "energy_twh", conf_path);
    if (!(ds.energy_twh >= 0.0)) {
      throw Error(ErrorCode::invalid_argument, conf_path.string() + ": energy_twh is negative");
    }
  } else if (ds.power) {
    ds.energy_twh = ds.power->annual_twh;
  } else {
    throw Error(ErrorCode::io, "data directory '" + dir.string() +
                                   "' sets no energy_twh and has no network_params.txt + "
                                   "equipment.csv");
  }
  return ds;
}

}  // namespace leaksim
