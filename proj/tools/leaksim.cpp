// leaksim command-line front end. Data goes to stdout (or --out), diagnostics
// to stderr. Exit 2 for usage errors, 1 for data errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "leaksim/api.hpp"
#include "leaksim/atlas.hpp"
#include "leaksim/csv.hpp"
#include "leaksim/dataset.hpp"
#include "leaksim/error.hpp"
#include "leaksim/ingest.hpp"
#include "leaksim/power.hpp"
#include "leaksim/report.hpp"
#include "leaksim/scenario.hpp"

#ifndef LEAKSIM_DEFAULT_DATA_DIR
#define LEAKSIM_DEFAULT_DATA_DIR "data/world"
#endif

namespace fs = std::filesystem;
using namespace leaksim;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + out_path + "'");
  out << text;
}

fs::path or_default(const std::string& given, const fs::path& dir, const char* name) {
  return given.empty() ? dir / name : fs::path(given);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = csv::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon-leakage simulator for proof-of-work mining bans"};
  app.require_subcommand(1);

  std::string data_dir = LEAKSIM_DEFAULT_DATA_DIR;
  app.add_option("--data-dir", data_dir, "Dataset directory")->envname("LEAKSIM_DATA");

  // ingest
  struct {
    std::string snapshot, grid_dir, facilities, equipment, params, regions, leaf_weights, as_of,
        out;
  } ing;
  auto* ingest = app.add_subcommand("ingest", "Build atlas.json from raw inputs");
  ingest->add_option("--snapshot", ing.snapshot, "Hash-rate snapshot CSV")->required();
  ingest->add_option("--grid-mix", ing.grid_dir, "Directory of grid mix CSVs");
  ingest->add_option("--facilities", ing.facilities, "Facility registry CSV");
  ingest->add_option("--equipment", ing.equipment, "Equipment CSV")->required();
  ingest->add_option("--params", ing.params, "Network parameter file")->required();
  ingest->add_option("--regions", ing.regions, "Regions CSV (default: <data-dir>/regions.csv)");
  ingest->add_option("--leaf-weights", ing.leaf_weights, "Sub-national leaf weights CSV");
  ingest->add_option("--as-of", ing.as_of, "Atlas date; later facilities are left out");
  ingest->add_option("--out", ing.out, "Output path (default stdout)");

  // power
  std::string power_params, power_equipment;
  auto* power = app.add_subcommand("power", "Estimate network power and annual energy");
  power->add_option("--params", power_params, "Network parameter file");
  power->add_option("--equipment", power_equipment, "Equipment CSV");

  // baseline
  std::string baseline_basis = "pog";
  auto* baseline = app.add_subcommand("baseline", "Per-region baseline emissions");
  baseline->add_option("--basis", baseline_basis, "pog or lca")
      ->check(CLI::IsMember({"pog", "lca", "POG", "LCA"}));

  // ban
  std::string ban_regions, ban_group, ban_basis = "pog";
  double ban_e = 1.0;
  double ban_months = 1.0;
  bool ban_csv = false;
  auto* ban = app.add_subcommand("ban", "Evaluate a single ban scenario");
  ban->add_option("--regions", ban_regions, "Comma-separated region ids");
  ban->add_option("--group", ban_group, "Coalition to ban");
  ban->add_option("--effectiveness", ban_e, "Fraction of banned mining suppressed")
      ->check(CLI::Range(0.0, 1.0));
  ban->add_option("--basis", ban_basis, "pog or lca")
      ->check(CLI::IsMember({"pog", "lca", "POG", "LCA"}));
  ban->add_option("--months", ban_months, "Suppression window for one-off avoidance")
      ->check(CLI::NonNegativeNumber);
  auto* json_flag = ban->add_flag("--json", "JSON output (default)");
  ban->add_flag("--csv", ban_csv, "CSV of per-region deltas")->excludes(json_flag);

  // sweep
  std::string sweep_level, sweep_out, sweep_format = "csv";
  bool sweep_serial = false;
  std::vector<std::string> sweep_groups = {"EU"};
  auto* sweep = app.add_subcommand("sweep", "Single-ban sweep over one region level");
  sweep->add_option("--level", sweep_level, "country, us-state or cn-province")
      ->required()
      ->check(CLI::IsMember({"country", "us-state", "cn-province"}));
  sweep->add_option("--out", sweep_out, "Output path (default stdout)");
  sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--groups", sweep_groups, "Coalition rows for the country sweep");
  sweep->add_flag("--serial", sweep_serial, "Use the serial reference kernel");

  // check-fixtures
  std::string fixture_dir = "fixtures";
  auto* check = app.add_subcommand("check-fixtures", "Half-scaling check of the fixture tables");
  check->add_option("--dir", fixture_dir, "Directory holding table_{I,II,III,IV}.csv");

  // serve
  int port = 8080;
  std::string host = "127.0.0.1", ui_dir;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--ui-dir", ui_dir, "Built UI assets to serve at /");
  serve->add_option("--data-dir", data_dir, "Dataset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) {
      const fs::path dir = data_dir;
      const auto registry =
          build_registry(parse_file(or_default(ing.regions, dir, "regions.csv"), parse_regions),
                         {});
      AtlasInputs in;
      in.snapshot = parse_file(ing.snapshot, parse_hashrate_snapshot);
      if (in.snapshot.renormalized) {
        std::cerr << "note: snapshot shares summed to " << in.snapshot.input_sum
                  << "; renormalized\n";
      }
      const auto params = parse_file(ing.params, parse_network_params);
      const auto equipment = parse_file(ing.equipment, parse_equipment);
      in.power = estimate_power(params, equipment);
      if (!ing.facilities.empty()) in.facilities = parse_file(ing.facilities, parse_facilities);
      if (!ing.leaf_weights.empty()) in.leaf_weights = parse_file(ing.leaf_weights, parse_leaf_weights);
      in.as_of = ing.as_of;

      const auto atlas = build_atlas(in, registry);
      const auto report = validate_atlas(atlas, registry);
      for (const auto& f : report.findings) std::cerr << "finding: " << f.message << '\n';
      if (!report.ok()) return kExitData;

      if (!ing.grid_dir.empty()) {
        CarbonInputs carbon;
        load_grid_dir(ing.grid_dir, carbon);
        resolve_intensities(atlas, carbon, Basis::pog);
        resolve_intensities(atlas, carbon, Basis::lca);
      }
      write_output(atlas_to_json(atlas).dump(2) + "\n", ing.out);
      std::cerr << atlas.entries.size() << " atlas entries\n";
      return 0;
    }

    if (*power) {
      const fs::path dir = data_dir;
      const auto params =
          parse_file(or_default(power_params, dir, "network_params.txt"), parse_network_params);
      const auto equipment =
          parse_file(or_default(power_equipment, dir, "equipment.csv"), parse_equipment);
      std::cout << api::power_json(estimate_power(params, equipment)).dump(2) << '\n';
      return 0;
    }

    if (*check) {
      const auto tables = load_fixture_dir(fixture_dir);
      const auto findings = check_fixtures(tables);
      std::size_t rows = 0;
      for (const auto& t : tables) rows += t.table.rows.size();
      for (const auto& f : findings) {
        std::cerr << "Table " << to_string(f.table) << ", " << f.row << ": " << f.message << '\n';
      }
      std::cout << findings.size() << " violations (" << rows << " rows checked)\n";
      return findings.empty() ? 0 : kExitData;
    }

    const auto data = load_dataset(data_dir);

    if (*baseline) {
      const auto basis = *parse_basis(baseline_basis);
      std::cout << api::ledger_json(baseline_emissions(data.atlas, data.energy_twh, basis,
                                                       data.carbon))
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*ban) {
      nlohmann::json request = {{"effectiveness", ban_e},
                                {"basis", ban_basis},
                                {"suppression_months", ban_months},
                                {"regions", split_list(ban_regions)}};
      if (!ban_group.empty()) request["group"] = ban_group;
      const auto response = api::handle_scenario_request(request, data);
      if (response.status != 200) {
        std::cerr << "error: " << response.body.value("error", "scenario failed") << '\n';
        return response.status == 400 && response.body.value("code", "") == "invalid_argument"
                   ? kExitUsage
                   : kExitData;
      }
      if (ban_csv) {
        std::cout << "region_id,delta_kt\n"
                  << "GLOBAL," << format_fixed2(response.body["delta_kt"].get<double>()) << '\n';
        for (const auto& row : response.body["per_region"]) {
          std::cout << csv::escape(row["region_id"].get<std::string>()) << ','
                    << format_fixed2(row["delta_kt"].get<double>()) << '\n';
        }
      } else {
        std::cout << response.body.dump(2) << '\n';
      }
      return 0;
    }

    if (*sweep) {
      SweepOptions opts;
      opts.execution = sweep_serial ? Execution::serial : Execution::parallel;
      opts.groups = sweep_groups;
      const auto table = sweep_single_bans(data.atlas, data.energy_twh,
                                           *parse_sweep_level(sweep_level), data.carbon,
                                           data.registry, opts);
      write_output(emit_table(table, sweep_format == "json" ? TableFormat::json : TableFormat::csv),
                   sweep_out);
      return 0;
    }

    if (*serve) {
      std::optional<fs::path> ui;
      if (!ui_dir.empty()) ui = ui_dir;
      std::cerr << "serving " << data.root.string() << " on http://" << host << ':' << port
                << '\n';
      return api::serve(data, host, port, ui) ? 0 : kExitData;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
