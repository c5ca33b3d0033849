#include "leaksim/api.hpp"

#include "httplib.h"

#include "leaksim/error.hpp"
#include "leaksim/report.hpp"

namespace leaksim::api {

using nlohmann::json;

namespace {

Response bad_request(std::string message) {
  return {400, {{"error", std::move(message)}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::unknown_region:
    case ErrorCode::unknown_group:
    case ErrorCode::parse:
      return 400;
    case ErrorCode::no_destination:
      return 422;
    default:
      return 500;
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

Response handle_scenario_request(const json& request, const Dataset& data) {
  if (!request.is_object()) return bad_request("request body must be a JSON object");

  Scenario scenario;
  std::optional<std::string> group;
  if (request.contains("group") && !request["group"].is_null()) {
    if (!request["group"].is_string()) return bad_request("'group' must be a string");
    group = request["group"].get<std::string>();
  }
  if (request.contains("regions")) {
    const auto& regions = request["regions"];
    if (!regions.is_array()) return bad_request("'regions' must be an array of region ids");
    for (const auto& r : regions) {
      if (!r.is_string()) return bad_request("'regions' must be an array of region ids");
      scenario.banned_regions.insert(r.get<std::string>());
    }
  } else if (!group) {
    return bad_request("'regions' is required");
  }

  if (!request.contains("effectiveness") || !request["effectiveness"].is_number()) {
    return bad_request("'effectiveness' must be a number");
  }
  scenario.effectiveness = request["effectiveness"].get<double>();
  if (!request.contains("basis") || !request["basis"].is_string()) {
    return bad_request("'basis' must be \"pog\" or \"lca\"");
  }
  const auto basis = parse_basis(request["basis"].get<std::string>());
  if (!basis) return bad_request("'basis' must be \"pog\" or \"lca\"");
  scenario.basis = *basis;
  if (request.contains("suppression_months")) {
    if (!request["suppression_months"].is_number()) {
      return bad_request("'suppression_months' must be a number");
    }
    scenario.suppression_months = request["suppression_months"].get<double>();
  }

  try {
    if (group) {
      const auto members = resolve_group(*group, data.registry);
      scenario.banned_regions.insert(members.begin(), members.end());
    }
    if (scenario.banned_regions.empty()) return bad_request("ban set is empty");

    const auto result = evaluate(data.atlas, data.energy_twh, scenario, data.carbon, data.registry);

    json per_region = json::array();
    std::vector<MapDatum> map_rows;
    for (const auto& [id, d] : result.per_region_delta) {
      per_region.push_back({{"region_id", id}, {"delta_kt", d}});
      map_rows.push_back({id, d});
    }
    json body = {
        {"regions", scenario.banned_regions},
        {"group", group ? json(*group) : json(nullptr)},
        {"effectiveness", scenario.effectiveness},
        {"basis", to_string(scenario.basis)},
        {"suppression_months", scenario.suppression_months},
        {"energy_twh", data.energy_twh},
        {"baseline_kt", result.baseline_kt},
        {"delta_kt", result.delta_kt_per_year},
        {"percent", optional_number(result.percent_of_baseline)},
        {"one_off_kt", result.one_off_avoidance_kt},
        {"leakage_rate", optional_number(result.leakage_rate)},
        {"per_region", std::move(per_region)},
        {"map", emit_map_data(map_rows, data.registry, result.baseline_kt)},
    };
    if (group) {
      body["sum_of_singles_kt"] = sum_of_single_bans(data.atlas, data.energy_twh,
                                                     scenario.banned_regions, scenario,
                                                     data.carbon, data.registry);
    }
    return {200, std::move(body)};
  } catch (const Error& e) {
    return {status_for(e.code()), {{"error", e.what()}, {"code", to_string(e.code())}}};
  }
}

Response handle_scenario_request(std::string_view body, const Dataset& data) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception& e) {
    return bad_request(std::string("malformed JSON: ") + e.what());
  }
  return handle_scenario_request(request, data);
}

json regions_json(const RegionRegistry& registry) {
  json out = json::array();
  for (const auto& r : registry.regions()) {
    out.push_back({{"id", r.id},
                   {"name", r.name},
                   {"level", to_string(r.level)},
                   {"parent", r.parent ? json(*r.parent) : json(nullptr)},
                   {"iso_code", r.iso_code ? json(*r.iso_code) : json(nullptr)}});
  }
  return out;
}

json groups_json(const RegionRegistry& registry) {
  json out = json::array();
  for (const auto& [id, members] : registry.groups()) {
    out.push_back({{"group_id", id},
                   {"name", registry.group_display_name(id)},
                   {"members", members}});
  }
  return out;
}

json ledger_json(const EmissionsLedger& ledger) {
  return {{"basis", to_string(ledger.basis)},
          {"energy_twh", ledger.energy_twh},
          {"global_kt", ledger.global_kt},
          {"per_region_kt", ledger.per_region_kt},
          {"lca_fallback_regions", ledger.lca_fallback_regions}};
}

json power_json(const PowerEstimate& power) {
  return {{"lower_gw", power.lower_gw},
          {"best_gw", power.best_gw},
          {"upper_gw", power.upper_gw},
          {"annual_twh", power.annual_twh},
          {"network_hashrate_ths", power.network_hashrate_ths},
          {"profitable_models", power.profitable_models}};
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

constexpr const char* kPlaceholderPage =
    "<!doctype html><title>leaksim</title>"
    "<p>No UI build found. The API lives under <code>/api/</code>.</p>\n";

}  // namespace

void install_routes(httplib::Server& server, const Dataset& data,
                    const std::optional<std::filesystem::path>& ui_dir) {
  server.Get("/api/regions", [&data](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, regions_json(data.registry));
  });
  server.Get("/api/groups", [&data](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, groups_json(data.registry));
  });
  server.Get("/api/baseline", [&data](const httplib::Request& req, httplib::Response& res) {
    const auto text = req.has_param("basis") ? req.get_param_value("basis") : "pog";
    const auto basis = parse_basis(text);
    if (!basis) {
      send_json(res, 400, {{"error", "basis must be pog or lca"}});
      return;
    }
    try {
      send_json(res, 200, ledger_json(baseline_emissions(data.atlas, data.energy_twh, *basis,
                                                         data.carbon)));
    } catch (const Error& e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  });
  server.Get("/api/power", [&data](const httplib::Request&, httplib::Response& res) {
    if (!data.power) {
      send_json(res, 404, {{"error", "dataset has no network parameters"}});
      return;
    }
    send_json(res, 200, power_json(*data.power));
  });
  server.Post("/api/scenario", [&data](const httplib::Request& req, httplib::Response& res) {
    const auto r = handle_scenario_request(std::string_view(req.body), data);
    send_json(res, r.status, r.body);
  });

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server.set_mount_point("/", ui_dir->string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html");
    });
  }
}

bool serve(const Dataset& data, const std::string& host, int port,
           const std::optional<std::filesystem::path>& ui_dir) {
  httplib::Server server;
  install_routes(server, data, ui_dir);
  return server.listen(host, port);
}

}  // namespace leaksim::api
