#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "json.hpp"

#include "leaksim/carbon.hpp"
#include "leaksim/dataset.hpp"
#include "leaksim/scenario.hpp"

namespace httplib {
class Server;
}

namespace leaksim::api {

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// Stateless scenario evaluation shared by `leaksim ban` and POST /api/scenario.
///
/// Request: {"regions": [..], "effectiveness": x, "basis": "pog"|"lca",
///           "group"?: name, "suppression_months"?: m}
/// 400 on schema violations or unknown regions/groups, 422 when the ban
/// leaves no destination for the hash rate.
Response handle_scenario_request(const nlohmann::json& request, const Dataset& data);
Response handle_scenario_request(std::string_view body, const Dataset& data);

nlohmann::json regions_json(const RegionRegistry& registry);
nlohmann::json groups_json(const RegionRegistry& registry);
nlohmann::json ledger_json(const EmissionsLedger& ledger);
nlohmann::json power_json(const PowerEstimate& power);

/// Register every route on `server`. `ui_dir`, when it exists, is mounted at /.
void install_routes(httplib::Server& server, const Dataset& data,
                    const std::optional<std::filesystem::path>& ui_dir);

/// Blocks until the server stops.
bool serve(const Dataset& data, const std::string& host, int port,
           const std::optional<std::filesystem::path>& ui_dir);

}  // namespace leaksim::api
