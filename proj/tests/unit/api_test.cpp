#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"

#include "leaksim/api.hpp"

namespace leaksim::api {
namespace {

using nlohmann::json;

const Dataset& toy() {
  static const Dataset d = load_dataset(LEAKSIM_TOY_DIR);
  return d;
}

Response post(const json& request) { return handle_scenario_request(request, toy()); }

TEST(ScenarioHandler, BanA) {
  const auto r = post({{"regions", {"A"}}, {"effectiveness", 1.0}, {"basis", "pog"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_NEAR(r.body["delta_kt"].get<double>(), 35.0, 1e-9);
  EXPECT_NEAR(r.body["baseline_kt"].get<double>(), 35.0, 1e-9);
  EXPECT_TRUE(r.body["leakage_rate"].is_null());
  EXPECT_TRUE(r.body["group"].is_null());
  EXPECT_FALSE(r.body.contains("sum_of_singles_kt"));
  EXPECT_EQ(r.body["per_region"].size(), 3u);
  EXPECT_EQ(r.body["map"][1]["class"], "backfire");
}

TEST(ScenarioHandler, Group) {
  const auto r = post({{"group", "BC"}, {"effectiveness", 1.0}, {"basis", "pog"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_NEAR(r.body["delta_kt"].get<double>(), -35.0, 1e-9);
  EXPECT_NEAR(r.body["sum_of_singles_kt"].get<double>(), -22.678571428571, 1e-9);
  EXPECT_EQ(r.body["regions"], json({"B", "C"}));
}

TEST(ScenarioHandler, Errors) {
  EXPECT_EQ(post({{"regions", json::array()}, {"effectiveness", 1.0}, {"basis", "pog"}}).status, 400);
  EXPECT_EQ(post({{"effectiveness", 1.0}, {"basis", "pog"}}).status, 400);
  EXPECT_EQ(post({{"regions", {"A"}}, {"effectiveness", 1.0}}).status, 400);
  EXPECT_EQ(post({{"regions", {"A"}}, {"effectiveness", "1"}, {"basis", "pog"}}).status, 400);
  EXPECT_EQ(post({{"regions", {"A"}}, {"effectiveness", 1.5}, {"basis", "pog"}}).status, 400);
  EXPECT_EQ(post({{"regions", {"A"}}, {"effectiveness", 1.0}, {"basis", "tons"}}).status, 400);
  EXPECT_EQ(post({{"regions", {"ZZ"}}, {"effectiveness", 1.0}, {"basis", "pog"}}).status, 400);
  EXPECT_EQ(post({{"group", "NAFTA"}, {"effectiveness", 1.0}, {"basis", "pog"}}).status, 400);
  const auto all = post({{"regions", {"A", "B", "C"}}, {"effectiveness", 1.0}, {"basis", "pog"}});
  EXPECT_EQ(all.status, 422);
  EXPECT_EQ(all.body["code"], "no_destination");
  EXPECT_EQ(handle_scenario_request(std::string_view("{not json"), toy()).status, 400);
  EXPECT_EQ(handle_scenario_request(std::string_view("[1,2]"), toy()).status, 400);
}

TEST(ScenarioHandler, Deterministic) {
  const json req = {{"regions", {"C", "B"}}, {"effectiveness", 0.37}, {"basis", "lca"},
                    {"suppression_months", 3}};
  EXPECT_EQ(post(req).body.dump(), post(req).body.dump());
}

class Server : public ::testing::Test {
 protected:
  void SetUp() override {
    install_routes(server_, toy(), std::nullopt);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(Server, GetRoutes) {
  auto c = client();
  auto regions = c.Get("/api/regions");
  ASSERT_TRUE(regions);
  EXPECT_EQ(regions->status, 200);
  EXPECT_EQ(json::parse(regions->body).size(), 5u);

  auto groups = c.Get("/api/groups");
  ASSERT_TRUE(groups);
  EXPECT_EQ(json::parse(groups->body)[0]["name"], "Coalition B+C");

  auto baseline = c.Get("/api/baseline?basis=pog");
  ASSERT_TRUE(baseline);
  EXPECT_NEAR(json::parse(baseline->body)["global_kt"].get<double>(), 35.0, 1e-9);
  auto bad = c.Get("/api/baseline?basis=xyz");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto root = c.Get("/");
  ASSERT_TRUE(root);
  EXPECT_EQ(root->status, 200);
}

TEST_F(Server, PostScenarioMatchesHandler) {
  auto c = client();
  const json req = {{"regions", {"C"}}, {"effectiveness", 0.5}, {"basis", "pog"}};
  auto res = c.Post("/api/scenario", req.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), post(req).body);

  auto bad = c.Post("/api/scenario", "{}", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

}  // namespace
}  // namespace leaksim::api
