#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "leaksim/atlas.hpp"

namespace leaksim {
namespace {

using testing::code_of;

Snapshot snap(std::map<std::string, double> shares) {
  Snapshot s;
  s.shares = std::move(shares);
  return s;
}

TEST(CbeciUpdate, PinsChinaHalvesKazakhstan) {
  const auto out =
      apply_post_cbeci_adjustments(snap({{"CN", 0.20}, {"KZ", 0.10}, {"US", 0.40}, {"ROW", 0.30}}));
  // Freed 0.10 split 4:3 between US and ROW.
  EXPECT_NEAR(out.shares.at("CN"), 0.15, 1e-12);
  EXPECT_NEAR(out.shares.at("KZ"), 0.05, 1e-12);
  EXPECT_NEAR(out.shares.at("US"), 0.40 + 0.10 * 4.0 / 7.0, 1e-12);
  EXPECT_NEAR(out.shares.at("ROW"), 0.30 + 0.10 * 3.0 / 7.0, 1e-12);
  EXPECT_NEAR(out.shares.at("US"), 0.457142857, 1e-9);
  EXPECT_NEAR(out.shares.at("ROW"), 0.342857143, 1e-9);
  EXPECT_TRUE(out.post_cbeci_adjusted);
}

TEST(CbeciUpdate, FixedPoints) {
  const auto in = snap({{"CN", 0.15}, {"KZ", 0.0}, {"US", 0.50}, {"ROW", 0.35}});
  const auto out = apply_post_cbeci_adjustments(in);
  EXPECT_EQ(out.shares, in.shares);
}

TEST(CbeciUpdate, ChinaBelowPinDrawsFromOthers) {
  const auto out =
      apply_post_cbeci_adjustments(snap({{"CN", 0.10}, {"KZ", 0.0}, {"US", 0.60}, {"ROW", 0.30}}));
  EXPECT_NEAR(out.shares.at("CN"), 0.15, 1e-12);
  EXPECT_NEAR(out.shares.at("US"), 0.60 - 0.05 * 0.6 / 0.9, 1e-12);
  EXPECT_NEAR(out.shares.at("ROW"), 0.30 - 0.05 * 0.3 / 0.9, 1e-12);
}

TEST(CbeciUpdate, Errors) {
  EXPECT_EQ(code_of([] { apply_post_cbeci_adjustments(snap({{"US", 1.0}})); }),
            ErrorCode::missing_region);
  EXPECT_EQ(code_of([] {
              apply_post_cbeci_adjustments(snap({{"CN", 0.5}, {"KZ", 0.5}, {"US", 0.5}}));
            }),
            ErrorCode::not_normalized);
}

TEST(CbeciUpdate, IdempotentOnTaggedOutput) {
  const auto once =
      apply_post_cbeci_adjustments(snap({{"CN", 0.20}, {"KZ", 0.10}, {"US", 0.40}, {"ROW", 0.30}}));
  const auto twice = apply_post_cbeci_adjustments(once);
  EXPECT_EQ(once.shares, twice.shares);
}

RegionRegistry registry() {
  return build_registry({
      {"CA", "Canada", RegionLevel::country, {}, "CA"},
      {"NO", "Norway", RegionLevel::country, {}, "NO"},
      {"PY", "Paraguay", RegionLevel::country, {}, "PY"},
      {"US", "United States", RegionLevel::country, {}, "US"},
      {"US-TX", "Texas", RegionLevel::us_state, "US", "US-TX"},
      {"US-NY", "New York", RegionLevel::us_state, "US", "US-NY"},
      {"US-Other", "Other", RegionLevel::us_state, "US", {}},
      {"ROW", "Rest", RegionLevel::aggregate, {}, {}},
  });
}

PowerEstimate power(double hashrate_ths = 1e6, double best_gw = 10.0) {
  PowerEstimate p;
  p.network_hashrate_ths = hashrate_ths;
  p.best_gw = p.lower_gw = p.upper_gw = best_gw;
  return p;
}

Facility ths(std::string id, std::string region, double v, EnergySource s = EnergySource::hydro,
             std::string date = "2022-01-01") {
  return {std::move(id), std::move(region), HashrateThs{v}, s, Counterfactual::none, std::move(date)};
}

double total_of(const Atlas& a, std::string_view region) {
  double t = 0;
  for (const auto& e : a.entries) {
    if (e.region_id == region) t += e.share;
  }
  return t;
}

double share_of(const Atlas& a, std::string_view region, Supply supply) {
  double t = 0;
  for (const auto& e : a.entries) {
    if (e.region_id == region && e.supply == supply) t += e.share;
  }
  return t;
}

TEST(MergeFacilities, OverrideExceedingSnapshot) {
  const auto s = snap({{"PY", 0.001}, {"US", 0.5}, {"ROW", 0.499}});
  const std::vector<Facility> fs = {ths("f1", "PY", 3000), ths("f2", "PY", 2000)};
  const auto a = merge_facilities(s, fs, power(), registry(), "");
  EXPECT_NEAR(total_of(a, "PY"), 0.005, 1e-15);
  EXPECT_EQ(share_of(a, "PY", Supply::grid), 0.0);
  EXPECT_NEAR(total_of(a, "ROW"), 0.499 - 0.004, 1e-15);
  EXPECT_NEAR(a.total_share(), 1.0, 1e-12);
}

TEST(MergeFacilities, PartitionWithinSnapshot) {
  const auto s = snap({{"NO", 0.01}, {"US", 0.5}, {"ROW", 0.49}});
  const auto a = merge_facilities(s, std::vector{ths("f1", "NO", 4000)}, power(), registry(), "");
  EXPECT_NEAR(share_of(a, "NO", Supply::offgrid), 0.004, 1e-15);
  EXPECT_NEAR(share_of(a, "NO", Supply::grid), 0.006, 1e-15);
  EXPECT_EQ(total_of(a, "ROW"), 0.49);
}

TEST(MergeFacilities, NoFacilitiesIsIdentity) {
  const auto s = snap({{"NO", 0.01}, {"US", 0.5}, {"ROW", 0.49}});
  const auto a = merge_facilities(s, {}, power(), registry(), "");
  ASSERT_EQ(a.entries.size(), 3u);
  for (const auto& e : a.entries) {
    EXPECT_EQ(e.supply, Supply::grid);
    EXPECT_EQ(e.share, s.shares.at(e.region_id));
  }
}

TEST(MergeFacilities, MegawattsUseBestGuessPower) {
  const auto s = snap({{"US", 0.5}, {"ROW", 0.5}});
  const std::vector<Facility> fs = {
      {"m1", "US-TX", PowerMw{30}, EnergySource::methane, Counterfactual::flared, "2022-01-01"}};
  const auto a = merge_facilities(s, fs, power(1e6, 15.0), registry(), "");
  EXPECT_NEAR(share_of(a, "US-TX", Supply::offgrid), 30.0 / 15000.0, 1e-15);
  // Leaf facilities count toward their country.
  EXPECT_NEAR(share_of(a, "US", Supply::grid), 0.5 - 0.002, 1e-15);
}

TEST(MergeFacilities, LaterStartDatesExcluded) {
  const auto s = snap({{"NO", 0.01}, {"US", 0.5}, {"ROW", 0.49}});
  const auto a = merge_facilities(
      s, std::vector{ths("f1", "NO", 4000, EnergySource::hydro, "2025-01-01")}, power(), registry(),
      "2024-07-01");
  EXPECT_EQ(share_of(a, "NO", Supply::offgrid), 0.0);
}

TEST(MergeFacilities, Errors) {
  const auto s = snap({{"PY", 0.001}, {"ROW", 0.999}});
  EXPECT_EQ(code_of([&] {
              merge_facilities(s, std::vector{ths("f1", "PY", 1500000)}, power(), registry(), "");
            }),
            ErrorCode::negative_residual);
  EXPECT_EQ(code_of([&] {
              merge_facilities(s, std::vector{ths("f1", "XX", 1)}, power(), registry(), "");
            }),
            ErrorCode::unknown_region);
  EXPECT_EQ(code_of([&] {
              merge_facilities(snap({{"ZZ", 0.5}, {"ROW", 0.5}}), {}, power(), registry(), "");
            }),
            ErrorCode::unknown_region);
}

TEST(MergeFacilities, PermutationInvariantAndMonotone) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> regions = {"CA", "NO", "PY", "US-TX", "US-NY"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = snap({{"CA", 0.05}, {"NO", 0.01}, {"PY", 0.002}, {"US", 0.4}, {"ROW", 0.538}});
    std::vector<Facility> fs;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      fs.push_back(ths("f" + std::to_string(i), regions[rng() % regions.size()],
                       std::uniform_real_distribution<double>(1, 20000)(rng),
                       static_cast<EnergySource>(rng() % 8)));
    }
    const auto a = merge_facilities(s, fs, power(), registry(), "");
    std::shuffle(fs.begin(), fs.end(), rng);
    const auto b = merge_facilities(s, fs, power(), registry(), "");
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      EXPECT_EQ(a.entries[i].key(), b.entries[i].key());
      EXPECT_EQ(a.entries[i].share, b.entries[i].share);
    }
    for (const auto& c : {"CA", "NO", "PY"}) EXPECT_GE(total_of(a, c), s.shares.at(c) - 1e-15);
    EXPECT_GE(total_of(a, "US") + total_of(a, "US-TX") + total_of(a, "US-NY"), 0.4 - 1e-15);
    EXPECT_NEAR(a.total_share(), 1.0, 1e-9);
  }
}

Atlas us_atlas(double us) {
  Atlas a;
  a.entries = {{"US", us, Supply::grid, {}, Counterfactual::none},
               {"US-TX", 0.01, Supply::offgrid, EnergySource::methane, Counterfactual::flared},
               {"ROW", 1 - us - 0.01, Supply::grid, {}, Counterfactual::none}};
  return canonicalize(a);
}

TEST(DistributeLeaves, Products) {
  const auto a = distribute_national_to_leaves(
      us_atlas(0.40), "US", {{"US-TX", 0.5}, {"US-NY", 0.25}, {"US-Other", 0.25}}, registry());
  EXPECT_NEAR(share_of(a, "US-TX", Supply::grid), 0.20, 1e-15);
  EXPECT_NEAR(share_of(a, "US-NY", Supply::grid), 0.10, 1e-15);
  EXPECT_NEAR(share_of(a, "US-Other", Supply::grid), 0.10, 1e-15);
  EXPECT_EQ(share_of(a, "US", Supply::grid), 0.0);
  EXPECT_EQ(share_of(a, "US-TX", Supply::offgrid), 0.01);
  EXPECT_NEAR(a.total_share(), 1.0, 1e-12);
}

TEST(DistributeLeaves, SingleLeafMovesUnchanged) {
  const auto a = distribute_national_to_leaves(us_atlas(0.40), "US", {{"US-NY", 1.0}}, registry());
  EXPECT_EQ(share_of(a, "US-NY", Supply::grid), 0.40);
}

TEST(DistributeLeaves, Errors) {
  EXPECT_EQ(code_of([] {
              distribute_national_to_leaves(us_atlas(0.4), "US", {{"US-TX", 0.5}, {"US-NY", 0.4}},
                                            registry());
            }),
            ErrorCode::weight_sum);
  EXPECT_EQ(code_of([] {
              distribute_national_to_leaves(us_atlas(0.4), "CA", {{"US-TX", 1.0}}, registry());
            }),
            ErrorCode::no_leaves);
  EXPECT_EQ(code_of([] {
              distribute_national_to_leaves(us_atlas(0.4), "US", {{"CA", 1.0}}, registry());
            }),
            ErrorCode::unknown_region);
}

TEST(BuildAtlas, ConservesShareOnRandomSnapshots) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, double> raw = {{"CN", u(rng)}, {"KZ", u(rng)}, {"US", u(rng)},
                                         {"CA", u(rng)}, {"NO", u(rng)}, {"ROW", 0.5 + u(rng)}};
    double sum = 0;
    for (auto& [k, v] : raw) sum += v;
    for (auto& [k, v] : raw) v /= sum;
    auto reg = build_registry({{"CN", "China", RegionLevel::country, {}, {}},
                               {"KZ", "Kazakhstan", RegionLevel::country, {}, {}},
                               {"CA", "Canada", RegionLevel::country, {}, {}},
                               {"NO", "Norway", RegionLevel::country, {}, {}},
                               {"US", "US", RegionLevel::country, {}, {}},
                               {"US-TX", "Texas", RegionLevel::us_state, "US", {}},
                               {"US-Other", "Other", RegionLevel::us_state, "US", {}},
                               {"ROW", "Rest", RegionLevel::aggregate, {}, {}}});
    AtlasInputs in;
    in.snapshot = snap(raw);
    in.power = power(1e6, 10);
    in.facilities = {ths("a", "NO", 1000 * u(rng)), ths("b", "US-TX", 1000 * u(rng))};
    in.leaf_weights = {{"US", {{"US-TX", 0.3}, {"US-Other", 0.7}}}};
    const auto a = build_atlas(in, reg);
    EXPECT_NEAR(a.total_share(), 1.0, 1e-9);
    EXPECT_TRUE(validate_atlas(a, reg).ok());
  }
}

TEST(AtlasJson, RoundTrip) {
  const auto a = us_atlas(0.4);
  const auto b = atlas_from_json(atlas_to_json(a));
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].key(), b.entries[i].key());
    EXPECT_EQ(a.entries[i].share, b.entries[i].share);
  }
  EXPECT_EQ(code_of([] { atlas_from_json(nlohmann::json::object()); }), ErrorCode::parse);
  EXPECT_EQ(code_of([] {
              atlas_from_json(nlohmann::json::parse(R"([{"region_id":"A","share":1,"supply":"sky"}])"));
            }),
            ErrorCode::parse);
}

}  // namespace
}  // namespace leaksim
