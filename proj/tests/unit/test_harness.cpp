// SPDX-License-Identifier: Apache-2.0
//
// phyauth: physical-layer assisted authentication for vehicular networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "phyauth/errors.hpp"
#include "phyauth/harness.hpp"

namespace phyauth::harness {
namespace {

TEST(Config, ParsesKeysListsAndComments) {
  ExperimentConfig cfg;
  apply_config_text(cfg,
                    "# sweep\n"
                    "scenario = pf-near\n"
                    "snr_db = 0, 10,20\n"
                    "\n"
                    "alpha=2\n"
                    "k=100\n"
                    "trials = 50\n"
                    "criterion = trace\n"
                    "fading = block\n"
                    "pki = ed25519\n");
  EXPECT_EQ(cfg.scenario, Scenario::PfNear);
  EXPECT_EQ(cfg.snr_db, (std::vector<double>{0, 10, 20}));
  EXPECT_EQ(cfg.alpha, (std::vector<double>{2}));
  EXPECT_EQ(cfg.trials, 50U);
  EXPECT_EQ(cfg.criterion, estimation::MlCriterion::TraceForm);
  EXPECT_EQ(cfg.fading, channel::Fading::Block);
  EXPECT_EQ(cfg.pki, PkiMode::Ed25519);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, RejectsBadInput) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "trials", "many"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "snr_db", "1,,2"), ConfigError);
  EXPECT_THROW(apply_config_text(cfg, "just words\n"), ConfigError);
  EXPECT_THROW(parse_scenario("pf"), ConfigError);
  ExperimentConfig zero;
  zero.trials = 0;
  EXPECT_THROW(zero.validate(), ConfigError);
  ExperimentConfig wide;
  wide.m_bits = 17;
  EXPECT_THROW(wide.validate(), ConfigError);
  EXPECT_THROW(apply_config_file(cfg, "/nonexistent/path.cfg"), ConfigError);
}

TEST(Config, ScenarioNamesRoundTrip) {
  for (Scenario s : {Scenario::PdSweep, Scenario::PfFar, Scenario::PfNear, Scenario::CrbCheck,
                     Scenario::SkaDemo, Scenario::MitmMap}) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
    EXPECT_EQ(ExperimentConfig::defaults_for(s).scenario, s);
  }
}

TEST(Config, NoiseVariance) {
  EXPECT_DOUBLE_EQ(noise_variance(0.0), 1.0);
  EXPECT_NEAR(noise_variance(20.0), 0.01, 1e-15);
}

TEST(Layout, PlacementHitsRequestedAngle) {
  const Layout l = make_layout(100.0);
  EXPECT_NEAR(geometry::distance_m(l.a.gps, l.b.gps), 100.0, 1e-6);
  EXPECT_NEAR(geometry::expected_aoa(geometry::heading_angle(l.b.gps, l.a.gps), l.a.theta_r_north),
              0.0, 1e-12);
  for (double deg : {-80.0, -35.0, 0.0, 25.0, 37.5, 89.0}) {
    const geometry::GeoCoord p = place_at_aoa(l.receiver, deg2rad(deg), 100.0);
    EXPECT_NEAR(rad2deg(auth::claimed_aoa(p, l.receiver)), deg, 1e-9);
    EXPECT_NEAR(geometry::distance_m(p, l.receiver.gps), 100.0, 1e-6);
  }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [&](std::size_t) { FAIL(); });
}

ExperimentConfig small(Scenario s) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for(s);
  cfg.trials = 40;
  cfg.snr_db = {10, 20};
  cfg.seed = 5;
  return cfg;
}

TEST(Run, CsvHeaders) {
  auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  EXPECT_EQ(first_line(run(small(Scenario::PdSweep)).text),
            "scenario,snr_db,alpha_deg,k,n,L,trials,empirical,analytic,std_error");
  ExperimentConfig crb = small(Scenario::CrbCheck);
  crb.theta_deg = {25};
  crb.n = {4};
  EXPECT_EQ(first_line(run(crb).text),
            "scenario,theta_deg,snr_db,k,n,L,trials,variance,variance_se,crb,fisher_crb,ratio,"
            "flagged");
  ExperimentConfig map = small(Scenario::MitmMap);
  map.raster_cells = 3;
  map.trials = 5;
  EXPECT_EQ(first_line(run(map).text), "x,y,success_rate,in_region");
}

TEST(Run, IdenticalAcrossWorkerCounts) {
  for (Scenario s : {Scenario::PdSweep, Scenario::PfFar, Scenario::MitmMap}) {
    ExperimentConfig one = small(s);
    one.raster_cells = 5;
    one.trials = 20;
    ExperimentConfig many = one;
    many.workers = 3;
    EXPECT_EQ(run(one).text, run(many).text) << to_string(s);
  }
}

TEST(Run, SweepShapes) {
  const ExperimentConfig cfg = small(Scenario::PdSweep);
  const auto pd = run_pd_sweep(cfg);
  EXPECT_EQ(pd.size(), cfg.snr_db.size() * cfg.alpha.size() * cfg.k.size() * cfg.n.size());
  for (const CurvePoint& p : pd) {
    EXPECT_EQ(p.pilots, 40U);
    EXPECT_GE(p.empirical, 0.0);
    EXPECT_LE(p.empirical, 1.0);
    EXPECT_GT(p.analytic, 0.0);
  }
  const auto pf = run_pf_sweep(small(Scenario::PfFar));
  for (const CurvePoint& p : pf) EXPECT_EQ(p.scenario, Scenario::PfFar);
}

TEST(Run, MapMarksSegmentCells) {
  ExperimentConfig cfg = small(Scenario::MitmMap);
  cfg.raster_cells = 5;
  cfg.trials = 10;
  const auto cells = run_mitm_map(cfg);
  ASSERT_EQ(cells.size(), 25U);
  int inside = 0;
  for (const MapCell& c : cells) {
    if (c.y == 0.0 && std::abs(c.x) < 50.0) EXPECT_TRUE(c.in_region);
    inside += c.in_region;
  }
  EXPECT_LT(inside, 25);
}

TEST(Run, DemoTraceOutcomes) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for(Scenario::SkaDemo);
  cfg.snr_db = {20};
  cfg.alpha = {3};
  const std::string text = run(cfg).text;
  EXPECT_NE(text.find("result: Completed, keys match"), std::string::npos);
  EXPECT_NE(text.find("result: AbortedAtStep(3)"), std::string::npos);
  EXPECT_NE(text.find("B step 3:"), std::string::npos);
}

}  // namespace
}  // namespace phyauth::harness
