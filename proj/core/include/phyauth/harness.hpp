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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "phyauth/auth.hpp"
#include "phyauth/channel.hpp"
#include "phyauth/estimation.hpp"
#include "phyauth/ska.hpp"

namespace phyauth::harness {

enum class Scenario { PdSweep, PfFar, PfNear, CrbCheck, SkaDemo, MitmMap };

/// CLI spelling: pd, pf-far, pf-near, crb, ska-demo, mitm-map.
std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view name);  // throws ConfigError

enum class PkiMode { Permissive, Ed25519 };

struct ExperimentConfig {
  Scenario scenario = Scenario::PdSweep;
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  std::vector<double> alpha{1, 2, 3, 4, 5};
  std::vector<double> k{10, 100};
  std::vector<int> n{4};
  int n_p = 1;
  int n_s = 10;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;

  // Scenario angles, degrees, as seen by the receiver.
  double legit_deg = 25.0;
  double far_true_deg = -35.0;
  double far_claim_deg = -25.0;
  double near_true_deg = 40.0;
  double near_claim_deg = 37.5;
  std::vector<double> theta_deg{0, 25, 40, 70};  // crb scenario
  double range_m = 100.0;                         // transmitter distance

  double grid_step_deg = 0.1;
  estimation::MlCriterion criterion = estimation::MlCriterion::PilotWeighted;
  channel::Fading fading = channel::Fading::PerPilot;
  PkiMode pki = PkiMode::Permissive;

  // Key agreement and the vulnerability map.
  int m_bits = ska::kDefaultAngleBits;
  double separation_m = 100.0;  // distance between A and B
  double raster_half_m = 60.0;  // half side of the map, around the A-B midpoint
  int raster_cells = 21;        // per axis
  bool self_check = false;

  /// Scenario-specific defaults for the sweep lists and trial counts.
  static ExperimentConfig defaults_for(Scenario s);
  void validate() const;  // throws ConfigError
};

/// Applies `key=value` lines (blank lines and `#` comments allowed). Lists
/// are comma separated. Throws ConfigError on unknown keys or bad values.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// SNR = P / noise variance with unit pilot power.
double noise_variance(double snr_db);

struct CurvePoint {
  Scenario scenario = Scenario::PdSweep;
  double snr_db = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  int n = 0;
  std::size_t pilots = 0;
  std::uint64_t trials = 0;
  double empirical = 0.0;
  double analytic = 0.0;
  double std_error = 0.0;  // binomial, from the analytic rate
  bool flagged = false;    // |empirical - analytic| > 3 std_error
};

struct CrbRow {
  double theta_deg = 0.0;
  double snr_db = 0.0;
  double k = 0.0;
  int n = 0;
  std::size_t pilots = 0;
  std::uint64_t trials = 0;
  double variance = 0.0;  // mean squared error about the true angle
  double variance_se = 0.0;
  double crb = 0.0;
  double fisher_crb = 0.0;  // 1 / numeric Fisher information
  double ratio = 0.0;       // variance / crb
  bool flagged = false;     // variance < crb - 3 variance_se
};

struct MapCell {
  double x = 0.0;  // metres east of the A-B midpoint
  double y = 0.0;  // metres north
  double success_rate = 0.0;
  bool in_region = false;
  double envelope = 0.0;  // P_F at A times P_F at B for an attacker here
};

struct Layout {
  ska::ReceiverPose receiver{};
  ska::ReceiverPose a{};
  ska::ReceiverPose b{};
};

/// Receiver near Columbus, OH; A and B `separation_m` apart on an east-west
/// line, each with the other at broadside.
Layout make_layout(double separation_m);

/// Position at `range_m` from the receiver whose expected AoA is `aoa`.
geometry::GeoCoord place_at_aoa(const ska::ReceiverPose& rx, double aoa, double range_m);

/// Deterministic parallel loop over [0, count).
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

std::vector<CurvePoint> run_pd_sweep(const ExperimentConfig& cfg);
std::vector<CurvePoint> run_pf_sweep(const ExperimentConfig& cfg);
std::vector<CrbRow> run_crb_check(const ExperimentConfig& cfg);
std::vector<std::string> run_ska_demo(const ExperimentConfig& cfg);
std::vector<MapCell> run_mitm_map(const ExperimentConfig& cfg);

/// Sample the link used by the key agreement scenarios at one lattice point.
ska::LinkModel link_for(const ExperimentConfig& cfg, double snr_db, double k, int n);

std::string curve_csv(const std::vector<CurvePoint>& points);
std::string crb_csv(const std::vector<CrbRow>& rows);
std::string map_csv(const std::vector<MapCell>& cells);

struct RunOutput {
  std::string text;         // CSV or trace
  std::size_t flagged = 0;  // points failing their self-consistency check
};

/// Runs the configured scenario.
RunOutput run(const ExperimentConfig& cfg);

}  // namespace phyauth::harness
