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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "phyauth/errors.hpp"
#include "phyauth/harness.hpp"

namespace phyauth::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError("non-finite value for '" + std::string(key) + "'");
    }
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "'");
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::PdSweep:
      return "pd";
    case Scenario::PfFar:
      return "pf-far";
    case Scenario::PfNear:
      return "pf-near";
    case Scenario::CrbCheck:
      return "crb";
    case Scenario::SkaDemo:
      return "ska-demo";
    case Scenario::MitmMap:
      return "mitm-map";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::PdSweep, Scenario::PfFar, Scenario::PfNear, Scenario::CrbCheck,
                     Scenario::SkaDemo, Scenario::MitmMap}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::defaults_for(Scenario s) {
  ExperimentConfig cfg;
  cfg.scenario = s;
  switch (s) {
    case Scenario::CrbCheck:
      cfg.snr_db = {10, 20};
      cfg.n = {4, 16};
      break;
    case Scenario::SkaDemo:
      cfg.snr_db = {10};
      cfg.alpha = {2};
      cfg.k = {100};
      cfg.trials = 1;
      break;
    case Scenario::MitmMap:
      cfg.snr_db = {20};
      cfg.alpha = {3};
      cfg.k = {100};
      cfg.trials = 200;
      break;
    default:
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  require(!snr_db.empty() && !alpha.empty() && !k.empty() && !n.empty() && !theta_deg.empty(),
          "sweep lists must be non-empty");
  require(trials >= 1, "trials must be at least 1");
  require(workers >= 1, "workers must be at least 1");
  require(n_p >= 1 && n_s >= 1, "frame shape must be positive");
  for (double a : alpha) require(a > 0.0, "alpha must be positive");
  for (double kk : k) require(kk > 0.0, "Ricean factor must be positive");
  for (int nn : n) require(nn >= 2, "array size must be at least 2");
  for (int nn : n) {
    require(channel::pilot_count(n_p, n_s) >= static_cast<std::size_t>(nn),
            "frame has fewer pilots than array elements");
  }
  for (double t : theta_deg) require(std::abs(t) < 90.0, "crb angles must lie inside (-90, 90)");
  for (double t : {legit_deg, far_true_deg, far_claim_deg, near_true_deg, near_claim_deg}) {
    require(std::abs(t) < 90.0, "scenario angles must lie inside (-90, 90)");
  }
  require(range_m > 0.0 && separation_m > 0.0 && raster_half_m > 0.0, "distances must be positive");
  require(raster_cells >= 1, "raster needs at least one cell");
  require(grid_step_deg > 0.0 && grid_step_deg <= 10.0, "grid step must lie in (0, 10] degrees");
  require(m_bits >= 1 && m_bits <= ska::kMaxAngleBits, "m_bits must lie in [1, 16]");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "scenario") {
    cfg.scenario = parse_scenario(value);
  } else if (key == "snr_db") {
    cfg.snr_db = parse_list<double>(key, value);
  } else if (key == "alpha" || key == "alpha_degrees") {
    cfg.alpha = parse_list<double>(key, value);
  } else if (key == "k") {
    cfg.k = parse_list<double>(key, value);
  } else if (key == "n") {
    cfg.n = parse_list<int>(key, value);
  } else if (key == "n_p") {
    cfg.n_p = parse_number<int>(key, value);
  } else if (key == "n_s") {
    cfg.n_s = parse_number<int>(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_number<std::uint64_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else if (key == "legit_deg") {
    cfg.legit_deg = parse_number<double>(key, value);
  } else if (key == "far_true_deg") {
    cfg.far_true_deg = parse_number<double>(key, value);
  } else if (key == "far_claim_deg") {
    cfg.far_claim_deg = parse_number<double>(key, value);
  } else if (key == "near_true_deg") {
    cfg.near_true_deg = parse_number<double>(key, value);
  } else if (key == "near_claim_deg") {
    cfg.near_claim_deg = parse_number<double>(key, value);
  } else if (key == "theta_deg") {
    cfg.theta_deg = parse_list<double>(key, value);
  } else if (key == "range_m") {
    cfg.range_m = parse_number<double>(key, value);
  } else if (key == "grid_step_deg") {
    cfg.grid_step_deg = parse_number<double>(key, value);
  } else if (key == "criterion") {
    if (value == "pilot-weighted") {
      cfg.criterion = estimation::MlCriterion::PilotWeighted;
    } else if (value == "trace") {
      cfg.criterion = estimation::MlCriterion::TraceForm;
    } else {
      throw ConfigError("criterion must be pilot-weighted or trace");
    }
  } else if (key == "fading") {
    if (value == "per-pilot") {
      cfg.fading = channel::Fading::PerPilot;
    } else if (value == "block") {
      cfg.fading = channel::Fading::Block;
    } else {
      throw ConfigError("fading must be per-pilot or block");
    }
  } else if (key == "pki") {
    if (value == "permissive") {
      cfg.pki = PkiMode::Permissive;
    } else if (value == "ed25519") {
      cfg.pki = PkiMode::Ed25519;
    } else {
      throw ConfigError("pki must be permissive or ed25519");
    }
  } else if (key == "m_bits") {
    cfg.m_bits = parse_number<int>(key, value);
  } else if (key == "separation_m") {
    cfg.separation_m = parse_number<double>(key, value);
  } else if (key == "raster_half_m") {
    cfg.raster_half_m = parse_number<double>(key, value);
  } else if (key == "raster_cells") {
    cfg.raster_cells = parse_number<int>(key, value);
  } else if (key == "self_check") {
    cfg.self_check = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

}  // namespace phyauth::harness
