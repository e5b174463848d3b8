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

#include "phyauth/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <thread>

#include "phyauth/crypto.hpp"
#include "phyauth/errors.hpp"
#include "phyauth/stats.hpp"

namespace phyauth::harness {

namespace {

using geometry::GeoCoord;

// Columbus, OH.
constexpr GeoCoord kOrigin{deg2rad(-83.0), deg2rad(40.0)};

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t point) {
  return splitmix64(seed ^ splitmix64(point + 0x9e3779b97f4a7c15ULL));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::unique_ptr<crypto::SignatureScheme> make_scheme(PkiMode mode) {
  if (mode == PkiMode::Ed25519) return std::make_unique<crypto::Ed25519Signatures>();
  return std::make_unique<crypto::PermissiveSignatures>();
}

struct SweepGeometry {
  double true_aoa = 0.0;
  double claim_aoa = 0.0;
};

SweepGeometry sweep_geometry(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::PdSweep:
      return {deg2rad(cfg.legit_deg), deg2rad(cfg.legit_deg)};
    case Scenario::PfFar:
      return {deg2rad(cfg.far_true_deg), deg2rad(cfg.far_claim_deg)};
    case Scenario::PfNear:
      return {deg2rad(cfg.near_true_deg), deg2rad(cfg.near_claim_deg)};
    default:
      break;
  }
  throw ConfigError("scenario is not a detection sweep");
}

std::vector<CurvePoint> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const SweepGeometry g = sweep_geometry(cfg);
  const Layout layout = make_layout(cfg.separation_m);
  const auth::ReceiverPose& pose = layout.receiver;
  const GeoCoord true_pos = place_at_aoa(pose, g.true_aoa, cfg.range_m);
  const GeoCoord claim_pos = place_at_aoa(pose, g.claim_aoa, cfg.range_m);
  const double theta_true = auth::claimed_aoa(true_pos, pose);
  const double theta_b = auth::claimed_aoa(claim_pos, pose);

  const auto scheme = make_scheme(cfg.pki);
  RandomSource key_rng = RandomSource::stream(cfg.seed, ~std::uint64_t{0});
  const auth::CertificateAuthority ca(*scheme, key_rng);
  const auth::Credentials creds = ca.issue(wire::to_bytes("vehicle-T"), key_rng);
  const wire::Bytes payload = auth::encode_beacon(auth::Beacon{claim_pos, 0.0, {}});
  const auth::SignedMessage msg = auth::sign_message(creds, *scheme, payload, 0);

  std::vector<CurvePoint> out;
  std::uint64_t point = 0;
  for (double k : cfg.k) {
    for (int n : cfg.n) {
      for (double snr : cfg.snr_db) {
        const ska::LinkModel link = link_for(cfg, snr, k, n);
        const estimation::AoaEstimator estimator = link.estimator();
        auth::AuthContext ctx;
        ctx.scheme = scheme.get();
        ctx.ca_public_key = ca.public_key();
        ctx.now_ms = 0;
        ctx.estimator = &estimator;

        channel::RicianParams params;
        params.k = k;
        params.theta = theta_true;
        params.rx = link.array;
        params.tx = link.array;

        // Wald statistic per trial; +inf marks a PKI rejection.
        std::vector<double> stat(cfg.trials);
        const std::uint64_t pseed = point_seed(cfg.seed, point++);
        parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
          RandomSource rng = RandomSource::stream(pseed, t);
          const channel::PilotFrame frame =
              channel::default_pilots(link.array, link.n_p, link.n_s, link.power, rng);
          const channel::PilotObservation obs =
              channel::transmit(frame, params, link.noise_var, rng, link.fading);
          auth::AoaRecordSet table;
          const auth::AuthVerdict v = auth::authenticate(msg, obs, table, 1.0, pose, ctx);
          if (!v.pki_ok) {
            stat[t] = std::numeric_limits<double>::infinity();
          } else {
            stat[t] = std::isinf(v.crb) ? 0.0 : v.wald_statistic;
          }
        });

        const double crb_b = link.nominal_crb(theta_b);
        const double crb_t = link.nominal_crb(theta_true);
        for (double alpha : cfg.alpha) {
          CurvePoint p;
          p.scenario = cfg.scenario;
          p.snr_db = snr;
          p.alpha = alpha;
          p.k = k;
          p.n = n;
          p.pilots = channel::pilot_count(cfg.n_p, cfg.n_s);
          p.trials = cfg.trials;
          const auto accepted = std::count_if(stat.begin(), stat.end(),
                                              [&](double s) { return s <= alpha; });
          p.empirical = static_cast<double>(accepted) / static_cast<double>(cfg.trials);
          p.analytic = cfg.scenario == Scenario::PdSweep
                           ? auth::detection_probability(alpha, theta_b, crb_b)
                           : auth::false_alarm_probability(alpha, theta_true, theta_b, crb_t,
                                                           crb_b);
          p.std_error = stats::binomial_std_error(p.analytic, cfg.trials);
          p.flagged = std::abs(p.empirical - p.analytic) > 3.0 * p.std_error;
          out.push_back(p);
        }
      }
    }
  }
  return out;
}

}  // namespace

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

Layout make_layout(double separation_m) {
  Layout l;
  l.receiver = auth::ReceiverPose{kOrigin, 0.0};
  const double half = separation_m / 2;
  l.a.gps = geometry::destination(kOrigin, -kPi / 2, half);
  l.b.gps = geometry::destination(kOrigin, kPi / 2, half);
  // Orient each array so that the other vehicle sits at broadside.
  l.a.theta_r_north = -geometry::heading_angle(l.b.gps, l.a.gps);
  l.b.theta_r_north = -geometry::heading_angle(l.a.gps, l.b.gps);
  return l;
}

GeoCoord place_at_aoa(const ska::ReceiverPose& rx, double aoa, double range_m) {
  // The bearing from the receiver is roughly opposite the transmitter's
  // heading; a few fixed-point steps remove the spherical correction.
  double bearing = aoa - rx.theta_r_north + kPi;
  GeoCoord p{};
  for (int i = 0; i < 4; ++i) {
    p = geometry::destination(rx.gps, bearing, range_m);
    const double got = geometry::expected_aoa(geometry::heading_angle(p, rx.gps), rx.theta_r_north);
    bearing += geometry::wrap_angle(aoa - got);
  }
  return geometry::destination(rx.gps, bearing, range_m);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ska::LinkModel link_for(const ExperimentConfig& cfg, double snr_db, double k, int n) {
  ska::LinkModel link;
  link.array = geometry::ArrayConfig{n, 0.5};
  link.k = k;
  link.noise_var = noise_variance(snr_db);
  link.n_p = cfg.n_p;
  link.n_s = cfg.n_s;
  link.power = 1.0;
  link.fading = cfg.fading;
  link.grid = estimation::AngleGrid::uniform_deg(cfg.grid_step_deg);
  link.criterion = cfg.criterion;
  return link;
}

std::vector<CurvePoint> run_pd_sweep(const ExperimentConfig& cfg) {
  if (cfg.scenario != Scenario::PdSweep) throw ConfigError("expected the pd scenario");
  return run_sweep(cfg);
}

std::vector<CurvePoint> run_pf_sweep(const ExperimentConfig& cfg) {
  if (cfg.scenario != Scenario::PfFar && cfg.scenario != Scenario::PfNear) {
    throw ConfigError("expected a pf scenario");
  }
  return run_sweep(cfg);
}

std::vector<CrbRow> run_crb_check(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CrbRow> out;
  std::uint64_t point = 0;
  for (double theta_deg : cfg.theta_deg) {
    for (double k : cfg.k) {
      for (double snr : cfg.snr_db) {
        for (int n : cfg.n) {
          const ska::LinkModel link = link_for(cfg, snr, k, n);
          const estimation::AoaEstimator estimator = link.estimator();
          const double theta = deg2rad(theta_deg);
          channel::RicianParams params;
          params.k = k;
          params.theta = theta;
          params.rx = link.array;
          params.tx = link.array;

          std::vector<double> err(cfg.trials);
          const std::uint64_t pseed = point_seed(cfg.seed, point++);
          parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
            RandomSource rng = RandomSource::stream(pseed, t);
            const channel::PilotFrame frame =
                channel::default_pilots(link.array, link.n_p, link.n_s, link.power, rng);
            const channel::PilotObservation obs =
                channel::transmit(frame, params, link.noise_var, rng, link.fading);
            err[t] = estimator.estimate(obs).theta_hat - theta;
          });

          CrbRow row;
          row.theta_deg = theta_deg;
          row.snr_db = snr;
          row.k = k;
          row.n = n;
          row.pilots = channel::pilot_count(cfg.n_p, cfg.n_s);
          row.trials = cfg.trials;
          double m2 = 0.0;
          double m4 = 0.0;
          for (double e : err) {
            m2 += e * e;
            m4 += e * e * e * e;
          }
          const double count = static_cast<double>(cfg.trials);
          m2 /= count;
          m4 /= count;
          row.variance = m2;
          row.variance_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / count);
          row.crb = link.nominal_crb(theta);
          const channel::PilotFrame orth =
              channel::orthogonal_pilots(link.array, link.n_p, link.n_s, link.power);
          row.fisher_crb =
              1.0 / estimation::fisher_information_numeric(params, orth, link.noise_var, theta);
          row.ratio = row.variance / row.crb;
          row.flagged = row.variance < row.crb - 3.0 * row.variance_se;
          out.push_back(row);
        }
      }
    }
  }
  return out;
}

std::vector<std::string> run_ska_demo(const ExperimentConfig& cfg) {
  cfg.validate();
  const double snr = cfg.snr_db.front();
  const double alpha = cfg.alpha.front();
  const double k = cfg.k.front();
  const ska::LinkModel link = link_for(cfg, snr, k, cfg.n.front());
  const Layout layout = make_layout(cfg.separation_m);
  const crypto::SealedBoxCipher cipher;
  std::vector<std::string> trace;
  const auto header = [&](const std::string& title) {
    trace.push_back("== " + title + " (alpha=" + fmt(alpha) + ", snr_db=" + fmt(snr) +
                    ", k=" + fmt(k) + ")");
  };
  const auto append = [&](const std::vector<std::string>& lines) {
    trace.insert(trace.end(), lines.begin(), lines.end());
  };

  {
    header("honest exchange, ed25519 PKI");
    const crypto::Ed25519Signatures scheme;
    RandomSource rng = RandomSource::stream(cfg.seed, 0);
    const ska::Participants who = ska::make_participants(scheme, cipher, rng);
    const ska::HonestOutcome r =
        ska::run_honest(who, layout.a, layout.b, link, alpha, cfg.m_bits, rng, true);
    append(r.trace);
    trace.push_back(r.completed ? (r.keys_match ? "result: Completed, keys match"
                                                : "result: Completed, keys differ")
                                : "result: Aborted");
  }

  const crypto::PermissiveSignatures stolen;
  const auto mitm = [&](const std::string& title, const GeoCoord& e, std::uint64_t stream) {
    header(title);
    RandomSource rng = RandomSource::stream(cfg.seed, stream);
    const ska::Participants who = ska::make_participants(stolen, cipher, rng);
    const ska::MitmOutcome r =
        ska::simulate_mitm(who, layout.a, layout.b, e, link, alpha, cfg.m_bits, rng, true);
    append(r.trace);
    trace.push_back(r.attack_succeeds
                        ? std::string("result: AttackSucceeds")
                        : "result: AbortedAtStep(" + std::to_string(r.aborted_at_step) + ")");
  };
  // 30 degrees off the A-B line as seen from both ends.
  const double offset = cfg.separation_m / 2 * std::tan(deg2rad(30.0));
  mitm("MitM off the A-B line, stolen credentials", geometry::destination(kOrigin, 0.0, offset),
       1);
  mitm("MitM on the A-B segment, stolen credentials", kOrigin, 2);
  return trace;
}

std::vector<MapCell> run_mitm_map(const ExperimentConfig& cfg) {
  cfg.validate();
  const double snr = cfg.snr_db.front();
  const double alpha = cfg.alpha.front();
  const double k = cfg.k.front();
  const ska::LinkModel link = link_for(cfg, snr, k, cfg.n.front());
  const Layout layout = make_layout(cfg.separation_m);
  const ska::VulnerableRegion region = ska::make_region(layout.a, layout.b, link, alpha);

  // Cipher choice does not affect the geometry, so the map skips encryption.
  const crypto::PermissiveSignatures stolen;
  const crypto::NullCipher cipher;
  RandomSource key_rng = RandomSource::stream(cfg.seed, ~std::uint64_t{0});
  const ska::Participants who = ska::make_participants(stolen, cipher, key_rng);

  const auto at = [](const ska::ReceiverPose& rx, const GeoCoord& p) {
    return auth::claimed_aoa(p, rx);
  };
  const double theta_b_at_a = at(layout.a, layout.b.gps);
  const double theta_b_at_b = at(layout.b, layout.a.gps);
  const double crb_test_a = link.nominal_crb(theta_b_at_a);
  const double crb_test_b = link.nominal_crb(theta_b_at_b);

  const int cells = cfg.raster_cells;
  const double width = 2.0 * cfg.raster_half_m / cells;
  std::vector<MapCell> out(static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells));
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(cells) +
                              static_cast<std::size_t>(i);
      MapCell& c = out[idx];
      c.x = -cfg.raster_half_m + (i + 0.5) * width;
      c.y = cfg.raster_half_m - (j + 0.5) * width;
      GeoCoord e = kOrigin;
      if (c.x != 0.0) e = geometry::destination(e, c.x > 0 ? kPi / 2 : -kPi / 2, std::abs(c.x));
      if (c.y != 0.0) e = geometry::destination(e, c.y > 0 ? 0.0 : kPi, std::abs(c.y));
      c.in_region = ska::in_vulnerable_region(e, region);
      const double ta = at(layout.a, e);
      const double tb = at(layout.b, e);
      c.envelope =
          auth::false_alarm_probability(alpha, ta, theta_b_at_a, link.nominal_crb(ta), crb_test_a) *
          auth::false_alarm_probability(alpha, tb, theta_b_at_b, link.nominal_crb(tb), crb_test_b);

      std::vector<char> success(cfg.trials);
      const std::uint64_t pseed = point_seed(cfg.seed, idx);
      parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        RandomSource rng = RandomSource::stream(pseed, t);
        success[t] = ska::simulate_mitm(who, layout.a, layout.b, e, link, alpha, cfg.m_bits, rng)
                         .attack_succeeds;
      });
      c.success_rate = static_cast<double>(std::count(success.begin(), success.end(), 1)) /
                       static_cast<double>(cfg.trials);
    }
  }
  return out;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::string s = "scenario,snr_db,alpha_deg,k,n,L,trials,empirical,analytic,std_error\n";
  for (const CurvePoint& p : points) {
    s += std::string(to_string(p.scenario)) + ',' + fmt(p.snr_db) + ',' + fmt(p.alpha) + ',' +
         fmt(p.k) + ',' + std::to_string(p.n) + ',' + std::to_string(p.pilots) + ',' +
         std::to_string(p.trials) + ',' + fmt(p.empirical) + ',' + fmt(p.analytic) + ',' +
         fmt(p.std_error) + '\n';
  }
  return s;
}

std::string crb_csv(const std::vector<CrbRow>& rows) {
  std::string s =
      "scenario,theta_deg,snr_db,k,n,L,trials,variance,variance_se,crb,fisher_crb,ratio,flagged\n";
  for (const CrbRow& r : rows) {
    s += "crb," + fmt(r.theta_deg) + ',' + fmt(r.snr_db) + ',' + fmt(r.k) + ',' +
         std::to_string(r.n) + ',' + std::to_string(r.pilots) + ',' + std::to_string(r.trials) +
         ',' + fmt(r.variance) + ',' + fmt(r.variance_se) + ',' + fmt(r.crb) + ',' +
         fmt(r.fisher_crb) + ',' + fmt(r.ratio) + ',' + (r.flagged ? "1" : "0") + '\n';
  }
  return s;
}

std::string map_csv(const std::vector<MapCell>& cells) {
  std::string s = "x,y,success_rate,in_region\n";
  for (const MapCell& c : cells) {
    s += fmt(c.x) + ',' + fmt(c.y) + ',' + fmt(c.success_rate) + ',' + (c.in_region ? "1" : "0") +
         '\n';
  }
  return s;
}

RunOutput run(const ExperimentConfig& cfg) {
  RunOutput out;
  switch (cfg.scenario) {
    case Scenario::PdSweep:
    case Scenario::PfFar:
    case Scenario::PfNear: {
      const auto points = run_sweep(cfg);
      out.text = curve_csv(points);
      out.flagged = static_cast<std::size_t>(
          std::count_if(points.begin(), points.end(), [](const CurvePoint& p) { return p.flagged; }));
      break;
    }
    case Scenario::CrbCheck: {
      const auto rows = run_crb_check(cfg);
      out.text = crb_csv(rows);
      out.flagged = static_cast<std::size_t>(
          std::count_if(rows.begin(), rows.end(), [](const CrbRow& r) { return r.flagged; }));
      break;
    }
    case Scenario::SkaDemo:
      for (const std::string& line : run_ska_demo(cfg)) out.text += line + '\n';
      break;
    case Scenario::MitmMap: {
      const auto cells = run_mitm_map(cfg);
      out.text = map_csv(cells);
      for (const MapCell& c : cells) {
        const double se = stats::binomial_std_error(c.envelope, cfg.trials);
        if (!c.in_region && c.success_rate > c.envelope + 3.0 * se) ++out.flagged;
      }
      break;
    }
  }
  return out;
}

}  // namespace phyauth::harness
