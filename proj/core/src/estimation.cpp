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

#include "phyauth/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "phyauth/errors.hpp"
#include "phyauth/stats.hpp"

namespace phyauth::estimation {

AngleGrid AngleGrid::uniform_deg(double step_deg) {
  AngleGrid g;
  g.step = deg2rad(step_deg);
  return g;
}

void AngleGrid::validate() const {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("angle grid is empty");
  }
  if (lo < -kPi / 2 || hi > kPi / 2) {
    throw ConfigError("angle grid exceeds the ULA support");
  }
}

std::size_t AngleGrid::size() const {
  if (!(step > 0.0) || !(hi >= lo)) return 0;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double AngleGrid::at(std::size_t i) const {
  return std::min(lo + static_cast<double>(i) * step, hi);
}

ComplexMat interference_covariance(const RicianParams& params, const ComplexVec& pilot,
                                   double noise_var) {
  const double s2 = params.sigma() * params.sigma();
  const double level = 2.0 * s2 * pilot.squaredNorm() + noise_var;
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw NumericalError("interference covariance is not positive definite");
  }
  return ComplexMat::Identity(params.rx.n, params.rx.n) * level;
}

ComplexMat interference_covariance(const RicianParams& params, const PilotFrame& frame,
                                   double noise_var) {
  const double s2 = params.sigma() * params.sigma();
  const double level = 2.0 * s2 * frame.mean_pilot_energy() + noise_var;
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw NumericalError("interference covariance is not positive definite");
  }
  return ComplexMat::Identity(params.rx.n, params.rx.n) * level;
}

CovarianceSet sample_covariances(const PilotObservation& obs, ComplexMat r_z) {
  const auto& pilots = obs.frame.pilots;
  if (pilots.empty() || pilots.size() != obs.ys.size()) {
    throw ConfigError("observation and pilot frame lengths differ");
  }
  const Eigen::Index nt = pilots.front().size();
  const Eigen::Index nr = obs.ys.front().size();
  const std::size_t count = pilots.size();
  if (count < static_cast<std::size_t>(nt)) {
    throw RankDeficient(count, static_cast<std::size_t>(nt));
  }

  CovarianceSet cov;
  cov.r_xy = ComplexMat::Zero(nt, nr);
  cov.r_xx = ComplexMat::Zero(nt, nt);
  for (std::size_t l = 0; l < count; ++l) {
    cov.r_xy.noalias() += pilots[l] * obs.ys[l].adjoint();
    cov.r_xx.noalias() += pilots[l] * pilots[l].adjoint();
  }
  const double inv_l = 1.0 / static_cast<double>(count);
  cov.r_xy *= inv_l;
  cov.r_xx *= inv_l;

  Eigen::SelfAdjointEigenSolver<ComplexMat> eig(cov.r_xx, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * top)) {
    throw RankDeficient(count, static_cast<std::size_t>(nt));
  }
  // B = R_xy^H R_xx^{-1}  <=>  R_xx B^H = R_xy (R_xx Hermitian).
  cov.b = cov.r_xx.ldlt().solve(cov.r_xy).adjoint();
  if (r_z.rows() != nr || r_z.cols() != nr) {
    throw ConfigError("interference covariance has the wrong dimension");
  }
  cov.r_z = std::move(r_z);
  return cov;
}

ComplexMat projector_complement(double theta, const ArrayConfig& cfg) {
  const ComplexVec a = geometry::steering_vector(theta, cfg);
  return ComplexMat::Identity(cfg.n, cfg.n) - a * a.adjoint() / a.squaredNorm();
}

namespace {

// a(theta)^H M a(theta) for Hermitian M, through the lag sums
// r_d = sum_p M(p, p + d):  a^H M a = r_0 + 2 Re sum_{d>0} r_d z^d.
class SteeredQuadratic {
 public:
  SteeredQuadratic(const ComplexMat& m, const ArrayConfig& cfg)
      : lags_(static_cast<std::size_t>(cfg.n)),
        trace_(m.trace().real()),
        scale_(-2.0 * kPi * cfg.spacing_ratio),
        n_(cfg.n) {
    for (int d = 0; d < cfg.n; ++d) {
      Complex sum(0.0, 0.0);
      for (int p = 0; p + d < cfg.n; ++p) sum += m(p, p + d);
      lags_[static_cast<std::size_t>(d)] = sum;
    }
  }

  double operator()(double theta) const {
    const Complex z = std::polar(1.0, scale_ * std::sin(theta));
    Complex zd = z;
    double acc = lags_[0].real();
    for (std::size_t d = 1; d < lags_.size(); ++d) {
      acc += 2.0 * (lags_[d] * zd).real();
      zd *= z;
    }
    return acc;
  }

  double objective(double theta) const { return trace_ - (*this)(theta) / n_; }

 private:
  std::vector<Complex> lags_;
  double trace_;
  double scale_;
  double n_;
};

ComplexMat criterion_matrix(const CovarianceSet& cov, MlCriterion criterion) {
  const ComplexMat w = inverse_sqrt_hermitian(cov.r_z);
  const ComplexMat wb = w * cov.b;
  ComplexMat m = criterion == MlCriterion::PilotWeighted ? ComplexMat(wb * cov.r_xx * wb.adjoint())
                                                         : ComplexMat(wb * wb.adjoint());
  // Symmetrise away rounding so the lag sums describe a Hermitian form.
  return (m + m.adjoint()) * 0.5;
}

double golden_section_max(const SteeredQuadratic& q, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = q(c);
  double fd = q(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = q(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = q(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double ml_objective(const CovarianceSet& cov, const ArrayConfig& rx, double theta,
                    MlCriterion criterion) {
  const SteeredQuadratic q(criterion_matrix(cov, criterion), rx);
  return q.objective(theta);
}

MlFit ml_aoa(const CovarianceSet& cov, const ArrayConfig& rx, const AngleGrid& grid,
             MlCriterion criterion) {
  grid.validate();
  rx.validate();
  if (cov.b.rows() != rx.n) {
    throw ConfigError("channel estimate does not match the receive array");
  }
  const SteeredQuadratic q(criterion_matrix(cov, criterion), rx);

  const std::size_t count = grid.size();
  std::size_t best = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = grid.at(i);
    const double value = q(theta);
    const double tol = 1e-12 * std::max(1.0, std::abs(best_q));
    if (value > best_q + tol ||
        (std::abs(value - best_q) <= tol && std::abs(theta) < std::abs(grid.at(best)))) {
      best = i;
      best_q = value;
    }
  }
  if (!std::isfinite(best_q)) {
    throw NumericalError("ML criterion is not finite");
  }

  const double centre = grid.at(best);
  double theta_hat = centre;
  if (count > 1) {
    const double lo = std::max(grid.lo, centre - grid.step);
    const double hi = std::min(grid.hi, centre + grid.step);
    const double refined = golden_section_max(q, lo, hi);
    if (q(refined) > best_q) theta_hat = refined;
  }
  return MlFit{theta_hat, q.objective(theta_hat), grid.step};
}

double crb(double theta, const RicianParams& params, double power, std::size_t pilots,
           const ComplexMat& r_z) {
  if (!(params.k > 0.0)) {
    throw DomainError("CRB is undefined without a LOS component (k = 0)");
  }
  if (!(power > 0.0) || pilots == 0) {
    throw DomainError("CRB needs positive pilot power and at least one pilot");
  }
  const ComplexVec d = geometry::steering_derivative(theta, params.rx);
  const ComplexVec d_hat = inverse_sqrt_hermitian(r_z) * d;
  const ComplexMat g = projector_complement(theta, params.rx);
  const double dgd = (d_hat.adjoint() * g * d_hat)(0, 0).real();
  if (!(dgd > 1e-300)) {
    return std::numeric_limits<double>::infinity();
  }
  const double los_fraction = std::isinf(params.k) ? 1.0 : params.k / (1.0 + params.k);
  return 1.0 / (2.0 * static_cast<double>(pilots) * los_fraction * power * dgd);
}

double estimator_pdf(double theta_hat, double theta_true, double crb_value) {
  if (!(crb_value > 0.0)) {
    throw DomainError("estimator density needs a positive CRB");
  }
  if (!geometry::is_visible(theta_hat)) return 0.0;
  const double sd = std::sqrt(crb_value);
  const double norm = stats::normal_q((-kPi / 2 - theta_true) / sd) -
                      stats::normal_q((kPi / 2 - theta_true) / sd);
  const double z = (theta_hat - theta_true) / sd;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * kPi * crb_value) * norm);
}

double estimator_cdf(double theta_hat, double theta_true, double crb_value) {
  if (!(crb_value > 0.0)) {
    throw DomainError("estimator distribution needs a positive CRB");
  }
  if (theta_hat <= -kPi / 2) return 0.0;
  if (theta_hat >= kPi / 2) return 1.0;
  return stats::truncated_normal_interval(-kPi / 2, theta_hat, theta_true, std::sqrt(crb_value),
                                          -kPi / 2, kPi / 2);
}

namespace {

// Expected negative log-likelihood (up to a constant) at trial angle `trial`
// when the data were generated at `truth`, minimised over the LOS transmit
// vector c in H = a(trial) c^T:  sum_l || W_l (a c^T x_l - H0 x_l) ||^2.
double concentrated_divergence(const RicianParams& params, const PilotFrame& frame,
                               double noise_var, const ComplexMat& h0, double trial) {
  const ComplexVec a = geometry::steering_vector(trial, params.rx);
  const Eigen::Index nt = params.tx.n;
  ComplexMat normal = ComplexMat::Zero(nt, nt);
  ComplexVec rhs = ComplexVec::Zero(nt);
  double total = 0.0;
  for (const ComplexVec& x : frame.pilots) {
    const ComplexMat w = inverse_sqrt_hermitian(interference_covariance(params, x, noise_var));
    const ComplexVec u = w * a;
    const ComplexVec v = w * (h0 * x);
    const ComplexVec xc = x.conjugate();
    normal.noalias() += u.squaredNorm() * xc * x.transpose();
    rhs.noalias() += xc * u.dot(v);
    total += v.squaredNorm();
  }
  const ComplexVec c = normal.ldlt().solve(rhs);
  return total - rhs.dot(c).real();
}

}  // namespace

double fisher_information_numeric(const RicianParams& params, const PilotFrame& frame,
                                  double noise_var, double theta, double step) {
  params.validate();
  if (!(params.k > 0.0)) {
    throw DomainError("Fisher information for theta is zero without a LOS component");
  }
  if (!(step > 0.0) || !geometry::is_visible(theta - step) || !geometry::is_visible(theta + step)) {
    throw NumericalError("finite-difference stencil leaves the ULA support");
  }
  RicianParams truth = params;
  truth.theta = theta;
  const ComplexMat h0 = channel::los_component(truth);
  auto f = [&](double t) { return concentrated_divergence(truth, frame, noise_var, h0, t); };
  auto second = [&](double h) { return (f(theta + h) - 2.0 * f(theta) + f(theta - h)) / (h * h); };

  const double coarse = second(step);
  const double fine = second(step / 2);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  if (!std::isfinite(extrapolated) || !(extrapolated > 0.0) ||
      std::abs(fine - coarse) > 1e-3 * std::abs(extrapolated)) {
    throw NumericalError("finite-difference Fisher information did not converge");
  }
  return extrapolated;
}

AoaEstimator::AoaEstimator(ReceiverModel model) : model_(std::move(model)) {
  model_.rx.validate();
  model_.grid.validate();
}

RicianParams AoaEstimator::params_for(const PilotFrame& frame) const {
  RicianParams p;
  p.k = model_.k;
  p.rx = model_.rx;
  p.tx = ArrayConfig{static_cast<int>(frame.pilots.empty() ? 2 : frame.pilots.front().size()), 0.5};
  return p;
}

ComplexMat AoaEstimator::r_z(const PilotFrame& frame) const {
  return interference_covariance(params_for(frame), frame, model_.noise_var);
}

double AoaEstimator::crb_at(double theta, const PilotFrame& frame) const {
  return crb(theta, params_for(frame), frame.power, frame.size(), r_z(frame));
}

AoaEstimate AoaEstimator::estimate(const PilotObservation& obs) const {
  const CovarianceSet cov = sample_covariances(obs, r_z(obs.frame));
  const MlFit fit = ml_aoa(cov, model_.rx, model_.grid, model_.criterion);
  return AoaEstimate{fit.theta_hat, crb_at(fit.theta_hat, obs.frame), fit.objective,
                     fit.grid_resolution};
}

}  // namespace phyauth::estimation
