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

#include <cstddef>

#include "phyauth/channel.hpp"
#include "phyauth/linalg.hpp"

namespace phyauth::estimation {

using channel::PilotFrame;
using channel::PilotObservation;
using channel::RicianParams;
using geometry::ArrayConfig;

/// Second-order statistics of one pilot observation.
struct CovarianceSet {
  ComplexMat r_xy;  // (1/L) sum X[l] Y[l]^H          (tx.n x rx.n)
  ComplexMat r_xx;  // (1/L) sum X[l] X[l]^H          (tx.n x tx.n)
  ComplexMat b;     // R_xy^H R_xx^{-1}, the least-squares channel estimate
  ComplexMat r_z;   // interference-plus-noise covariance (rx.n x rx.n)
};

/// Search grid over the ULA support.
struct AngleGrid {
  double lo = -kPi / 2;
  double hi = kPi / 2;
  double step = deg2rad(0.1);

  static AngleGrid uniform_deg(double step_deg);

  std::size_t size() const;
  double at(std::size_t i) const;
  void validate() const;
};

enum class MlCriterion {
  /// argmin tr(G(theta) R_z^{-1/2} B R_xx B^H R_z^{-1/2}); the exact
  /// concentrated likelihood for known pilots.
  PilotWeighted,
  /// argmin tr(B^H R_z^{-1/2} G(theta) R_z^{-1/2} B); coincides with
  /// PilotWeighted when R_xx is a multiple of the identity.
  TraceForm,
};

struct MlFit {
  double theta_hat = 0.0;
  double objective = 0.0;  // criterion value at theta_hat
  double grid_resolution = 0.0;
};

struct AoaEstimate {
  double theta_hat = 0.0;
  double crb = 0.0;  // radians^2, evaluated at theta_hat
  double objective = 0.0;
  double grid_resolution = 0.0;
};

/// R_z = (2 sigma^2 (1/L) sum ||X[l]||^2 + noise_var) I for i.i.d. NLOS entries.
ComplexMat interference_covariance(const RicianParams& params, const PilotFrame& frame,
                                   double noise_var);

/// Per-pilot covariance R_z[l] = (2 sigma^2 ||X[l]||^2 + noise_var) I.
ComplexMat interference_covariance(const RicianParams& params, const ComplexVec& pilot,
                                   double noise_var);

/// Empirical R_xy, R_xx and B = R_xy^H R_xx^{-1}; `r_z` is stored alongside.
/// Throws RankDeficient when L < tx.n or R_xx is numerically singular.
CovarianceSet sample_covariances(const PilotObservation& obs, ComplexMat r_z);

/// G(theta) = I - a (a^H a)^{-1} a^H.
ComplexMat projector_complement(double theta, const ArrayConfig& cfg);

/// Grid search followed by golden-section refinement inside the winning cell.
/// Ties on the grid go to the smallest |theta|. Throws ConfigError for an
/// empty grid.
MlFit ml_aoa(const CovarianceSet& cov, const ArrayConfig& rx, const AngleGrid& grid,
             MlCriterion criterion = MlCriterion::PilotWeighted);

/// Criterion value at an arbitrary theta (for diagnostics and oracles).
double ml_objective(const CovarianceSet& cov, const ArrayConfig& rx, double theta,
                    MlCriterion criterion = MlCriterion::PilotWeighted);

/// Cramer-Rao bound (1 + k) / (2 L k P  D^H R_z^{-1/2} G R_z^{-1/2} D), D = da/dtheta.
///
/// Throws DomainError for k = 0 (no LOS angle to estimate). Returns +inf on
/// the array axis where the projected derivative vanishes.
double crb(double theta, const RicianParams& params, double power, std::size_t pilots,
           const ComplexMat& r_z);

/// Truncated-normal density of the ML estimate on [-pi/2, pi/2] with mean
/// `theta_true` and variance `crb`.
double estimator_pdf(double theta_hat, double theta_true, double crb);

/// Distribution function matching estimator_pdf.
double estimator_cdf(double theta_hat, double theta_true, double crb);

/// Numerical Fisher information for theta: central second difference (with
/// Richardson extrapolation) of the expected Gaussian log-likelihood,
/// concentrated over the unknown LOS transmit-side vector. Throws
/// NumericalError when the two step sizes disagree.
double fisher_information_numeric(const RicianParams& params, const PilotFrame& frame,
                                  double noise_var, double theta, double step = 1e-4);

/// What the receiver knows about the link: its own array, the Ricean factor
/// and the noise level (used for the oracle R_z), and how to search.
struct ReceiverModel {
  ArrayConfig rx{};
  double k = 100.0;
  double noise_var = 0.01;
  AngleGrid grid{};
  MlCriterion criterion = MlCriterion::PilotWeighted;
};

class AoaEstimator {
 public:
  explicit AoaEstimator(ReceiverModel model);

  const ReceiverModel& model() const noexcept { return model_; }

  ComplexMat r_z(const PilotFrame& frame) const;

  /// CRB at `theta` for the given frame's pilot power and length.
  double crb_at(double theta, const PilotFrame& frame) const;

  AoaEstimate estimate(const PilotObservation& obs) const;

 private:
  RicianParams params_for(const PilotFrame& frame) const;

  ReceiverModel model_;
};

}  // namespace phyauth::estimation
