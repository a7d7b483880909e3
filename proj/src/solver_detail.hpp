// SPDX-License-Identifier: Apache-2.0
//
// Internal solver plumbing shared between the full alternating solver and
// the one-shot direction / power-allocation modules. Not installed.

#pragma once

#include "sembeam/mmfp.hpp"

namespace sembeam::detail {

// Unscaled solutions of the two regularized systems: one factorization of
// the shared bit-user matrix A, one factorization of the shared sem-user
// base matrix, and a rank-one correction per sem-user.
struct RegularizedSolves {
  arma::cx_mat bit;       // A^-1 h_bit, column per bit-user
  arma::cx_mat sem;       // B_i^-1 h_sem_i, column per sem-user
  arma::vec h_ainv_h;     // Re{h_bit_i^H A^-1 h_bit_i}
  arma::cx_vec rho;       // bit-user scale factors of the stationary solution
  arma::cx_vec varsigma;  // sem-user scale factors of the stationary solution
};

RegularizedSolves regularized_solves(const arma::vec& lambda, const AuxState& st,
                                     const ChannelSet& h, const SystemConfig& cfg,
                                     const SemanticRateModel& model, int k);

struct FrameSplit {
  double shared;     // M_K / L
  double exclusive;  // (L - M_K) / L
};

FrameSplit frame_split(const SystemConfig& cfg, int k);

// Sum of per-sem-user scores on regularized SINRs; scale-invariant.
double reg_objective(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k);

// Relative movement between the auxiliaries an iterate was built from and
// the auxiliaries its own SINRs would produce. A small objective delta alone
// does not mean stationarity: an iterate recovering from a collapsed corner
// moves geometrically while the objective sits near the score floor.
double aux_movement(const SinrBundle& next, const AuxState& st, const DepthParams& dp);

inline constexpr double kAuxMoveTol = 1e-3;

// The v-independent pieces of the multiplier update at the current gains:
// lambda_i = numerator_i / (2 * gain_weight_i * sensitivity_i).
struct LambdaUpdateTerms {
  arma::vec numerator;
  arma::vec gain_weight;
};

LambdaUpdateTerms lambda_update_terms(const GainTable& g, const AuxState& st,
                                      const SystemConfig& cfg, const FrameSplit& fr);

// Averaged multiplier steps for a fixed-point map that need not be
// contractive. Plain growth toward the fixed point produces same-direction
// steps and keeps the full update; an oscillating map produces alternating
// steps and halves the averaging weight until the cycle contracts (weight
// recovers once steps stop alternating). Convergence is judged on the raw
// fixed-point residual, so a small damped step never fakes convergence.
class DampedStep {
 public:
  explicit DampedStep(bool enabled) : enabled_(enabled) {}

  arma::vec apply(const arma::vec& current, const arma::vec& proposed, double& raw_delta) {
    const arma::vec step = proposed - current;
    raw_delta = arma::accu(arma::abs(step));
    if (enabled_ && prev_step_.n_elem == step.n_elem) {
      if (arma::dot(step, prev_step_) < 0.0) theta_ = std::max(theta_ * 0.5, 1.0 / 256.0);
      else theta_ = std::min(theta_ * 1.5, 1.0);
    }
    prev_step_ = step;
    return current + theta_ * step;
  }

 private:
  bool enabled_;
  double theta_ = 1.0;
  arma::vec prev_step_;
};

}  // namespace sembeam::detail
