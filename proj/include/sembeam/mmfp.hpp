// SPDX-License-Identifier: Apache-2.0
//
// sembeam — beamforming for semantic/bit coexisting MU-MISO downlinks
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

#include "sembeam/metrics.hpp"
#include "sembeam/semrate.hpp"
#include "sembeam/types.hpp"

namespace sembeam {

// Auxiliary variables of the alternating solver. gamma0 anchors the
// per-sem-user score minorant; y/z linearize the two bit-rate logs; x/m/n
// are the quadratic-transform scalars of the three ratio groups. The x/m/n
// entries are complex so the transform stays tight for arbitrary complex
// beamformers; they reduce to real values whenever the own-channel products
// are phase-aligned, as they are at the solver's stationary points.
struct AuxState {
  arma::vec gamma0;   // per sem-user, > 0
  arma::vec y, z;     // per bit-user (shared / exclusive period SINRs)
  arma::cx_vec x;     // per sem-user
  arma::cx_vec m, n;  // per bit-user (shared / exclusive period)
  arma::vec lambda;   // per bit-user QoS multipliers, >= 0

  static AuxState sized(int n_bit, int n_sem);
};

// Refreshes gamma0, y, z to the regularized SINRs of v. For depths with
// e > 1 the sem-user anchors are additionally capped so that the surrogate
// ratio coefficients stay positive (see max_usable_anchor).
void update_sinr_aux(const Beamformer& v, const ChannelSet& h,
                     const SystemConfig& cfg, AuxState& state,
                     const SemanticRateModel& model, int k);
void update_sinr_aux(const GainTable& g, const SystemConfig& cfg, AuxState& state,
                     const SemanticRateModel& model, int k);

// Refreshes the quadratic-transform scalars x, m, n from v; gamma0, y, z
// must already correspond to v.
void update_ratio_aux(const Beamformer& v, const ChannelSet& h,
                      const SystemConfig& cfg, const SemanticRateModel& model,
                      int k, AuxState& state);
void update_ratio_aux(const GainTable& g, const SystemConfig& cfg,
                      const SemanticRateModel& model, int k, AuxState& state);

// Stationary beamformer of the transformed problem's Lagrangian for fixed
// multipliers and auxiliaries: v_bit[i] = rho_i * A^-1 h_bit[i] with one
// shared Hermitian-PD matrix A, and v_sem[i] = sigma_i * B_i^-1 h_sem[i]
// with every B_i obtained from one factorization of a common matrix plus a
// per-user rank-one correction. No explicit inverses are formed.
Beamformer beamformers_from_lambda(const arma::vec& lambda, const AuxState& state,
                                   const ChannelSet& h, const SystemConfig& cfg,
                                   const SemanticRateModel& model, int k);

struct FixedPointResult {
  arma::vec lambda;
  Beamformer beamformer;
  bool converged = false;
  bool diverged = false;  // multipliers ran away: QoS infeasible for this channel
  int iterations = 0;
};

// Alternates the closed-form beamformer with the multiplier update until
// sum |delta lambda| <= fp_tol. Negative updates clamp to zero; sustained
// growth of the update norm switches to averaged (damped) steps; multipliers
// exceeding lambda_divergence on three consecutive sweeps flag divergence.
// On convergence every constraint with lambda_i > 0 is tight.
FixedPointResult lambda_fixed_point(AuxState& state, const ChannelSet& h,
                                    const SystemConfig& cfg,
                                    const SemanticRateModel& model, int k,
                                    const SolverOptions& opts = {});

// Full alternating solve at fixed depth k: refresh SINR auxiliaries, refresh
// ratio auxiliaries, re-solve the beamformer subproblem, repeat until the
// objective settles; finally scale to the exact power budget and report
// plain-SINR metrics of the normalized beamformer.
SolveReport solve_p2(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k,
                     const SolverOptions& opts = {});

// Matched-filter initializer: per-user MRT directions at equal power summing
// to p_total.
Beamformer mrt_equal_power(const ChannelSet& h, const SystemConfig& cfg);

}  // namespace sembeam
