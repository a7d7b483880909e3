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

#include "sembeam/mmfp.hpp"

namespace sembeam {

// Unit-norm beamforming directions, one column per user.
struct DirectionSet {
  arma::cx_mat d_bit;  // n_t x B
  arma::cx_mat d_sem;  // n_t x T
};

// Per-user transmit powers on fixed directions; sum <= p_total.
struct PowerAllocation {
  arma::vec p_bit;
  arma::vec p_sem;
  bool feasible = false;
  int outer_iterations = 0;
  std::int64_t inner_iterations = 0;
  std::vector<double> objective_trace;
};

// One-shot direction computation: uniform multipliers lambda0 for all
// bit-users, auxiliaries evaluated at MRT precoding, then the normalized
// regularized channel solves A^-1 h and B_i^-1 h. Exactly one factorization
// of A and one of the shared sem-user matrix per call; no iteration.
DirectionSet lp_directions(const ChannelSet& h, const SystemConfig& cfg,
                           const SemanticRateModel& model, int k,
                           double lambda0 = 0.01);

// Power allocation on fixed directions: the same alternating machinery run
// on the scalar-gain system g[u][j] = |h_u^H dir_j|^2, where the beamformer
// subproblem separates per stream and the update is closed-form scalar.
PowerAllocation allocate_power(const DirectionSet& dirs, const ChannelSet& h,
                               const SystemConfig& cfg, const SemanticRateModel& model,
                               int k, const SolverOptions& opts = {});

// Low-complexity solve: directions, then power, then v_u = sqrt(p_u) * dir_u.
SolveReport solve_lp(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k,
                     const SolverOptions& opts = {});

}  // namespace sembeam
