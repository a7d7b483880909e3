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

#include "sembeam/semrate.hpp"
#include "sembeam/types.hpp"

namespace sembeam {

// Cross products h_u^H v_j for every user row and stream column (bit streams
// first, then sem streams), plus Tr(V V^H). Every SINR and auxiliary update
// reads from this table.
struct GainTable {
  arma::cx_mat bit;   // n_bit x (n_bit + n_sem)
  arma::cx_mat sem;   // n_sem x (n_bit + n_sem)
  double total_power = 0.0;
};

GainTable compute_gains(const Beamformer& v, const ChannelSet& h);

// All SINRs of one configuration. The regularized flag distinguishes the
// scale-invariant form, whose noise is scaled by Tr(V V^H)/P_T, from the
// plain form with true noise power; the two coincide at Tr(V V^H) == P_T.
struct SinrBundle {
  arma::vec sem;            // per sem-user, shared period
  arma::vec bit_shared;     // per bit-user, all-user interference
  arma::vec bit_exclusive;  // per bit-user, bit-only interference
  bool regularized = false;
};

SinrBundle sinr_all(const Beamformer& v, const ChannelSet& h,
                    const SystemConfig& cfg, bool regularized);
SinrBundle sinr_all(const GainTable& g, const SystemConfig& cfg, bool regularized);

// Frame-normalized bit rate mixing the shared and exclusive periods:
// (M_K/L) log2(1+sinr_shared) + ((L-M_K)/L) log2(1+sinr_exclusive),
// with plain (unregularized) SINRs.
arma::vec bit_rates(const Beamformer& v, const ChannelSet& h,
                    const SystemConfig& cfg, int k);

// Sum of per-sem-user semantic scores at depth k, plain SINRs. A sem-user
// with zero received signal contributes the zero-SINR limit a_K.
double objective_p1(const Beamformer& v, const ChannelSet& h,
                    const SystemConfig& cfg, int k, const SemanticRateModel& model);

struct Feasibility {
  bool feasible = false;
  arma::vec qos_slack;       // bit_rate - qos floor, per bit-user
  double power_slack = 0.0;  // p_total - Tr(V V^H)
};

// QoS floors within tol_qos and total power within tol_pow_rel * p_total.
Feasibility check_feasible(const Beamformer& v, const ChannelSet& h,
                           const SystemConfig& cfg, int k,
                           double tol_qos = 1e-3, double tol_pow_rel = 1e-6);

}  // namespace sembeam
