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

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace sembeam {

// Static description of one downlink scenario: array size, the two user
// populations (bit-users with a Shannon-rate QoS floor, sem-users scored by
// the fitted semantic rate), power/noise budgets, frame structure, and the
// image/filter constants that fix the per-depth symbol counts.
//
// All domain types in this header are immutable value types once built and
// are safe to share across threads by value or const reference.
struct SystemConfig {
  int n_t = 16;                    // transmit antennas
  int n_bit = 5;                   // number of bit-users B
  int n_sem = 3;                   // number of sem-users T
  double p_total = 1.0;            // transmit power budget (linear)
  std::vector<double> sigma2_bit;  // per bit-user noise power, size n_bit
  std::vector<double> sigma2_sem;  // per sem-user noise power, size n_sem
  std::int64_t frame_len = 32768;  // data symbols per frame L
  std::vector<double> qos;         // per bit-user rate floor (bit/s/Hz), size n_bit
  int filters = 128;               // feature-map channel count C
  int image_size = 128;            // square image side I
  int k_min = 2;                   // smallest usable downsampling depth
  int k_max = 6;                   // largest usable downsampling depth
  std::uint64_t seed = 1;          // base RNG seed

  // Stock 16-antenna, 5 bit-user + 3 sem-user setup at 0 dB SNR, beta = 1.
  static SystemConfig defaults();
};

// Returns cfg unchanged if every invariant holds, otherwise throws
// std::invalid_argument naming the first violated field.
SystemConfig validate_config(SystemConfig cfg);

// One block-fading realization: a column per user, bit-users then sem-users.
struct ChannelSet {
  arma::cx_mat h_bit;  // n_t x B
  arma::cx_mat h_sem;  // n_t x T

  int n_t() const { return static_cast<int>(std::max(h_bit.n_rows, h_sem.n_rows)); }
  int n_bit() const { return static_cast<int>(h_bit.n_cols); }
  int n_sem() const { return static_cast<int>(h_sem.n_cols); }
};

// Precoding matrix split by user class; column j of v_bit serves bit-user j,
// column j of v_sem serves sem-user j.
struct Beamformer {
  arma::cx_mat v_bit;  // n_t x B
  arma::cx_mat v_sem;  // n_t x T

  int n_bit() const { return static_cast<int>(v_bit.n_cols); }
  int n_sem() const { return static_cast<int>(v_sem.n_cols); }

  // Tr(V V^H) over both user classes.
  double total_power() const {
    double p = 0.0;
    if (v_bit.n_elem > 0) p += std::pow(arma::norm(v_bit, "fro"), 2);
    if (v_sem.n_elem > 0) p += std::pow(arma::norm(v_sem, "fro"), 2);
    return p;
  }

  static Beamformer zeros(int n_t, int n_bit, int n_sem) {
    Beamformer v;
    v.v_bit = arma::zeros<arma::cx_mat>(n_t, n_bit);
    v.v_sem = arma::zeros<arma::cx_mat>(n_t, n_sem);
    return v;
  }
};

// Tolerances and iteration caps for the iterative solvers. Serializable to
// JSON so a run can be reproduced exactly from its recorded options.
struct SolverOptions {
  double tol_outer = 1e-4;         // outer loop objective tolerance
  int max_outer = 100;             // outer iteration cap
  double fp_tol = 1e-5;            // multiplier fixed-point tolerance (sum of |delta|)
  int fp_max_iter = 200;           // fixed-point sweep cap
  bool damping = true;             // averaged multiplier update on oscillation
  double lambda_init = 0.01;       // initial multiplier value
  double lambda_divergence = 1e6;  // multiplier level treated as QoS infeasibility
  double tol_qos = 1e-3;           // QoS slack tolerance (bit/s/Hz)
  double tol_pow_rel = 1e-6;       // power slack tolerance, relative to p_total
};

// Outcome of one solve: the beamformer, the depth it was designed for, the
// achieved objective and per-user link metrics, plus bookkeeping.
struct SolveReport {
  Beamformer beamformer;
  int depth = 0;
  double objective = 0.0;
  std::vector<double> sem_sinr;            // per sem-user SINR (linear)
  std::vector<double> bit_sinr_shared;     // per bit-user SINR, shared period
  std::vector<double> bit_sinr_exclusive;  // per bit-user SINR, exclusive period
  std::vector<double> bit_rate;            // per bit-user frame-normalized rate
  std::vector<double> qos_slack;           // bit_rate - qos floor
  int outer_iterations = 0;
  std::int64_t inner_iterations = 0;
  double wall_time = 0.0;  // seconds, solve call only
  bool converged = false;
  bool feasible = false;
  std::string solver;                  // producer tag, e.g. "mmfp"
  std::vector<double> objective_trace;  // per outer-iteration objective (diagnostic)
};

}  // namespace sembeam
