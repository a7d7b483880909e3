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

#include "sembeam/lpmmfp.hpp"

namespace sembeam {

// Matched-filter directions h_u / ||h_u||.
DirectionSet mrt_directions(const ChannelSet& h);

// Columns of the right pseudo-inverse of the stacked channel matrix,
// normalized; requires B + T <= n_t and a full-row-rank stack.
DirectionSet zf_directions(const ChannelSet& h);

// Classical alternating weighted-MMSE sum-rate maximization over all users
// (unit weights, all-user interference, power budget p_total); returns the
// normalized columns. The optional trace receives the sum rate after each
// iteration.
DirectionSet wmmse_directions(const ChannelSet& h, const SystemConfig& cfg,
                              double tol = 1e-5, int max_iter = 200,
                              std::vector<double>* sum_rate_trace = nullptr);

// name is one of "zf-pc", "mrt-pc", "wmmse-pc": classical directions
// followed by the fixed-direction power allocation.
SolveReport solve_baseline(const std::string& name, const ChannelSet& h,
                           const SystemConfig& cfg, const SemanticRateModel& model,
                           int k, const SolverOptions& opts = {});

}  // namespace sembeam
