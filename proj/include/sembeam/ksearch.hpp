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

enum class SolverKind { mmfp, lp_mmfp };

// Joint beamforming and depth selection: solves every depth in
// [cfg.k_min, cfg.k_max] covered by the model (concurrently), evaluates the
// objective of each feasible solution, and returns the argmax report. Ties
// break toward the smaller depth. If every depth is infeasible the
// best-effort report is returned with feasible == false. Deterministic:
// per-depth solves are RNG-free and the reduction is an ordered argmax.
SolveReport solve_p1(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, SolverKind solver,
                     const SolverOptions& opts = {});

}  // namespace sembeam
