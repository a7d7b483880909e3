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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sembeam/semrate.hpp"
#include "sembeam/types.hpp"

namespace sembeam {

inline constexpr const char* kSolverNames[] = {"mmfp", "lp-mmfp", "zf-pc",
                                               "mrt-pc", "wmmse-pc"};

// Dispatch by CLI-level solver name; throws std::invalid_argument for an
// unknown name. With k_search the depth range of cfg is searched, otherwise
// the fixed depth k is used.
SolveReport run_solver(const std::string& name, const ChannelSet& h,
                       const SystemConfig& cfg, const SemanticRateModel& model,
                       int k, bool k_search, const SolverOptions& opts = {});

struct SweepSpec {
  std::string axis;           // "qos" | "snr"
  std::vector<double> grid;   // axis values
  int trials = 100;
  std::vector<std::string> solvers{std::begin(kSolverNames), std::end(kSolverNames)};
  int k = 3;                  // fixed depth unless k_search
  bool k_search = false;
  std::uint64_t seed = 1;     // overrides cfg.seed when set via CLI
  int threads = 0;            // 0: hardware concurrency
};

struct SweepRow {
  double axis_value = 0.0;
  std::string solver;
  int trial = 0;
  double objective = 0.0;
  bool feasible = false;
  double wall_time = 0.0;
  int k_opt = 0;
};

// Monte-Carlo sweep over (axis value, trial) cells. The channel of a trial
// depends only on (seed, trial), so every solver and every axis value sees
// the identical realization (paired comparison). Cells run in parallel;
// rows come back in deterministic (axis, trial, solver) order. A cell whose
// solve fails or is infeasible produces a feasible=0 row, never an abort.
std::vector<SweepRow> run_sweep(const SystemConfig& cfg, const SemanticRateModel& model,
                                const SweepSpec& spec, const SolverOptions& opts = {});

// Fixed-schema CSV: one header line, data rows, then per (axis value,
// solver) summary rows whose trial column holds "mean"/"std" (infeasible
// trials count as objective 0). A leading '#' line records the trial count
// and seed. RFC-4180 quoting.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

}  // namespace sembeam
