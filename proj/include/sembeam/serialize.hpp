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

#include <string>

#include "json.hpp"
#include "sembeam/semrate.hpp"
#include "sembeam/types.hpp"

// JSON forms of the domain types. Complex entries are written as [re, im]
// pairs of 64-bit floats and doubles use shortest round-trip formatting, so
// deserialize(serialize(x)) == x bit-exactly.
namespace sembeam {

void to_json(nlohmann::json& j, const SystemConfig& cfg);
void from_json(const nlohmann::json& j, SystemConfig& cfg);

void to_json(nlohmann::json& j, const SolverOptions& opts);
void from_json(const nlohmann::json& j, SolverOptions& opts);

// Channel dump for replaying one realization: arrays of [re, im] rows, one
// n_t x 2 matrix per user.
void to_json(nlohmann::json& j, const ChannelSet& h);
void from_json(const nlohmann::json& j, ChannelSet& h);

void to_json(nlohmann::json& j, const Beamformer& v);
void from_json(const nlohmann::json& j, Beamformer& v);

void to_json(nlohmann::json& j, const SolveReport& r);
void from_json(const nlohmann::json& j, SolveReport& r);

// Model file: JSON map depth -> {a, c, d, e}; non-numeric keys (labels,
// notes) are preserved on write and ignored on read.
nlohmann::json model_to_json(const SemanticRateModel& model,
                             const std::string& note = {});
SemanticRateModel model_from_json(const nlohmann::json& j);

// File helpers; throw std::runtime_error on I/O failure and
// nlohmann::json::exception on malformed content.
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace sembeam
