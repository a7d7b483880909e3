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

#include "sembeam/rng.hpp"
#include "sembeam/types.hpp"

namespace sembeam {

// Multipath draw for one user of the clustered Saleh-Valenzuela model:
// per-path complex attenuations and azimuth departure angles.
struct PathRealization {
  arma::cx_vec gains;  // CN(0,1) i.i.d., length l_p
  arma::vec aods;      // Uniform[0, 2*pi), length l_p
};

inline constexpr int kDefaultPathCount = 10;

// Half-wavelength ULA response [1, e^{-j pi sin t}, ..., e^{-j pi (n_t-1) sin t}].
arma::cx_vec steering_vector(double theta, int n_t);

// Draws all gains first, then all angles, so the consumption order of the
// generator is fixed across implementations.
PathRealization sample_paths(Rng& rng, int l_p);

// h = (1/sqrt(l_p)) * sum_l gain_l * steering(aod_l); unit average power per
// antenna entry.
arma::cx_vec sample_channel(Rng& rng, int n_t, int l_p = kDefaultPathCount);

// One channel per user, bit-users drawn first in index order.
ChannelSet sample_channel_set(Rng& rng, const SystemConfig& cfg,
                              int l_p = kDefaultPathCount);

}  // namespace sembeam
