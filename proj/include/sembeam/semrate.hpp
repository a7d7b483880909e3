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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sembeam {

// Generalized-logistic parameters of the semantic score curve at one
// downsampling depth: score(gamma) = a + d / (c + gamma^-e).
struct DepthParams {
  double a = 0.0;
  double c = 1.0;
  double d = 1.0;
  double e = 1.0;
};

// Per-depth semantic rate model over a contiguous depth range. Requires
// c, d, e > 0 at every depth, which keeps the score finite and strictly
// increasing in SINR.
class SemanticRateModel {
 public:
  SemanticRateModel() = default;
  SemanticRateModel(int k_min, std::vector<DepthParams> per_depth);

  int k_min() const { return k_min_; }
  int k_max() const { return k_min_ + static_cast<int>(params_.size()) - 1; }
  bool covers(int k) const { return k >= k_min() && k <= k_max(); }
  const DepthParams& at(int k) const;

  // Synthetic demo table (depths 2..6): S-curves in dB whose ceilings
  // decrease with depth. Not fitted to any measured dataset.
  static SemanticRateModel synthetic_default();

 private:
  int k_min_ = 0;
  std::vector<DepthParams> params_;
};

// Latent symbol count M_K = C * I^2 / 4^(K+1), exact; throws if the image
// side is not divisible by 2^(K+1).
std::int64_t symbols_for_depth(int k, int filters, int image_size);

// score(gamma) = a + d / (c + gamma^-e); requires gamma > 0.
double semantic_rate(const DepthParams& p, double gamma);
double semantic_rate(const SemanticRateModel& model, int k, double gamma);

// Concave/convex tangent bound on gamma^-e around the anchor gamma0:
// J(gamma, gamma0, e) >= gamma^-e with equality iff gamma == gamma0.
// For e > 1 the linearized denominator gamma0 + e*(gamma - gamma0) must be
// positive; a non-positive value throws std::domain_error and the caller is
// expected to re-anchor instead of evaluating.
double surrogate_j(double gamma, double gamma0, double e);

// Minorant of the score built from surrogate_j: a + d / (c + J).
double surrogate_zeta(const DepthParams& p, double gamma, double gamma0);

// The minorant rearranged as a single ratio of beamformer quadratics:
//   zeta = d_coef + e_coef * S / (f_coef * S + g_coef * Q)
// with S the own-signal power and Q the interference-plus-noise power.
// Consistency: at gamma == anchor the ratio form reproduces semantic_rate.
struct SurrogateCoeffs {
  double d_coef = 0.0;
  double e_coef = 0.0;
  double f_coef = 0.0;
  double g_coef = 0.0;
  double anchor = 0.0;

  // e_coef and g_coef must be positive for the ratio to admit the quadratic
  // transform; false signals the caller to lower the anchor first.
  bool usable() const { return e_coef > 0.0 && g_coef > 0.0 && f_coef >= 0.0; }
};

SurrogateCoeffs surrogate_coeffs(const DepthParams& p, double gamma0);
SurrogateCoeffs surrogate_coeffs(const SemanticRateModel& model, int k, double gamma0);

// Largest anchor that keeps g_coef >= margin for curves with e > 1
// (g_coef = c*(1-e)*gamma0^e + 1 decreases in the anchor); +inf for e <= 1.
double max_usable_anchor(const DepthParams& p, double margin = 0.02);

// --- curve fitting -------------------------------------------------------

struct FitSample {
  int k = 0;
  double snr_db = 0.0;
  double score = 0.0;
};

struct FitOptions {
  int min_samples_per_depth = 8;
  double min_span_db = 20.0;        // required SNR spread per depth
  double rms_flag_threshold = 0.05;  // residual RMS above this is flagged
};

struct DepthFit {
  DepthParams params;
  double rms = 0.0;
  bool flagged = false;  // residual above threshold; kept, never silent
};

struct FitResult {
  SemanticRateModel model;
  std::map<int, DepthFit> per_depth;
  bool any_flagged = false;
};

// Per-depth nonlinear least squares of the generalized-logistic curve on
// gamma = 10^(snr_db/10). Throws std::invalid_argument when a depth has too
// few samples or too little SNR span; a poor residual is flagged in the
// result instead of being silently accepted.
FitResult fit_semantic_rate(const std::vector<FitSample>& samples,
                            const FitOptions& opts = {});

// Sample-table CSV with header "k,snr_db,score".
std::vector<FitSample> load_fit_samples_csv(const std::string& path);
void save_fit_samples_csv(const std::string& path, const std::vector<FitSample>& samples);

}  // namespace sembeam
