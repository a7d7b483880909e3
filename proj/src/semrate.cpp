// SPDX-License-Identifier: Apache-2.0

#include "sembeam/semrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sembeam {

SemanticRateModel::SemanticRateModel(int k_min, std::vector<DepthParams> per_depth)
    : k_min_(k_min), params_(std::move(per_depth)) {
  if (params_.empty())
    throw std::invalid_argument("SemanticRateModel: at least one depth required");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const DepthParams& p = params_[i];
    if (!(p.c > 0.0 && p.d > 0.0 && p.e > 0.0))
      throw std::invalid_argument("SemanticRateModel: c, d, e must be positive at depth " +
                                  std::to_string(k_min + static_cast<int>(i)));
    if (!std::isfinite(p.a) || !std::isfinite(p.c) || !std::isfinite(p.d) || !std::isfinite(p.e))
      throw std::invalid_argument("SemanticRateModel: parameters must be finite at depth " +
                                  std::to_string(k_min + static_cast<int>(i)));
  }
}

const DepthParams& SemanticRateModel::at(int k) const {
  if (!covers(k))
    throw std::out_of_range("SemanticRateModel: depth " + std::to_string(k) +
                            " outside [" + std::to_string(k_min()) + ", " +
                            std::to_string(k_max()) + "]");
  return params_[static_cast<std::size_t>(k - k_min_)];
}

SemanticRateModel SemanticRateModel::synthetic_default() {
  // Synthetic demo parameters (not fitted to measured data): score ceilings
  // a + d/c decrease with depth, floors stay at a, slopes stay below 1 so
  // the surrogate ratio coefficients are positive for any anchor.
  return SemanticRateModel(2, {
                                  {0.12, 1.0, 0.82, 0.80},
                                  {0.12, 1.0, 0.79, 0.78},
                                  {0.12, 1.0, 0.74, 0.76},
                                  {0.12, 1.0, 0.66, 0.74},
                                  {0.12, 1.0, 0.55, 0.72},
                              });
}

std::int64_t symbols_for_depth(int k, int filters, int image_size) {
  if (k < 0) throw std::invalid_argument("symbols_for_depth: depth must be non-negative");
  if (filters < 1) throw std::invalid_argument("symbols_for_depth: filters must be positive");
  if (image_size < 1) throw std::invalid_argument("symbols_for_depth: image_size must be positive");
  if (k + 1 >= 63 || (static_cast<std::int64_t>(image_size) % (std::int64_t{1} << (k + 1))) != 0)
    throw std::invalid_argument("symbols_for_depth: image_size not divisible by 2^(k+1), feature map would be fractional");
  const std::int64_t side = static_cast<std::int64_t>(image_size) >> (k + 1);
  return static_cast<std::int64_t>(filters) * side * side;
}

double semantic_rate(const DepthParams& p, double gamma) {
  if (!(gamma > 0.0))
    throw std::domain_error("semantic_rate: gamma must be positive");
  return p.a + p.d / (p.c + std::pow(gamma, -p.e));
}

double semantic_rate(const SemanticRateModel& model, int k, double gamma) {
  return semantic_rate(model.at(k), gamma);
}

double surrogate_j(double gamma, double gamma0, double e) {
  if (!(gamma > 0.0) || !(gamma0 > 0.0) || !(e > 0.0))
    throw std::domain_error("surrogate_j: gamma, gamma0, e must be positive");
  if (e <= 1.0) {
    // Tangent of the concave x^e at x = 1/gamma0, evaluated at x = 1/gamma.
    return (e * gamma0 + (1.0 - e) * gamma) / (std::pow(gamma0, e) * gamma);
  }
  const double lin = gamma0 + e * (gamma - gamma0);
  if (!(lin > 0.0))
    throw std::domain_error("surrogate_j: linearized denominator not positive; re-anchor");
  return 1.0 / (std::pow(gamma0, e - 1.0) * lin);
}

double surrogate_zeta(const DepthParams& p, double gamma, double gamma0) {
  return p.a + p.d / (p.c + surrogate_j(gamma, gamma0, p.e));
}

SurrogateCoeffs surrogate_coeffs(const DepthParams& p, double gamma0) {
  if (!(gamma0 > 0.0))
    throw std::invalid_argument("surrogate_coeffs: anchor must be positive");
  SurrogateCoeffs sc;
  sc.anchor = gamma0;
  if (p.e <= 1.0) {
    sc.d_coef = p.a;
    sc.e_coef = p.d;
    sc.f_coef = p.c + (1.0 - p.e) * std::pow(gamma0, -p.e);
    sc.g_coef = p.e * std::pow(gamma0, 1.0 - p.e);
  } else {
    const double kappa = p.c * (1.0 - p.e) * std::pow(gamma0, p.e) + 1.0;
    sc.d_coef = p.a + p.d * (1.0 - p.e) * std::pow(gamma0, p.e) / kappa;
    sc.e_coef = p.d * p.e * std::pow(gamma0, p.e - 1.0) / kappa;
    sc.f_coef = p.c * p.e * std::pow(gamma0, p.e - 1.0);
    sc.g_coef = kappa;
  }
  if (!std::isfinite(sc.d_coef) || !std::isfinite(sc.e_coef) ||
      !std::isfinite(sc.f_coef) || !std::isfinite(sc.g_coef))
    throw std::domain_error("surrogate_coeffs: non-finite coefficients");
  return sc;
}

SurrogateCoeffs surrogate_coeffs(const SemanticRateModel& model, int k, double gamma0) {
  return surrogate_coeffs(model.at(k), gamma0);
}

double max_usable_anchor(const DepthParams& p, double margin) {
  if (p.e <= 1.0) return std::numeric_limits<double>::infinity();
  // g_coef(anchor) = c*(1-e)*anchor^e + 1 crosses margin at this anchor.
  return std::pow((1.0 - margin) / (p.c * (p.e - 1.0)), 1.0 / p.e);
}

}  // namespace sembeam
