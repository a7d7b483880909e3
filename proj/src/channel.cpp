// SPDX-License-Identifier: Apache-2.0

#include "sembeam/channel.hpp"

#include <stdexcept>

namespace sembeam {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

arma::cx_vec steering_vector(double theta, int n_t) {
  if (n_t < 1) throw std::invalid_argument("steering_vector: n_t must be at least 1");
  arma::cx_vec a(static_cast<arma::uword>(n_t));
  const double s = std::sin(theta);
  for (int k = 0; k < n_t; ++k) {
    const double phase = -arma::datum::pi * s * static_cast<double>(k);
    a(static_cast<arma::uword>(k)) = std::polar(1.0, phase);
  }
  return a;
}

PathRealization sample_paths(Rng& rng, int l_p) {
  if (l_p < 1) throw std::invalid_argument("sample_paths: l_p must be at least 1");
  PathRealization pr;
  pr.gains.set_size(static_cast<arma::uword>(l_p));
  pr.aods.set_size(static_cast<arma::uword>(l_p));
  // All gains first, then all angles: fixed consumption order.
  for (int l = 0; l < l_p; ++l)
    pr.gains(static_cast<arma::uword>(l)) = rng.complex_gaussian();
  for (int l = 0; l < l_p; ++l)
    pr.aods(static_cast<arma::uword>(l)) = rng.uniform(0.0, kTwoPi);
  return pr;
}

arma::cx_vec sample_channel(Rng& rng, int n_t, int l_p) {
  const PathRealization pr = sample_paths(rng, l_p);
  arma::cx_vec h = arma::zeros<arma::cx_vec>(static_cast<arma::uword>(n_t));
  for (int l = 0; l < l_p; ++l)
    h += pr.gains(static_cast<arma::uword>(l)) * steering_vector(pr.aods(static_cast<arma::uword>(l)), n_t);
  h /= std::sqrt(static_cast<double>(l_p));
  return h;
}

ChannelSet sample_channel_set(Rng& rng, const SystemConfig& cfg, int l_p) {
  ChannelSet set;
  set.h_bit.set_size(static_cast<arma::uword>(cfg.n_t), static_cast<arma::uword>(cfg.n_bit));
  set.h_sem.set_size(static_cast<arma::uword>(cfg.n_t), static_cast<arma::uword>(cfg.n_sem));
  auto draw = [&](arma::cx_mat& dst, arma::uword col) {
    arma::cx_vec h = sample_channel(rng, cfg.n_t, l_p);
    // Identically-zero draws have measure zero but would break every SINR.
    while (arma::norm(h) == 0.0) h = sample_channel(rng, cfg.n_t, l_p);
    dst.col(col) = h;
  };
  for (int i = 0; i < cfg.n_bit; ++i) draw(set.h_bit, static_cast<arma::uword>(i));
  for (int i = 0; i < cfg.n_sem; ++i) draw(set.h_sem, static_cast<arma::uword>(i));
  return set;
}

}  // namespace sembeam
