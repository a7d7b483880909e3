// SPDX-License-Identifier: Apache-2.0

#include "sembeam/metrics.hpp"

#include <stdexcept>

namespace sembeam {

GainTable compute_gains(const Beamformer& v, const ChannelSet& h) {
  GainTable g;
  const arma::cx_mat streams = arma::join_rows(v.v_bit, v.v_sem);
  g.bit = h.h_bit.t() * streams;  // .t() is the conjugate transpose
  g.sem = h.h_sem.t() * streams;
  g.total_power = v.total_power();
  return g;
}

namespace {

// Interference power seen by one user row over a span of stream columns,
// excluding the user's own stream.
double interference(const arma::cx_mat& row_block, arma::uword row,
                    arma::uword col_begin, arma::uword col_end, arma::uword own_col) {
  double acc = 0.0;
  for (arma::uword j = col_begin; j < col_end; ++j) {
    if (j == own_col) continue;
    acc += std::norm(row_block(row, j));
  }
  return acc;
}

double ratio_or_zero(double num, double den) {
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

SinrBundle sinr_all(const GainTable& g, const SystemConfig& cfg, bool regularized) {
  const arma::uword n_bit = g.bit.n_rows;
  const arma::uword n_sem = g.sem.n_rows;
  const arma::uword n_all = n_bit + n_sem;
  const double noise_scale = regularized ? g.total_power / cfg.p_total : 1.0;

  SinrBundle out;
  out.regularized = regularized;
  out.sem.set_size(n_sem);
  out.bit_shared.set_size(n_bit);
  out.bit_exclusive.set_size(n_bit);

  for (arma::uword i = 0; i < n_bit; ++i) {
    const double own = std::norm(g.bit(i, i));
    const double noise = cfg.sigma2_bit[i] * noise_scale;
    out.bit_shared(i) = ratio_or_zero(own, interference(g.bit, i, 0, n_all, i) + noise);
    out.bit_exclusive(i) = ratio_or_zero(own, interference(g.bit, i, 0, n_bit, i) + noise);
  }
  for (arma::uword i = 0; i < n_sem; ++i) {
    const arma::uword own_col = n_bit + i;
    const double own = std::norm(g.sem(i, own_col));
    const double noise = cfg.sigma2_sem[i] * noise_scale;
    out.sem(i) = ratio_or_zero(own, interference(g.sem, i, 0, n_all, own_col) + noise);
  }
  return out;
}

SinrBundle sinr_all(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                    bool regularized) {
  return sinr_all(compute_gains(v, h), cfg, regularized);
}

arma::vec bit_rates(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg, int k) {
  const std::int64_t m = symbols_for_depth(k, cfg.filters, cfg.image_size);
  if (m > cfg.frame_len)
    throw std::invalid_argument("bit_rates: symbol count exceeds frame length");
  const double shared = static_cast<double>(m) / static_cast<double>(cfg.frame_len);
  const SinrBundle s = sinr_all(v, h, cfg, /*regularized=*/false);
  arma::vec r(s.bit_shared.n_elem);
  for (arma::uword i = 0; i < r.n_elem; ++i)
    r(i) = shared * std::log2(1.0 + s.bit_shared(i)) +
           (1.0 - shared) * std::log2(1.0 + s.bit_exclusive(i));
  return r;
}

double objective_p1(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                    int k, const SemanticRateModel& model) {
  const SinrBundle s = sinr_all(v, h, cfg, /*regularized=*/false);
  const DepthParams& p = model.at(k);
  double obj = 0.0;
  for (arma::uword i = 0; i < s.sem.n_elem; ++i)
    obj += s.sem(i) > 0.0 ? semantic_rate(p, s.sem(i)) : p.a;  // a is the zero-SINR limit
  return obj;
}

Feasibility check_feasible(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                           int k, double tol_qos, double tol_pow_rel) {
  Feasibility f;
  const arma::vec rates = bit_rates(v, h, cfg, k);
  f.qos_slack.set_size(rates.n_elem);
  bool ok = true;
  for (arma::uword i = 0; i < rates.n_elem; ++i) {
    f.qos_slack(i) = rates(i) - cfg.qos[i];
    ok = ok && f.qos_slack(i) >= -tol_qos;
  }
  f.power_slack = cfg.p_total - v.total_power();
  ok = ok && f.power_slack >= -tol_pow_rel * cfg.p_total;
  f.feasible = ok;
  return f;
}

}  // namespace sembeam
