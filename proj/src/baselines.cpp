// SPDX-License-Identifier: Apache-2.0

#include "sembeam/baselines.hpp"

#include <chrono>
#include <stdexcept>

namespace sembeam {

namespace {

arma::cx_mat stack_users(const ChannelSet& h) {
  // One row per user: conjugate-transposed channels, bit-users first.
  return arma::join_cols(h.h_bit.t(), h.h_sem.t());
}

// Power used by the weighted regularized solves at a given diagonal load.
double wmmse_power(const arma::vec& eigval, const arma::cx_mat& proj,
                   const arma::vec& col_weight, double load) {
  double p = 0.0;
  for (arma::uword j = 0; j < proj.n_cols; ++j) {
    double col = 0.0;
    for (arma::uword i = 0; i < eigval.n_elem; ++i) {
      const double d = eigval(i) + load;
      col += std::norm(proj(i, j)) / (d * d);
    }
    p += col_weight(j) * col;
  }
  return p;
}

}  // namespace

DirectionSet mrt_directions(const ChannelSet& h) {
  DirectionSet d;
  d.d_bit.set_size(h.h_bit.n_rows, h.h_bit.n_cols);
  d.d_sem.set_size(h.h_sem.n_rows, h.h_sem.n_cols);
  for (arma::uword i = 0; i < h.h_bit.n_cols; ++i) d.d_bit.col(i) = arma::normalise(h.h_bit.col(i));
  for (arma::uword i = 0; i < h.h_sem.n_cols; ++i) d.d_sem.col(i) = arma::normalise(h.h_sem.col(i));
  return d;
}

DirectionSet zf_directions(const ChannelSet& h) {
  const arma::cx_mat rows = stack_users(h);  // (B+T) x n_t
  const arma::uword n_users = rows.n_rows;
  if (n_users > rows.n_cols)
    throw std::invalid_argument("zf_directions: more users than antennas");
  const arma::cx_mat gram = rows * rows.t();
  if (arma::rcond(gram) < 1e-12)
    throw std::invalid_argument("zf_directions: stacked channel matrix is rank deficient");
  // Right pseudo-inverse columns null all cross-channels.
  const arma::cx_mat pinv_cols = rows.t() * arma::inv(gram);

  DirectionSet d;
  const arma::uword n_bit = h.h_bit.n_cols;
  d.d_bit.set_size(rows.n_cols, n_bit);
  d.d_sem.set_size(rows.n_cols, h.h_sem.n_cols);
  for (arma::uword i = 0; i < n_bit; ++i) d.d_bit.col(i) = arma::normalise(pinv_cols.col(i));
  for (arma::uword i = 0; i < h.h_sem.n_cols; ++i)
    d.d_sem.col(i) = arma::normalise(pinv_cols.col(n_bit + i));
  return d;
}

DirectionSet wmmse_directions(const ChannelSet& h, const SystemConfig& cfg, double tol,
                              int max_iter, std::vector<double>* sum_rate_trace) {
  const arma::uword n_bit = h.h_bit.n_cols;
  const arma::uword n_sem = h.h_sem.n_cols;
  const arma::uword n_users = n_bit + n_sem;
  const arma::cx_mat chans = arma::join_rows(h.h_bit, h.h_sem);  // n_t x users
  arma::vec sigma2(n_users);
  for (arma::uword u = 0; u < n_bit; ++u) sigma2(u) = cfg.sigma2_bit[u];
  for (arma::uword u = 0; u < n_sem; ++u) sigma2(n_bit + u) = cfg.sigma2_sem[u];

  Beamformer v = mrt_equal_power(h, cfg);
  arma::cx_mat cols = arma::join_rows(v.v_bit, v.v_sem);

  auto sum_rate = [&](const arma::cx_mat& vv) {
    const arma::cx_mat gains = chans.t() * vv;
    double r = 0.0;
    for (arma::uword u = 0; u < n_users; ++u) {
      double interf = sigma2(u);
      for (arma::uword j = 0; j < n_users; ++j)
        if (j != u) interf += std::norm(gains(u, j));
      r += std::log2(1.0 + std::norm(gains(u, u)) / interf);
    }
    return r;
  };

  double prev_rate = sum_rate(cols);
  if (sum_rate_trace) sum_rate_trace->push_back(prev_rate);

  for (int it = 0; it < max_iter; ++it) {
    const arma::cx_mat gains = chans.t() * cols;

    // MMSE receivers and rate weights.
    arma::cx_vec recv(n_users);
    arma::vec weight(n_users);
    for (arma::uword u = 0; u < n_users; ++u) {
      double total = sigma2(u);
      for (arma::uword j = 0; j < n_users; ++j) total += std::norm(gains(u, j));
      recv(u) = std::conj(gains(u, u)) / total;
      const double mse = 1.0 - std::norm(gains(u, u)) / total;
      weight(u) = 1.0 / std::max(mse, 1e-12);
    }

    arma::cx_mat j_mat(chans.n_rows, chans.n_rows, arma::fill::zeros);
    for (arma::uword u = 0; u < n_users; ++u)
      j_mat += (weight(u) * std::norm(recv(u))) * (chans.col(u) * chans.col(u).t());

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, j_mat))
      throw std::runtime_error("wmmse_directions: eigendecomposition failed");
    eigval.transform([](double x) { return std::max(x, 0.0); });

    const arma::cx_mat proj = eigvec.t() * chans;  // eigenbasis coordinates of channels
    arma::vec col_weight(n_users);
    for (arma::uword u = 0; u < n_users; ++u)
      col_weight(u) = weight(u) * weight(u) * std::norm(recv(u));

    // Diagonal load from the power budget: power(load) is decreasing.
    const double floor_load = 1e-14 * std::max(1.0, arma::sum(eigval));
    double load = floor_load;
    if (wmmse_power(eigval, proj, col_weight, load) > cfg.p_total) {
      double lo = floor_load, hi = std::max(1.0, floor_load);
      while (wmmse_power(eigval, proj, col_weight, hi) > cfg.p_total) hi *= 2.0;
      for (int b = 0; b < 100; ++b) {
        const double mid = 0.5 * (lo + hi);
        if (wmmse_power(eigval, proj, col_weight, mid) > cfg.p_total) lo = mid;
        else hi = mid;
      }
      load = hi;
    }

    for (arma::uword u = 0; u < n_users; ++u) {
      arma::cx_vec scaled = proj.col(u);
      for (arma::uword i = 0; i < eigval.n_elem; ++i) scaled(i) /= eigval(i) + load;
      cols.col(u) = (weight(u) * std::conj(recv(u))) * (eigvec * scaled);
    }

    const double rate = sum_rate(cols);
    if (sum_rate_trace) sum_rate_trace->push_back(rate);
    if (std::abs(rate - prev_rate) < tol) break;
    prev_rate = rate;
  }

  DirectionSet d;
  d.d_bit.set_size(chans.n_rows, n_bit);
  d.d_sem.set_size(chans.n_rows, n_sem);
  for (arma::uword u = 0; u < n_bit; ++u) d.d_bit.col(u) = arma::normalise(cols.col(u));
  for (arma::uword u = 0; u < n_sem; ++u) d.d_sem.col(u) = arma::normalise(cols.col(n_bit + u));
  return d;
}

SolveReport solve_baseline(const std::string& name, const ChannelSet& h,
                           const SystemConfig& cfg, const SemanticRateModel& model, int k,
                           const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();

  DirectionSet dirs;
  if (name == "zf-pc") dirs = zf_directions(h);
  else if (name == "mrt-pc") dirs = mrt_directions(h);
  else if (name == "wmmse-pc") dirs = wmmse_directions(h, cfg);
  else throw std::invalid_argument("solve_baseline: unknown baseline '" + name + "'");

  const PowerAllocation pa = allocate_power(dirs, h, cfg, model, k, opts);

  Beamformer v = Beamformer::zeros(cfg.n_t, h.n_bit(), h.n_sem());
  for (arma::uword i = 0; i < dirs.d_bit.n_cols; ++i)
    v.v_bit.col(i) = std::sqrt(pa.p_bit(i)) * dirs.d_bit.col(i);
  for (arma::uword i = 0; i < dirs.d_sem.n_cols; ++i)
    v.v_sem.col(i) = std::sqrt(pa.p_sem(i)) * dirs.d_sem.col(i);

  SolveReport report;
  report.depth = k;
  report.solver = name;
  report.beamformer = v;
  report.outer_iterations = pa.outer_iterations;
  report.inner_iterations = pa.inner_iterations;
  report.objective_trace = pa.objective_trace;
  report.converged = true;

  const SinrBundle s = sinr_all(v, h, cfg, /*regularized=*/false);
  report.sem_sinr = arma::conv_to<std::vector<double>>::from(s.sem);
  report.bit_sinr_shared = arma::conv_to<std::vector<double>>::from(s.bit_shared);
  report.bit_sinr_exclusive = arma::conv_to<std::vector<double>>::from(s.bit_exclusive);
  const arma::vec rates = bit_rates(v, h, cfg, k);
  report.bit_rate = arma::conv_to<std::vector<double>>::from(rates);
  report.objective = objective_p1(v, h, cfg, k, model);
  const Feasibility f = check_feasible(v, h, cfg, k, opts.tol_qos, opts.tol_pow_rel);
  report.qos_slack = arma::conv_to<std::vector<double>>::from(f.qos_slack);
  report.feasible = f.feasible && pa.feasible;

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sembeam
