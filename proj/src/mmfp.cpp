// SPDX-License-Identifier: Apache-2.0

#include "sembeam/mmfp.hpp"

#include <chrono>
#include <stdexcept>

#include "solver_detail.hpp"

namespace sembeam {

namespace detail {

FrameSplit frame_split(const SystemConfig& cfg, int k) {
  const std::int64_t m = symbols_for_depth(k, cfg.filters, cfg.image_size);
  if (m > cfg.frame_len)
    throw std::invalid_argument("solver: symbol count exceeds frame length at depth " +
                                std::to_string(k));
  const double fs = static_cast<double>(m) / static_cast<double>(cfg.frame_len);
  return {fs, 1.0 - fs};
}

double reg_objective(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k) {
  const SinrBundle s = sinr_all(v, h, cfg, /*regularized=*/true);
  const DepthParams& p = model.at(k);
  double obj = 0.0;
  for (arma::uword i = 0; i < s.sem.n_elem; ++i)
    obj += s.sem(i) > 0.0 ? semantic_rate(p, s.sem(i)) : p.a;  // a is the zero-SINR limit
  return obj;
}

double aux_movement(const SinrBundle& next, const AuxState& st, const DepthParams& dp) {
  const double cap = max_usable_anchor(dp);
  double move = 0.0;
  for (arma::uword i = 0; i < next.sem.n_elem; ++i) {
    const double anchor_next = std::clamp(next.sem(i), 1e-12, cap);
    move += std::abs(anchor_next - st.gamma0(i)) / (1.0 + st.gamma0(i));
  }
  for (arma::uword i = 0; i < next.bit_shared.n_elem; ++i) {
    move += std::abs(next.bit_shared(i) - st.y(i)) / (1.0 + st.y(i));
    move += std::abs(next.bit_exclusive(i) - st.z(i)) / (1.0 + st.z(i));
  }
  return move;
}

LambdaUpdateTerms lambda_update_terms(const GainTable& g, const AuxState& st,
                                      const SystemConfig& cfg, const FrameSplit& fr) {
  const arma::uword n_bit = g.bit.n_rows;
  const arma::uword n_all = g.bit.n_cols;
  LambdaUpdateTerms t;
  t.numerator.set_size(n_bit);
  t.gain_weight.set_size(n_bit);
  for (arma::uword i = 0; i < n_bit; ++i) {
    const double noise = cfg.sigma2_bit[i] * g.total_power / cfg.p_total;
    double q_all = noise, q_bit = noise;
    for (arma::uword j = 0; j < n_all; ++j) {
      const double pw = std::norm(g.bit(i, j));
      q_all += pw;
      if (j < n_bit) q_bit += pw;
    }
    const double rate_const = fr.shared * (std::log2(1.0 + st.y(i)) - st.y(i)) +
                              fr.exclusive * (std::log2(1.0 + st.z(i)) - st.z(i));
    t.numerator(i) = cfg.qos[i] - rate_const + fr.shared * std::norm(st.m(i)) * q_all +
                     fr.exclusive * std::norm(st.n(i)) * q_bit;
    const std::complex<double> w = fr.shared * st.m(i) * std::sqrt(1.0 + st.y(i)) +
                                   fr.exclusive * st.n(i) * std::sqrt(1.0 + st.z(i));
    t.gain_weight(i) = std::norm(w);
  }
  return t;
}

RegularizedSolves regularized_solves(const arma::vec& lambda, const AuxState& st,
                                     const ChannelSet& h, const SystemConfig& cfg,
                                     const SemanticRateModel& model, int k) {
  const int n_bit = h.n_bit();
  const int n_sem = h.n_sem();
  const arma::uword nt = static_cast<arma::uword>(cfg.n_t);
  const FrameSplit fr = frame_split(cfg, k);
  const DepthParams& dp = model.at(k);

  arma::vec mu(static_cast<arma::uword>(n_bit));
  for (int j = 0; j < n_bit; ++j) {
    const arma::uword u = static_cast<arma::uword>(j);
    mu(u) = lambda(u) * (fr.shared * std::norm(st.m(u)) + fr.exclusive * std::norm(st.n(u)));
  }

  arma::vec nu(static_cast<arma::uword>(n_sem));
  std::vector<SurrogateCoeffs> sc(static_cast<std::size_t>(n_sem));
  for (int j = 0; j < n_sem; ++j) {
    const arma::uword u = static_cast<arma::uword>(j);
    sc[static_cast<std::size_t>(j)] = surrogate_coeffs(dp, st.gamma0(u));
    nu(u) = std::norm(st.x(u)) * sc[static_cast<std::size_t>(j)].e_coef *
            sc[static_cast<std::size_t>(j)].g_coef;
  }

  double noise_sum = 0.0;
  for (int j = 0; j < n_bit; ++j)
    noise_sum += mu(static_cast<arma::uword>(j)) * cfg.sigma2_bit[static_cast<std::size_t>(j)];
  for (int j = 0; j < n_sem; ++j)
    noise_sum += nu(static_cast<arma::uword>(j)) * cfg.sigma2_sem[static_cast<std::size_t>(j)];
  const double reg = noise_sum / cfg.p_total;
  if (!(reg > 0.0))
    throw std::runtime_error("degenerate regularizer: all quadratic weights vanish");

  // The bit-user matrix weights bit channels over the whole frame; the
  // sem-user base matrix weights them over the shared period only.
  arma::cx_mat a_mat(nt, nt, arma::fill::zeros);
  arma::cx_mat c_mat(nt, nt, arma::fill::zeros);
  a_mat.diag() += reg;
  c_mat.diag() += reg;
  for (int j = 0; j < n_bit; ++j) {
    const arma::uword u = static_cast<arma::uword>(j);
    const arma::cx_mat outer = h.h_bit.col(u) * h.h_bit.col(u).t();
    a_mat += mu(u) * outer;
    c_mat += (lambda(u) * fr.shared * std::norm(st.m(u))) * outer;
  }
  for (int j = 0; j < n_sem; ++j) {
    const arma::uword u = static_cast<arma::uword>(j);
    const arma::cx_mat outer = h.h_sem.col(u) * h.h_sem.col(u).t();
    a_mat += nu(u) * outer;
    c_mat += nu(u) * outer;
  }

  RegularizedSolves out;
  out.bit.set_size(nt, static_cast<arma::uword>(n_bit));
  out.sem.set_size(nt, static_cast<arma::uword>(n_sem));
  out.h_ainv_h.set_size(static_cast<arma::uword>(n_bit));
  out.rho.set_size(static_cast<arma::uword>(n_bit));
  out.varsigma.set_size(static_cast<arma::uword>(n_sem));

  if (n_bit > 0) {
    out.bit = arma::solve(a_mat, h.h_bit, arma::solve_opts::likely_sympd);
    for (int i = 0; i < n_bit; ++i) {
      const arma::uword u = static_cast<arma::uword>(i);
      out.h_ainv_h(u) = std::real(arma::cdot(h.h_bit.col(u), out.bit.col(u)));
      out.rho(u) = lambda(u) * (fr.shared * st.m(u) * std::sqrt(1.0 + st.y(u)) +
                                fr.exclusive * st.n(u) * std::sqrt(1.0 + st.z(u)));
    }
  }

  if (n_sem > 0) {
    const arma::cx_mat u_sol = arma::solve(c_mat, h.h_sem, arma::solve_opts::likely_sympd);
    for (int i = 0; i < n_sem; ++i) {
      const arma::uword u = static_cast<arma::uword>(i);
      const auto& c = sc[static_cast<std::size_t>(i)];
      const double omega = std::norm(st.x(u)) * c.e_coef * (c.g_coef - c.f_coef);
      const double q = std::real(arma::cdot(h.h_sem.col(u), u_sol.col(u)));
      const double denom = 1.0 - omega * q;
      if (denom > 1e-12) {
        // Rank-one correction of the shared factorization.
        out.sem.col(u) = u_sol.col(u) / denom;
      } else {
        // Near-singular correction: solve the per-user matrix directly.
        const arma::cx_mat b_mat = c_mat - omega * (h.h_sem.col(u) * h.h_sem.col(u).t());
        out.sem.col(u) = arma::solve(b_mat, h.h_sem.col(u), arma::solve_opts::likely_sympd);
      }
      out.varsigma(u) = st.x(u) * c.e_coef;
    }
  }
  return out;
}

}  // namespace detail

namespace {

constexpr double kAnchorFloor = 1e-12;

Beamformer compose(const detail::RegularizedSolves& sol, int n_t) {
  Beamformer v = Beamformer::zeros(n_t, static_cast<int>(sol.bit.n_cols),
                                   static_cast<int>(sol.sem.n_cols));
  for (arma::uword i = 0; i < sol.bit.n_cols; ++i) v.v_bit.col(i) = sol.rho(i) * sol.bit.col(i);
  for (arma::uword i = 0; i < sol.sem.n_cols; ++i)
    v.v_sem.col(i) = sol.varsigma(i) * sol.sem.col(i);
  return v;
}

}  // namespace

AuxState AuxState::sized(int n_bit, int n_sem) {
  AuxState st;
  st.gamma0 = arma::vec(static_cast<arma::uword>(n_sem), arma::fill::ones);
  st.y = arma::vec(static_cast<arma::uword>(n_bit), arma::fill::zeros);
  st.z = arma::vec(static_cast<arma::uword>(n_bit), arma::fill::zeros);
  st.x = arma::cx_vec(static_cast<arma::uword>(n_sem), arma::fill::zeros);
  st.m = arma::cx_vec(static_cast<arma::uword>(n_bit), arma::fill::zeros);
  st.n = arma::cx_vec(static_cast<arma::uword>(n_bit), arma::fill::zeros);
  st.lambda = arma::vec(static_cast<arma::uword>(n_bit), arma::fill::zeros);
  return st;
}

Beamformer mrt_equal_power(const ChannelSet& h, const SystemConfig& cfg) {
  const int n_users = h.n_bit() + h.n_sem();
  Beamformer v = Beamformer::zeros(cfg.n_t, h.n_bit(), h.n_sem());
  if (n_users == 0) return v;
  const double per_user = cfg.p_total / static_cast<double>(n_users);
  for (int i = 0; i < h.n_bit(); ++i) {
    const arma::uword u = static_cast<arma::uword>(i);
    v.v_bit.col(u) = std::sqrt(per_user) * arma::normalise(h.h_bit.col(u));
  }
  for (int i = 0; i < h.n_sem(); ++i) {
    const arma::uword u = static_cast<arma::uword>(i);
    v.v_sem.col(u) = std::sqrt(per_user) * arma::normalise(h.h_sem.col(u));
  }
  return v;
}

void update_sinr_aux(const GainTable& g, const SystemConfig& cfg, AuxState& state,
                     const SemanticRateModel& model, int k) {
  const SinrBundle s = sinr_all(g, cfg, /*regularized=*/true);
  const double anchor_cap = max_usable_anchor(model.at(k));
  for (arma::uword i = 0; i < s.sem.n_elem; ++i)
    state.gamma0(i) = std::clamp(s.sem(i), kAnchorFloor, anchor_cap);
  state.y = s.bit_shared;
  state.z = s.bit_exclusive;
}

void update_sinr_aux(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                     AuxState& state, const SemanticRateModel& model, int k) {
  update_sinr_aux(compute_gains(v, h), cfg, state, model, k);
}

void update_ratio_aux(const GainTable& g, const SystemConfig& cfg,
                      const SemanticRateModel& model, int k, AuxState& state) {
  const arma::uword n_bit = g.bit.n_rows;
  const arma::uword n_sem = g.sem.n_rows;
  const arma::uword n_all = n_bit + n_sem;
  const DepthParams& dp = model.at(k);

  for (arma::uword i = 0; i < n_sem; ++i) {
    const SurrogateCoeffs sc = surrogate_coeffs(dp, state.gamma0(i));
    const arma::uword own = n_bit + i;
    double interf = cfg.sigma2_sem[i] * g.total_power / cfg.p_total;
    for (arma::uword j = 0; j < n_all; ++j)
      if (j != own) interf += std::norm(g.sem(i, j));
    const std::complex<double> c = g.sem(i, own);
    state.x(i) = c / (sc.f_coef * std::norm(c) + sc.g_coef * interf);
  }

  for (arma::uword i = 0; i < n_bit; ++i) {
    const double noise = cfg.sigma2_bit[i] * g.total_power / cfg.p_total;
    double q_all = noise, q_bit = noise;
    for (arma::uword j = 0; j < n_all; ++j) {
      const double pw = std::norm(g.bit(i, j));
      q_all += pw;
      if (j < n_bit) q_bit += pw;
    }
    const std::complex<double> c = g.bit(i, i);
    state.m(i) = std::sqrt(1.0 + state.y(i)) * c / q_all;
    state.n(i) = std::sqrt(1.0 + state.z(i)) * c / q_bit;
  }
}

void update_ratio_aux(const Beamformer& v, const ChannelSet& h, const SystemConfig& cfg,
                      const SemanticRateModel& model, int k, AuxState& state) {
  update_ratio_aux(compute_gains(v, h), cfg, model, k, state);
}

Beamformer beamformers_from_lambda(const arma::vec& lambda, const AuxState& state,
                                   const ChannelSet& h, const SystemConfig& cfg,
                                   const SemanticRateModel& model, int k) {
  return compose(detail::regularized_solves(lambda, state, h, cfg, model, k), cfg.n_t);
}

FixedPointResult lambda_fixed_point(AuxState& state, const ChannelSet& h,
                                    const SystemConfig& cfg, const SemanticRateModel& model,
                                    int k, const SolverOptions& opts) {
  const int n_bit = h.n_bit();
  const detail::FrameSplit fr = detail::frame_split(cfg, k);

  FixedPointResult res;
  res.lambda = arma::vec(static_cast<arma::uword>(n_bit), arma::fill::value(opts.lambda_init));

  if (n_bit == 0) {
    res.beamformer = beamformers_from_lambda(res.lambda, state, h, cfg, model, k);
    res.converged = true;
    res.iterations = 1;
    state.lambda = res.lambda;
    return res;
  }

  detail::DampedStep damper(opts.damping);
  int divergence_streak = 0;

  for (int it = 1; it <= opts.fp_max_iter; ++it) {
    res.iterations = it;
    const detail::RegularizedSolves sol =
        detail::regularized_solves(res.lambda, state, h, cfg, model, k);
    const Beamformer v = compose(sol, cfg.n_t);
    const GainTable g = compute_gains(v, h);
    const detail::LambdaUpdateTerms t = detail::lambda_update_terms(g, state, cfg, fr);

    arma::vec proposed(res.lambda.n_elem);
    for (arma::uword i = 0; i < proposed.n_elem; ++i) {
      const double denom = 2.0 * t.gain_weight(i) * sol.h_ainv_h(i);
      double raw;
      if (denom > 1e-300) {
        raw = t.numerator(i) / denom;
      } else {
        // No usable effective channel: the floor is either already met by
        // the constant terms or unreachable altogether.
        raw = t.numerator(i) > 0.0 ? 2.0 * opts.lambda_divergence : 0.0;
      }
      proposed(i) = std::max(raw, 0.0);  // complementary slackness
    }

    double raw_delta = 0.0;
    res.lambda = damper.apply(res.lambda, proposed, raw_delta);

    divergence_streak = res.lambda.max() > opts.lambda_divergence ? divergence_streak + 1 : 0;
    if (divergence_streak >= 3) {
      res.diverged = true;
      res.beamformer = v;
      state.lambda = res.lambda;
      return res;
    }

    if (raw_delta <= opts.fp_tol) {
      res.converged = true;
      break;
    }
  }

  res.beamformer = beamformers_from_lambda(res.lambda, state, h, cfg, model, k);
  state.lambda = res.lambda;
  return res;
}

SolveReport solve_p2(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  (void)detail::frame_split(cfg, k);  // validates M_K <= L before any work

  Beamformer v = mrt_equal_power(h, cfg);
  AuxState state = AuxState::sized(h.n_bit(), h.n_sem());

  SolveReport report;
  report.depth = k;
  report.solver = "mmfp";
  report.objective_trace.push_back(detail::reg_objective(v, h, cfg, model, k));

  bool qos_infeasible = false;
  int diverged_streak = 0;
  double prev_obj = report.objective_trace.front();

  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    report.outer_iterations = outer;
    update_sinr_aux(v, h, cfg, state, model, k);
    update_ratio_aux(v, h, cfg, model, k, state);

    FixedPointResult fp = lambda_fixed_point(state, h, cfg, model, k, opts);
    if (fp.diverged && !opts.damping) {
      SolverOptions retry = opts;
      retry.damping = true;
      fp = lambda_fixed_point(state, h, cfg, model, k, retry);
    }
    report.inner_iterations += fp.iterations;
    v = fp.beamformer;

    if (fp.diverged) {
      // The transformed QoS constraint is a minorant anchored at the previous
      // iterate; a diverged multiplier search under a poor anchor does not
      // prove infeasibility. Re-anchor at the drifted iterate and retry;
      // only a persistent pattern counts as an infeasible channel.
      if (++diverged_streak >= 3) {
        qos_infeasible = true;
        break;
      }
      continue;
    }
    diverged_streak = 0;

    const SinrBundle s_new = sinr_all(v, h, cfg, /*regularized=*/true);
    const DepthParams& dp = model.at(k);
    double obj = 0.0;
    for (arma::uword i = 0; i < s_new.sem.n_elem; ++i)
      obj += s_new.sem(i) > 0.0 ? semantic_rate(dp, s_new.sem(i)) : dp.a;
    report.objective_trace.push_back(obj);
    if (std::abs(obj - prev_obj) < opts.tol_outer &&
        detail::aux_movement(s_new, state, dp) < detail::kAuxMoveTol) {
      report.converged = true;
      break;
    }
    prev_obj = obj;
  }

  const double power = v.total_power();
  if (power > 0.0) {
    const double scale = std::sqrt(cfg.p_total / power);
    v.v_bit *= scale;
    v.v_sem *= scale;
  }

  if (h.n_bit() > 0) {
    auto min_slack = [&](const Beamformer& cand) {
      const arma::vec r = bit_rates(cand, h, cfg, k);
      double worst = std::numeric_limits<double>::infinity();
      for (arma::uword i = 0; i < r.n_elem; ++i) worst = std::min(worst, r(i) - cfg.qos[i]);
      return worst;
    };
    auto shifted = [&](double tau) {
      Beamformer cand = v;
      cand.v_sem *= 1.0 - tau;
      const double p = cand.total_power();
      if (p > 0.0) {
        const double s = std::sqrt(cfg.p_total / p);
        cand.v_bit *= s;
        cand.v_sem *= s;
      }
      return cand;
    };
    // Same repair as the power allocator: the smallest shift of sem power
    // back to bit users that restores every floor, if one exists.
    if (min_slack(v) < 0.0 && min_slack(shifted(1.0)) >= 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        (min_slack(shifted(mid)) >= 0.0 ? hi : lo) = mid;
      }
      v = shifted(hi);
    }
  }

  report.beamformer = v;
  const SinrBundle s = sinr_all(v, h, cfg, /*regularized=*/false);
  report.sem_sinr = arma::conv_to<std::vector<double>>::from(s.sem);
  report.bit_sinr_shared = arma::conv_to<std::vector<double>>::from(s.bit_shared);
  report.bit_sinr_exclusive = arma::conv_to<std::vector<double>>::from(s.bit_exclusive);
  const arma::vec rates = bit_rates(v, h, cfg, k);
  report.bit_rate = arma::conv_to<std::vector<double>>::from(rates);
  report.objective = objective_p1(v, h, cfg, k, model);
  const Feasibility f = check_feasible(v, h, cfg, k, opts.tol_qos, opts.tol_pow_rel);
  report.qos_slack = arma::conv_to<std::vector<double>>::from(f.qos_slack);
  // The final point is its own feasibility certificate; the divergence flag
  // only explains why the loop stopped early.
  report.feasible = f.feasible;
  if (qos_infeasible) report.converged = false;

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sembeam
