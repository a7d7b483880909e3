// SPDX-License-Identifier: Apache-2.0

#include "sembeam/lpmmfp.hpp"

#include <chrono>
#include <stdexcept>

#include "solver_detail.hpp"

namespace sembeam {

namespace {

// Gains of the scaled-direction beamformer D * diag(q) without touching
// antenna-dimension storage: column j of the cross table scales by q_j and
// the total power is |q|^2 for unit-norm directions.
GainTable scaled_gains(const GainTable& s_tab, const arma::vec& q) {
  GainTable g;
  g.bit = s_tab.bit;
  g.sem = s_tab.sem;
  for (arma::uword j = 0; j < q.n_elem; ++j) {
    g.bit.col(j) *= q(j);
    g.sem.col(j) *= q(j);
  }
  g.total_power = arma::dot(q, q);
  return g;
}

struct ScalarUpdate {
  arma::vec q;        // per-stream amplitudes
  arma::vec bit_lin;  // per bit-user effective gain Re{w* s_ii} (multiplier sensitivity)
  arma::vec bit_quad; // per bit-stream diagonal quadratic coefficient
};

// Closed-form stationary amplitudes of the transformed subproblem on the
// fixed-direction subspace; the quadratic forms are column-separable, so
// every stream reduces to (linear coefficient) / (diagonal coefficient).
ScalarUpdate amplitudes_from_lambda(const arma::vec& lambda, const AuxState& st,
                                    const GainTable& s_tab, const SystemConfig& cfg,
                                    const SemanticRateModel& model, int k,
                                    const detail::FrameSplit& fr) {
  const arma::uword n_bit = s_tab.bit.n_rows;
  const arma::uword n_sem = s_tab.sem.n_rows;
  const arma::uword n_all = n_bit + n_sem;
  const DepthParams& dp = model.at(k);

  arma::vec mu(n_bit), nu(n_sem), exf(n_sem);
  std::vector<SurrogateCoeffs> sc(n_sem);
  for (arma::uword u = 0; u < n_bit; ++u)
    mu(u) = lambda(u) * (fr.shared * std::norm(st.m(u)) + fr.exclusive * std::norm(st.n(u)));
  for (arma::uword u = 0; u < n_sem; ++u) {
    sc[u] = surrogate_coeffs(dp, st.gamma0(u));
    nu(u) = std::norm(st.x(u)) * sc[u].e_coef * sc[u].g_coef;
    exf(u) = std::norm(st.x(u)) * sc[u].e_coef * sc[u].f_coef;
  }

  double noise_sum = 0.0;
  for (arma::uword u = 0; u < n_bit; ++u) noise_sum += mu(u) * cfg.sigma2_bit[u];
  for (arma::uword u = 0; u < n_sem; ++u) noise_sum += nu(u) * cfg.sigma2_sem[u];
  const double reg = noise_sum / cfg.p_total;
  if (!(reg > 0.0))
    throw std::runtime_error("degenerate regularizer: all quadratic weights vanish");

  ScalarUpdate out;
  out.q.set_size(n_all);
  out.bit_lin.set_size(n_bit);
  out.bit_quad.set_size(n_bit);

  for (arma::uword j = 0; j < n_all; ++j) {
    const bool bit_stream = j < n_bit;
    double quad = reg;
    // Bit-user rows: full-frame weight against bit streams, shared-period
    // weight against sem streams (the exclusive period carries no sem signal).
    for (arma::uword u = 0; u < n_bit; ++u) {
      const double g_uj = std::norm(s_tab.bit(u, j));
      const double weight =
          bit_stream ? mu(u) : lambda(u) * fr.shared * std::norm(st.m(u));
      quad += weight * g_uj;
    }
    for (arma::uword u = 0; u < n_sem; ++u) {
      const double g_uj = std::norm(s_tab.sem(u, j));
      if (bit_stream) {
        quad += nu(u) * g_uj;
      } else if (n_bit + u == j) {
        quad += exf(u) * g_uj;  // own stream: signal-shaping weight, not interference
      } else {
        quad += nu(u) * g_uj;
      }
    }

    if (bit_stream) {
      const arma::uword i = j;
      const std::complex<double> w = fr.shared * st.m(i) * std::sqrt(1.0 + st.y(i)) +
                                     fr.exclusive * st.n(i) * std::sqrt(1.0 + st.z(i));
      const double lin = std::real(std::conj(w) * s_tab.bit(i, i));
      out.bit_lin(i) = std::max(lin, 0.0);
      out.bit_quad(i) = quad;
      out.q(j) = lambda(i) * out.bit_lin(i) / quad;
    } else {
      const arma::uword i = j - n_bit;
      const double lin =
          std::real(std::conj(st.x(i) * sc[i].e_coef) * s_tab.sem(i, j));
      out.q(j) = std::max(lin, 0.0) / quad;
    }
  }
  return out;
}

}  // namespace

DirectionSet lp_directions(const ChannelSet& h, const SystemConfig& cfg,
                           const SemanticRateModel& model, int k, double lambda0) {
  if (lambda0 < 0.0)
    throw std::invalid_argument("lp_directions: lambda0 must be non-negative");
  // Auxiliaries are evaluated once at matched-filter precoding; the
  // direction of the regularized solves is invariant to its scaling.
  const Beamformer mrt = mrt_equal_power(h, cfg);
  AuxState state = AuxState::sized(h.n_bit(), h.n_sem());
  update_sinr_aux(mrt, h, cfg, state, model, k);
  update_ratio_aux(mrt, h, cfg, model, k, state);

  const arma::vec lambda(static_cast<arma::uword>(h.n_bit()), arma::fill::value(lambda0));
  const detail::RegularizedSolves sol =
      detail::regularized_solves(lambda, state, h, cfg, model, k);

  DirectionSet d;
  d.d_bit.set_size(sol.bit.n_rows, sol.bit.n_cols);
  d.d_sem.set_size(sol.sem.n_rows, sol.sem.n_cols);
  for (arma::uword i = 0; i < sol.bit.n_cols; ++i) d.d_bit.col(i) = arma::normalise(sol.bit.col(i));
  for (arma::uword i = 0; i < sol.sem.n_cols; ++i) d.d_sem.col(i) = arma::normalise(sol.sem.col(i));
  return d;
}

PowerAllocation allocate_power(const DirectionSet& dirs, const ChannelSet& h,
                               const SystemConfig& cfg, const SemanticRateModel& model,
                               int k, const SolverOptions& opts) {
  const detail::FrameSplit fr = detail::frame_split(cfg, k);
  const arma::uword n_bit = dirs.d_bit.n_cols;
  const arma::uword n_sem = dirs.d_sem.n_cols;
  const arma::uword n_all = n_bit + n_sem;

  const Beamformer dirs_v{dirs.d_bit, dirs.d_sem};
  const GainTable s_tab = compute_gains(dirs_v, h);

  const DepthParams& dp = model.at(k);
  AuxState state = AuxState::sized(static_cast<int>(n_bit), static_cast<int>(n_sem));
  arma::vec q(n_all, arma::fill::value(std::sqrt(cfg.p_total / static_cast<double>(n_all))));

  auto objective = [&](const arma::vec& amp) {
    const SinrBundle s = sinr_all(scaled_gains(s_tab, amp), cfg, /*regularized=*/true);
    double obj = 0.0;
    for (arma::uword i = 0; i < s.sem.n_elem; ++i)
      obj += s.sem(i) > 0.0 ? semantic_rate(dp, s.sem(i)) : dp.a;
    return obj;
  };

  PowerAllocation out;
  out.objective_trace.push_back(objective(q));
  double prev_obj = out.objective_trace.front();
  int diverged_streak = 0;

  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    out.outer_iterations = outer;
    const GainTable g0 = scaled_gains(s_tab, q);
    update_sinr_aux(g0, cfg, state, model, k);
    update_ratio_aux(g0, cfg, model, k, state);

    arma::vec lambda(n_bit, arma::fill::value(opts.lambda_init));
    detail::DampedStep damper(opts.damping);
    int divergence_streak = 0;
    bool diverged = false;

    for (int it = 1; it <= opts.fp_max_iter; ++it) {
      ++out.inner_iterations;
      const ScalarUpdate up =
          amplitudes_from_lambda(lambda, state, s_tab, cfg, model, k, fr);
      if (n_bit == 0) {
        q = up.q;
        break;
      }
      const GainTable g = scaled_gains(s_tab, up.q);
      const detail::LambdaUpdateTerms t = detail::lambda_update_terms(g, state, cfg, fr);

      arma::vec proposed(n_bit);
      for (arma::uword i = 0; i < n_bit; ++i) {
        const double sens = up.bit_lin(i) * up.bit_lin(i) / up.bit_quad(i);
        const double denom = 2.0 * sens;
        double raw;
        if (denom > 1e-300) {
          raw = t.numerator(i) / denom;
        } else {
          raw = t.numerator(i) > 0.0 ? 2.0 * opts.lambda_divergence : 0.0;
        }
        proposed(i) = std::max(raw, 0.0);
      }

      double raw_delta = 0.0;
      lambda = damper.apply(lambda, proposed, raw_delta);
      q = up.q;

      divergence_streak = lambda.max() > opts.lambda_divergence ? divergence_streak + 1 : 0;
      if (divergence_streak >= 3) {
        diverged = true;
        break;
      }
      if (raw_delta <= opts.fp_tol) {
        q = amplitudes_from_lambda(lambda, state, s_tab, cfg, model, k, fr).q;
        break;
      }
    }

    if (diverged) {
      // Same policy as the full solver: a diverged multiplier search under a
      // stale anchor is retried after re-anchoring at the drifted amplitudes.
      if (++diverged_streak >= 3) break;
      continue;
    }
    diverged_streak = 0;
    const SinrBundle s_new = sinr_all(scaled_gains(s_tab, q), cfg, /*regularized=*/true);
    double obj = 0.0;
    for (arma::uword i = 0; i < s_new.sem.n_elem; ++i)
      obj += s_new.sem(i) > 0.0 ? semantic_rate(dp, s_new.sem(i)) : dp.a;
    out.objective_trace.push_back(obj);
    if (std::abs(obj - prev_obj) < opts.tol_outer &&
        detail::aux_movement(s_new, state, dp) < detail::kAuxMoveTol)
      break;
    prev_obj = obj;
  }

  const double total = arma::dot(q, q);
  if (total > 0.0) q *= std::sqrt(cfg.p_total / total);

  auto min_slack = [&](const arma::vec& amp) {
    const SinrBundle s = sinr_all(scaled_gains(s_tab, amp), cfg, /*regularized=*/false);
    double worst = std::numeric_limits<double>::infinity();
    for (arma::uword i = 0; i < n_bit; ++i) {
      const double rate = fr.shared * std::log2(1.0 + s.bit_shared(i)) +
                          fr.exclusive * std::log2(1.0 + s.bit_exclusive(i));
      worst = std::min(worst, rate - cfg.qos[i]);
    }
    return worst;
  };
  auto shifted = [&](double tau) {
    arma::vec amp = q;
    for (arma::uword i = 0; i < n_sem; ++i) amp(n_bit + i) *= 1.0 - tau;
    const double tot = arma::dot(amp, amp);
    if (tot > 0.0) amp *= std::sqrt(cfg.p_total / tot);
    return amp;
  };

  // The multiplier search can stall a hair short of the floor. Bit rates
  // increase monotonically as sem power shifts back to bit streams, so the
  // smallest such shift restoring every floor is the repair of choice.
  if (n_bit > 0 && min_slack(q) < 0.0 && min_slack(shifted(1.0)) >= 0.0) {
    double lo = 0.0, hi = 1.0;
    for (int b = 0; b < 60; ++b) {
      const double mid = 0.5 * (lo + hi);
      (min_slack(shifted(mid)) >= 0.0 ? hi : lo) = mid;
    }
    q = shifted(hi);
  }

  out.p_bit.set_size(n_bit);
  out.p_sem.set_size(n_sem);
  for (arma::uword i = 0; i < n_bit; ++i) out.p_bit(i) = q(i) * q(i);
  for (arma::uword i = 0; i < n_sem; ++i) out.p_sem(i) = q(n_bit + i) * q(n_bit + i);

  // QoS verdict on the final allocation with plain noise.
  out.feasible = n_bit == 0 || min_slack(q) >= -opts.tol_qos;
  return out;
}

SolveReport solve_lp(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, int k, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();

  const DirectionSet dirs = lp_directions(h, cfg, model, k, opts.lambda_init);
  const PowerAllocation pa = allocate_power(dirs, h, cfg, model, k, opts);

  Beamformer v = Beamformer::zeros(cfg.n_t, h.n_bit(), h.n_sem());
  for (arma::uword i = 0; i < dirs.d_bit.n_cols; ++i)
    v.v_bit.col(i) = std::sqrt(pa.p_bit(i)) * dirs.d_bit.col(i);
  for (arma::uword i = 0; i < dirs.d_sem.n_cols; ++i)
    v.v_sem.col(i) = std::sqrt(pa.p_sem(i)) * dirs.d_sem.col(i);

  SolveReport report;
  report.depth = k;
  report.solver = "lp-mmfp";
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
