// SPDX-License-Identifier: Apache-2.0
//
// sembeam command-line harness: semantic-rate fitting, single solves,
// Monte-Carlo sweeps, and channel dumps for replaying realizations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sembeam/baselines.hpp"
#include "sembeam/channel.hpp"
#include "sembeam/ksearch.hpp"
#include "sembeam/serialize.hpp"
#include "sembeam/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;       // bad arguments, malformed files, invalid config
constexpr int kExitInfeasible = 3;  // solver finished but constraints cannot be met
constexpr int kExitSolver = 4;      // solver failure (divergence, degenerate systems)

struct CommonArgs {
  std::string config_path;
  std::string model_path;
  std::optional<std::uint64_t> seed;
};

sembeam::SystemConfig load_config(const CommonArgs& args) {
  sembeam::SystemConfig cfg =
      sembeam::load_json(args.config_path).get<sembeam::SystemConfig>();
  if (args.seed) cfg.seed = *args.seed;
  return sembeam::validate_config(cfg);
}

sembeam::SemanticRateModel load_model(const CommonArgs& args) {
  if (args.model_path.empty()) return sembeam::SemanticRateModel::synthetic_default();
  return sembeam::model_from_json(sembeam::load_json(args.model_path));
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    grid.push_back(std::stod(cell));
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beamforming designer and Monte-Carlo harness for downlinks serving "
               "rate-floor (bit) users and semantic-score users together"};
  app.require_subcommand(1);

  CommonArgs common;
  std::optional<std::uint64_t> seed_flag;

  // --- fit ---------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "Fit the per-depth logistic rate model to a sample CSV");
  std::string fit_samples, fit_out;
  double fit_rms_threshold = 0.05;
  fit->add_option("--samples", fit_samples, "CSV with header k,snr_db,score")->required();
  fit->add_option("--out", fit_out, "output model JSON path")->required();
  fit->add_option("--rms-threshold", fit_rms_threshold, "residual RMS flag threshold");

  // --- solve ---------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Run one solver on one channel realization");
  std::string solver_name, channel_path, report_out;
  int solve_k = 3;
  bool solve_k_search = false;
  std::uint64_t solve_trial = 0;
  std::string opts_path;
  solve->add_option("--config", common.config_path, "system config JSON")->required();
  solve->add_option("--model", common.model_path, "rate model JSON (default: built-in synthetic table)");
  solve->add_option("--solver", solver_name, "one of mmfp, lp-mmfp, zf-pc, mrt-pc, wmmse-pc")->required();
  solve->add_option("--k", solve_k, "downsampling depth (default 3)");
  solve->add_flag("--k-search", solve_k_search, "search the configured depth range");
  solve->add_option("--channels", channel_path, "replay a dumped channel file instead of sampling");
  solve->add_option("--trial", solve_trial, "channel stream index when sampling");
  solve->add_option("--seed", seed_flag, "override the config seed");
  solve->add_option("--opts", opts_path, "solver options JSON");
  solve->add_option("--out", report_out, "report JSON path (default: stdout)");

  // --- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over a QoS or SNR grid");
  std::string axis, grid_csv, sweep_out, solvers_csv;
  int sweep_trials = 100;
  int sweep_k = 3;
  bool sweep_k_search = false;
  int sweep_threads = 0;
  sweep->add_option("--config", common.config_path, "system config JSON")->required();
  sweep->add_option("--model", common.model_path, "rate model JSON (default: built-in synthetic table)");
  sweep->add_option("--axis", axis, "qos or snr")->required()->check(CLI::IsMember({"qos", "snr"}));
  sweep->add_option("--grid", grid_csv, "comma-separated axis values")->required();
  sweep->add_option("--trials", sweep_trials, "trials per grid point (default 100)");
  sweep->add_option("--solvers", solvers_csv, "comma-separated solver names (default: all five)");
  sweep->add_option("--k", sweep_k, "downsampling depth (default 3)");
  sweep->add_flag("--k-search", sweep_k_search, "search the configured depth range");
  sweep->add_option("--seed", seed_flag, "override the config seed");
  sweep->add_option("--threads", sweep_threads, "worker threads (default: SEMBEAM_THREADS or all cores)");
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

  // --- gen-channels ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen-channels", "Dump one channel realization for replay");
  std::string gen_out;
  std::uint64_t gen_trial = 0;
  gen->add_option("--config", common.config_path, "system config JSON")->required();
  gen->add_option("--out", gen_out, "channel JSON path")->required();
  gen->add_option("--trial", gen_trial, "channel stream index");
  gen->add_option("--seed", seed_flag, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  common.seed = seed_flag;

  try {
    if (*fit) {
      const auto samples = sembeam::load_fit_samples_csv(fit_samples);
      sembeam::FitOptions fopts;
      fopts.rms_flag_threshold = fit_rms_threshold;
      const sembeam::FitResult result = sembeam::fit_semantic_rate(samples, fopts);
      sembeam::save_json(fit_out,
                         sembeam::model_to_json(result.model, "fitted from " + fit_samples));
      for (const auto& [k, df] : result.per_depth) {
        std::fprintf(stderr, "depth %d: a=%.6g c=%.6g d=%.6g e=%.6g rms=%.3g%s\n", k,
                     df.params.a, df.params.c, df.params.d, df.params.e, df.rms,
                     df.flagged ? "  [FLAGGED: residual above threshold]" : "");
      }
      if (result.any_flagged) {
        std::fprintf(stderr, "fit did not converge to the requested residual on all depths\n");
        return kExitSolver;
      }
      return kExitOk;
    }

    if (*solve) {
      const sembeam::SystemConfig cfg = load_config(common);
      const sembeam::SemanticRateModel model = load_model(common);
      sembeam::SolverOptions opts;
      if (!opts_path.empty()) opts = sembeam::load_json(opts_path).get<sembeam::SolverOptions>();

      sembeam::ChannelSet h;
      if (!channel_path.empty()) {
        h = sembeam::load_json(channel_path).get<sembeam::ChannelSet>();
        if (h.n_t() != cfg.n_t || h.n_bit() != cfg.n_bit || h.n_sem() != cfg.n_sem)
          throw std::invalid_argument("channel file dimensions do not match the config");
      } else {
        sembeam::Rng rng = sembeam::Rng::for_stream(cfg.seed, solve_trial);
        h = sembeam::sample_channel_set(rng, cfg);
      }

      const sembeam::SolveReport report =
          sembeam::run_solver(solver_name, h, cfg, model, solve_k, solve_k_search, opts);
      const nlohmann::json j = report;
      if (report_out.empty()) std::cout << j.dump(2) << '\n';
      else sembeam::save_json(report_out, j);
      return report.feasible ? kExitOk : kExitInfeasible;
    }

    if (*sweep) {
      const sembeam::SystemConfig cfg = load_config(common);
      const sembeam::SemanticRateModel model = load_model(common);

      sembeam::SweepSpec spec;
      spec.axis = axis;
      spec.grid = parse_grid(grid_csv);
      spec.trials = sweep_trials;
      spec.k = sweep_k;
      spec.k_search = sweep_k_search;
      spec.seed = cfg.seed;
      spec.threads = sweep_threads;
      if (!solvers_csv.empty()) {
        spec.solvers.clear();
        std::stringstream ss(solvers_csv);
        std::string cell;
        while (std::getline(ss, cell, ','))
          if (!cell.empty()) spec.solvers.push_back(cell);
      }

      const auto rows = sembeam::run_sweep(cfg, model, spec);
      if (sweep_out.empty()) {
        sembeam::write_sweep_csv(std::cout, spec, rows);
      } else {
        std::ofstream out(sweep_out);
        if (!out) throw std::runtime_error("cannot write " + sweep_out);
        sembeam::write_sweep_csv(out, spec, rows);
      }
      return kExitOk;
    }

    if (*gen) {
      const sembeam::SystemConfig cfg = load_config(common);
      sembeam::Rng rng = sembeam::Rng::for_stream(cfg.seed, gen_trial);
      const sembeam::ChannelSet h = sembeam::sample_channel_set(rng, cfg);
      sembeam::save_json(gen_out, nlohmann::json(h));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitUsage;
}
