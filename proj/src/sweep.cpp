// SPDX-License-Identifier: Apache-2.0

#include "sembeam/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sembeam/baselines.hpp"
#include "sembeam/channel.hpp"
#include "sembeam/ksearch.hpp"

namespace sembeam {

namespace {

SystemConfig apply_axis(SystemConfig cfg, const std::string& axis, double value) {
  if (axis == "qos") {
    std::fill(cfg.qos.begin(), cfg.qos.end(), value);
  } else if (axis == "snr") {
    // SNR means p_total / sigma2 with a common noise power for all users.
    const double sigma2 = cfg.p_total * std::pow(10.0, -value / 10.0);
    std::fill(cfg.sigma2_bit.begin(), cfg.sigma2_bit.end(), sigma2);
    std::fill(cfg.sigma2_sem.begin(), cfg.sigma2_sem.end(), sigma2);
  } else {
    throw std::invalid_argument("sweep axis must be 'qos' or 'snr'");
  }
  return cfg;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SEMBEAM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

}  // namespace

SolveReport run_solver(const std::string& name, const ChannelSet& h, const SystemConfig& cfg,
                       const SemanticRateModel& model, int k, bool k_search,
                       const SolverOptions& opts) {
  if (name == "mmfp")
    return k_search ? solve_p1(h, cfg, model, SolverKind::mmfp, opts)
                    : solve_p2(h, cfg, model, k, opts);
  if (name == "lp-mmfp")
    return k_search ? solve_p1(h, cfg, model, SolverKind::lp_mmfp, opts)
                    : solve_lp(h, cfg, model, k, opts);
  if (name == "zf-pc" || name == "mrt-pc" || name == "wmmse-pc") {
    if (k_search)
      throw std::invalid_argument("k-search supports the mmfp and lp-mmfp solvers only");
    return solve_baseline(name, h, cfg, model, k, opts);
  }
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::vector<SweepRow> run_sweep(const SystemConfig& cfg, const SemanticRateModel& model,
                                const SweepSpec& spec, const SolverOptions& opts) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  if (spec.trials < 1) throw std::invalid_argument("sweep needs at least one trial");

  struct Cell {
    std::size_t axis_idx;
    int trial;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < spec.grid.size(); ++a)
    for (int t = 0; t < spec.trials; ++t) cells.push_back({a, t});

  const std::size_t per_cell = spec.solvers.size();
  std::vector<SweepRow> rows(cells.size() * per_cell);

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell cell = cells[idx];
      const double value = spec.grid[cell.axis_idx];
      const SystemConfig local = apply_axis(cfg, spec.axis, value);

      // The channel depends only on (seed, trial): identical across solvers
      // and across the whole axis, so comparisons are paired everywhere.
      Rng rng = Rng::for_stream(spec.seed, static_cast<std::uint64_t>(cell.trial));
      const ChannelSet h = sample_channel_set(rng, local);

      for (std::size_t s = 0; s < per_cell; ++s) {
        SweepRow row;
        row.axis_value = value;
        row.solver = spec.solvers[s];
        row.trial = cell.trial;
        try {
          const SolveReport rep =
              run_solver(spec.solvers[s], h, local, model, spec.k, spec.k_search, opts);
          row.objective = rep.objective;
          row.feasible = rep.feasible;
          row.wall_time = rep.wall_time;
          row.k_opt = rep.depth;
        } catch (const std::exception&) {
          // Recorded as an infeasible cell; the sweep itself never aborts.
          row.objective = 0.0;
          row.feasible = false;
          row.wall_time = 0.0;
          row.k_opt = spec.k;
        }
        rows[idx * per_cell + s] = std::move(row);
      }
    }
  };

  const int n_threads = std::min<int>(resolve_threads(spec.threads),
                                      static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  out << "# trials=" << spec.trials << " seed=" << spec.seed << " axis=" << spec.axis
      << " k=" << (spec.k_search ? std::string("search") : std::to_string(spec.k)) << '\n';
  out << "axis_value,solver,trial,objective,feasible,wall_time,k_opt\n";
  out.precision(17);
  for (const SweepRow& r : rows) {
    out << r.axis_value << ',' << csv_field(r.solver) << ',' << r.trial << ',' << r.objective
        << ',' << (r.feasible ? 1 : 0) << ',' << r.wall_time << ',' << r.k_opt << '\n';
  }

  // Per (axis value, solver) summaries; infeasible trials count as objective 0.
  for (double value : spec.grid) {
    for (const std::string& solver : spec.solvers) {
      std::vector<double> obj;
      std::vector<double> wall;
      int feasible_count = 0;
      for (const SweepRow& r : rows) {
        if (r.axis_value != value || r.solver != solver) continue;
        obj.push_back(r.feasible ? r.objective : 0.0);
        wall.push_back(r.wall_time);
        feasible_count += r.feasible ? 1 : 0;
      }
      if (obj.empty()) continue;
      const double n = static_cast<double>(obj.size());
      double mean = 0.0, wall_mean = 0.0;
      for (std::size_t i = 0; i < obj.size(); ++i) {
        mean += obj[i] / n;
        wall_mean += wall[i] / n;
      }
      double var = 0.0;
      for (double o : obj) var += (o - mean) * (o - mean);
      const double sd = obj.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
      out << value << ',' << csv_field(solver) << ",mean," << mean << ','
          << (feasible_count == static_cast<int>(obj.size()) ? 1 : 0) << ',' << wall_mean
          << ",\n";
      out << value << ',' << csv_field(solver) << ",std," << sd << ",,,\n";
    }
  }
}

}  // namespace sembeam
