// SPDX-License-Identifier: Apache-2.0

#include "sembeam/ksearch.hpp"

#include <chrono>
#include <future>
#include <stdexcept>

namespace sembeam {

SolveReport solve_p1(const ChannelSet& h, const SystemConfig& cfg,
                     const SemanticRateModel& model, SolverKind solver,
                     const SolverOptions& opts) {
  if (!model.covers(cfg.k_min) || !model.covers(cfg.k_max))
    throw std::invalid_argument("solve_p1: model does not cover the configured depth range");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::future<SolveReport>> futures;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    futures.push_back(std::async(std::launch::async, [&, k] {
      return solver == SolverKind::mmfp ? solve_p2(h, cfg, model, k, opts)
                                        : solve_lp(h, cfg, model, k, opts);
    }));
  }

  std::vector<SolveReport> reports;
  reports.reserve(futures.size());
  for (auto& f : futures) reports.push_back(f.get());

  // Ordered argmax over feasible depths; ties keep the smaller depth. If
  // nothing is feasible, fall back to the best-effort objective so the
  // caller still sees metrics, flagged infeasible.
  const SolveReport* best = nullptr;
  for (const SolveReport& r : reports)
    if (r.feasible && (best == nullptr || r.objective > best->objective)) best = &r;
  const bool any_feasible = best != nullptr;
  if (!any_feasible)
    for (const SolveReport& r : reports)
      if (best == nullptr || r.objective > best->objective) best = &r;

  SolveReport out = *best;
  out.feasible = any_feasible;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace sembeam
