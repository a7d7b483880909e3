// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sembeam/semrate.hpp"

namespace sembeam {

namespace {

// Plain Nelder-Mead; small fixed dimension, derivative-free so the logistic
// exponent never needs an analytic Jacobian.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, const std::vector<double>& step,
                                int max_iter, double ftol) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(val[worst] - val[best]) <= ftol * (std::abs(val[best]) + ftol)) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + t * (centroid[d] - pts[worst][d]);
      return p;
    };

    std::vector<double> refl = blend(1.0);
    const double f_refl = f(refl);
    if (f_refl < val[best]) {
      std::vector<double> expa = blend(2.0);
      const double f_expa = f(expa);
      if (f_expa < f_refl) { pts[worst] = expa; val[worst] = f_expa; }
      else { pts[worst] = refl; val[worst] = f_refl; }
    } else if (f_refl < val[second]) {
      pts[worst] = refl; val[worst] = f_refl;
    } else {
      std::vector<double> con = blend(f_refl < val[worst] ? 0.5 : -0.5);
      const double f_con = f(con);
      if (f_con < std::min(f_refl, val[worst])) {
        pts[worst] = con; val[worst] = f_con;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) pts[i][d] = 0.5 * (pts[i][d] + pts[best][d]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  return pts[best];
}

DepthParams decode(const std::vector<double>& t) {
  return DepthParams{t[0], std::exp(t[1]), std::exp(t[2]), std::exp(t[3])};
}

double rms_residual(const DepthParams& p, const std::vector<double>& gamma,
                    const std::vector<double>& score) {
  double ss = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double r = semantic_rate(p, gamma[i]) - score[i];
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(gamma.size()));
}

DepthFit fit_one_depth(const std::vector<double>& gamma, const std::vector<double>& score,
                       double rms_flag_threshold) {
  const double lo = *std::min_element(score.begin(), score.end());
  const double hi = *std::max_element(score.begin(), score.end());

  auto objective = [&](const std::vector<double>& t) {
    return rms_residual(decode(t), gamma, score);
  };

  // Floor at the min score, ceiling at the max with c fixed to 1, then let
  // the simplex refine; a small grid over the slope guards against the
  // steep-curve local minima.
  std::vector<double> best;
  double best_val = std::numeric_limits<double>::infinity();
  for (double e0 : {0.3, 0.6, 1.0, 1.5}) {
    std::vector<double> t0 = {lo, std::log(1.0), std::log(std::max(hi - lo, 1e-3)),
                              std::log(e0)};
    std::vector<double> t = nelder_mead(objective, t0, {0.05, 0.3, 0.3, 0.3}, 4000, 1e-16);
    // Polish with a tighter simplex around the found point.
    t = nelder_mead(objective, t, {1e-4, 1e-3, 1e-3, 1e-3}, 2000, 1e-18);
    const double v = objective(t);
    if (v < best_val) { best_val = v; best = t; }
  }

  DepthFit out;
  out.params = decode(best);
  out.rms = best_val;
  out.flagged = !(best_val <= rms_flag_threshold);
  return out;
}

}  // namespace

FitResult fit_semantic_rate(const std::vector<FitSample>& samples, const FitOptions& opts) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_depth;
  for (const FitSample& s : samples) {
    by_depth[s.k].first.push_back(std::pow(10.0, s.snr_db / 10.0));
    by_depth[s.k].second.push_back(s.snr_db);
  }
  if (by_depth.empty()) throw std::invalid_argument("fit: no samples");

  // Contiguity first so a gap is reported as such rather than as a model error.
  int prev = by_depth.begin()->first - 1;
  for (const auto& [k, _] : by_depth) {
    if (k != prev + 1)
      throw std::invalid_argument("fit: depth keys must be contiguous, missing depth " +
                                  std::to_string(prev + 1));
    prev = k;
  }

  FitResult result;
  std::vector<DepthParams> per_depth;
  for (const auto& [k, cols] : by_depth) {
    const auto& snrs = cols.second;
    if (snrs.size() < static_cast<std::size_t>(opts.min_samples_per_depth))
      throw std::invalid_argument("fit: depth " + std::to_string(k) + " has fewer than " +
                                  std::to_string(opts.min_samples_per_depth) + " samples");
    const auto [mn, mx] = std::minmax_element(snrs.begin(), snrs.end());
    if (*mx - *mn < opts.min_span_db)
      throw std::invalid_argument("fit: depth " + std::to_string(k) + " spans less than " +
                                  std::to_string(opts.min_span_db) + " dB");

    std::vector<double> gamma, score;
    for (const FitSample& s : samples) {
      if (s.k != k) continue;
      gamma.push_back(std::pow(10.0, s.snr_db / 10.0));
      score.push_back(s.score);
    }
    DepthFit df = fit_one_depth(gamma, score, opts.rms_flag_threshold);
    result.per_depth[k] = df;
    result.any_flagged = result.any_flagged || df.flagged;
    per_depth.push_back(df.params);
  }
  result.model = SemanticRateModel(by_depth.begin()->first, std::move(per_depth));
  return result;
}

std::vector<FitSample> load_fit_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sample file is empty: " + path);
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    return s;
  };
  if (strip(line) != "k,snr_db,score")
    throw std::invalid_argument("sample file must start with header 'k,snr_db,score'");

  std::vector<FitSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    std::istringstream row(line);
    std::string cell;
    FitSample s;
    try {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("missing k");
      s.k = std::stoi(cell);
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("missing snr_db");
      s.snr_db = std::stod(cell);
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("missing score");
      s.score = std::stod(cell);
    } catch (const std::exception&) {
      throw std::invalid_argument("sample file: bad row at line " + std::to_string(line_no));
    }
    samples.push_back(s);
  }
  if (samples.empty()) throw std::invalid_argument("sample file has no data rows: " + path);
  return samples;
}

void save_fit_samples_csv(const std::string& path, const std::vector<FitSample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sample file: " + path);
  out << "k,snr_db,score\n";
  out.precision(17);
  for (const FitSample& s : samples)
    out << s.k << ',' << s.snr_db << ',' << s.score << '\n';
}

}  // namespace sembeam
