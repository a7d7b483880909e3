// SPDX-License-Identifier: Apache-2.0

#include "sembeam/serialize.hpp"

#include <cctype>
#include <fstream>

namespace sembeam {

namespace {

using nlohmann::json;

json cx_mat_to_json(const arma::cx_mat& m) {
  // One [re, im] row per antenna, one matrix per user column.
  json users = json::array();
  for (arma::uword c = 0; c < m.n_cols; ++c) {
    json entries = json::array();
    for (arma::uword r = 0; r < m.n_rows; ++r)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
    users.push_back(std::move(entries));
  }
  return users;
}

arma::cx_mat cx_mat_from_json(const json& users, const char* what) {
  if (!users.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  const arma::uword n_cols = users.size();
  arma::uword n_rows = 0;
  if (n_cols > 0) n_rows = users.at(0).size();
  arma::cx_mat m(n_rows, n_cols);
  for (arma::uword c = 0; c < n_cols; ++c) {
    const json& col = users.at(c);
    if (col.size() != n_rows)
      throw std::invalid_argument(std::string(what) + ": ragged user vectors");
    for (arma::uword r = 0; r < n_rows; ++r) {
      const json& pair = col.at(r);
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument(std::string(what) + ": entries must be [re, im] pairs");
      m(r, c) = {pair.at(0).get<double>(), pair.at(1).get<double>()};
    }
  }
  return m;
}

}  // namespace

void to_json(nlohmann::json& j, const SystemConfig& cfg) {
  j = nlohmann::json{{"n_t", cfg.n_t},
                     {"n_bit", cfg.n_bit},
                     {"n_sem", cfg.n_sem},
                     {"p_total", cfg.p_total},
                     {"sigma2_bit", cfg.sigma2_bit},
                     {"sigma2_sem", cfg.sigma2_sem},
                     {"frame_len", cfg.frame_len},
                     {"qos", cfg.qos},
                     {"filters", cfg.filters},
                     {"image_size", cfg.image_size},
                     {"k_min", cfg.k_min},
                     {"k_max", cfg.k_max},
                     {"seed", cfg.seed}};
}

void from_json(const nlohmann::json& j, SystemConfig& cfg) {
  j.at("n_t").get_to(cfg.n_t);
  j.at("n_bit").get_to(cfg.n_bit);
  j.at("n_sem").get_to(cfg.n_sem);
  j.at("p_total").get_to(cfg.p_total);
  j.at("sigma2_bit").get_to(cfg.sigma2_bit);
  j.at("sigma2_sem").get_to(cfg.sigma2_sem);
  j.at("frame_len").get_to(cfg.frame_len);
  j.at("qos").get_to(cfg.qos);
  j.at("filters").get_to(cfg.filters);
  j.at("image_size").get_to(cfg.image_size);
  j.at("k_min").get_to(cfg.k_min);
  j.at("k_max").get_to(cfg.k_max);
  cfg.seed = j.value("seed", std::uint64_t{1});
}

void to_json(nlohmann::json& j, const SolverOptions& opts) {
  j = nlohmann::json{{"tol_outer", opts.tol_outer},
                     {"max_outer", opts.max_outer},
                     {"fp_tol", opts.fp_tol},
                     {"fp_max_iter", opts.fp_max_iter},
                     {"damping", opts.damping},
                     {"lambda_init", opts.lambda_init},
                     {"lambda_divergence", opts.lambda_divergence},
                     {"tol_qos", opts.tol_qos},
                     {"tol_pow_rel", opts.tol_pow_rel}};
}

void from_json(const nlohmann::json& j, SolverOptions& opts) {
  SolverOptions defaults;
  opts.tol_outer = j.value("tol_outer", defaults.tol_outer);
  opts.max_outer = j.value("max_outer", defaults.max_outer);
  opts.fp_tol = j.value("fp_tol", defaults.fp_tol);
  opts.fp_max_iter = j.value("fp_max_iter", defaults.fp_max_iter);
  opts.damping = j.value("damping", defaults.damping);
  opts.lambda_init = j.value("lambda_init", defaults.lambda_init);
  opts.lambda_divergence = j.value("lambda_divergence", defaults.lambda_divergence);
  opts.tol_qos = j.value("tol_qos", defaults.tol_qos);
  opts.tol_pow_rel = j.value("tol_pow_rel", defaults.tol_pow_rel);
}

void to_json(nlohmann::json& j, const ChannelSet& h) {
  j = nlohmann::json{{"h_bit", cx_mat_to_json(h.h_bit)}, {"h_sem", cx_mat_to_json(h.h_sem)}};
}

void from_json(const nlohmann::json& j, ChannelSet& h) {
  h.h_bit = cx_mat_from_json(j.at("h_bit"), "h_bit");
  h.h_sem = cx_mat_from_json(j.at("h_sem"), "h_sem");
  if (h.h_bit.n_cols > 0 && h.h_sem.n_cols > 0 && h.h_bit.n_rows != h.h_sem.n_rows)
    throw std::invalid_argument("channel file: bit and sem antenna counts differ");
}

void to_json(nlohmann::json& j, const Beamformer& v) {
  j = nlohmann::json{{"v_bit", cx_mat_to_json(v.v_bit)}, {"v_sem", cx_mat_to_json(v.v_sem)}};
}

void from_json(const nlohmann::json& j, Beamformer& v) {
  v.v_bit = cx_mat_from_json(j.at("v_bit"), "v_bit");
  v.v_sem = cx_mat_from_json(j.at("v_sem"), "v_sem");
}

void to_json(nlohmann::json& j, const SolveReport& r) {
  j = nlohmann::json{{"beamformer", r.beamformer},
                     {"depth", r.depth},
                     {"objective", r.objective},
                     {"sem_sinr", r.sem_sinr},
                     {"bit_sinr_shared", r.bit_sinr_shared},
                     {"bit_sinr_exclusive", r.bit_sinr_exclusive},
                     {"bit_rate", r.bit_rate},
                     {"qos_slack", r.qos_slack},
                     {"outer_iterations", r.outer_iterations},
                     {"inner_iterations", r.inner_iterations},
                     {"wall_time", r.wall_time},
                     {"converged", r.converged},
                     {"feasible", r.feasible},
                     {"solver", r.solver},
                     {"objective_trace", r.objective_trace}};
}

void from_json(const nlohmann::json& j, SolveReport& r) {
  j.at("beamformer").get_to(r.beamformer);
  j.at("depth").get_to(r.depth);
  j.at("objective").get_to(r.objective);
  j.at("sem_sinr").get_to(r.sem_sinr);
  j.at("bit_sinr_shared").get_to(r.bit_sinr_shared);
  j.at("bit_sinr_exclusive").get_to(r.bit_sinr_exclusive);
  j.at("bit_rate").get_to(r.bit_rate);
  j.at("qos_slack").get_to(r.qos_slack);
  j.at("outer_iterations").get_to(r.outer_iterations);
  j.at("inner_iterations").get_to(r.inner_iterations);
  j.at("wall_time").get_to(r.wall_time);
  j.at("converged").get_to(r.converged);
  j.at("feasible").get_to(r.feasible);
  r.solver = j.value("solver", std::string{});
  r.objective_trace = j.value("objective_trace", std::vector<double>{});
}

nlohmann::json model_to_json(const SemanticRateModel& model, const std::string& note) {
  nlohmann::json j;
  if (!note.empty()) j["note"] = note;
  for (int k = model.k_min(); k <= model.k_max(); ++k) {
    const DepthParams& p = model.at(k);
    j[std::to_string(k)] = {{"a", p.a}, {"c", p.c}, {"d", p.d}, {"e", p.e}};
  }
  return j;
}

SemanticRateModel model_from_json(const nlohmann::json& j) {
  std::map<int, DepthParams> entries;
  for (const auto& [key, value] : j.items()) {
    if (key.empty() || !std::all_of(key.begin(), key.end(),
                                    [](unsigned char c) { return std::isdigit(c) != 0; }))
      continue;  // labels and notes ride along in the same object
    DepthParams p;
    p.a = value.at("a").get<double>();
    p.c = value.at("c").get<double>();
    p.d = value.at("d").get<double>();
    p.e = value.at("e").get<double>();
    entries[std::stoi(key)] = p;
  }
  if (entries.empty())
    throw std::invalid_argument("model file: no depth entries found");
  int expected = entries.begin()->first;
  std::vector<DepthParams> params;
  for (const auto& [k, p] : entries) {
    if (k != expected)
      throw std::invalid_argument("model file: depth keys must be contiguous, missing depth " +
                                  std::to_string(expected));
    params.push_back(p);
    ++expected;
  }
  return SemanticRateModel(entries.begin()->first, std::move(params));
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sembeam
