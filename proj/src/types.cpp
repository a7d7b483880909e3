// SPDX-License-Identifier: Apache-2.0

#include "sembeam/types.hpp"

#include <stdexcept>

#include "sembeam/semrate.hpp"

namespace sembeam {

SystemConfig SystemConfig::defaults() {
  SystemConfig cfg;
  cfg.sigma2_bit.assign(static_cast<std::size_t>(cfg.n_bit), 1.0);
  cfg.sigma2_sem.assign(static_cast<std::size_t>(cfg.n_sem), 1.0);
  cfg.qos.assign(static_cast<std::size_t>(cfg.n_bit), 1.0);
  return cfg;
}

SystemConfig validate_config(SystemConfig cfg) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };

  if (cfg.n_t < 1) fail("n_t must be at least 1");
  if (cfg.n_bit < 0) fail("n_bit must be non-negative");
  if (cfg.n_sem < 1) fail("n_sem must be at least 1");
  if (!(cfg.p_total > 0.0)) fail("p_total must be positive");
  if (cfg.sigma2_bit.size() != static_cast<std::size_t>(cfg.n_bit))
    fail("sigma2_bit must have one entry per bit-user");
  if (cfg.sigma2_sem.size() != static_cast<std::size_t>(cfg.n_sem))
    fail("sigma2_sem must have one entry per sem-user");
  for (double s : cfg.sigma2_bit)
    if (!(s > 0.0)) fail("sigma2_bit entries must be positive");
  for (double s : cfg.sigma2_sem)
    if (!(s > 0.0)) fail("sigma2_sem entries must be positive");
  if (cfg.qos.size() != static_cast<std::size_t>(cfg.n_bit))
    fail("qos must have one entry per bit-user");
  for (double b : cfg.qos)
    if (b < 0.0) fail("qos entries must be non-negative");
  if (cfg.frame_len < 1) fail("frame_len must be at least 1");
  if (cfg.filters < 1) fail("filters must be at least 1");
  if (cfg.image_size < 1) fail("image_size must be at least 1");
  if (cfg.k_min > cfg.k_max) fail("k_min must not exceed k_max");
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const std::int64_t m = symbols_for_depth(k, cfg.filters, cfg.image_size);
    if (m > cfg.frame_len)
      fail("symbol count at depth " + std::to_string(k) + " exceeds frame_len");
  }
  return cfg;
}

}  // namespace sembeam
