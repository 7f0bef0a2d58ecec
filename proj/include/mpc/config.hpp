#pragma once

#include <cmath>
#include <cstdint>

#include "mpc/base.hpp"

namespace mpc {

namespace detail {

/// ceil(base^expo) computed in doubles but snapped to the nearest integer
/// when the float result is within rounding fuzz of one, so that exact powers
/// (e.g. 1024^0.5) do not round up spuriously.
inline std::uint64_t ceil_pow(double base, double expo) {
  double v = std::pow(base, expo);
  double r = std::round(v);
  if (std::abs(v - r) < 1e-6 * std::max(1.0, r)) v = r;
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace detail

/// Resource shape of one synchronous-machine deployment: p machines, s words
/// of memory each, and matching per-round send/receive budgets of s words.
struct MpcConfig {
  std::uint64_t input_size = 0;      ///< N, total input words
  double epsilon = 0.5;              ///< memory exponent, 0 < epsilon < 1
  double gamma = 0.0;                ///< machine-count exponent, gamma >= 0
  std::uint64_t words_per_machine = 0;  ///< s = max(8, ceil(N^(1-epsilon)))
  std::uint64_t machine_cap = 0;        ///< p = ceil(4 * N^(1+gamma) / s)

  /// Derives s and p from (N, epsilon, gamma).
  static MpcConfig make(std::uint64_t n_words, double epsilon, double gamma) {
    if (n_words == 0) throw BadParams("config: input size must be positive");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
      throw BadParams("config: epsilon must lie in (0, 1)");
    if (gamma < 0.0) throw BadParams("config: gamma must be nonnegative");
    MpcConfig c;
    c.input_size = n_words;
    c.epsilon = epsilon;
    c.gamma = gamma;
    std::uint64_t s = detail::ceil_pow(static_cast<double>(n_words), 1.0 - epsilon);
    c.words_per_machine = s < 8 ? 8 : s;
    // The cap formula floors N at 2 so gamma can still buy machines for
    // one-word inputs.
    double base = static_cast<double>(n_words < 2 ? 2 : n_words);
    double ideal = 4.0 * std::pow(base, 1.0 + gamma) /
                   static_cast<double>(c.words_per_machine);
    c.machine_cap = static_cast<std::uint64_t>(std::ceil(ideal - 1e-9));
    if (c.machine_cap == 0) c.machine_cap = 1;
    return c;
  }

  /// Smallest gamma whose p*s budget covers `demand_words`. Program scratch
  /// is never reclaimed, so callers pass their cumulative footprint.
  static MpcConfig for_demand(std::uint64_t n_words, double epsilon,
                              std::uint64_t demand_words) {
    double n = static_cast<double>(n_words < 2 ? 2 : n_words);
    double need = static_cast<double>(demand_words) / 4.0;
    double gamma = 0.0;
    if (need > n) gamma = std::log(need) / std::log(n) - 1.0;
    if (gamma < 0.0) gamma = 0.0;
    return make(n_words, epsilon, gamma);
  }

  /// p*s, the total memory the deployment may hold at any round boundary.
  std::uint64_t total_word_budget() const {
    return machine_cap * words_per_machine;
  }
};

}  // namespace mpc
