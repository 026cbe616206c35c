#pragma once

// p-level QAOA over a partition objective. The circuit alternates the
// diagonal phase operator U_P(gamma_k) and the transverse-field mixer
// U_M(beta_k), phase first within each layer, starting from |+>^n. Angles
// follow a two-parameter linear ramp; a deterministic expectation-maximizing
// grid search picks the ramp endpoints once per tree build.

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qdt/criterion.hpp"
#include "qdt/qsim.hpp"

namespace qdt {

struct QaoaAngles {
  std::vector<double> gammas;
  std::vector<double> betas;

  int levels() const { return static_cast<int>(gammas.size()); }
};

struct FixedAngles {
  QaoaAngles angles;
};
struct RampGrid {
  int resolution = 16;  // grid points per axis
};
using Calibration = std::variant<FixedAngles, RampGrid>;

struct QaoaConfig {
  int levels = 5;  // p
  int shots = 1024;
  std::uint64_t seed = 42;
  Calibration calibration = RampGrid{16};
};

/// Annealing-style schedule: gamma ramps 0 -> gamma_max, beta ramps
/// beta_max -> 0, over k = 1..p.
inline QaoaAngles ramp_angles(double gamma_max, double beta_max, int levels) {
  if (levels < 1) throw std::invalid_argument("ramp_angles: p must be >= 1");
  QaoaAngles angles;
  angles.gammas.resize(levels);
  angles.betas.resize(levels);
  for (int k = 1; k <= levels; ++k) {
    const double frac = static_cast<double>(k) / levels;
    angles.gammas[k - 1] = frac * gamma_max;
    angles.betas[k - 1] = (1.0 - frac) * beta_max;
  }
  return angles;
}

inline StateVector run_circuit(std::span<const double> f, const QaoaAngles& angles) {
  if (angles.gammas.size() != angles.betas.size() || angles.gammas.empty())
    throw std::invalid_argument("run_circuit: malformed angle schedule");
  int num_qubits = 0;
  while ((std::size_t{1} << num_qubits) < f.size()) ++num_qubits;
  if ((std::size_t{1} << num_qubits) != f.size())
    throw std::invalid_argument("run_circuit: objective length is not a power of two");
  StateVector state = uniform_state(num_qubits);
  for (int k = 0; k < angles.levels(); ++k) {
    apply_phase(state, f, angles.gammas[k]);
    apply_mixer(state, angles.betas[k]);
  }
  return state;
}

/// Deterministic 2-D grid search over ramp endpoints g in (0, pi],
/// b in (0, pi/2]: R points per axis at i * span / R, so 0 is excluded and the
/// upper endpoint included. Keeps the strictly best <H_P>, which resolves
/// ties to the lexicographically smallest (g, b). No sampling involved.
inline QaoaAngles calibrate_angles(std::span<const double> f, const QaoaConfig& config) {
  if (const auto* fixed = std::get_if<FixedAngles>(&config.calibration))
    return fixed->angles;
  const int resolution = std::get<RampGrid>(config.calibration).resolution;
  if (resolution < 2) throw std::invalid_argument("calibrate_angles: resolution must be >= 2");
  const double gamma_span = std::numbers::pi;
  const double beta_span = std::numbers::pi / 2.0;
  QaoaAngles best;
  double best_value = 0.0;
  bool first = true;
  for (int i = 1; i <= resolution; ++i) {
    const double g = gamma_span * i / resolution;
    for (int j = 1; j <= resolution; ++j) {
      const double b = beta_span * j / resolution;
      QaoaAngles candidate = ramp_angles(g, b, config.levels);
      StateVector state = run_circuit(f, candidate);
      const double value = expectation(state, f);
      if (first || value > best_value) {
        best = std::move(candidate);
        best_value = value;
        first = false;
      }
    }
  }
  return best;
}

/// Runs the circuit on the partition objective of `table`, measures
/// config.shots times, scores each outcome classically, and returns the best
/// sampled partition in canonical form. Ties prefer nontrivial bitstrings,
/// then the smallest z. The result never beats the exhaustive optimum; it
/// matches it whenever the optimal z or its complement is sampled.
inline SplitScore qaoa_best_partition(const ContingencyTable& table,
                                      const QaoaAngles& angles,
                                      const QaoaConfig& config) {
  const int t = table.num_values;
  if (t < 2) throw std::invalid_argument("qaoa_best_partition: no nontrivial partition");
  if (t > kMaxQubits) throw std::invalid_argument("qaoa_best_partition: domain exceeds qubit cap");
  const std::vector<double> f = objective_table(table);
  const StateVector state = run_circuit(f, angles);
  const std::vector<std::uint32_t> outcomes = sample(state, config.shots, config.seed);

  const std::uint32_t full = (1u << t) - 1u;
  auto nontrivial = [full](std::uint32_t z) { return z != 0 && z != full; };
  std::uint32_t best_z = outcomes[0];
  for (std::uint32_t z : outcomes) {
    if (f[z] > f[best_z]) {
      best_z = z;
    } else if (f[z] == f[best_z]) {
      if (nontrivial(z) != nontrivial(best_z)) {
        if (nontrivial(z)) best_z = z;
      } else if (z < best_z) {
        best_z = z;
      }
    }
  }
  SplitScore score;
  score.value = f[best_z];
  score.partition = Partition{-1, canonical_mask(best_z, t)};
  return score;
}

}  // namespace qdt
