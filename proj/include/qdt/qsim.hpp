#pragma once

// Minimal statevector simulator: exactly the operations the QAOA circuit
// needs. The phase operator is diagonal in the computational basis; the mixer
// is a product of single-qubit X rotations (the transverse-field terms
// commute), applied pairwise in O(n * 2^n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace qdt {

inline constexpr int kMaxStateQubits = 16;

struct StateVector {
  int num_qubits = 0;
  std::vector<std::complex<double>> amps;

  std::size_t dim() const { return amps.size(); }

  double norm_sq() const {
    double s = 0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
  }
};

inline StateVector uniform_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits)
    throw std::invalid_argument("uniform_state: qubit count out of range");
  StateVector state;
  state.num_qubits = num_qubits;
  const std::size_t dim = std::size_t{1} << num_qubits;
  state.amps.assign(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return state;
}

/// amps[z] *= e^{-i * gamma * f[z]}
inline void apply_phase(StateVector& state, std::span<const double> f, double gamma) {
  if (f.size() != state.dim())
    throw std::invalid_argument("apply_phase: objective length mismatch");
  for (std::size_t z = 0; z < f.size(); ++z) {
    const double angle = gamma * f[z];
    state.amps[z] *= std::complex<double>(std::cos(angle), -std::sin(angle));
  }
}

/// e^{-i * beta * sum_j X_j}: on every amplitude pair differing in one bit,
/// (a, b) -> (cos(beta) a - i sin(beta) b, cos(beta) b - i sin(beta) a).
inline void apply_mixer(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::complex<double> minus_is(0.0, -s);
  const std::size_t dim = state.dim();
  for (int qubit = 0; qubit < state.num_qubits; ++qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & bit) continue;
      auto a = state.amps[base];
      auto b = state.amps[base | bit];
      state.amps[base] = c * a + minus_is * b;
      state.amps[base | bit] = c * b + minus_is * a;
    }
  }
}

inline double expectation(const StateVector& state, std::span<const double> f) {
  if (f.size() != state.dim())
    throw std::invalid_argument("expectation: objective length mismatch");
  double acc = 0;
  for (std::size_t z = 0; z < f.size(); ++z) acc += std::norm(state.amps[z]) * f[z];
  return acc;
}

/// The measurement PRNG. mt19937_64 is pinned by the standard, so seeded runs
/// reproduce across platforms; tree files record the generator name.
inline constexpr const char* kSampleRngName = "mt19937_64";

/// `shots` independent computational-basis measurements of a snapshot of the
/// state. Identical seed, identical sequence.
inline std::vector<std::uint32_t> sample(const StateVector& state, int shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be positive");
  std::vector<double> cumulative(state.dim());
  double acc = 0;
  for (std::size_t z = 0; z < state.dim(); ++z) {
    acc += std::norm(state.amps[z]);
    cumulative[z] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> outcomes(shots);
  for (int i = 0; i < shots; ++i) {
    // Top 53 bits -> uniform double in [0, 1); scaled by the total mass so a
    // slightly off-unit norm cannot push the draw past the last bucket.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    outcomes[i] = static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(state.dim()) - 1));
  }
  return outcomes;
}

}  // namespace qdt
