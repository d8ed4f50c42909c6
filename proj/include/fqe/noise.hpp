// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe {

enum class NoiseKind { kNone, kUniform, kGaussian };
enum class NoiseRedraw { kPerIteration, kOnce };

/// Uniform noise draws from [-amp, amp]; Gaussian noise has sigma = amp / 3.
struct NoiseConfig {
  NoiseKind ham_kind = NoiseKind::kNone;
  double ham_amp = 0.0;
  NoiseKind state_kind = NoiseKind::kNone;
  double state_amp = 0.0;
  NoiseRedraw redraw = NoiseRedraw::kPerIteration;
  bool complex_state_noise = false;
  std::uint64_t seed = 0;

  void validate() const;
  bool active() const;
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kNone;
  double amp = 0.0;
};

/// Parses "none", "uniform:0.01" or "gaussian:0.02".
NoiseSpec parse_noise_spec(std::string_view text);
std::string to_string(NoiseKind kind);

/// H + sum_q delta_q Z_q with one fresh delta per qubit.
PauliSum perturb_hamiltonian(const PauliSum& h, const NoiseConfig& cfg, std::mt19937_64& rng);

/// (x + dx) / ||x + dx|| with independent per-amplitude dx.
StateVector perturb_state(const StateVector& x, const NoiseConfig& cfg, std::mt19937_64& rng);

/// Owns the random stream of one noisy run.
class NoiseInjector {
 public:
  explicit NoiseInjector(NoiseConfig cfg);

  const NoiseConfig& config() const { return cfg_; }
  /// Hamiltonian seen by the next step; with kOnce the first draw is reused.
  PauliSum hamiltonian_for_step(const PauliSum& h);
  void perturb(StateVector& x);

 private:
  NoiseConfig cfg_;
  std::mt19937_64 rng_;
  std::optional<PauliSum> frozen_;
};

/// Seed for run `index` of a sweep derived from a base seed (splitmix64).
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index);

}  // namespace fqe
