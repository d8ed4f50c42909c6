// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fqe/descent.hpp"
#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe {

struct VqeConfig {
  int layers = 3;
  double gamma = 1e-3;
  double delta_theta = 1e-4;
  int max_iters = 500;
  std::uint64_t seed = 0;
  /// Same relative-change stopping rule as the descent loop.
  double threshold = 1e-8;
  /// (f(t + d) - f(t - d)) / 2d instead of the forward difference.
  bool central_differences = false;

  void validate() const;
};

/// Hardware-efficient layered ansatz: each layer applies Ry(theta) to every
/// qubit, then CZ on the ring (q, q+1 mod n). Two qubits get a single CZ, one
/// qubit none. Parameter index is layer * n + q.
struct Ansatz {
  int n_qubits = 1;
  int layers = 1;

  std::size_t param_count() const { return static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(layers); }
};

/// Ry(theta) = exp(-i theta Y / 2) on qubit q, in place.
void apply_ry(StateVector& s, int q, double theta);
/// Sign flip on basis states with qubits a and b both set.
void apply_cz(StateVector& s, int a, int b);

StateVector ansatz_state(const Ansatz& a, std::span<const double> theta, const StateVector& x0);

/// Initial angles, uniform in [-0.1, 0.1].
std::vector<double> initial_angles(const Ansatz& a, std::uint64_t seed);

struct GradientEstimate {
  std::vector<double> grad;
  int evaluations = 0;
};

/// Forward (f(t + d) - f0) / d or central differences of f(t) = <x(t)|H|x(t)>,
/// where f0 = f(theta).
GradientEstimate finite_difference_gradient(const CompiledSum& op, const Ansatz& a, std::span<const double> theta,
                                            const StateVector& x0, double f0, double delta, bool central);

/// theta <- theta - gamma * finite-difference gradient until the relative
/// energy change drops below cfg.threshold. Trace rows use the descent schema:
/// p_success is 1, cum_direct_cost counts energy evaluations, and
/// cum_amplified_cost stays 0.
IterationTrace vqe_run(const PauliSum& h, const StateVector& x0, const VqeConfig& cfg);

}  // namespace fqe
