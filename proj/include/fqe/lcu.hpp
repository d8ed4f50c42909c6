// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe {

/// H^g = sum_i beta_i U_i with unit-coefficient Pauli strings U_i, padded with
/// zero-weight identity slits up to 2^m_ancilla.
struct LcuDecomposition {
  std::vector<double> betas;
  std::vector<PauliString> strings;
  std::size_t term_count = 0;  // M before padding
  double big_c = 0.0;          // sqrt(sum beta_i^2)
  int m_ancilla = 0;           // ceil(log2 M)

  std::size_t slots() const { return std::size_t{1} << m_ancilla; }
  int work_qubits() const { return strings.empty() ? 0 : strings.front().n_qubits(); }
};

/// Ancilla register followed by the work register; the amplitude index is
/// (ancilla << work_qubits) | work, so ancilla basis state i owns the
/// contiguous block [i * 2^n, (i + 1) * 2^n).
class CompositeState {
 public:
  CompositeState(std::span<const double> ancilla, const StateVector& work);

  int ancilla_qubits() const { return ancilla_qubits_; }
  int work_qubits() const { return work_qubits_; }
  std::size_t block_size() const { return std::size_t{1} << work_qubits_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> block(std::size_t ancilla_index);
  std::span<const Complex> block(std::size_t ancilla_index) const;
  double norm() const;

  /// Hadamard on every ancilla qubit.
  void hadamard_ancillas();

 private:
  int ancilla_qubits_ = 0;
  int work_qubits_ = 0;
  std::vector<Complex> amps_;
};

struct StepOutcome {
  StateVector next_state;            // post-selected work state, normalized
  double success_probability = 0.0;  // P_s
  double direct_repetitions = 0.0;   // 1 / P_s
  double amplified_repetitions = 0.0;  // ceil(sqrt(2^m))
  double branch_norm = 0.0;          // ||H^g x|| recovered from P_s
};

/// Throws ConfigError for the zero operator.
LcuDecomposition decompose(const PauliSum& hg);

/// beta_i / C on |i>, zeros on padded slits.
std::vector<double> prepare_ancilla(const LcuDecomposition& d);

/// Controlled application of slit i's Pauli string on ancilla block i.
CompositeState entangle(CompositeState c, const LcuDecomposition& d);

/// Hadamards on the ancillas, projection onto ancilla |0...0>.
/// x_norm_sq is the squared norm of the work state fed into the circuit.
/// Throws ZeroNormError when the branch vanishes (eigenvalue 1/gamma case).
StepOutcome combine_and_postselect(CompositeState c, const LcuDecomposition& d, double x_norm_sq = 1.0);

enum class LcuPath {
  kAuto,       // full composite state when it fits under the cap, else projected
  kComposite,  // simulate the whole ancilla+work register
  kProjected,  // accumulate only the ancilla-|0...0> component, slit by slit
};

struct LcuOptions {
  LcuPath path = LcuPath::kAuto;
  int composite_qubit_cap = 20;
};

/// One circuit use: decompose, prepare, entangle, combine and post-select.
StepOutcome lcu_step(const StateVector& x, const PauliSum& hg, const LcuOptions& opts = {});
StepOutcome lcu_step(const StateVector& x, const LcuDecomposition& d, const LcuOptions& opts = {});

/// op|v> recovered from one circuit use: the post-selected state rescaled by
/// the branch norm implied by P_s. Returns the zero vector when op|v> = 0.
StateVector block_encoded_apply(const PauliSum& op, const StateVector& v, const LcuOptions& opts = {});

/// Closed-form basic-gate estimate M log2(M) log2(N) for one circuit use.
double estimate_gate_count(std::size_t term_count, int work_qubits);

/// Draws Bernoulli(p) trials until the first success; returns the count.
std::uint64_t sample_repetitions(double p, std::mt19937_64& rng);

}  // namespace fqe
