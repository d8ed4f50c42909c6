// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "fqe/pauli.hpp"

namespace fqe {

/// Norm tolerance for operations that require a normalized state.
inline constexpr double kNormTolerance = 1e-10;
/// Largest register a StateVector will allocate.
inline constexpr int kStateQubitCap = 26;

/// Dense amplitudes over 2^n basis states. Bit q of the basis index is qubit q
/// (qubit 0 least significant); bit value 1 means the orbital is occupied.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0>.
  explicit StateVector(int n_qubits);
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  static StateVector basis_state(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  double norm_squared() const;
  /// Rescales to unit norm; throws ZeroNormError on a (numerically) zero vector.
  void normalize();
  bool is_normalized(double tol = kNormTolerance) const;

  Complex inner(const StateVector& other) const;  // <this|other>
  /// |<this|other>|^2 for normalized inputs.
  double fidelity(const StateVector& other) const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator*=(Complex scale);

  /// Binary checkpoint: 8-byte magic "FQESTATE", uint64 n_qubits, then 2^n
  /// interleaved (re, im) little-endian doubles.
  void write_binary(std::ostream& out) const;
  static StateVector read_binary(std::istream& in);

 private:
  int n_qubits_ = 0;
  std::vector<Complex> amps_;
};

/// Lowest n_electrons spin-orbitals occupied: qubits 0..n_electrons-1 in |1>.
StateVector hartree_fock_state(int n_qubits, int n_electrons);
std::uint64_t hartree_fock_index(int n_electrons);

/// coeff * P|s>, not normalized.
StateVector apply_pauli_string(const StateVector& s, const PauliString& p, double coeff = 1.0);

/// Accumulates coeff * P|s> into out.
void accumulate_pauli_string(const StateVector& s, const PauliString& p, Complex coeff, StateVector& out);

struct AppliedSum {
  StateVector result;  // unnormalized sum_t c_t P_t |s>
  double norm = 0.0;
};

AppliedSum apply_sum(const StateVector& s, const PauliSum& h);

/// <s|H|s> for normalized s. Throws ConfigError on a non-normalized state and
/// InvariantError when the imaginary residue exceeds 1e-10.
double expectation(const StateVector& s, const PauliSum& h);

/// Unnormalized Rayleigh quotient <s|H|s>/<s|s>.
double rayleigh_quotient(const StateVector& s, const PauliSum& h);

/// A PauliSum assembled once into a row-major sparse matrix, for repeated
/// application to many states (VQE energy evaluations).
class CompiledSum {
 public:
  explicit CompiledSum(const PauliSum& h);

  int n_qubits() const { return n_qubits_; }
  std::size_t nonzeros() const { return static_cast<std::size_t>(real_ ? m_real_.nonZeros() : m_.nonZeros()); }
  StateVector apply(const StateVector& s) const;
  /// Same contract as expectation().
  double expectation(const StateVector& s) const;

 private:
  int n_qubits_ = 0;
  bool real_ = false;  // every matrix element real: act on re and im parts separately
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> m_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> m_real_;
};

/// Counts mutating operations and renormalizes every `period` of them when
/// the norm has drifted beyond tolerance.
class DriftGuard {
 public:
  explicit DriftGuard(int period = 50) : period_(period) {}
  /// Returns true when a renormalization was applied.
  bool tick(StateVector& s);

 private:
  int period_;
  int count_ = 0;
};

}  // namespace fqe
