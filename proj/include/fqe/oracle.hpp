// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fqe/fermion.hpp"
#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe::oracle {

/// Hard cap for the exact eigensolver.
inline constexpr int kOracleQubitCap = 14;
/// Cap for the ladder-operator Fock matrix.
inline constexpr int kFockOrbitalCap = 6;

/// Eigenpairs in ascending eigenvalue order, stored per invariant block of
/// computational basis states (one block per particle-number sector when the
/// operator conserves it).
class Eigensystem {
 public:
  struct Block {
    std::vector<std::uint64_t> basis;  // sorted basis indices spanning the block
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;          // column j pairs with values(j)
  };

  Eigensystem(int n_qubits, std::vector<Block> blocks);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return order_.size(); }
  double value(std::size_t j) const { return order_[j].value; }
  std::vector<double> values() const;
  /// Eigenvector j embedded in the full 2^n register.
  StateVector vector(std::size_t j) const;
  /// |<psi_j|x>| for every eigenvector, in eigenvalue order.
  std::vector<double> overlap_magnitudes(const StateVector& x) const;

 private:
  struct Entry {
    double value;
    std::size_t block;
    Eigen::Index column;
  };

  int n_qubits_ = 0;
  std::vector<Block> blocks_;
  std::vector<Entry> order_;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

/// True when no term combination connects basis states of different
/// Hamming weight (the operator conserves particle number).
bool conserves_particle_number(const PauliSum& h);

/// Full eigendecomposition. Particle-conserving operators are diagonalized
/// block by block per Hamming weight; others need n <= kDenseQubitCap.
Eigensystem eigensystem(const PauliSum& h, int qubit_cap = kOracleQubitCap);

/// Eigendecomposition restricted to basis states with n_electrons set bits.
/// Throws ConfigError when h mixes that sector with others.
Eigensystem sector_eigensystem(const PauliSum& h, int n_electrons, int qubit_cap = kOracleQubitCap);

/// Lowest eigenpair over the whole register.
GroundState dense_ground(const PauliSum& h, int qubit_cap = kOracleQubitCap);
GroundState sector_ground(const PauliSum& h, int n_electrons, int qubit_cap = kOracleQubitCap);

/// Occupation-basis matrix built from ladder-operator action: a_j picks up
/// (-1)^(occupied orbitals below j).
Eigen::MatrixXcd fock_matrix(const FermionOperator& op, int n_orbitals);

/// Energies <x_t|H|x_t> for t = 0..k of classical power iteration on the
/// dense matrix I - gamma H.
std::vector<double> power_iteration(const PauliSum& h, const StateVector& x0, double gamma, int k);

}  // namespace fqe::oracle
