// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fqe/pauli.hpp"

namespace fqe {

/// Symmetry tolerance for integral tables.
inline constexpr double kIntegralSymmetryTolerance = 1e-10;
/// Largest imaginary residue tolerated on a Jordan-Wigner coefficient.
inline constexpr double kJwImaginaryTolerance = 1e-10;

struct TwoBodyEntry {
  int i = 0, j = 0, k = 0, l = 0;
  double value = 0.0;
};

/// Spin-orbital integrals of H = sum h_ij a+_i a_j + 1/2 sum h_ijkl a+_i a+_j a_k a_l + e_const,
/// in atomic units. h_two holds the literal coefficient of a+_i a+_j a_k a_l.
struct IntegralTable {
  int n_orbitals = 0;
  Eigen::MatrixXd h_one;
  std::vector<TwoBodyEntry> h_two;  // nonzeros only, no repeated index tuple
  double e_const = 0.0;

  /// Throws InputError on shape errors, index range errors, duplicate entries,
  /// h_one asymmetry or h_ijkl != h_jilk.
  void validate() const;
};

struct LadderOp {
  int orbital = 0;
  bool dagger = false;

  bool operator==(const LadderOp&) const = default;
  auto operator<=>(const LadderOp&) const = default;
};

/// A product of ladder operators applied right to left; an empty product is I.
struct FermionTerm {
  double coeff = 0.0;
  std::vector<LadderOp> ladder;
};

class FermionOperator {
 public:
  FermionOperator() = default;
  FermionOperator(int n_orbitals, std::vector<FermionTerm> terms);

  int n_orbitals() const { return n_orbitals_; }
  const std::vector<FermionTerm>& terms() const { return terms_; }

  /// Literal Hermiticity check: every ladder product appears together with
  /// its conjugate-reversed product at the same (summed) coefficient.
  bool is_hermitian(double tol = kIntegralSymmetryTolerance) const;

 private:
  int n_orbitals_ = 0;
  std::vector<FermionTerm> terms_;
};

FermionOperator hamiltonian_from_integrals(const IntegralTable& table);

/// a_j -> 1/2 (X_j + iY_j) Z_{j-1} ... Z_0, qubit j <-> spin-orbital j.
/// Throws InputError when a merged coefficient keeps an imaginary part.
PauliSum jordan_wigner(const FermionOperator& op, int n_orbitals);

}  // namespace fqe
