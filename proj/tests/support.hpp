// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fqe/fermion.hpp"
#include "fqe/pauli.hpp"
#include "fqe/perturbation.hpp"
#include "fqe/statevector.hpp"

namespace fqe::testing {

inline std::string data_path(const std::string& rel) { return std::string(FQE_DATA_DIR) + "/" + rel; }

// Independent of the bitmask encoding: Kronecker products of 2x2 matrices,
// qubit 0 as the least significant (rightmost) factor.
inline Eigen::Matrix2cd pauli_2x2(char c) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXcd kron_matrix(const std::string& letters) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : letters) m = kron(pauli_2x2(c), m);  // later letters are higher qubits
  return m;
}

inline Eigen::MatrixXcd kron_matrix(const PauliSum& s) {
  const auto dim = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : s.terms()) m += t.coeff * kron_matrix(t.string.to_string());
  return m;
}

inline std::string random_letters(int n, std::mt19937_64& rng) {
  static const char kL[] = "IXYZ";
  std::string s;
  for (int q = 0; q < n; ++q) s += kL[rng() % 4];
  return s;
}

inline PauliSum random_sum(int n, int terms, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<PauliTerm> t;
  for (int i = 0; i < terms; ++i) t.push_back({g(rng), PauliString::parse(random_letters(n, rng))});
  return PauliSum(n, std::move(t));
}

inline StateVector random_state(int n, std::mt19937_64& rng, bool real = false) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << n);
  for (auto& v : a) v = {g(rng), real ? 0.0 : g(rng)};
  StateVector s(n, std::move(a));
  s.normalize();
  return s;
}

inline Eigen::VectorXcd as_vector(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

inline StateVector as_state(const Eigen::VectorXcd& v, int n) {
  return StateVector(n, std::vector<Complex>(v.data(), v.data() + v.size()));
}

/// Same strings in the same order, coefficients within tol.
inline bool sums_near(const PauliSum& a, const PauliSum& b, double tol) {
  if (a.n_qubits() != b.n_qubits() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.terms()[i].string != b.terms()[i].string) return false;
    if (std::abs(a.terms()[i].coeff - b.terms()[i].coeff) > tol) return false;
  }
  return true;
}

/// Random real integral table with the symmetries of a spin-orbital
/// Hamiltonian: h_one symmetric, and h_ijkl = h_jilk = h_lkji (Hermitian).
inline IntegralTable random_integrals(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  IntegralTable t;
  t.n_orbitals = n;
  t.h_one = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) t.h_one(i, j) = t.h_one(j, i) = g(rng);
  std::vector<double> v(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto at = [&](int i, int j, int k, int l) -> double& { return v[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (at(i, j, k, l) != 0.0) continue;
          const double x = g(rng) * 0.5;
          at(i, j, k, l) = at(j, i, l, k) = at(l, k, j, i) = at(k, l, i, j) = x;
        }
  t.e_const = g(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (at(i, j, k, l) != 0.0) t.h_two.push_back({i, j, k, l, at(i, j, k, l)});
  return t;
}

/// Random Hermitian matrix with a prescribed spectrum.
inline Eigen::MatrixXcd with_spectrum(const std::vector<double>& lambdas, std::mt19937_64& rng, bool real = true) {
  const auto d = static_cast<Eigen::Index>(lambdas.size());
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), real ? 0.0 : g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::MatrixXcd q = qr.householderQ();
  Eigen::VectorXcd l(d);
  for (Eigen::Index i = 0; i < d; ++i) l(i) = lambdas[static_cast<std::size_t>(i)];
  return q * l.asDiagonal() * q.adjoint();
}

/// Random negative-definite operator with spectrum -1 = l1 < l2 < ..., where
/// |1 - gamma l2| / |1 - gamma l1| = ratio and every other level lies within
/// half of l2.
inline PauliSum contraction_instance(int n, double ratio, std::mt19937_64& rng, double gamma = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t dim = std::size_t{1} << n;
  const double l2 = -(ratio * (1.0 + gamma) - 1.0) / gamma;
  std::vector<double> lambdas(dim);
  lambdas[0] = -1.0;
  if (dim > 1) lambdas[1] = l2;
  for (std::size_t i = 2; i < dim; ++i) lambdas[i] = 0.5 * l2 * u(rng) - 1e-3;
  return from_matrix(with_spectrum(lambdas, rng));
}

inline double spectral_norm(const PauliSum& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kron_matrix(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct PerturbationInstance {
  PauliSum h0, hp;
  std::uint64_t n = 0;
};

/// Random diagonal H0 with a nondegenerate ground (gap >= 0.05) and an
/// off-diagonal H' whose spectral norm is a uniform fraction in [0, ratio] of
/// that of H0.
inline PerturbationInstance perturbation_instance(int n, double ratio, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<PauliTerm> diag, off;
    for (int t = 0; t < 2 * n; ++t) {
      std::string z(static_cast<std::size_t>(n), 'I');
      for (auto& c : z) c = (rng() & 1) ? 'Z' : 'I';
      diag.push_back({u(rng), PauliString::parse(z)});
      auto letters = random_letters(n, rng);
      if (letters.find_first_of("XY") == std::string::npos) letters[0] = 'X';
      off.push_back({u(rng), PauliString::parse(letters)});
    }
    PerturbationInstance r{PauliSum(n, diag), split_diagonal(PauliSum(n, off)).off_diagonal};
    if (r.hp.terms().empty()) continue;
    const auto e = diagonal_energies(r.h0);
    const auto g = unperturbed_ground(r.h0);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < e.size(); ++b) {
      if (b != g.index) gap = std::min(gap, e[b] - g.energy);
    }
    if (gap < 0.05) continue;
    r.hp = r.hp * (ratio * std::abs(u(rng)) * spectral_norm(r.h0) / spectral_norm(r.hp));
    r.n = g.index;
    return r;
  }
}

}  // namespace fqe::testing
