// SPDX-License-Identifier: Apache-2.0
#include "fqe/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "fqe/error.hpp"

namespace fqe::oracle {

namespace {

/// Cancellation residue tolerated on matrix elements that should vanish.
constexpr double kLeakTolerance = 1e-10;

void check_cap(int n, int cap) {
  if (n > cap || n > kOracleQubitCap) {
    throw SizeCapError("oracle: " + std::to_string(n) + " qubits exceeds cap " + std::to_string(std::min(cap, kOracleQubitCap)));
  }
}

/// Terms sharing an X mask act as one diagonal-times-permutation block.
std::map<std::uint64_t, std::vector<PauliTerm>> group_by_flip(const PauliSum& h) {
  std::map<std::uint64_t, std::vector<PauliTerm>> groups;
  for (const auto& t : h.terms()) groups[t.string.x_mask()].push_back(t);
  return groups;
}

Complex group_amplitude(const std::vector<PauliTerm>& group, std::uint64_t b) {
  Complex acc{};
  for (const auto& t : group) acc += t.coeff * t.string.action_phase(b);
  return acc;
}

/// Restriction of h to the span of `basis` (sorted). The caller guarantees the
/// span is invariant.
Eigen::MatrixXcd restricted_matrix(const PauliSum& h, const std::vector<std::uint64_t>& basis) {
  const auto groups = group_by_flip(h);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t b = basis[static_cast<std::size_t>(col)];
    for (const auto& [x, group] : groups) {
      const Complex a = group_amplitude(group, b);
      if (a == Complex{}) continue;
      const auto it = std::lower_bound(basis.begin(), basis.end(), b ^ x);
      if (it == basis.end() || *it != (b ^ x)) {
        if (std::abs(a) > kLeakTolerance) throw ConfigError("oracle: operator leaves the requested subspace");
        continue;
      }
      m(static_cast<Eigen::Index>(it - basis.begin()), col) += a;
    }
  }
  return m;
}

Eigensystem::Block diagonalize(std::vector<std::uint64_t> basis, const Eigen::MatrixXcd& m, bool real) {
  Eigensystem::Block blk;
  blk.basis = std::move(basis);
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) throw InvariantError("oracle: eigensolver failed");
    blk.values = es.eigenvalues();
    blk.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw InvariantError("oracle: eigensolver failed");
    blk.values = es.eigenvalues();
    blk.vectors = es.eigenvectors();
  }
  return blk;
}

std::vector<std::uint64_t> weight_basis(int n, int weight) {
  std::vector<std::uint64_t> basis;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    if (std::popcount(b) == weight) basis.push_back(b);
  }
  return basis;
}

}  // namespace

Eigensystem::Eigensystem(int n_qubits, std::vector<Block> blocks) : n_qubits_(n_qubits), blocks_(std::move(blocks)) {
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    for (Eigen::Index j = 0; j < blocks_[bi].values.size(); ++j) order_.push_back({blocks_[bi].values(j), bi, j});
  }
  std::stable_sort(order_.begin(), order_.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
}

std::vector<double> Eigensystem::values() const {
  std::vector<double> out;
  out.reserve(order_.size());
  for (const auto& e : order_) out.push_back(e.value);
  return out;
}

StateVector Eigensystem::vector(std::size_t j) const {
  const auto& e = order_.at(j);
  const auto& blk = blocks_[e.block];
  StateVector s(n_qubits_);
  s[0] = 0.0;
  for (std::size_t r = 0; r < blk.basis.size(); ++r) s[blk.basis[r]] = blk.vectors(static_cast<Eigen::Index>(r), e.column);
  return s;
}

std::vector<double> Eigensystem::overlap_magnitudes(const StateVector& x) const {
  if (x.n_qubits() != n_qubits_) throw ConfigError("overlap: qubit counts differ");
  std::vector<Eigen::VectorXcd> per_block;
  per_block.reserve(blocks_.size());
  for (const auto& blk : blocks_) {
    Eigen::VectorXcd xb(static_cast<Eigen::Index>(blk.basis.size()));
    for (std::size_t r = 0; r < blk.basis.size(); ++r) xb(static_cast<Eigen::Index>(r)) = x[blk.basis[r]];
    per_block.push_back(blk.vectors.adjoint() * xb);
  }
  std::vector<double> out;
  out.reserve(order_.size());
  for (const auto& e : order_) out.push_back(std::abs(per_block[e.block](e.column)));
  return out;
}

bool conserves_particle_number(const PauliSum& h) {
  const int n = h.n_qubits();
  if (n > kStateQubitCap) throw SizeCapError("conserves_particle_number: register too large");
  for (const auto& [x, group] : group_by_flip(h)) {
    if (x == 0) continue;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      if (std::popcount(b ^ x) == std::popcount(b)) continue;
      if (std::abs(group_amplitude(group, b)) > kLeakTolerance) return false;
    }
  }
  return true;
}

Eigensystem eigensystem(const PauliSum& h, int qubit_cap) {
  const int n = h.n_qubits();
  check_cap(n, qubit_cap);
  std::vector<Eigensystem::Block> blocks;
  if (conserves_particle_number(h)) {
    for (int w = 0; w <= n; ++w) {
      auto basis = weight_basis(n, w);
      const auto m = restricted_matrix(h, basis);
      blocks.push_back(diagonalize(std::move(basis), m, h.is_real()));
    }
  } else {
    if (n > kDenseQubitCap) {
      throw SizeCapError("oracle: operator mixes particle-number sectors; dense route limited to " +
                         std::to_string(kDenseQubitCap) + " qubits");
    }
    std::vector<std::uint64_t> basis(std::size_t{1} << n);
    std::iota(basis.begin(), basis.end(), std::uint64_t{0});
    blocks.push_back(diagonalize(std::move(basis), to_matrix(h, kDenseQubitCap), h.is_real()));
  }
  return Eigensystem(n, std::move(blocks));
}

Eigensystem sector_eigensystem(const PauliSum& h, int n_electrons, int qubit_cap) {
  const int n = h.n_qubits();
  check_cap(n, qubit_cap);
  if (n_electrons < 0 || n_electrons > n) throw ConfigError("sector_eigensystem: electron count out of range");
  auto basis = weight_basis(n, n_electrons);
  const auto m = restricted_matrix(h, basis);
  std::vector<Eigensystem::Block> blocks;
  blocks.push_back(diagonalize(std::move(basis), m, h.is_real()));
  return Eigensystem(n, std::move(blocks));
}

GroundState dense_ground(const PauliSum& h, int qubit_cap) {
  const auto es = eigensystem(h, qubit_cap);
  return {es.value(0), es.vector(0)};
}

GroundState sector_ground(const PauliSum& h, int n_electrons, int qubit_cap) {
  const auto es = sector_eigensystem(h, n_electrons, qubit_cap);
  return {es.value(0), es.vector(0)};
}

Eigen::MatrixXcd fock_matrix(const FermionOperator& op, int n_orbitals) {
  if (n_orbitals > kFockOrbitalCap) {
    throw SizeCapError("fock_matrix: " + std::to_string(n_orbitals) + " orbitals exceeds cap " +
                       std::to_string(kFockOrbitalCap));
  }
  if (op.n_orbitals() > n_orbitals) throw ConfigError("fock_matrix: operator uses more orbitals than given");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_orbitals);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (const auto& term : op.terms()) {
      auto occ = static_cast<std::uint64_t>(col);
      double sign = 1.0;
      bool alive = true;
      for (auto it = term.ladder.rbegin(); it != term.ladder.rend() && alive; ++it) {
        const std::uint64_t bit = std::uint64_t{1} << it->orbital;
        const bool occupied = (occ & bit) != 0;
        if (it->dagger == occupied) {
          alive = false;
          break;
        }
        if (std::popcount(occ & (bit - 1)) & 1) sign = -sign;
        occ ^= bit;
      }
      if (alive) m(static_cast<Eigen::Index>(occ), col) += sign * term.coeff;
    }
  }
  return m;
}

std::vector<double> power_iteration(const PauliSum& h, const StateVector& x0, double gamma, int k) {
  if (h.n_qubits() > kDenseQubitCap) throw SizeCapError("power_iteration: register too large for dense route");
  if (x0.n_qubits() != h.n_qubits()) throw ConfigError("power_iteration: size mismatch");
  if (k < 0) throw ConfigError("power_iteration: k must be non-negative");
  const Eigen::MatrixXcd hm = to_matrix(h);
  const Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(hm.rows(), hm.cols()) - gamma * hm;
  Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(x0.amplitudes().data(), static_cast<Eigen::Index>(x0.dim()));
  x.normalize();
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(k) + 1);
  energies.push_back((x.adjoint() * hm * x)(0).real());
  for (int t = 0; t < k; ++t) {
    x = step * x;
    const double nrm = x.norm();
    if (!(nrm > 0.0)) throw ZeroNormError("power_iteration: iterate vanished");
    x /= nrm;
    energies.push_back((x.adjoint() * hm * x)(0).real());
  }
  return energies;
}

}  // namespace fqe::oracle
