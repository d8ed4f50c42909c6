// SPDX-License-Identifier: Apache-2.0
#include "fqe/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "fqe/error.hpp"

namespace fqe {

namespace {

std::string tuple_str(const TwoBodyEntry& e) {
  return "[" + std::to_string(e.i) + "," + std::to_string(e.j) + "," + std::to_string(e.k) + "," +
         std::to_string(e.l) + "]";
}

std::uint64_t pack(int n, int i, int j, int k, int l) {
  const auto un = static_cast<std::uint64_t>(n);
  return ((static_cast<std::uint64_t>(i) * un + static_cast<std::uint64_t>(j)) * un +
          static_cast<std::uint64_t>(k)) * un + static_cast<std::uint64_t>(l);
}

struct PauliHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.x_mask() * 0x9E3779B97F4A7C15ULL ^ p.z_mask());
  }
};

}  // namespace

void IntegralTable::validate() const {
  const int n = n_orbitals;
  if (n <= 0 || n > kMaxQubits) throw InputError("n_orbitals must lie in [1, 64]");
  if (h_one.rows() != n || h_one.cols() != n) {
    throw InputError("h_one must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(h_one(i, j))) throw InputError("h_one has a non-finite entry");
      if (std::abs(h_one(i, j) - h_one(j, i)) > kIntegralSymmetryTolerance) {
        throw InputError("h_one not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  std::unordered_map<std::uint64_t, double> lookup;
  lookup.reserve(h_two.size());
  for (const auto& e : h_two) {
    for (int idx : {e.i, e.j, e.k, e.l}) {
      if (idx < 0 || idx >= n) throw InputError("h_two index out of range in " + tuple_str(e));
    }
    if (!std::isfinite(e.value)) throw InputError("h_two non-finite value at " + tuple_str(e));
    if (!lookup.emplace(pack(n, e.i, e.j, e.k, e.l), e.value).second) {
      throw InputError("h_two repeats index tuple " + tuple_str(e));
    }
  }
  for (const auto& e : h_two) {
    const auto it = lookup.find(pack(n, e.j, e.i, e.l, e.k));
    const double partner = it == lookup.end() ? 0.0 : it->second;
    if (std::abs(partner - e.value) > kIntegralSymmetryTolerance) {
      throw InputError("h_two violates h_ijkl == h_jilk at " + tuple_str(e));
    }
  }
}

FermionOperator::FermionOperator(int n_orbitals, std::vector<FermionTerm> terms)
    : n_orbitals_(n_orbitals), terms_(std::move(terms)) {
  if (n_orbitals <= 0 || n_orbitals > kMaxQubits) throw ConfigError("n_orbitals must lie in [1, 64]");
  for (const auto& t : terms_) {
    for (const auto& op : t.ladder) {
      if (op.orbital < 0 || op.orbital >= n_orbitals) {
        throw ConfigError("ladder operator orbital " + std::to_string(op.orbital) + " out of range");
      }
    }
  }
}

bool FermionOperator::is_hermitian(double tol) const {
  std::map<std::vector<LadderOp>, double> sums;
  for (const auto& t : terms_) sums[t.ladder] += t.coeff;
  for (const auto& [ladder, c] : sums) {
    std::vector<LadderOp> conj(ladder.rbegin(), ladder.rend());
    for (auto& op : conj) op.dagger = !op.dagger;
    const auto it = sums.find(conj);
    const double partner = it == sums.end() ? 0.0 : it->second;
    if (std::abs(partner - c) > tol) return false;
  }
  return true;
}

FermionOperator hamiltonian_from_integrals(const IntegralTable& table) {
  table.validate();
  const int n = table.n_orbitals;
  std::vector<FermionTerm> terms;
  if (std::abs(table.e_const) >= kMergeTolerance) terms.push_back({table.e_const, {}});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double h = table.h_one(i, j);
      if (std::abs(h) >= kMergeTolerance) terms.push_back({h, {{i, true}, {j, false}}});
    }
  }
  for (const auto& e : table.h_two) {
    const double c = 0.5 * e.value;
    if (std::abs(c) >= kMergeTolerance) {
      terms.push_back({c, {{e.i, true}, {e.j, true}, {e.k, false}, {e.l, false}}});
    }
  }
  return FermionOperator(n, std::move(terms));
}

PauliSum jordan_wigner(const FermionOperator& op, int n_orbitals) {
  if (op.n_orbitals() > n_orbitals) throw ConfigError("jordan_wigner: operator uses more orbitals than given");
  // Each ladder operator is (X_j -/+ i Y_j)/2 times the parity string Z_0..Z_{j-1}.
  struct Expansion {
    Complex coeff;
    PauliString string;
  };
  std::unordered_map<PauliString, Complex, PauliHash> acc;
  std::vector<Expansion> current, next;
  for (const auto& term : op.terms()) {
    current.assign(1, Expansion{Complex(term.coeff, 0.0), PauliString(n_orbitals)});
    for (const auto& lo : term.ladder) {
      const std::uint64_t parity = (std::uint64_t{1} << lo.orbital) - 1;
      const std::uint64_t bit = std::uint64_t{1} << lo.orbital;
      const PauliString x_part(n_orbitals, bit, parity);
      const PauliString y_part(n_orbitals, bit, parity | bit);
      const Complex y_coeff = lo.dagger ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
      next.clear();
      for (const auto& e : current) {
        auto [px, sx] = multiply(e.string, x_part);
        next.push_back({e.coeff * 0.5 * px.value(), sx});
        auto [py, sy] = multiply(e.string, y_part);
        next.push_back({e.coeff * y_coeff * py.value(), sy});
      }
      std::swap(current, next);
    }
    for (const auto& e : current) acc[e.string] += e.coeff;
  }
  std::vector<PauliTerm> terms;
  terms.reserve(acc.size());
  for (const auto& [s, c] : acc) {
    if (std::abs(c.imag()) > kJwImaginaryTolerance) {
      throw InputError("jordan_wigner: coefficient of " + s.to_string() + " has imaginary part " +
                       std::to_string(c.imag()) + " (non-Hermitian input)");
    }
    terms.push_back({c.real(), s});
  }
  return PauliSum(n_orbitals, std::move(terms));
}

}  // namespace fqe
