// SPDX-License-Identifier: Apache-2.0
#include "fqe/perturbation.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "fqe/error.hpp"

namespace fqe {

namespace {

struct Correction {
  StateVector column;  // H'|n>
  StateVector v1;      // first-order correction, zero on |n>
  std::size_t coupled = 0;
  std::size_t skipped = 0;
};

void check_inputs(const PauliSum& h0, const PauliSum& hp, std::uint64_t n) {
  if (h0.n_qubits() != hp.n_qubits()) throw ConfigError("perturbation: H0 and H' sizes differ");
  for (const auto& t : hp.terms()) {
    if (t.string.is_diagonal()) {
      throw ConfigError("perturbation: H' term " + t.string.to_string() + " is diagonal");
    }
  }
  if (n >= (std::uint64_t{1} << h0.n_qubits())) throw ConfigError("perturbation: basis index out of range");
}

Correction first_order(const PauliSum& h0, const PauliSum& hp, std::uint64_t n, const std::vector<double>& e0,
                       const PerturbationOptions& opts) {
  check_inputs(h0, hp, n);
  const StateVector ket_n = StateVector::basis_state(h0.n_qubits(), n);
  Correction c{block_encoded_apply(hp, ket_n, opts.lcu), StateVector(h0.n_qubits()), 0, 0};
  c.v1[0] = 0.0;
  const double en = e0[n];
  for (std::size_t m = 0; m < c.column.dim(); ++m) {
    if (m == n) continue;
    const Complex h_mn = c.column[m];
    if (std::abs(h_mn) < 1e-14) continue;
    ++c.coupled;
    const double gap = en - e0[m];
    if (std::abs(gap) < opts.gap_tol) {
      ++c.skipped;
      continue;
    }
    c.v1[m] = h_mn / gap;
  }
  if (c.coupled > 0 && static_cast<double>(c.skipped) > opts.skip_budget * static_cast<double>(c.coupled)) {
    throw ConfigError("perturbation: " + std::to_string(c.skipped) + " of " + std::to_string(c.coupled) +
                      " coupled levels are degenerate with the reference; non-degenerate theory does not apply");
  }
  return c;
}

}  // namespace

std::vector<double> diagonal_energies(const PauliSum& h0) {
  const int nq = h0.n_qubits();
  if (nq > kStateQubitCap) throw SizeCapError("diagonal_energies: register too large");
  for (const auto& t : h0.terms()) {
    if (!t.string.is_diagonal()) throw ConfigError("unperturbed Hamiltonian term " + t.string.to_string() + " is not diagonal");
  }
  std::vector<double> e(std::size_t{1} << nq, 0.0);
  for (const auto& t : h0.terms()) {
    const std::uint64_t z = t.string.z_mask();
    for (std::size_t b = 0; b < e.size(); ++b) e[b] += (std::popcount(b & z) & 1) ? -t.coeff : t.coeff;
  }
  return e;
}

UnperturbedGround unperturbed_ground(const PauliSum& h0, std::optional<int> n_electrons, double gap_tol) {
  const auto e = diagonal_energies(h0);
  UnperturbedGround g;
  g.energy = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < e.size(); ++b) {
    if (n_electrons && std::popcount(b) != *n_electrons) continue;
    if (e[b] < g.energy - gap_tol) {
      g.energy = e[b];
      g.index = b;
    }
  }
  if (!std::isfinite(g.energy)) throw ConfigError("unperturbed_ground: no basis state with the requested electron count");
  for (std::size_t b = 0; b < e.size(); ++b) {
    if (b == g.index || (n_electrons && std::popcount(b) != *n_electrons)) continue;
    if (std::abs(e[b] - g.energy) < gap_tol) ++g.degenerate_partners;
  }
  g.energy = e[g.index];
  return g;
}

StateVector first_order_state(const PauliSum& h0, const PauliSum& hp, std::uint64_t n, const PerturbationOptions& opts) {
  const auto e0 = diagonal_energies(h0);
  Correction c = first_order(h0, hp, n, e0, opts);
  StateVector psi = std::move(c.v1);
  psi[n] += 1.0;
  psi.normalize();
  return psi;
}

PerturbationReport second_order(const PauliSum& h0, const PauliSum& hp, std::uint64_t n, const PerturbationOptions& opts) {
  const auto e0 = diagonal_energies(h0);
  Correction c = first_order(h0, hp, n, e0, opts);
  const PauliSum h = h0 + hp;
  const double en = e0[n];

  PerturbationReport r;
  r.index = n;
  r.e_zero = en;
  r.h_nn = c.column[n].real();
  if (std::abs(c.column[n]) > 1e-10) {
    throw InvariantError("perturbation: <n|H'|n> = " + std::to_string(r.h_nn) + " should vanish for off-diagonal H'");
  }
  r.coupled_terms = c.coupled;
  r.skipped_terms = c.skipped;

  // Second-order energy: sum_m |H'_mn|^2 / (E_n - E_m) = sum_m conj(H'_mn) v1_m.
  double shift = 0.0;
  double v1_sq = 0.0;
  for (std::size_t m = 0; m < c.v1.dim(); ++m) {
    shift += (std::conj(c.column[m]) * c.v1[m]).real();
    v1_sq += std::norm(c.v1[m]);
  }
  r.e_second_series = en + (opts.sign == SeriesSign::kStandard ? shift : -shift);

  StateVector psi1 = c.v1;
  psi1[n] += 1.0;
  r.psi_first = psi1;
  r.psi_first.normalize();
  r.e_first_rq = expectation(r.psi_first, h);

  // Double sum sum_k H'_mk v1_k / (E_n - E_m) from a second application of H'.
  const StateVector hv1 = block_encoded_apply(hp, c.v1, opts.lcu);
  StateVector psi2 = psi1;
  psi2[n] -= 0.5 * v1_sq;
  for (std::size_t m = 0; m < hv1.dim(); ++m) {
    if (m == n) continue;
    const double gap = en - e0[m];
    if (std::abs(gap) < opts.gap_tol) continue;
    psi2[m] += hv1[m] / gap;
  }
  r.psi_second = std::move(psi2);
  r.psi_second.normalize();
  r.e_second_rq = expectation(r.psi_second, h);
  return r;
}

}  // namespace fqe
