// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fqe/lcu.hpp"
#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe {

/// Energy gaps below this are treated as degenerate and skipped.
inline constexpr double kGapTolerance = 1e-8;

/// Standard Rayleigh-Schroedinger sign, E_n + sum |H'_mn|^2 / (E_n - E_m), or
/// the literal printed variant with (E_m - E_n) in the denominator.
enum class SeriesSign { kStandard, kLiteral };

struct PerturbationOptions {
  double gap_tol = kGapTolerance;
  SeriesSign sign = SeriesSign::kStandard;
  /// Fraction of coupled terms allowed to be skipped as degenerate.
  double skip_budget = 0.10;
  LcuOptions lcu{};
};

struct UnperturbedGround {
  std::uint64_t index = 0;
  double energy = 0.0;
  /// Other basis states within gap_tol of the minimum.
  std::size_t degenerate_partners = 0;
};

/// E_m^(0) for every computational basis state m. Throws ConfigError unless
/// h0 holds only I/Z strings.
std::vector<double> diagonal_energies(const PauliSum& h0);

/// Lowest diagonal energy, ties to the lowest index. With n_electrons set, only
/// basis states of that Hamming weight compete.
UnperturbedGround unperturbed_ground(const PauliSum& h0, std::optional<int> n_electrons = std::nullopt,
                                     double gap_tol = kGapTolerance);

/// Normalized |n> + sum_{m != n} H'_mn / (E_n - E_m) |m>.
StateVector first_order_state(const PauliSum& h0, const PauliSum& hp, std::uint64_t n,
                              const PerturbationOptions& opts = {});

struct PerturbationReport {
  std::uint64_t index = 0;
  double e_zero = 0.0;            // E_n^(0)
  double h_nn = 0.0;              // first-order shift <n|H'|n>, zero for off-diagonal H'
  StateVector psi_first;
  StateVector psi_second;
  double e_first_rq = 0.0;        // <psi1|H|psi1>
  double e_second_rq = 0.0;       // <psi2|H|psi2>
  double e_second_series = 0.0;   // E_n^(0) + second-order sum
  std::size_t skipped_terms = 0;
  std::size_t coupled_terms = 0;
};

/// Both corrected states and their Rayleigh quotients under H = h0 + hp.
/// H'_mn comes from one block-encoded application of hp to |n>, the double
/// sum from a second application to the first-order correction.
PerturbationReport second_order(const PauliSum& h0, const PauliSum& hp, std::uint64_t n,
                                const PerturbationOptions& opts = {});

}  // namespace fqe
