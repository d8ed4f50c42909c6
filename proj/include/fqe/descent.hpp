// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fqe/lcu.hpp"
#include "fqe/noise.hpp"
#include "fqe/pauli.hpp"
#include "fqe/statevector.hpp"

namespace fqe {

enum class DescentMode { kCircuit, kDirect };

struct DescentConfig {
  double gamma = 1.0;        // learning rate (twice the classical step size)
  double threshold = 1e-8;   // stop when |E_t - E_{t+1}| / |E_t| falls below
  int max_iters = 500;
  DescentMode mode = DescentMode::kCircuit;
  double spectral_shift = 0.0;  // descend on H + shift * I
  LcuOptions lcu{};
  /// Draw Bernoulli trials for the direct-cost column instead of using 1/P_s.
  bool sample_costs = false;
  std::uint64_t seed = 0;
  /// Depth at which a hardware run would measure the energy; rows within
  /// max(2, depth / 10) of it are flagged. 0 flags only the final row.
  int expected_depth = 0;

  void validate() const;
};

/// One row per visited state; row 0 is the start state (rel_change 0,
/// p_success 1, zero cost).
struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double rel_change = 0.0;
  double p_success = 1.0;
  double cum_direct_cost = 0.0;
  double cum_amplified_cost = 0.0;
  /// Whether a hardware run would measure the energy here (only near the
  /// predicted depth); classical simulation evaluates every row.
  bool hardware_measured = false;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  StateVector final_state;
  bool converged = false;
  /// log10 of the product of per-step 1/P_s: the cost of restarting from
  /// scratch on any failed post-selection.
  double log10_naive_restart_cost = 0.0;

  int iterations() const { return records.empty() ? 0 : records.back().iter; }
  double final_energy() const { return records.empty() ? 0.0 : records.back().energy; }
};

/// Called after each step with (iteration, new state).
using StepObserver = std::function<void(int, const StateVector&)>;

/// x_{t+1} ~ (I - gamma (H + shift I)) x_t until the relative energy change
/// drops below cfg.threshold or cfg.max_iters steps were taken. Energies in
/// the trace are always measured against the noiseless h.
IterationTrace run(const PauliSum& h, const StateVector& x0, const DescentConfig& cfg,
                   NoiseInjector* noise = nullptr, const StepObserver& observer = {});

/// Smallest k with r^k * n_dim <= eps, r = |1 - gamma l2| / |1 - gamma l1|.
/// Throws ConfigError when r >= 1 or the arguments are out of range.
int predicted_depth(double lambda1, double lambda2, double gamma, double n_dim, double eps);

/// r^k (n - 1) |a_2 lambda_2| / |a_1| for eigenvalues in dominance order
/// (lambda_1 first) and the magnitudes of the start-state overlaps.
double error_bound(std::span<const double> spectrum, std::span<const double> overlaps, double gamma, int k);

/// 1.6e-3 a.u.
inline constexpr double kChemicalPrecision = 1.6e-3;

/// Tail statistics of a noisy run against a noiseless reference run.
struct NoiseAssessment {
  double tail_mean = 0.0;
  double tail_variance = 0.0;       // over the last `window` rows
  double reference_variance = 0.0;  // same window of the reference, floored
  double deviation = 0.0;           // |final energy - reference fixed point|
  bool oscillating = false;         // tail_variance > 10 * reference_variance
  bool off_target = false;          // tail mean misses the fixed point by more than chemical precision
  bool within_precision = false;    // final energy within chemical precision of the fixed point

  bool flagged() const { return oscillating || off_target; }
};

/// The reference variance is floored at (kChemicalPrecision / 4)^2 because a
/// converged noiseless tail has variance near zero.
NoiseAssessment assess_noisy_run(const IterationTrace& noisy, const IterationTrace& reference, int window = 50);

/// Columns: iter,energy_au,rel_change,p_success,cum_direct_cost,cum_amplified_cost
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace fqe
