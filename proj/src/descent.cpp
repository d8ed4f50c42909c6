// SPDX-License-Identifier: Apache-2.0
#include "fqe/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>
#include <ostream>
#include <string>

#include "fqe/error.hpp"
#include "fqe/format.hpp"

namespace fqe {

void DescentConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!std::isfinite(spectral_shift)) throw ConfigError("spectral shift must be finite");
  if (expected_depth < 0) throw ConfigError("expected depth must be non-negative");
}

IterationTrace run(const PauliSum& h, const StateVector& x0, const DescentConfig& cfg, NoiseInjector* noise,
                   const StepObserver& observer) {
  cfg.validate();
  if (x0.n_qubits() != h.n_qubits()) throw ConfigError("descent: start state and Hamiltonian sizes differ");
  if (!x0.is_normalized()) throw ConfigError("descent: start state is not normalized");

  const PauliSum shifted = cfg.spectral_shift == 0.0 ? h : h + PauliSum::identity(h.n_qubits(), cfg.spectral_shift);
  const bool ham_noise = noise != nullptr && noise->config().ham_kind != NoiseKind::kNone &&
                         noise->config().ham_amp > 0.0;
  PauliSum hg = gradient_operator(shifted, cfg.gamma);
  LcuDecomposition lcu = decompose(hg);
  std::mt19937_64 cost_rng(cfg.seed);

  const CompiledSum measure(h);
  IterationTrace trace;
  StateVector x = x0;
  double energy = measure.expectation(x);
  trace.records.push_back({0, energy, 0.0, 1.0, 0.0, 0.0, false});
  DriftGuard drift;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (ham_noise) {
      hg = gradient_operator(noise->hamiltonian_for_step(shifted), cfg.gamma);
      lcu = decompose(hg);
    }
    StepOutcome step;
    if (cfg.mode == DescentMode::kCircuit) {
      step = lcu_step(x, lcu, cfg.lcu);
    } else {
      auto applied = apply_sum(x, hg);
      if (!(applied.norm > 1e-300)) throw ZeroNormError("descent: H^g annihilated the state");
      step.branch_norm = applied.norm;
      step.success_probability = applied.norm * applied.norm /
                                 (x.norm_squared() * lcu.big_c * lcu.big_c * static_cast<double>(lcu.slots()));
      step.direct_repetitions = 1.0 / step.success_probability;
      step.amplified_repetitions = std::ceil(std::sqrt(static_cast<double>(lcu.slots())));
      applied.result.normalize();
      step.next_state = std::move(applied.result);
    }
    x = std::move(step.next_state);
    if (noise != nullptr) noise->perturb(x);
    drift.tick(x);

    const double next_energy = measure.expectation(x);
    const double denom = std::abs(energy) > std::numeric_limits<double>::min() ? std::abs(energy) : 1.0;
    const double rel = std::abs(energy - next_energy) / denom;
    const auto& prev = trace.records.back();
    const double direct = cfg.sample_costs
                              ? static_cast<double>(sample_repetitions(std::min(1.0, step.success_probability), cost_rng))
                              : step.direct_repetitions;
    trace.records.push_back({t, next_energy, rel, step.success_probability, prev.cum_direct_cost + direct,
                             prev.cum_amplified_cost + step.amplified_repetitions, false});
    trace.log10_naive_restart_cost += std::log10(step.direct_repetitions);
    energy = next_energy;
    if (observer) observer(t, x);
    if (rel < cfg.threshold) {
      trace.converged = true;
      break;
    }
  }

  if (cfg.expected_depth > 0) {
    const int window = std::max(2, cfg.expected_depth / 10);
    for (auto& r : trace.records) r.hardware_measured = std::abs(r.iter - cfg.expected_depth) <= window;
  } else {
    trace.records.back().hardware_measured = true;
  }
  trace.final_state = std::move(x);
  return trace;
}

namespace {

std::pair<double, double> tail_stats(const IterationTrace& t, int window) {
  const auto n = t.records.size();
  const auto w = std::min<std::size_t>(n, static_cast<std::size_t>(window));
  double mean = 0.0;
  for (std::size_t i = n - w; i < n; ++i) mean += t.records[i].energy;
  mean /= static_cast<double>(w);
  double var = 0.0;
  for (std::size_t i = n - w; i < n; ++i) var += (t.records[i].energy - mean) * (t.records[i].energy - mean);
  return {mean, var / static_cast<double>(w)};
}

}  // namespace

NoiseAssessment assess_noisy_run(const IterationTrace& noisy, const IterationTrace& reference, int window) {
  if (noisy.records.empty() || reference.records.empty()) throw ConfigError("assess_noisy_run: empty trace");
  if (window < 1) throw ConfigError("assess_noisy_run: window must be positive");
  NoiseAssessment a;
  std::tie(a.tail_mean, a.tail_variance) = tail_stats(noisy, window);
  const double floor = (kChemicalPrecision / 4) * (kChemicalPrecision / 4);
  a.reference_variance = std::max(tail_stats(reference, window).second, floor);
  const double fixed_point = reference.final_energy();
  a.deviation = std::abs(noisy.final_energy() - fixed_point);
  a.oscillating = !std::isfinite(a.tail_variance) || a.tail_variance > 10.0 * a.reference_variance;
  a.off_target = !std::isfinite(a.tail_mean) || std::abs(a.tail_mean - fixed_point) > kChemicalPrecision;
  a.within_precision = a.deviation <= kChemicalPrecision;
  return a;
}

int predicted_depth(double lambda1, double lambda2, double gamma, double n_dim, double eps) {
  if (!(gamma > 0.0)) throw ConfigError("predicted_depth: gamma must be positive");
  if (!(eps > 0.0) || !(n_dim >= 1.0)) throw ConfigError("predicted_depth: need eps > 0 and n_dim >= 1");
  const double top = std::abs(1.0 - gamma * lambda1);
  const double second = std::abs(1.0 - gamma * lambda2);
  if (!(second > 0.0) || !(top > second)) {
    throw ConfigError("predicted_depth: contraction ratio |1-g*l2|/|1-g*l1| must lie in (0, 1); "
                      "leading levels are degenerate or misordered");
  }
  if (n_dim <= eps) return 0;
  const double r = second / top;
  return static_cast<int>(std::ceil(std::log(n_dim / eps) / std::log(1.0 / r) - 1e-12));
}

double error_bound(std::span<const double> spectrum, std::span<const double> overlaps, double gamma, int k) {
  if (spectrum.size() < 2 || overlaps.size() != spectrum.size()) {
    throw ConfigError("error_bound: need at least two eigenvalues with matching overlaps");
  }
  if (k < 0) throw ConfigError("error_bound: k must be non-negative");
  const double a1 = std::abs(overlaps[0]);
  if (!(a1 > 0.0)) throw ConfigError("error_bound: start state has zero ground-state overlap");
  const double ratio = std::abs(1.0 - gamma * spectrum[1]) / std::abs(1.0 - gamma * spectrum[0]);
  const double n = static_cast<double>(spectrum.size());
  return std::pow(ratio, k) * (n - 1.0) * std::abs(overlaps[1] * spectrum[1]) / a1;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "iter,energy_au,rel_change,p_success,cum_direct_cost,cum_amplified_cost\n";
  for (const auto& r : trace.records) {
    out << r.iter << ',' << fmt_double(r.energy) << ',' << fmt_double(r.rel_change) << ','
        << fmt_double(r.p_success) << ',' << fmt_double(r.cum_direct_cost) << ','
        << fmt_double(r.cum_amplified_cost) << '\n';
  }
}

}  // namespace fqe
