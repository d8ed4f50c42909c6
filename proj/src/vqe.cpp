// SPDX-License-Identifier: Apache-2.0
#include "fqe/vqe.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fqe/error.hpp"

namespace fqe {

void VqeConfig::validate() const {
  if (layers < 1) throw ConfigError("vqe: layers must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("vqe: gamma must be positive");
  if (!(delta_theta > 0.0) || !std::isfinite(delta_theta)) throw ConfigError("vqe: delta_theta must be positive");
  if (max_iters < 1) throw ConfigError("vqe: max_iters must be at least 1");
  if (!(threshold > 0.0)) throw ConfigError("vqe: threshold must be positive");
}

void apply_ry(StateVector& s, int q, double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t b = 0; b < s.dim(); ++b) {
    if (b & bit) continue;
    const Complex u = s[b], v = s[b | bit];
    s[b] = c * u - sn * v;
    s[b | bit] = sn * u + c * v;
  }
}

void apply_cz(StateVector& s, int a, int b) {
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if ((i & mask) == mask) s[i] = -s[i];
  }
}

StateVector ansatz_state(const Ansatz& a, std::span<const double> theta, const StateVector& x0) {
  if (theta.size() != a.param_count()) {
    throw ConfigError("ansatz: expected " + std::to_string(a.param_count()) + " angles, got " + std::to_string(theta.size()));
  }
  if (x0.n_qubits() != a.n_qubits) throw ConfigError("ansatz: start state has the wrong qubit count");
  StateVector s = x0;
  const int n = a.n_qubits;
  for (int l = 0; l < a.layers; ++l) {
    for (int q = 0; q < n; ++q) apply_ry(s, q, theta[static_cast<std::size_t>(l * n + q)]);
    if (n == 2) {
      apply_cz(s, 0, 1);
    } else if (n > 2) {
      for (int q = 0; q < n; ++q) apply_cz(s, q, (q + 1) % n);
    }
  }
  return s;
}

std::vector<double> initial_angles(const Ansatz& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  std::vector<double> theta(a.param_count());
  for (auto& t : theta) t = dist(rng);
  return theta;
}

GradientEstimate finite_difference_gradient(const CompiledSum& op, const Ansatz& a, std::span<const double> theta,
                                            const StateVector& x0, double f0, double delta, bool central) {
  GradientEstimate g{std::vector<double>(theta.size()), 0};
  std::vector<double> probe(theta.begin(), theta.end());
  auto energy = [&] {
    ++g.evaluations;
    return op.expectation(ansatz_state(a, probe, x0));
  };
  for (std::size_t j = 0; j < theta.size(); ++j) {
    probe[j] = theta[j] + delta;
    const double up = energy();
    if (central) {
      probe[j] = theta[j] - delta;
      g.grad[j] = (up - energy()) / (2 * delta);
    } else {
      g.grad[j] = (up - f0) / delta;
    }
    probe[j] = theta[j];
  }
  return g;
}

IterationTrace vqe_run(const PauliSum& h, const StateVector& x0, const VqeConfig& cfg) {
  cfg.validate();
  if (!x0.is_normalized()) throw ConfigError("vqe: start state is not normalized");
  const Ansatz a{h.n_qubits(), cfg.layers};
  const CompiledSum op(h);
  auto theta = initial_angles(a, cfg.seed);

  double evals = 1.0;
  IterationTrace trace;
  double e = op.expectation(ansatz_state(a, theta, x0));
  trace.records.push_back({0, e, 0.0, 1.0, evals, 0.0, false});
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto g = finite_difference_gradient(op, a, theta, x0, e, cfg.delta_theta, cfg.central_differences);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= cfg.gamma * g.grad[j];
    const double next = op.expectation(ansatz_state(a, theta, x0));
    evals += g.evaluations + 1;
    if (!std::isfinite(next)) throw InvariantError("vqe: energy became non-finite");
    const double rel = e == 0.0 ? std::abs(next) : std::abs(e - next) / std::abs(e);
    trace.records.push_back({it, next, rel, 1.0, evals, 0.0, false});
    e = next;
    if (rel < cfg.threshold) {
      trace.converged = true;
      break;
    }
  }
  trace.records.back().hardware_measured = true;
  trace.final_state = ansatz_state(a, theta, x0);
  return trace;
}

}  // namespace fqe
