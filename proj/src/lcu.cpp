// SPDX-License-Identifier: Apache-2.0
#include "fqe/lcu.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fqe/error.hpp"

namespace fqe {

namespace {

int ceil_log2(std::size_t m) { return m <= 1 ? 0 : std::bit_width(m - 1); }

StepOutcome finish(StateVector branch, const LcuDecomposition& d, double x_norm_sq) {
  const double p = branch.norm_squared() / x_norm_sq;
  if (!(p > 1e-300)) {
    throw ZeroNormError("post-selected branch vanished: H^g annihilates the state");
  }
  StepOutcome out;
  out.success_probability = p;
  out.direct_repetitions = 1.0 / p;
  out.amplified_repetitions = std::ceil(std::sqrt(static_cast<double>(d.slots())));
  out.branch_norm = std::sqrt(p * x_norm_sq) * d.big_c * std::sqrt(static_cast<double>(d.slots()));
  branch.normalize();
  out.next_state = std::move(branch);
  return out;
}

}  // namespace

LcuDecomposition decompose(const PauliSum& hg) {
  if (hg.empty()) throw ConfigError("decompose: zero operator has no LCU form");
  LcuDecomposition d;
  d.term_count = hg.size();
  d.m_ancilla = ceil_log2(d.term_count);
  double sq = 0.0;
  for (const auto& t : hg.terms()) {
    d.betas.push_back(t.coeff);
    d.strings.push_back(t.string);
    sq += t.coeff * t.coeff;
  }
  d.big_c = std::sqrt(sq);
  d.betas.resize(d.slots(), 0.0);
  d.strings.resize(d.slots(), PauliString(hg.n_qubits()));
  return d;
}

std::vector<double> prepare_ancilla(const LcuDecomposition& d) {
  std::vector<double> amps(d.betas);
  for (auto& a : amps) a /= d.big_c;
  return amps;
}

CompositeState::CompositeState(std::span<const double> ancilla, const StateVector& work)
    : work_qubits_(work.n_qubits()) {
  if (!std::has_single_bit(ancilla.size())) throw ConfigError("ancilla amplitude count must be a power of two");
  ancilla_qubits_ = std::countr_zero(ancilla.size());
  if (ancilla_qubits_ + work_qubits_ > kStateQubitCap) {
    throw SizeCapError("composite register of " + std::to_string(ancilla_qubits_ + work_qubits_) +
                       " qubits exceeds cap");
  }
  amps_.resize(ancilla.size() * work.dim());
  const auto w = work.amplitudes();
  for (std::size_t i = 0; i < ancilla.size(); ++i) {
    auto blk = block(i);
    for (std::size_t b = 0; b < blk.size(); ++b) blk[b] = ancilla[i] * w[b];
  }
}

std::span<Complex> CompositeState::block(std::size_t i) {
  return std::span<Complex>(amps_).subspan(i * block_size(), block_size());
}

std::span<const Complex> CompositeState::block(std::size_t i) const {
  return std::span<const Complex>(amps_).subspan(i * block_size(), block_size());
}

double CompositeState::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void CompositeState::hadamard_ancillas() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t nb = std::size_t{1} << ancilla_qubits_;
  for (int q = 0; q < ancilla_qubits_; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < nb; ++i) {
      if (i & bit) continue;
      auto lo = block(i);
      auto hi = block(i | bit);
      for (std::size_t b = 0; b < lo.size(); ++b) {
        const Complex u = lo[b], v = hi[b];
        lo[b] = s * (u + v);
        hi[b] = s * (u - v);
      }
    }
  }
}

CompositeState entangle(CompositeState c, const LcuDecomposition& d) {
  if (c.ancilla_qubits() != d.m_ancilla || c.work_qubits() != d.work_qubits()) {
    throw ConfigError("entangle: register shape does not match decomposition");
  }
  std::vector<Complex> scratch(c.block_size());
  for (std::size_t i = 0; i < d.slots(); ++i) {
    const PauliString& p = d.strings[i];
    if (p.is_identity()) continue;
    auto blk = c.block(i);
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    const Complex phase = Phase{p.y_count() & 3}.value();
    for (std::size_t b = 0; b < blk.size(); ++b) {
      scratch[b ^ x] = (std::popcount(b & z) & 1) ? -phase * blk[b] : phase * blk[b];
    }
    std::copy(scratch.begin(), scratch.end(), blk.begin());
  }
  return c;
}

StepOutcome combine_and_postselect(CompositeState c, const LcuDecomposition& d, double x_norm_sq) {
  c.hadamard_ancillas();
  const auto zero = c.block(0);
  StateVector branch(c.work_qubits(), std::vector<Complex>(zero.begin(), zero.end()));
  return finish(std::move(branch), d, x_norm_sq);
}

StepOutcome lcu_step(const StateVector& x, const LcuDecomposition& d, const LcuOptions& opts) {
  if (x.n_qubits() != d.work_qubits()) throw ConfigError("lcu_step: work register size mismatch");
  const double x_norm_sq = x.norm_squared();
  const bool composite = opts.path == LcuPath::kComposite ||
                         (opts.path == LcuPath::kAuto && d.m_ancilla + x.n_qubits() <= opts.composite_qubit_cap);
  if (composite) {
    CompositeState c(prepare_ancilla(d), x);
    return combine_and_postselect(entangle(std::move(c), d), d, x_norm_sq);
  }
  // <0...0| H^{(x)m} |i> = 2^{-m/2} for every slit i.
  const double scale = 1.0 / (d.big_c * std::sqrt(static_cast<double>(d.slots())));
  StateVector branch(x.n_qubits());
  branch[0] = 0.0;
  for (std::size_t i = 0; i < d.term_count; ++i) {
    accumulate_pauli_string(x, d.strings[i], d.betas[i] * scale, branch);
  }
  return finish(std::move(branch), d, x_norm_sq);
}

StepOutcome lcu_step(const StateVector& x, const PauliSum& hg, const LcuOptions& opts) {
  return lcu_step(x, decompose(hg), opts);
}

StateVector block_encoded_apply(const PauliSum& op, const StateVector& v, const LcuOptions& opts) {
  StateVector zero(v.n_qubits());
  zero[0] = 0.0;
  if (op.empty() || v.norm_squared() == 0.0) return zero;
  try {
    StepOutcome step = lcu_step(v, op, opts);
    step.next_state *= step.branch_norm;
    return std::move(step.next_state);
  } catch (const ZeroNormError&) {
    return zero;
  }
}

double estimate_gate_count(std::size_t term_count, int work_qubits) {
  const double m = static_cast<double>(term_count);
  return m * std::max(1.0, std::log2(m)) * std::max(1, work_qubits);
}

std::uint64_t sample_repetitions(double p, std::mt19937_64& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("sample_repetitions: probability must lie in (0, 1]");
  std::geometric_distribution<std::uint64_t> trials(p);
  return trials(rng) + 1;
}

}  // namespace fqe
