// SPDX-License-Identifier: Apache-2.0
#include "fqe/noise.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "fqe/error.hpp"

namespace fqe {

namespace {

double draw(NoiseKind kind, double amp, std::mt19937_64& rng) {
  switch (kind) {
    case NoiseKind::kUniform: return std::uniform_real_distribution<double>(-amp, amp)(rng);
    case NoiseKind::kGaussian: return std::normal_distribution<double>(0.0, amp / 3.0)(rng);
    case NoiseKind::kNone: break;
  }
  return 0.0;
}

}  // namespace

void NoiseConfig::validate() const {
  if (!(ham_amp >= 0.0) || !(state_amp >= 0.0)) throw ConfigError("noise amplitudes must be non-negative");
}

bool NoiseConfig::active() const {
  return (ham_kind != NoiseKind::kNone && ham_amp > 0.0) || (state_kind != NoiseKind::kNone && state_amp > 0.0);
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniform: return "uniform";
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kNone: break;
  }
  return "none";
}

NoiseSpec parse_noise_spec(std::string_view text) {
  if (text == "none" || text.empty()) return {};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("noise spec must be <kind>:<amp>, got '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const auto amp_text = text.substr(colon + 1);
  NoiseSpec spec;
  if (kind == "uniform") {
    spec.kind = NoiseKind::kUniform;
  } else if (kind == "gaussian") {
    spec.kind = NoiseKind::kGaussian;
  } else {
    throw ConfigError("unknown noise kind '" + std::string(kind) + "'");
  }
  const auto [ptr, ec] = std::from_chars(amp_text.data(), amp_text.data() + amp_text.size(), spec.amp);
  if (ec != std::errc{} || ptr != amp_text.data() + amp_text.size() || !(spec.amp >= 0.0)) {
    throw ConfigError("bad noise amplitude '" + std::string(amp_text) + "'");
  }
  return spec;
}

PauliSum perturb_hamiltonian(const PauliSum& h, const NoiseConfig& cfg, std::mt19937_64& rng) {
  if (cfg.ham_kind == NoiseKind::kNone || cfg.ham_amp == 0.0) return h;
  std::vector<PauliTerm> extra;
  extra.reserve(static_cast<std::size_t>(h.n_qubits()));
  for (int q = 0; q < h.n_qubits(); ++q) {
    extra.push_back({draw(cfg.ham_kind, cfg.ham_amp, rng), PauliString::single(h.n_qubits(), q, Pauli::Z)});
  }
  return h + PauliSum(h.n_qubits(), std::move(extra));
}

StateVector perturb_state(const StateVector& x, const NoiseConfig& cfg, std::mt19937_64& rng) {
  if (cfg.state_kind == NoiseKind::kNone || cfg.state_amp == 0.0) return x;
  StateVector out = x;
  for (auto& a : out.amplitudes()) {
    const double re = draw(cfg.state_kind, cfg.state_amp, rng);
    const double im = cfg.complex_state_noise ? draw(cfg.state_kind, cfg.state_amp, rng) : 0.0;
    a += Complex(re, im);
  }
  out.normalize();
  return out;
}

NoiseInjector::NoiseInjector(NoiseConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

PauliSum NoiseInjector::hamiltonian_for_step(const PauliSum& h) {
  if (cfg_.redraw == NoiseRedraw::kOnce) {
    if (!frozen_) frozen_ = perturb_hamiltonian(h, cfg_, rng_);
    return *frozen_;
  }
  return perturb_hamiltonian(h, cfg_, rng_);
}

void NoiseInjector::perturb(StateVector& x) { x = perturb_state(x, cfg_, rng_); }

std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace fqe
