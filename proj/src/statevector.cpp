// SPDX-License-Identifier: Apache-2.0
#include "fqe/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "fqe/error.hpp"

namespace fqe {

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'Q', 'E', 'S', 'T', 'A', 'T', 'E'};

void check_state_qubits(int n) {
  if (n < 0 || n > kStateQubitCap) {
    throw SizeCapError("state of " + std::to_string(n) + " qubits exceeds cap " + std::to_string(kStateQubitCap));
  }
}

void require_same_qubits(const StateVector& s, int n, const char* what) {
  if (s.n_qubits() != n) {
    throw ConfigError(std::string(what) + ": state has " + std::to_string(s.n_qubits()) +
                      " qubits, operator has " + std::to_string(n));
  }
}

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little-endian host");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw InputError("state checkpoint truncated");
  return value;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_state_qubits(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_state_qubits(n_qubits);
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw ConfigError("amplitude count " + std::to_string(amps_.size()) + " does not match 2^" +
                      std::to_string(n_qubits));
  }
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw ConfigError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

void StateVector::normalize() {
  const double n = norm();
  if (!(n > 1e-300) || !std::isfinite(n)) throw ZeroNormError("cannot normalize a zero-norm state");
  const double inv = 1.0 / n;
  for (auto& a : amps_) a *= inv;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Complex StateVector::inner(const StateVector& other) const {
  if (other.n_qubits_ != n_qubits_) throw ConfigError("inner product: qubit counts differ");
  Complex acc{};
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
  return acc;
}

double StateVector::fidelity(const StateVector& other) const { return std::norm(inner(other)); }

StateVector& StateVector::operator+=(const StateVector& other) {
  if (other.n_qubits_ != n_qubits_) throw ConfigError("state addition: qubit counts differ");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

StateVector& StateVector::operator*=(Complex scale) {
  for (auto& a : amps_) a *= scale;
  return *this;
}

void StateVector::write_binary(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(n_qubits_));
  for (const auto& a : amps_) {
    write_le<double>(out, a.real());
    write_le<double>(out, a.imag());
  }
}

StateVector StateVector::read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InputError("not a state checkpoint (bad magic)");
  const auto n = read_le<std::uint64_t>(in);
  if (n > static_cast<std::uint64_t>(kStateQubitCap)) throw InputError("checkpoint qubit count too large");
  std::vector<Complex> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = read_le<double>(in);
    const double im = read_le<double>(in);
    a = {re, im};
  }
  return StateVector(static_cast<int>(n), std::move(amps));
}

std::uint64_t hartree_fock_index(int n_electrons) {
  return n_electrons >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_electrons) - 1;
}

StateVector hartree_fock_state(int n_qubits, int n_electrons) {
  if (n_electrons < 0 || n_electrons > n_qubits) {
    throw ConfigError("hartree_fock_state: " + std::to_string(n_electrons) + " electrons do not fit in " +
                      std::to_string(n_qubits) + " spin-orbitals");
  }
  return StateVector::basis_state(n_qubits, hartree_fock_index(n_electrons));
}

void accumulate_pauli_string(const StateVector& s, const PauliString& p, Complex coeff, StateVector& out) {
  require_same_qubits(s, p.n_qubits(), "apply_pauli_string");
  require_same_qubits(out, p.n_qubits(), "apply_pauli_string");
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const Complex base = coeff * Phase{p.y_count() & 3}.value();
  const double br = base.real(), bi = base.imag();
  const auto in = s.amplitudes();
  auto dst = out.amplitudes();
  const std::size_t dim = s.dim();
  // Written out by hand: std::complex multiplication takes a slow NaN-safe path.
  for (std::size_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    const double vr = sign * in[b].real(), vi = sign * in[b].imag();
    dst[b ^ x] += Complex(br * vr - bi * vi, br * vi + bi * vr);
  }
}

StateVector apply_pauli_string(const StateVector& s, const PauliString& p, double coeff) {
  StateVector out(s.n_qubits());
  out[0] = 0.0;
  accumulate_pauli_string(s, p, coeff, out);
  return out;
}

AppliedSum apply_sum(const StateVector& s, const PauliSum& h) {
  require_same_qubits(s, h.n_qubits(), "apply_sum");
  StateVector out(s.n_qubits());
  out[0] = 0.0;
  for (const auto& t : h.terms()) accumulate_pauli_string(s, t.string, t.coeff, out);
  const double n = out.norm();
  return {std::move(out), n};
}

double rayleigh_quotient(const StateVector& s, const PauliSum& h) {
  require_same_qubits(s, h.n_qubits(), "expectation");
  const auto hs = apply_sum(s, h);
  const Complex num = s.inner(hs.result);
  const double den = s.norm_squared();
  if (!(den > 0.0)) throw ZeroNormError("Rayleigh quotient of a zero vector");
  if (std::abs(num.imag()) > kNormTolerance * std::max(1.0, std::abs(num.real()))) {
    throw InvariantError("expectation value has imaginary residue " + std::to_string(num.imag()) +
                         " (operator not Hermitian?)");
  }
  return num.real() / den;
}

double expectation(const StateVector& s, const PauliSum& h) {
  if (!s.is_normalized()) throw ConfigError("expectation: state is not normalized (norm " + std::to_string(s.norm()) + ")");
  return rayleigh_quotient(s, h);
}

CompiledSum::CompiledSum(const PauliSum& h) : n_qubits_(h.n_qubits()) {
  if (n_qubits_ > kStateQubitCap) throw SizeCapError("CompiledSum: register too large");
  std::map<std::uint64_t, std::vector<PauliTerm>> groups;
  for (const auto& t : h.terms()) groups[t.string.x_mask()].push_back(t);
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(groups.size() * dim);
  real_ = true;
  for (const auto& [x, group] : groups) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      Complex a{};
      for (const auto& t : group) a += t.coeff * t.string.action_phase(b);
      if (a == Complex{}) continue;
      if (a.imag() != 0.0) real_ = false;
      trips.emplace_back(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b), a);
    }
  }
  const auto d = static_cast<Eigen::Index>(dim);
  if (real_) {
    std::vector<Eigen::Triplet<double>> re;
    re.reserve(trips.size());
    for (const auto& t : trips) re.emplace_back(t.row(), t.col(), t.value().real());
    m_real_.resize(d, d);
    m_real_.setFromTriplets(re.begin(), re.end());
  } else {
    m_.resize(d, d);
    m_.setFromTriplets(trips.begin(), trips.end());
  }
}

StateVector CompiledSum::apply(const StateVector& s) const {
  require_same_qubits(s, n_qubits_, "CompiledSum::apply");
  const auto in = s.amplitudes();
  const auto d = static_cast<Eigen::Index>(in.size());
  std::vector<Complex> out(in.size());
  if (real_) {
    using Strided = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<2>>;
    using StridedOut = Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<2>>;
    const auto* src = reinterpret_cast<const double*>(in.data());
    auto* dst = reinterpret_cast<double*>(out.data());
    StridedOut(dst, d).noalias() = m_real_ * Strided(src, d);
    const bool has_imag = std::any_of(in.begin(), in.end(), [](const Complex& a) { return a.imag() != 0.0; });
    if (has_imag) StridedOut(dst + 1, d).noalias() = m_real_ * Strided(src + 1, d);
  } else {
    Eigen::Map<const Eigen::VectorXcd> v(in.data(), d);
    Eigen::Map<Eigen::VectorXcd>(out.data(), d).noalias() = m_ * v;
  }
  return StateVector(n_qubits_, std::move(out));
}

double CompiledSum::expectation(const StateVector& s) const {
  if (!s.is_normalized()) throw ConfigError("expectation: state is not normalized (norm " + std::to_string(s.norm()) + ")");
  const Complex num = s.inner(apply(s));
  if (std::abs(num.imag()) > kNormTolerance * std::max(1.0, std::abs(num.real()))) {
    throw InvariantError("expectation value has imaginary residue " + std::to_string(num.imag()) +
                         " (operator not Hermitian?)");
  }
  return num.real();
}

bool DriftGuard::tick(StateVector& s) {
  if (++count_ < period_) return false;
  count_ = 0;
  if (std::abs(s.norm() - 1.0) <= 1e-12) return false;
  s.normalize();
  return true;
}

}  // namespace fqe
