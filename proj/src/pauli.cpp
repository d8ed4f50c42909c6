// SPDX-License-Identifier: Apache-2.0
#include "fqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fqe/error.hpp"

namespace fqe {

namespace {

std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

void check_qubits(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n) + " outside [0, 64]");
  }
}

}  // namespace

Complex Phase::value() const {
  switch (power & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliString::PauliString(int n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
  check_qubits(n_qubits);
  if (((x_ | z_) & ~low_mask(n_qubits)) != 0) {
    throw ConfigError("Pauli mask has bits beyond qubit count");
  }
}

PauliString PauliString::parse(std::string_view letters) {
  if (letters.empty() || letters.size() > kMaxQubits) {
    throw InputError("Pauli string must have 1..64 letters, got '" + std::string(letters) + "'");
  }
  PauliString p(static_cast<int>(letters.size()));
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': p.set(static_cast<int>(q), Pauli::X); break;
      case 'Y': p.set(static_cast<int>(q), Pauli::Y); break;
      case 'Z': p.set(static_cast<int>(q), Pauli::Z); break;
      default:
        throw InputError("invalid Pauli letter '" + std::string(1, letters[q]) + "' in '" +
                         std::string(letters) + "'");
    }
  }
  return p;
}

PauliString PauliString::single(int n_qubits, int q, Pauli p) {
  PauliString s(n_qubits);
  s.set(q, p);
  return s;
}

Pauli PauliString::at(int q) const {
  const bool x = (x_ >> q) & 1U;
  const bool z = (z_ >> q) & 1U;
  if (x) return z ? Pauli::Y : Pauli::X;
  return z ? Pauli::Z : Pauli::I;
}

void PauliString::set(int q, Pauli p) {
  if (q < 0 || q >= n_qubits_) throw ConfigError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << q;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
}

std::string PauliString::to_string() const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string out(static_cast<std::size_t>(n_qubits_), 'I');
  for (int q = 0; q < n_qubits_; ++q) out[static_cast<std::size_t>(q)] = kLetters[static_cast<int>(at(q))];
  return out;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
  if (auto c = n_qubits_ <=> other.n_qubits_; c != 0) return c;
  const std::uint64_t diff = (x_ ^ other.x_) | (z_ ^ other.z_);
  if (diff == 0) return std::strong_ordering::equal;
  const int q = std::countr_zero(diff);
  return static_cast<int>(at(q)) <=> static_cast<int>(other.at(q));
}

std::pair<Phase, PauliString> multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ConfigError("multiply: qubit counts differ (" + std::to_string(a.n_qubits()) + " vs " +
                      std::to_string(b.n_qubits()) + ")");
  }
  const std::uint64_t ax = a.x_mask() & ~a.z_mask(), ay = a.x_mask() & a.z_mask(),
                      az = ~a.x_mask() & a.z_mask();
  const std::uint64_t bx = b.x_mask() & ~b.z_mask(), by = b.x_mask() & b.z_mask(),
                      bz = ~b.x_mask() & b.z_mask();
  // XY = iZ, YZ = iX, ZX = iY; reversed orders pick up -i.
  const int plus = std::popcount((ax & by) | (ay & bz) | (az & bx));
  const int minus = std::popcount((ay & bx) | (az & by) | (ax & bz));
  PauliString result(a.n_qubits(), a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
  return {Phase{(plus - minus) & 3}, result};
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : PauliSum(merge(n_qubits, terms)) {}

PauliSum PauliSum::identity(int n_qubits, double coeff) {
  return PauliSum(n_qubits, {PauliTerm{coeff, PauliString(n_qubits)}});
}

double PauliSum::identity_coefficient() const {
  // The identity sorts first in canonical order.
  if (!terms_.empty() && terms_.front().string.is_identity()) return terms_.front().coeff;
  return 0.0;
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

bool PauliSum::is_real() const {
  return std::ranges::all_of(terms_, [](const PauliTerm& t) { return t.string.y_count() % 2 == 0; });
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (n_qubits_ != other.n_qubits_) throw ConfigError("PauliSum addition: qubit counts differ");
  std::vector<PauliTerm> all(terms_);
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return merge(n_qubits_, all);
}

PauliSum PauliSum::operator-(const PauliSum& other) const { return *this + other * -1.0; }

PauliSum PauliSum::operator*(double scale) const {
  std::vector<PauliTerm> scaled(terms_);
  for (auto& t : scaled) t.coeff *= scale;
  return merge(n_qubits_, scaled);
}

PauliSum merge(int n_qubits, std::span<const PauliTerm> terms) {
  std::vector<PauliTerm> sorted(terms.begin(), terms.end());
  for (const auto& t : sorted) {
    if (t.string.n_qubits() != n_qubits) {
      throw ConfigError("merge: term '" + t.string.to_string() + "' does not act on " +
                        std::to_string(n_qubits) + " qubits");
    }
    if (!std::isfinite(t.coeff)) throw InputError("merge: non-finite coefficient on " + t.string.to_string());
  }
  std::ranges::stable_sort(sorted, {}, &PauliTerm::string);
  PauliSum out(n_qubits);
  for (const auto& t : sorted) {
    if (!out.terms_.empty() && out.terms_.back().string == t.string) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(t);
    }
  }
  std::erase_if(out.terms_, [](const PauliTerm& t) { return std::abs(t.coeff) < kMergeTolerance; });
  return out;
}

PauliSum gradient_operator(const PauliSum& h, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("learning rate gamma must be positive, got " + std::to_string(gamma));
  }
  return PauliSum::identity(h.n_qubits()) - h * gamma;
}

Eigen::MatrixXcd to_matrix(const PauliString& p) {
  PauliSum s(p.n_qubits(), {PauliTerm{1.0, p}});
  return to_matrix(s, std::max(p.n_qubits(), kDenseQubitCap));
}

Eigen::MatrixXcd to_matrix(const PauliSum& sum, int qubit_cap) {
  const int n = sum.n_qubits();
  if (n > qubit_cap) {
    throw SizeCapError("to_matrix: " + std::to_string(n) + " qubits exceeds cap " + std::to_string(qubit_cap));
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : sum.terms()) {
    const std::uint64_t x = t.string.x_mask();
    for (std::uint64_t b = 0; b < dim; ++b) {
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += t.coeff * t.string.action_phase(b);
    }
  }
  return m;
}

PauliSum from_matrix(const Eigen::MatrixXcd& m, int qubit_cap) {
  if (m.rows() != m.cols() || m.rows() == 0 || !std::has_single_bit(static_cast<std::uint64_t>(m.rows()))) {
    throw ConfigError("from_matrix: matrix must be square with power-of-two dimension");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(m.rows()));
  if (n > qubit_cap) throw SizeCapError("from_matrix: " + std::to_string(n) + " qubits exceeds cap");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<PauliTerm> terms;
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      const PauliString p(n, x, z);
      // P|d> = phase(d)|d^x>, so Tr(P M) = sum_d phase(d) M(d, d^x).
      Complex tr{};
      for (std::uint64_t c = 0; c < dim; ++c) tr += p.action_phase(c) * m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ x));
      tr /= static_cast<double>(dim);
      if (std::abs(tr.imag()) > 1e-10) {
        throw ConfigError("from_matrix: coefficient of " + p.to_string() + " is complex; matrix is not Hermitian");
      }
      terms.push_back({tr.real(), p});
    }
  }
  return PauliSum(n, std::move(terms));
}

DiagonalSplit split_diagonal(const PauliSum& h) {
  std::vector<PauliTerm> diag, off;
  for (const auto& t : h.terms()) (t.string.is_diagonal() ? diag : off).push_back(t);
  return {PauliSum(h.n_qubits(), std::move(diag)), PauliSum(h.n_qubits(), std::move(off))};
}

}  // namespace fqe
