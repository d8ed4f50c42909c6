// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fqe {

using Complex = std::complex<double>;

/// Largest register the packed encoding can hold.
inline constexpr int kMaxQubits = 64;

/// Default cap for dense 2^n x 2^n matrices (4096 x 4096 complex is 256 MiB).
inline constexpr int kDenseQubitCap = 12;

/// Coefficients below this magnitude are dropped when merging.
inline constexpr double kMergeTolerance = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Power of i: value() == i^power, power in {0,1,2,3}.
struct Phase {
  int power = 0;

  Complex value() const;
  Phase operator*(Phase other) const { return Phase{(power + other.power) & 3}; }
  bool operator==(const Phase&) const = default;
};

/// Tensor product of single-qubit Paulis in symplectic form: qubit q carries
/// X when bit q of x_mask is set and Z when bit q of z_mask is set (both: Y).
/// Qubit 0 is the leftmost letter of the text form.
class PauliString {
 public:
  PauliString() = default;
  /// Identity on n qubits.
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  /// Parses "IXYZ"-style text; throws InputError on any other character.
  static PauliString parse(std::string_view letters);
  /// Single non-identity letter on qubit q.
  static PauliString single(int n_qubits, int q, Pauli p);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  Pauli at(int q) const;
  void set(int q, Pauli p);

  bool is_identity() const { return (x_ | z_) == 0; }
  /// True when only I and Z letters occur.
  bool is_diagonal() const { return x_ == 0; }
  int weight() const { return std::popcount(x_ | z_); }
  int y_count() const { return std::popcount(x_ & z_); }

  /// P|b> = action_phase(b) |b ^ x_mask>.
  Complex action_phase(std::uint64_t basis) const {
    const double sign = (std::popcount(basis & z_) & 1) ? -1.0 : 1.0;
    return Phase{y_count() & 3}.value() * sign;
  }

  std::string to_string() const;

  bool operator==(const PauliString&) const = default;
  /// Lexicographic over letters with I < X < Y < Z, qubit 0 first.
  std::strong_ordering operator<=>(const PauliString& other) const;

 private:
  int n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// (phase, result) with phase * result == a * b as operators.
std::pair<Phase, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;

  bool operator==(const PauliTerm&) const = default;
};

/// Real linear combination of Pauli strings, always held in canonical form:
/// sorted by string, no duplicates, no |coeff| < kMergeTolerance.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  /// Merges the given terms into canonical form.
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  static PauliSum identity(int n_qubits, double coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::span<const PauliTerm> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient on the all-I string (0 when absent).
  double identity_coefficient() const;
  /// Sum of |coeff|, an upper bound on the spectral norm.
  double one_norm() const;
  /// True when no string carries an odd number of Y, i.e. the matrix is real.
  bool is_real() const;

  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator-(const PauliSum& other) const;
  PauliSum operator*(double scale) const;

  bool operator==(const PauliSum&) const = default;

 private:
  friend PauliSum merge(int n_qubits, std::span<const PauliTerm> terms);

  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Canonical form of an arbitrary term list.
PauliSum merge(int n_qubits, std::span<const PauliTerm> terms);
inline PauliSum merge(const PauliSum& sum) { return merge(sum.n_qubits(), sum.terms()); }

/// I - gamma * h. Throws ConfigError unless gamma > 0.
PauliSum gradient_operator(const PauliSum& h, double gamma);

/// Dense 2^n matrix; basis index bit q is qubit q.
Eigen::MatrixXcd to_matrix(const PauliString& p);
Eigen::MatrixXcd to_matrix(const PauliSum& sum, int qubit_cap = kDenseQubitCap);

/// Pauli expansion c_P = Tr(P M) / 2^n of a dense Hermitian matrix. Throws
/// ConfigError when a coefficient has an imaginary part above 1e-10.
PauliSum from_matrix(const Eigen::MatrixXcd& m, int qubit_cap = kDenseQubitCap);

struct DiagonalSplit {
  PauliSum diagonal;      // I/Z-only strings
  PauliSum off_diagonal;  // strings with at least one X or Y
};

DiagonalSplit split_diagonal(const PauliSum& h);

}  // namespace fqe
