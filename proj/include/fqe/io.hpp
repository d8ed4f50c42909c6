// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "fqe/fermion.hpp"
#include "fqe/pauli.hpp"

namespace fqe::io {

enum class TwoBodyOrdering { kPhysicist, kChemist };

/// Text format, one term per line: "<coeff> <letters>", qubit 0 leftmost.
/// Blank lines and '#' comments are skipped; "# key: value" comment lines are
/// collected as metadata. Errors carry the line number.
struct PauliFile {
  PauliSum sum;
  std::map<std::string, std::string> metadata;
};

PauliFile parse_pauli_text(std::istream& in, std::string_view source = "<input>");
/// JSON array of {"coeff": <real>, "paulis": "<letters>"}.
PauliSum parse_pauli_json(std::string_view text, std::string_view source = "<input>");
/// Writes metadata as "# key: value" lines, then canonical terms with
/// round-trip exact coefficients.
void write_pauli_text(std::ostream& out, const PauliSum& sum, const std::map<std::string, std::string>& metadata = {});

struct IntegralFile {
  IntegralTable table;
  std::optional<int> n_electrons;
  std::map<std::string, std::string> provenance;
};

/// Integral JSON: n_orbitals, ordering, spin_layout, e_const, h_one, h_two as
/// [i, j, k, l, value] rows. Optional n_electrons and provenance object.
/// Chemist-ordered tensors are converted so that h_two[i][j][k][l] is the
/// coefficient of a+_i a+_j a_k a_l; blocked spin layouts are reindexed to
/// interleaved (alpha p -> 2p, beta p -> 2p + 1). `ordering_override`
/// replaces the file's declared ordering.
IntegralFile parse_integral_json(std::string_view text, std::string_view source = "<input>",
                                 std::optional<TwoBodyOrdering> ordering_override = std::nullopt);

struct LoadedHamiltonian {
  PauliSum h;
  std::optional<int> n_electrons;
  std::map<std::string, std::string> metadata;
  bool from_integrals = false;
};

/// Detects the format: a JSON object is an integral table (Jordan-Wigner
/// transformed), a JSON array a Pauli list, anything else Pauli text.
/// Throws InputError on malformed input.
LoadedHamiltonian load_hamiltonian(const std::filesystem::path& path,
                                   std::optional<TwoBodyOrdering> ordering_override = std::nullopt);

std::string read_file(const std::filesystem::path& path);

}  // namespace fqe::io
