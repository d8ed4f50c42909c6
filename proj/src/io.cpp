// SPDX-License-Identifier: Apache-2.0
#include "fqe/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "fqe/error.hpp"
#include "fqe/format.hpp"

namespace fqe::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  std::string msg(source);
  if (line > 0) msg += ":" + std::to_string(line);
  throw InputError(msg + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view token, std::string_view source, std::size_t line) {
  if (token.find_first_of("ijIJ") != std::string_view::npos && token.find_first_of("0123456789") != std::string_view::npos &&
      (token.back() == 'j' || token.back() == 'i' || token.back() == 'J')) {
    fail(source, line, "complex coefficient '" + std::string(token) + "' rejected: Pauli coefficients must be real");
  }
  double v = 0.0;
  const char* first = token.data();
  if (!token.empty() && token.front() == '+') ++first;
  const auto res = std::from_chars(first, token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
    fail(source, line, "cannot parse coefficient '" + std::string(token) + "'");
  }
  return v;
}

PauliString parse_letters(std::string_view letters, std::string_view source, std::size_t line) {
  try {
    return PauliString::parse(letters);
  } catch (const std::exception& e) {
    fail(source, line, e.what());
  }
}

PauliSum assemble(std::vector<PauliTerm> terms, std::string_view source) {
  if (terms.empty()) fail(source, 0, "no Pauli terms");
  const int n = terms.front().string.n_qubits();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t].string.n_qubits() != n) {
      fail(source, 0, "term " + std::to_string(t + 1) + " has " + std::to_string(terms[t].string.n_qubits()) +
                          " qubits, expected " + std::to_string(n));
    }
  }
  return PauliSum(n, std::move(terms));
}

template <class T>
T field(const json& j, const char* key, std::string_view source) {
  if (!j.contains(key)) fail(source, 0, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(source, 0, std::string("field '") + key + "': " + e.what());
  }
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return v.dump();
}

}  // namespace

PauliFile parse_pauli_text(std::istream& in, std::string_view source) {
  PauliFile out;
  std::vector<PauliTerm> terms;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      s = trim(s.substr(1));
      const auto colon = s.find(':');
      if (colon != std::string_view::npos && colon > 0 && s.substr(0, colon).find(' ') == std::string_view::npos) {
        out.metadata[std::string(s.substr(0, colon))] = std::string(trim(s.substr(colon + 1)));
      }
      continue;
    }
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = trim(s.substr(0, hash));
    std::istringstream fields{std::string(s)};
    std::string coeff, letters, extra;
    if (!(fields >> coeff >> letters)) fail(source, line, "expected '<coefficient> <pauli string>'");
    if (fields >> extra) fail(source, line, "unexpected trailing field '" + extra + "'");
    terms.push_back({parse_real(coeff, source, line), parse_letters(letters, source, line)});
  }
  out.sum = assemble(std::move(terms), source);
  return out;
}

PauliSum parse_pauli_json(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source, 0, e.what());
  }
  if (!j.is_array()) fail(source, 0, "expected a JSON array of Pauli terms");
  std::vector<PauliTerm> terms;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const auto& e = j[t];
    const std::string where = "term " + std::to_string(t + 1);
    if (!e.is_object() || !e.contains("coeff") || !e.contains("paulis")) fail(source, 0, where + ": need 'coeff' and 'paulis'");
    if (!e["coeff"].is_number()) fail(source, 0, where + ": coefficient must be a real number (complex values are rejected)");
    if (!e["paulis"].is_string()) fail(source, 0, where + ": 'paulis' must be a string");
    terms.push_back({e["coeff"].get<double>(), parse_letters(e["paulis"].get<std::string>(), source, 0)});
  }
  return assemble(std::move(terms), source);
}

void write_pauli_text(std::ostream& out, const PauliSum& sum, const std::map<std::string, std::string>& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  if (!metadata.contains("n_qubits")) out << "# n_qubits: " << sum.n_qubits() << '\n';
  for (const auto& t : sum.terms()) out << fmt_double(t.coeff) << ' ' << t.string.to_string() << '\n';
}

IntegralFile parse_integral_json(std::string_view text, std::string_view source,
                                 std::optional<TwoBodyOrdering> ordering_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source, 0, e.what());
  }
  if (!j.is_object()) fail(source, 0, "integral file must be a JSON object");

  IntegralFile out;
  const int n = field<int>(j, "n_orbitals", source);
  if (n < 1 || n > kMaxQubits) fail(source, 0, "n_orbitals out of range");

  const auto ordering_name = field<std::string>(j, "ordering", source);
  TwoBodyOrdering ordering;
  if (ordering_name == "physicist") {
    ordering = TwoBodyOrdering::kPhysicist;
  } else if (ordering_name == "chemist") {
    ordering = TwoBodyOrdering::kChemist;
  } else {
    fail(source, 0, "ordering must be \"physicist\" or \"chemist\", got \"" + ordering_name + "\"");
  }
  if (ordering_override) ordering = *ordering_override;

  const auto layout = field<std::string>(j, "spin_layout", source);
  if (layout != "interleaved" && layout != "blocked") {
    fail(source, 0, "spin_layout must be \"interleaved\" or \"blocked\", got \"" + layout + "\"");
  }
  const bool blocked = layout == "blocked";
  if (blocked && n % 2 != 0) fail(source, 0, "blocked spin layout needs an even n_orbitals");
  auto remap = [&](int p) { return blocked ? (p < n / 2 ? 2 * p : 2 * (p - n / 2) + 1) : p; };

  out.table.n_orbitals = n;
  out.table.e_const = field<double>(j, "e_const", source);

  const auto h_one = field<std::vector<std::vector<double>>>(j, "h_one", source);
  if (h_one.size() != static_cast<std::size_t>(n)) fail(source, 0, "h_one must have n_orbitals rows");
  out.table.h_one = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    if (h_one[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(n)) {
      fail(source, 0, "h_one row " + std::to_string(r) + " must have n_orbitals entries");
    }
    for (int c = 0; c < n; ++c) out.table.h_one(remap(r), remap(c)) = h_one[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }

  if (!j.contains("h_two") || !j["h_two"].is_array()) fail(source, 0, "missing array field 'h_two'");
  std::set<std::tuple<int, int, int, int>> seen;
  for (std::size_t e = 0; e < j["h_two"].size(); ++e) {
    const auto& row = j["h_two"][e];
    const std::string where = "h_two entry " + std::to_string(e);
    if (!row.is_array() || row.size() != 5) fail(source, 0, where + ": expected [i, j, k, l, value]");
    int idx[4];
    for (int a = 0; a < 4; ++a) {
      if (!row[static_cast<std::size_t>(a)].is_number_integer()) fail(source, 0, where + ": indices must be integers");
      idx[a] = row[static_cast<std::size_t>(a)].get<int>();
      if (idx[a] < 0 || idx[a] >= n) fail(source, 0, where + ": index out of range");
      idx[a] = remap(idx[a]);
    }
    if (!row[4].is_number()) fail(source, 0, where + ": value must be a real number");
    TwoBodyEntry t{idx[0], idx[1], idx[2], idx[3], row[4].get<double>()};
    if (ordering == TwoBodyOrdering::kChemist) {
      // (ij|kl) multiplies a+_i a+_k a_l a_j.
      t = {idx[0], idx[2], idx[3], idx[1], t.value};
    }
    if (!seen.insert({t.i, t.j, t.k, t.l}).second) fail(source, 0, where + ": duplicate index tuple");
    out.table.h_two.push_back(t);
  }

  if (j.contains("n_electrons")) {
    const int ne = field<int>(j, "n_electrons", source);
    if (ne < 0 || ne > n) fail(source, 0, "n_electrons out of range");
    out.n_electrons = ne;
  }
  if (j.contains("provenance")) {
    if (!j["provenance"].is_object()) fail(source, 0, "provenance must be an object");
    for (const auto& [k, v] : j["provenance"].items()) out.provenance[k] = scalar_text(v);
  }
  try {
    out.table.validate();
  } catch (const InputError& e) {
    fail(source, 0, e.what());
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedHamiltonian load_hamiltonian(const std::filesystem::path& path, std::optional<TwoBodyOrdering> ordering_override) {
  const std::string text = read_file(path);
  const std::string source = path.string();
  const auto first = text.find_first_not_of(" \t\r\n");
  LoadedHamiltonian out;
  if (first != std::string::npos && text[first] == '{') {
    auto f = parse_integral_json(text, source, ordering_override);
    out.h = jordan_wigner(hamiltonian_from_integrals(f.table), f.table.n_orbitals);
    out.n_electrons = f.n_electrons;
    out.metadata = std::move(f.provenance);
    out.from_integrals = true;
  } else if (first != std::string::npos && text[first] == '[') {
    out.h = parse_pauli_json(text, source);
  } else {
    std::istringstream in(text);
    auto f = parse_pauli_text(in, source);
    out.h = std::move(f.sum);
    out.metadata = std::move(f.metadata);
    if (auto it = out.metadata.find("n_electrons"); it != out.metadata.end()) {
      int ne = 0;
      const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), ne);
      if (res.ec != std::errc{} || ne < 0 || ne > out.h.n_qubits()) throw InputError(source + ": bad n_electrons metadata");
      out.n_electrons = ne;
    }
  }
  return out;
}

}  // namespace fqe::io
