// Copyright 2026 The fidelimax authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDELIMAX_PAULI_HPP
#define FIDELIMAX_PAULI_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fidelimax/errors.hpp"
#include "fidelimax/operators.hpp"

namespace fidelimax {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

inline PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default:
      throw invalid_input_error(std::string("unknown Pauli letter '") + c + "'");
  }
}

/// Signed n-qubit Pauli word. Letter 0 acts on qubit 0, which is the leftmost
/// (most significant) factor of the tensor product.
struct PauliString {
  std::vector<PauliLetter> letters;
  int sign = +1;

  PauliString() = default;
  PauliString(std::vector<PauliLetter> l, int s) : letters(std::move(l)), sign(s) {}

  /// Parse from text such as "XX" or "-YZ".
  static PauliString parse(const std::string& text) {
    PauliString p;
    std::size_t start = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
      p.sign = text[0] == '-' ? -1 : +1;
      start = 1;
    }
    for (std::size_t i = start; i < text.size(); ++i) {
      p.letters.push_back(letter_from_char(text[i]));
    }
    if (p.letters.empty()) throw invalid_input_error("empty Pauli string");
    return p;
  }

  int n_qubits() const { return static_cast<int>(letters.size()); }

  bool is_identity() const {
    for (auto l : letters) {
      if (l != PauliLetter::I) return false;
    }
    return true;
  }

  std::string str() const {
    std::string s = sign < 0 ? "-" : "";
    for (auto l : letters) s += to_char(l);
    return s;
  }

  bool commutes_with(const PauliString& other) const {
    if (letters.size() != other.letters.size()) {
      throw invalid_input_error("commutes_with: qubit count mismatch");
    }
    int anti = 0;
    for (std::size_t q = 0; q < letters.size(); ++q) {
      const auto a = letters[q];
      const auto b = other.letters[q];
      if (a != PauliLetter::I && b != PauliLetter::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }
};

namespace detail {

// Single-qubit product a*b = i^phase * letter, phase as a power of i mod 4.
inline std::pair<PauliLetter, int> letter_product(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I) return {b, 0};
  if (b == PauliLetter::I) return {a, 0};
  if (a == b) return {PauliLetter::I, 0};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  // XY=iZ, YZ=iX, ZX=iY and the reversed orders pick up -i.
  const int ic = 6 - ia - ib;  // the remaining non-identity letter
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {static_cast<PauliLetter>(ic), cyclic ? 1 : 3};
}

}  // namespace detail

/// Product of two commuting signed Pauli strings. The result of a commuting
/// product is always a signed Pauli (the i-phases cancel pairwise).
inline PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.letters.size() != b.letters.size()) {
    throw invalid_input_error("multiply: qubit count mismatch");
  }
  PauliString out;
  out.letters.resize(a.letters.size());
  int phase = 0;  // power of i mod 4
  for (std::size_t q = 0; q < a.letters.size(); ++q) {
    auto [letter, ph] = detail::letter_product(a.letters[q], b.letters[q]);
    out.letters[q] = letter;
    phase = (phase + ph) % 4;
  }
  if (phase % 2 != 0) {
    throw invalid_input_error("multiply: product of anticommuting Paulis is not Hermitian");
  }
  out.sign = a.sign * b.sign * (phase == 0 ? +1 : -1);
  return out;
}

/// Dense matrix of a signed Pauli word: sign * (P_0 (x) P_1 (x) ... ).
inline HermitianOperator pauli_matrix(const PauliString& p) {
  if (p.letters.empty()) throw invalid_input_error("pauli_matrix: empty string");
  const Complex i(0.0, 1.0);
  Cmatrix single[4];
  single[0] = Cmatrix::Identity(2, 2);
  single[1] = (Cmatrix(2, 2) << 0, 1, 1, 0).finished();
  single[2] = (Cmatrix(2, 2) << 0, -i, i, 0).finished();
  single[3] = (Cmatrix(2, 2) << 1, 0, 0, -1).finished();

  Cmatrix out = single[static_cast<int>(p.letters[0])];
  for (std::size_t q = 1; q < p.letters.size(); ++q) {
    const Cmatrix& next = single[static_cast<int>(p.letters[q])];
    Cmatrix grown(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        grown.block(2 * r, 2 * c, 2, 2) = out(r, c) * next;
      }
    }
    out = std::move(grown);
  }
  if (p.sign < 0) out = -out;
  return HermitianOperator(std::move(out));
}

/// Decode the unsigned Pauli word with the given enumeration index. Index i
/// in [0, 4^n) is read in base 4, most significant digit first, with digits
/// 0..3 meaning I, X, Y, Z; index 0 is the identity.
inline PauliString pauli_from_index(int n_qubits, std::uint64_t index) {
  PauliString p;
  p.letters.assign(static_cast<std::size_t>(n_qubits), PauliLetter::I);
  for (int q = n_qubits - 1; q >= 0; --q) {
    p.letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(index % 4);
    index /= 4;
  }
  return p;
}

/// tr(W_i rho) for every non-identity Pauli word, in pauli_from_index order
/// (indices 1 .. 4^n - 1).
inline Rvector pauli_expectations(const DensityMatrix& state, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (state.dim() != d) {
    throw invalid_input_error("pauli_expectations: dimension is not 2^n");
  }
  const std::uint64_t total = std::uint64_t{1} << (2 * n_qubits);
  Rvector out(static_cast<Eigen::Index>(total - 1));
  for (std::uint64_t i = 1; i < total; ++i) {
    const PauliString w = pauli_from_index(n_qubits, i);
    out[static_cast<Eigen::Index>(i - 1)] =
        trace_product(pauli_matrix(w).mat(), state.mat());
  }
  return out;
}

/// Abelian subgroup given by n independent commuting generators.
struct StabilizerGroup {
  int n_qubits = 0;
  std::vector<PauliString> generators;

  static StabilizerGroup from_strings(const std::vector<std::string>& gens) {
    StabilizerGroup g;
    for (const auto& s : gens) g.generators.push_back(PauliString::parse(s));
    if (g.generators.empty()) {
      throw invalid_input_error("StabilizerGroup: no generators");
    }
    g.n_qubits = g.generators.front().n_qubits();
    return g;
  }

  /// Stabilizer group of the n-qubit GHZ state: X...X and the nearest
  /// neighbour ZZ chain.
  static StabilizerGroup ghz(int n_qubits) {
    if (n_qubits < 1) throw invalid_input_error("StabilizerGroup::ghz: bad size");
    StabilizerGroup g;
    g.n_qubits = n_qubits;
    if (n_qubits == 1) {
      g.generators.push_back(PauliString::parse("Z"));
      return g;
    }
    std::string allx(static_cast<std::size_t>(n_qubits), 'X');
    g.generators.push_back(PauliString::parse(allx));
    for (int q = 0; q + 1 < n_qubits; ++q) {
      std::string zz(static_cast<std::size_t>(n_qubits), 'I');
      zz[static_cast<std::size_t>(q)] = 'Z';
      zz[static_cast<std::size_t>(q) + 1] = 'Z';
      g.generators.push_back(PauliString::parse(zz));
    }
    return g;
  }
};

/// All 2^n signed elements of the group, identity first, generated over
/// subsets of the generators in index order. Throws if the generators do not
/// commute, are dependent, or produce -identity.
inline std::vector<PauliString> enumerate_group(const StabilizerGroup& group) {
  const int n = group.n_qubits;
  if (n > 12) {
    throw resource_limit_error("enumerate_group: refusing enumeration above 12 qubits");
  }
  if (static_cast<int>(group.generators.size()) != n) {
    throw invalid_input_error("enumerate_group: expected exactly n generators");
  }
  for (std::size_t i = 0; i < group.generators.size(); ++i) {
    if (group.generators[i].n_qubits() != n) {
      throw invalid_input_error("enumerate_group: generator qubit count mismatch");
    }
    for (std::size_t j = i + 1; j < group.generators.size(); ++j) {
      if (!group.generators[i].commutes_with(group.generators[j])) {
        throw invalid_input_error("enumerate_group: generators '" +
                                  group.generators[i].str() + "' and '" +
                                  group.generators[j].str() + "' do not commute");
      }
    }
  }

  std::vector<PauliString> elements;
  elements.reserve(std::size_t{1} << n);
  std::map<std::string, int> seen;  // unsigned word -> sign
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    PauliString prod(std::vector<PauliLetter>(static_cast<std::size_t>(n), PauliLetter::I), +1);
    for (int g = 0; g < n; ++g) {
      if (mask & (std::uint64_t{1} << g)) prod = multiply(prod, group.generators[static_cast<std::size_t>(g)]);
    }
    PauliString unsigned_word = prod;
    unsigned_word.sign = +1;
    auto [it, inserted] = seen.emplace(unsigned_word.str(), prod.sign);
    if (!inserted) {
      throw invalid_input_error("enumerate_group: generators are not independent");
    }
    if (prod.is_identity() && prod.sign < 0) {
      throw invalid_input_error("enumerate_group: group contains -identity");
    }
    elements.push_back(std::move(prod));
  }
  return elements;
}

/// Unique state fixed by the group: rho = (1/d) * sum of all group elements.
inline DensityMatrix stabilizer_state(const StabilizerGroup& group) {
  const auto elements = enumerate_group(group);
  const Eigen::Index d = Eigen::Index{1} << group.n_qubits;
  Cmatrix sum = Cmatrix::Zero(d, d);
  for (const auto& e : elements) sum += pauli_matrix(e).mat();
  return DensityMatrix(hermitize(sum / static_cast<double>(d)));
}

}  // namespace fidelimax

#endif  // FIDELIMAX_PAULI_HPP
