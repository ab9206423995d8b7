#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "caqc/bits.hpp"
#include "caqc/errors.hpp"

namespace caqc {

enum class PauliLetter : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(PauliLetter l);
PauliLetter letter_from_char(char c);

/// Phased product of Pauli operators on a ring of qubits.
///
/// The represented operator is i^phase_exp * prod_j W(x_j, z_j) with
/// W(0,0)=I, W(1,0)=X, W(0,1)=Z, W(1,1)=Y. Phases follow the convention
/// Y = i X Z and are tracked exactly. Site 0 of the bit-vectors is qubit 1
/// in all text renderings.
struct PauliProduct {
  int n_qubits = 0;
  BitVec x_bits;
  BitVec z_bits;
  int phase_exp = 0;  // power of i, always reduced mod 4

  PauliProduct() = default;
  PauliProduct(int n, BitVec x, BitVec z, int phase);

  static PauliProduct identity(int n);
  static PauliProduct single(int n, int site, PauliLetter l);

  PauliLetter letter_at(int site) const;
  void set_letter(int site, PauliLetter l);

  bool is_identity_bits() const { return !x_bits.any() && !z_bits.any(); }

  bool operator==(const PauliProduct& o) const {
    return n_qubits == o.n_qubits && phase_exp == o.phase_exp &&
           x_bits == o.x_bits && z_bits == o.z_bits;
  }
  bool operator!=(const PauliProduct& o) const { return !(*this == o); }
};

/// Exact group product a*b (phase included).
PauliProduct multiply(const PauliProduct& a, const PauliProduct& b);

/// True iff ab = ba.
bool commutes(const PauliProduct& a, const PauliProduct& b);

/// Number of sites carrying a non-identity letter.
int weight(const PauliProduct& p);

/// Cyclic rotation of the support by `shift` sites; phase unchanged.
PauliProduct translate(const PauliProduct& p, int shift);

/// Hermitian iff phase_exp is 0 or 2.
bool is_hermitian(const PauliProduct& p);

/// Inverse element: p * inverse(p) = identity.
PauliProduct inverse(const PauliProduct& p);

/// Text form "+X1 Z2 X3 @N=5"; identity renders as "+I @N=5".
std::string to_text(const PauliProduct& p);
PauliProduct pauli_from_text(const std::string& text);

/// JSON form {"n":5,"phase":0,"ops":{"1":"X","2":"Z","3":"X"}}.
nlohmann::json to_json(const PauliProduct& p);
PauliProduct pauli_from_json(const nlohmann::json& j);

/// Finite-support word of Pauli letters around a reference site, used as
/// the translation-invariant datum of a transition rule.
struct LocalPauliPattern {
  int radius = 0;
  std::map<int, PauliLetter> letters;  // offset -> letter, offsets in [-r, r]
  int phase_exp = 0;

  /// Throws FormatError when an offset falls outside [-r, r], a letter is
  /// the identity, or the radius is not tight.
  void check() const;

  bool operator==(const LocalPauliPattern& o) const {
    return radius == o.radius && letters == o.letters &&
           phase_exp == o.phase_exp;
  }
};

/// Places the pattern on a ring of n qubits centered at `site`. Offsets are
/// reduced mod n; letters that land on the same site are multiplied with
/// exact phase (this makes small rings behave as the quotient of the rule,
/// e.g. a radius-1 ring rule on n=2 merges its two outer letters).
PauliProduct instantiate(const LocalPauliPattern& pat, int site, int n);

/// Reads a finite-support product back into a pattern centered at `site`.
/// Requires the support to fit in a window of width n (always true) and
/// produces the tightest radius.
LocalPauliPattern pattern_from_pauli(const PauliProduct& p, int site);

nlohmann::json pattern_to_json(const LocalPauliPattern& pat);
LocalPauliPattern pattern_from_json(const nlohmann::json& j);

/// Symplectic vector (x-part then z-part) of length 2n.
BitVec symplectic(const PauliProduct& p);

}  // namespace caqc
