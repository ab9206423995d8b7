#include "caqc/pauli.hpp"

#include <sstream>

namespace caqc {

char letter_char(PauliLetter l) {
  switch (l) {
    case PauliLetter::I:
      return 'I';
    case PauliLetter::X:
      return 'X';
    case PauliLetter::Y:
      return 'Y';
    case PauliLetter::Z:
      return 'Z';
  }
  return '?';
}

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I':
      return PauliLetter::I;
    case 'X':
      return PauliLetter::X;
    case 'Y':
      return PauliLetter::Y;
    case 'Z':
      return PauliLetter::Z;
    default:
      throw FormatError(std::string("not a Pauli letter: '") + c + "'");
  }
}

PauliProduct::PauliProduct(int n, BitVec x, BitVec z, int phase)
    : n_qubits(n),
      x_bits(std::move(x)),
      z_bits(std::move(z)),
      phase_exp(((phase % 4) + 4) % 4) {
  if (x_bits.size() != n_qubits || z_bits.size() != n_qubits) {
    throw DimensionError("bit-vector length does not match qubit count");
  }
}

PauliProduct PauliProduct::identity(int n) {
  return PauliProduct(n, BitVec(n), BitVec(n), 0);
}

PauliProduct PauliProduct::single(int n, int site, PauliLetter l) {
  if (site < 0 || site >= n) {
    throw GeometryError("site index out of range");
  }
  PauliProduct p = identity(n);
  p.set_letter(site, l);
  return p;
}

PauliLetter PauliProduct::letter_at(int site) const {
  bool x = x_bits.get(site);
  bool z = z_bits.get(site);
  if (x && z) {
    return PauliLetter::Y;
  }
  if (x) {
    return PauliLetter::X;
  }
  if (z) {
    return PauliLetter::Z;
  }
  return PauliLetter::I;
}

void PauliProduct::set_letter(int site, PauliLetter l) {
  x_bits.set(site, l == PauliLetter::X || l == PauliLetter::Y);
  z_bits.set(site, l == PauliLetter::Z || l == PauliLetter::Y);
}

PauliProduct multiply(const PauliProduct& a, const PauliProduct& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionError("multiply: operand sizes differ");
  }
  // Per site, with W(x,z) = i^{xz} X^x Z^z:
  //   W(a) W(b) = i^{a.x a.z + b.x b.z + 2 a.z b.x - c.x c.z} W(c),
  // where c = a ^ b. Summing the exponent over sites reduces to popcounts.
  BitVec cx = a.x_bits ^ b.x_bits;
  BitVec cz = a.z_bits ^ b.z_bits;
  long e = a.phase_exp + b.phase_exp;
  e += BitVec::popcount_and(a.x_bits, a.z_bits);
  e += BitVec::popcount_and(b.x_bits, b.z_bits);
  e += 2l * BitVec::popcount_and(a.z_bits, b.x_bits);
  e -= BitVec::popcount_and(cx, cz);
  return PauliProduct(a.n_qubits, std::move(cx), std::move(cz),
                      static_cast<int>(((e % 4) + 4) % 4));
}

bool commutes(const PauliProduct& a, const PauliProduct& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionError("commutes: operand sizes differ");
  }
  int s = BitVec::popcount_and(a.x_bits, b.z_bits) +
          BitVec::popcount_and(a.z_bits, b.x_bits);
  return (s & 1) == 0;
}

int weight(const PauliProduct& p) {
  int c = 0;
  for (int i = 0; i < p.n_qubits; ++i) {
    if (p.x_bits.get(i) || p.z_bits.get(i)) {
      ++c;
    }
  }
  return c;
}

PauliProduct translate(const PauliProduct& p, int shift) {
  return PauliProduct(p.n_qubits, p.x_bits.rotated(shift),
                      p.z_bits.rotated(shift), p.phase_exp);
}

bool is_hermitian(const PauliProduct& p) {
  return p.phase_exp == 0 || p.phase_exp == 2;
}

PauliProduct inverse(const PauliProduct& p) {
  // The letter part is an involution, so only the phase negates.
  PauliProduct q = p;
  q.phase_exp = (4 - p.phase_exp) % 4;
  return q;
}

std::string to_text(const PauliProduct& p) {
  static const char* kPhase[] = {"+", "+i", "-", "-i"};
  std::ostringstream out;
  out << kPhase[p.phase_exp];
  bool wrote = false;
  for (int i = 0; i < p.n_qubits; ++i) {
    PauliLetter l = p.letter_at(i);
    if (l == PauliLetter::I) {
      continue;
    }
    out << (wrote ? " " : "") << letter_char(l) << (i + 1);
    wrote = true;
  }
  if (!wrote) {
    out << "I";
  }
  out << " @N=" << p.n_qubits;
  return out.str();
}

PauliProduct pauli_from_text(const std::string& text) {
  size_t at = text.rfind(" @N=");
  if (at == std::string::npos) {
    throw FormatError("missing @N= suffix in Pauli text");
  }
  int n = 0;
  try {
    n = std::stoi(text.substr(at + 4));
  } catch (const std::exception&) {
    throw FormatError("bad qubit count in Pauli text");
  }
  if (n <= 0) {
    throw FormatError("qubit count must be positive");
  }
  std::string body = text.substr(0, at);
  int phase = 0;
  size_t pos = 0;
  if (body.rfind("+i", 0) == 0) {
    phase = 1;
    pos = 2;
  } else if (body.rfind("-i", 0) == 0) {
    phase = 3;
    pos = 2;
  } else if (body.rfind("+", 0) == 0) {
    phase = 0;
    pos = 1;
  } else if (body.rfind("-", 0) == 0) {
    phase = 2;
    pos = 1;
  } else {
    throw FormatError("missing phase prefix in Pauli text");
  }
  PauliProduct p(n, BitVec(n), BitVec(n), phase);
  std::istringstream in(body.substr(pos));
  std::string tok;
  while (in >> tok) {
    if (tok == "I") {
      continue;
    }
    PauliLetter l = letter_from_char(tok[0]);
    if (l == PauliLetter::I || tok.size() < 2) {
      throw FormatError("bad Pauli token: " + tok);
    }
    int site = 0;
    try {
      site = std::stoi(tok.substr(1));
    } catch (const std::exception&) {
      throw FormatError("bad site in Pauli token: " + tok);
    }
    if (site < 1 || site > n) {
      throw FormatError("site out of range in Pauli token: " + tok);
    }
    if (p.letter_at(site - 1) != PauliLetter::I) {
      throw FormatError("duplicate site in Pauli text: " + tok);
    }
    p.set_letter(site - 1, l);
  }
  return p;
}

nlohmann::json to_json(const PauliProduct& p) {
  nlohmann::json ops = nlohmann::json::object();
  for (int i = 0; i < p.n_qubits; ++i) {
    PauliLetter l = p.letter_at(i);
    if (l != PauliLetter::I) {
      ops[std::to_string(i + 1)] = std::string(1, letter_char(l));
    }
  }
  return nlohmann::json{{"n", p.n_qubits}, {"phase", p.phase_exp}, {"ops", ops}};
}

PauliProduct pauli_from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    int phase = j.value("phase", 0);
    if (n <= 0) {
      throw FormatError("qubit count must be positive");
    }
    PauliProduct p(n, BitVec(n), BitVec(n), phase);
    for (const auto& [key, val] : j.at("ops").items()) {
      int site = std::stoi(key);
      if (site < 1 || site > n) {
        throw FormatError("site out of range: " + key);
      }
      std::string s = val.get<std::string>();
      if (s.size() != 1) {
        throw FormatError("bad letter: " + s);
      }
      p.set_letter(site - 1, letter_from_char(s[0]));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad Pauli JSON: ") + e.what());
  }
}

void LocalPauliPattern::check() const {
  if (radius < 0) {
    throw FormatError("pattern radius must be non-negative");
  }
  bool edge = radius == 0;
  for (const auto& [offset, letter] : letters) {
    if (offset < -radius || offset > radius) {
      throw FormatError("pattern offset outside radius window");
    }
    if (letter == PauliLetter::I) {
      throw FormatError("identity letters must be omitted from patterns");
    }
    if (offset == radius || offset == -radius) {
      edge = true;
    }
  }
  if (!edge) {
    throw FormatError("pattern radius is not tight");
  }
}

PauliProduct instantiate(const LocalPauliPattern& pat, int site, int n) {
  if (n < 1) {
    throw GeometryError("ring must have at least one qubit");
  }
  PauliProduct out = PauliProduct::identity(n);
  out.phase_exp = ((pat.phase_exp % 4) + 4) % 4;
  for (const auto& [offset, letter] : pat.letters) {
    int pos = (((site + offset) % n) + n) % n;
    PauliProduct l = PauliProduct::single(n, pos, letter);
    out = multiply(out, l);
  }
  return out;
}

LocalPauliPattern pattern_from_pauli(const PauliProduct& p, int site) {
  LocalPauliPattern pat;
  pat.phase_exp = p.phase_exp;
  int r = 0;
  for (int i = 0; i < p.n_qubits; ++i) {
    PauliLetter l = p.letter_at(i);
    if (l == PauliLetter::I) {
      continue;
    }
    // Offset in (-n/2, n/2] closest to the reference site.
    int off = ((i - site) % p.n_qubits + p.n_qubits) % p.n_qubits;
    if (off > p.n_qubits / 2) {
      off -= p.n_qubits;
    }
    pat.letters[off] = l;
    r = std::max(r, std::abs(off));
  }
  pat.radius = r;
  return pat;
}

nlohmann::json pattern_to_json(const LocalPauliPattern& pat) {
  nlohmann::json letters = nlohmann::json::object();
  for (const auto& [offset, letter] : pat.letters) {
    letters[std::to_string(offset)] = std::string(1, letter_char(letter));
  }
  return nlohmann::json{{"phase", pat.phase_exp}, {"letters", letters}};
}

LocalPauliPattern pattern_from_json(const nlohmann::json& j) {
  try {
    LocalPauliPattern pat;
    pat.phase_exp = j.value("phase", 0);
    int r = 0;
    for (const auto& [key, val] : j.at("letters").items()) {
      int offset = std::stoi(key);
      std::string s = val.get<std::string>();
      if (s.size() != 1) {
        throw FormatError("bad letter: " + s);
      }
      PauliLetter l = letter_from_char(s[0]);
      if (l == PauliLetter::I) {
        continue;
      }
      pat.letters[offset] = l;
      r = std::max(r, std::abs(offset));
    }
    pat.radius = r;
    pat.check();
    return pat;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad pattern JSON: ") + e.what());
  }
}

BitVec symplectic(const PauliProduct& p) {
  BitVec v(2 * p.n_qubits);
  for (int i = 0; i < p.n_qubits; ++i) {
    if (p.x_bits.get(i)) {
      v.set(i, true);
    }
    if (p.z_bits.get(i)) {
      v.set(p.n_qubits + i, true);
    }
  }
  return v;
}

}  // namespace caqc
