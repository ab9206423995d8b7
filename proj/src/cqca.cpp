#include "caqc/cqca.hpp"

#include <algorithm>
#include <sstream>

#include "caqc/bits.hpp"

namespace caqc {

namespace {

void check_support_symmetry(const LocalPauliPattern& pat, const char* label) {
  for (const auto& [offset, letter] : pat.letters) {
    (void)letter;
    if (pat.letters.find(-offset) == pat.letters.end()) {
      throw ValidationError(std::string(label) +
                            " image support is not symmetric around 0");
    }
  }
}

}  // namespace

ValidationReport validate(const Cqca& t, int n) {
  try {
    if (n < 1) {
      throw GeometryError("ring must have at least one qubit");
    }
    t.x_image.check();
    t.z_image.check();
    check_support_symmetry(t.x_image, "X");
    check_support_symmetry(t.z_image, "Z");
    PauliProduct ix = instantiate(t.x_image, 0, n);
    PauliProduct iz = instantiate(t.z_image, 0, n);
    if (commutes(ix, iz)) {
      return {false, "images of X_0 and Z_0 commute; they must anticommute"};
    }
    for (int k = 1; k < n; ++k) {
      PauliProduct ixk = translate(ix, k);
      PauliProduct izk = translate(iz, k);
      std::ostringstream site;
      site << " (sites 0 and " << k << " on ring " << n << ")";
      if (!commutes(ix, ixk)) {
        return {false, "images of X_0 and X_k do not commute" + site.str()};
      }
      if (!commutes(ix, izk)) {
        return {false, "images of X_0 and Z_k do not commute" + site.str()};
      }
      if (!commutes(iz, izk)) {
        return {false, "images of Z_0 and Z_k do not commute" + site.str()};
      }
      if (!commutes(iz, ixk)) {
        return {false, "images of Z_0 and X_k do not commute" + site.str()};
      }
    }
    return {true, ""};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

void require_valid(const Cqca& t, int n) {
  ValidationReport rep = validate(t, n);
  if (!rep.ok) {
    throw ValidationError("invalid transition rule: " + rep.violation);
  }
}

PauliProduct apply(const Cqca& t, const PauliProduct& p) {
  CqcaOnRing map(t, p.n_qubits);
  return conjugate_pauli(map, p);
}

PauliProduct power_image(const Cqca& t, int k, int n, Axis which, int site) {
  if (k < 0) {
    throw GeometryError("power_image: exponent must be non-negative");
  }
  PauliProduct p = PauliProduct::single(
      n, site, which == Axis::X ? PauliLetter::X : PauliLetter::Z);
  for (int step = 0; step < k; ++step) {
    p = apply(t, p);
  }
  return p;
}

int period(const Cqca& t, int n, int cap_factor) {
  require_valid(t, n);
  PauliProduct x0 = PauliProduct::single(n, 0, PauliLetter::X);
  PauliProduct z0 = PauliProduct::single(n, 0, PauliLetter::Z);
  PauliProduct px = x0;
  PauliProduct pz = z0;
  long cap = static_cast<long>(cap_factor) * n;
  for (long l = 1; l <= cap; ++l) {
    px = apply(t, px);
    pz = apply(t, pz);
    if (px == x0 && pz == z0) {
      return static_cast<int>(l);
    }
  }
  throw PeriodNotFoundError(
      "no period below " + std::to_string(cap) + " on ring " +
      std::to_string(n) +
      " (fractal rules only close on rings of size 2^k)");
}

PauliProduct inverse_image(const Cqca& t, int n, Axis which, int site) {
  int l = period(t, n);
  return power_image(t, l - 1, n, which, site);
}

std::string kind_name(CqcaClassification::Kind k) {
  switch (k) {
    case CqcaClassification::Kind::Glider:
      return "glider";
    case CqcaClassification::Kind::Periodic:
      return "periodic";
    case CqcaClassification::Kind::Fractal:
      return "fractal";
  }
  return "?";
}

namespace {

bool pattern_is(const LocalPauliPattern& pat,
                std::initializer_list<std::pair<int, PauliLetter>> letters) {
  if (pat.phase_exp != 0 || pat.letters.size() != letters.size()) {
    return false;
  }
  for (const auto& [offset, letter] : letters) {
    auto it = pat.letters.find(offset);
    if (it == pat.letters.end() || it->second != letter) {
      return false;
    }
  }
  return true;
}

bool is_simple_rule(const Cqca& t) {
  // T(Z) = X and T(X) = Z at the center with only X letters elsewhere.
  if (!pattern_is(t.z_image, {{0, PauliLetter::X}})) {
    return false;
  }
  if (t.x_image.phase_exp != 0) {
    return false;
  }
  for (const auto& [offset, letter] : t.x_image.letters) {
    if (offset == 0 ? letter != PauliLetter::Z : letter != PauliLetter::X) {
      return false;
    }
  }
  return t.x_image.letters.count(0) == 1;
}

std::optional<GliderInfo> find_glider(const Cqca& t, int search_radius) {
  const int r = std::max(t.radius(), 1);
  const int big_r = std::max(search_radius, 1);
  const int ring = 2 * (big_r + 2 * r + 2) + 3;
  const int center = ring / 2;
  const int window = 2 * big_r + 1;
  const int unknowns = 2 * window;
  for (int mag = 1; mag <= r + 1; ++mag) {
    for (int shift : {mag, -mag}) {
      // Kernel of symplectic(T(g)) - symplectic(translate(g, shift)) over
      // candidate supports inside the window.
      std::vector<PauliProduct> basis;
      basis.reserve(unknowns);
      Gf2Matrix m(2 * ring, unknowns);
      for (int u = 0; u < unknowns; ++u) {
        int offset = (u % window) - big_r;
        PauliLetter l = u < window ? PauliLetter::X : PauliLetter::Z;
        PauliProduct e = PauliProduct::single(ring, center + offset, l);
        BitVec col = symplectic(apply(t, e)) ^ symplectic(translate(e, shift));
        for (int row = 0; row < 2 * ring; ++row) {
          if (col.get(row)) {
            m.set(row, u, true);
          }
        }
        basis.push_back(std::move(e));
      }
      std::vector<BitVec> null_basis = m.nullspace();
      size_t d = null_basis.size();
      if (d == 0) {
        continue;
      }
      uint64_t combos = d <= 12 ? (uint64_t{1} << d) : 4096;
      std::optional<PauliProduct> best;
      for (uint64_t c = 1; c < combos; ++c) {
        PauliProduct g = PauliProduct::identity(ring);
        for (size_t j = 0; j < d; ++j) {
          if (c & (uint64_t{1} << j)) {
            for (int u = 0; u < unknowns; ++u) {
              if (null_basis[j].get(u)) {
                g = multiply(g, basis[u]);
              }
            }
          }
        }
        g.phase_exp = 0;
        if (g.is_identity_bits()) {
          continue;
        }
        if (apply(t, g) != translate(g, shift)) {
          continue;  // symplectic solution with a sign mismatch
        }
        if (!best || weight(g) < weight(*best) ||
            (weight(g) == weight(*best) &&
             symplectic(g).lex_less(symplectic(*best)))) {
          best = g;
        }
      }
      if (best) {
        // Recenter so offset 0 holds the rightmost letter, matching the
        // usual way gliders are written (e.g. Z_{i-1} X_i).
        int hi = 0;
        for (int i = 0; i < ring; ++i) {
          if (best->letter_at(i) != PauliLetter::I) {
            hi = i;
          }
        }
        return GliderInfo{pattern_from_pauli(*best, hi), shift};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CqcaClassification classify(const Cqca& t, int search_radius, int period_cap) {
  CqcaClassification out;
  out.is_simple = is_simple_rule(t);
  out.is_entangling =
      t.x_image.letters.size() > 1 || t.z_image.letters.size() > 1;
  const int r = std::max(t.radius(), 1);
  if (search_radius < 0) {
    search_radius = 2 * r + 2;
  }
  // Pattern-level periodicity: probe on a ring large enough that no image
  // of the probe letters can wrap within period_cap steps.
  const int probe_ring = 2 * period_cap * r + 3;
  PauliProduct x0 = PauliProduct::single(probe_ring, 0, PauliLetter::X);
  PauliProduct z0 = PauliProduct::single(probe_ring, 0, PauliLetter::Z);
  PauliProduct px = x0;
  PauliProduct pz = z0;
  for (int p = 1; p <= period_cap; ++p) {
    px = apply(t, px);
    pz = apply(t, pz);
    if (px == x0 && pz == z0) {
      out.kind = CqcaClassification::Kind::Periodic;
      out.pattern_period = p;
      return out;
    }
  }
  if (std::optional<GliderInfo> g = find_glider(t, search_radius)) {
    out.kind = CqcaClassification::Kind::Glider;
    out.glider = std::move(g);
    return out;
  }
  out.kind = CqcaClassification::Kind::Fractal;
  return out;
}

Lemma2Coefficients lemma2_solve(const Cqca& t, int n) {
  const int r = t.radius();
  if (n < 4 * r + 1) {
    throw GeometryError("lemma2_solve needs n >= 4r+1 = " +
                        std::to_string(4 * r + 1));
  }
  require_valid(t, n);
  const int m_max = 2 * r + 1;
  PauliProduct z0 = PauliProduct::single(n, 0, PauliLetter::Z);
  PauliProduct tz0 = apply(t, z0);
  PauliProduct target = apply(t, tz0);  // T^2(Z_0)
  std::vector<PauliProduct> pair_terms;  // T(Z_-k) T(Z_k), k = 1..m_max
  for (int k = 1; k <= m_max; ++k) {
    PauliProduct zm = PauliProduct::single(n, ((n - k) % n + n) % n, PauliLetter::Z);
    PauliProduct zp = PauliProduct::single(n, k % n, PauliLetter::Z);
    pair_terms.push_back(multiply(apply(t, zm), apply(t, zp)));
  }
  for (int m = 0; m <= m_max; ++m) {
    for (uint32_t a = 0; a < (uint32_t{1} << m); ++a) {
      if (m > 0 && !(a & (uint32_t{1} << (m - 1)))) {
        continue;  // alpha_m = 0 would reduce to a smaller m
      }
      for (int beta = 0; beta <= 1; ++beta) {
        PauliProduct rhs = z0;
        for (int k = 1; k <= m; ++k) {
          if (a & (uint32_t{1} << (k - 1))) {
            rhs = multiply(rhs, pair_terms[k - 1]);
          }
        }
        if (beta) {
          rhs = multiply(rhs, tz0);
        }
        if (rhs.x_bits == target.x_bits && rhs.z_bits == target.z_bits) {
          Lemma2Coefficients out;
          out.m = m;
          for (int k = 1; k <= m; ++k) {
            out.alpha.push_back((a >> (k - 1)) & 1);
          }
          out.beta = beta;
          out.phase_exp = ((target.phase_exp - rhs.phase_exp) % 4 + 4) % 4;
          return out;
        }
      }
    }
  }
  throw DecompositionError(
      "no two-step decomposition with m <= " + std::to_string(m_max) +
      "; rule is not a valid automaton");
}

namespace {

Cqca make_rule(std::string name,
               std::initializer_list<std::pair<int, PauliLetter>> x_letters,
               std::initializer_list<std::pair<int, PauliLetter>> z_letters) {
  Cqca t;
  t.name = std::move(name);
  int rx = 0, rz = 0;
  for (const auto& [o, l] : x_letters) {
    t.x_image.letters[o] = l;
    rx = std::max(rx, std::abs(o));
  }
  for (const auto& [o, l] : z_letters) {
    t.z_image.letters[o] = l;
    rz = std::max(rz, std::abs(o));
  }
  t.x_image.radius = rx;
  t.z_image.radius = rz;
  return t;
}

}  // namespace

const std::vector<Cqca>& builtin_rules() {
  static const std::vector<Cqca> rules = {
      make_rule("cluster",
                {{-1, PauliLetter::X}, {0, PauliLetter::Z}, {1, PauliLetter::X}},
                {{0, PauliLetter::X}}),
      make_rule("periodic-cluster",
                {{-1, PauliLetter::Z}, {0, PauliLetter::X}, {1, PauliLetter::Z}},
                {{0, PauliLetter::Z}}),
      make_rule("fractal-cluster",
                {{-1, PauliLetter::X}, {0, PauliLetter::Z}, {1, PauliLetter::X}},
                {{-1, PauliLetter::X}, {0, PauliLetter::Y}, {1, PauliLetter::X}}),
      make_rule("hadamard", {{0, PauliLetter::Z}}, {{0, PauliLetter::X}}),
      make_rule("identity", {{0, PauliLetter::X}}, {{0, PauliLetter::Z}}),
  };
  return rules;
}

const Cqca& builtin_rule(const std::string& name) {
  for (const Cqca& t : builtin_rules()) {
    if (t.name == name) {
      return t;
    }
  }
  throw FormatError("unknown builtin rule: " + name);
}

nlohmann::json cqca_to_json(const Cqca& t) {
  return nlohmann::json{{"name", t.name},
                        {"x_image", pattern_to_json(t.x_image)},
                        {"z_image", pattern_to_json(t.z_image)}};
}

Cqca cqca_from_json(const nlohmann::json& j) {
  try {
    Cqca t;
    t.name = j.value("name", "");
    t.x_image = pattern_from_json(j.at("x_image"));
    t.z_image = pattern_from_json(j.at("z_image"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad rule JSON: ") + e.what());
  }
}

}  // namespace caqc
