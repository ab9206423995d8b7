#include "caqc/stabilizer.hpp"

#include <algorithm>
#include <sstream>

namespace caqc {

namespace {

void debug_check(const StabilizerCode& code) {
#ifndef NDEBUG
  code.check_invariants();
#else
  (void)code;
#endif
}

int pivot_column(const PauliProduct& p) {
  for (int c = 0; c < p.n_qubits; ++c) {
    if (p.x_bits.get(c)) {
      return c;
    }
  }
  for (int c = 0; c < p.n_qubits; ++c) {
    if (p.z_bits.get(c)) {
      return p.n_qubits + c;
    }
  }
  return 2 * p.n_qubits;
}

bool bit_at(const PauliProduct& p, int col) {
  return col < p.n_qubits ? p.x_bits.get(col) : p.z_bits.get(col - p.n_qubits);
}

}  // namespace

void StabilizerCode::check_invariants() const {
  for (const PauliProduct& s : stabilizers) {
    if (s.n_qubits != n_qubits) {
      throw DimensionError("stabilizer acts on the wrong register");
    }
    if (!is_hermitian(s)) {
      throw ValidationError("stabilizer is not Hermitian");
    }
  }
  for (size_t i = 0; i < stabilizers.size(); ++i) {
    for (size_t j = i + 1; j < stabilizers.size(); ++j) {
      if (!commutes(stabilizers[i], stabilizers[j])) {
        throw ValidationError("stabilizers do not commute");
      }
    }
  }
  canonical_generators(stabilizers);  // independence and -I check
  if (stabilizers.size() + logical_pairs.size() >
      static_cast<size_t>(n_qubits)) {
    throw ValidationError("too many generators and logical pairs");
  }
  for (const LogicalPair& pair : logical_pairs) {
    if (commutes(pair.x_bar, pair.z_bar)) {
      throw ValidationError("paired logical representatives must anticommute");
    }
    for (const PauliProduct& s : stabilizers) {
      if (!commutes(pair.x_bar, s) || !commutes(pair.z_bar, s)) {
        throw ValidationError("logical representative hits a stabilizer");
      }
    }
  }
  for (size_t i = 0; i < logical_pairs.size(); ++i) {
    for (size_t j = 0; j < logical_pairs.size(); ++j) {
      if (i == j) {
        continue;
      }
      if (!commutes(logical_pairs[i].x_bar, logical_pairs[j].x_bar) ||
          !commutes(logical_pairs[i].x_bar, logical_pairs[j].z_bar) ||
          !commutes(logical_pairs[i].z_bar, logical_pairs[j].z_bar)) {
        throw ValidationError("logical pairs are not mutually commuting");
      }
    }
  }
}

std::vector<PauliProduct> canonical_generators(
    const std::vector<PauliProduct>& gens) {
  std::vector<PauliProduct> rows = gens;
  size_t r = 0;
  if (rows.empty()) {
    return rows;
  }
  const int n = rows[0].n_qubits;
  for (int col = 0; col < 2 * n && r < rows.size(); ++col) {
    size_t pivot = r;
    while (pivot < rows.size() && !bit_at(rows[pivot], col)) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      continue;
    }
    std::swap(rows[r], rows[pivot]);
    for (size_t k = 0; k < rows.size(); ++k) {
      if (k != r && bit_at(rows[k], col)) {
        rows[k] = multiply(rows[k], rows[r]);
      }
    }
    ++r;
  }
  for (size_t k = r; k < rows.size(); ++k) {
    if (rows[k].phase_exp != 0) {
      throw ValidationError("group contains -identity");
    }
    throw ValidationError("generators are dependent");
  }
  return rows;
}

std::optional<PauliProduct> group_representative(
    const std::vector<PauliProduct>& gens, const PauliProduct& p) {
  std::vector<PauliProduct> canon = canonical_generators(gens);
  PauliProduct acc = PauliProduct::identity(p.n_qubits);
  for (const PauliProduct& row : canon) {
    int col = pivot_column(row);
    bool want = bit_at(p, col);
    bool have = bit_at(acc, col);
    if (want != have) {
      acc = multiply(acc, row);
    }
  }
  if (acc.x_bits != p.x_bits || acc.z_bits != p.z_bits) {
    return std::nullopt;
  }
  return acc;
}

std::optional<int> group_phase_of(const std::vector<PauliProduct>& gens,
                                  const PauliProduct& p) {
  std::optional<PauliProduct> acc = group_representative(gens, p);
  if (!acc.has_value()) {
    return std::nullopt;
  }
  return ((p.phase_exp - acc->phase_exp) % 4 + 4) % 4;
}

StabilizerCode graph_state_code(const std::vector<std::pair<int, int>>& edges,
                                int n) {
  if (n < 1) {
    throw GeometryError("graph must have at least one vertex");
  }
  std::vector<std::pair<int, int>> sorted;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw FormatError("graph edge endpoint out of range");
    }
    if (a == b) {
      throw FormatError("graph has a self-loop");
    }
    sorted.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw FormatError("graph has a duplicate edge");
  }
  StabilizerCode code;
  code.n_qubits = n;
  for (int v = 0; v < n; ++v) {
    PauliProduct g = PauliProduct::single(n, v, PauliLetter::X);
    for (const auto& [a, b] : sorted) {
      if (a == v) {
        g = multiply(g, PauliProduct::single(n, b, PauliLetter::Z));
      } else if (b == v) {
        g = multiply(g, PauliProduct::single(n, a, PauliLetter::Z));
      }
    }
    code.stabilizers.push_back(std::move(g));
  }
  debug_check(code);
  return code;
}

StabilizerCode conjugate(const StabilizerCode& code, const CliffordMap& map) {
  if (map.n_qubits() != code.n_qubits) {
    throw DimensionError("conjugate: map acts on the wrong register");
  }
  StabilizerCode out;
  out.n_qubits = code.n_qubits;
  for (const PauliProduct& s : code.stabilizers) {
    out.stabilizers.push_back(conjugate_pauli(map, s));
  }
  for (const LogicalPair& pair : code.logical_pairs) {
    out.logical_pairs.push_back(LogicalPair{conjugate_pauli(map, pair.x_bar),
                                            conjugate_pauli(map, pair.z_bar)});
  }
  debug_check(out);
  return out;
}

std::pair<StabilizerCode, MeasurementRecord> measure_pauli(
    const StabilizerCode& code, const PauliProduct& obs,
    std::optional<int> outcome, Rng& rng) {
  if (obs.n_qubits != code.n_qubits) {
    throw DimensionError("measure_pauli: observable on the wrong register");
  }
  if (!is_hermitian(obs)) {
    throw Error("measured observable must be Hermitian");
  }
  StabilizerCode out = code;
  MeasurementRecord rec;
  rec.observable = obs;

  std::vector<size_t> anti;
  for (size_t k = 0; k < out.stabilizers.size(); ++k) {
    if (!commutes(out.stabilizers[k], obs)) {
      anti.push_back(k);
    }
  }

  if (!anti.empty()) {
    PauliProduct repair = out.stabilizers[anti[0]];
    for (size_t idx = 1; idx < anti.size(); ++idx) {
      out.stabilizers[anti[idx]] = multiply(out.stabilizers[anti[idx]], repair);
    }
    for (LogicalPair& pair : out.logical_pairs) {
      if (!commutes(pair.x_bar, obs)) {
        pair.x_bar = multiply(pair.x_bar, repair);
      }
      if (!commutes(pair.z_bar, obs)) {
        pair.z_bar = multiply(pair.z_bar, repair);
      }
    }
    rec.outcome = outcome.value_or(rng.bit());
    rec.deterministic = false;
    PauliProduct signed_obs = obs;
    signed_obs.phase_exp = (signed_obs.phase_exp + 2 * rec.outcome) % 4;
    out.stabilizers[anti[0]] = std::move(signed_obs);
    debug_check(out);
    return {out, rec};
  }

  if (std::optional<int> d = group_phase_of(out.stabilizers, obs)) {
    // The group forces the outcome: obs = i^d * (stabilizer product).
    rec.deterministic = true;
    rec.outcome = (*d == 2) ? 1 : 0;
    if (outcome.has_value() && *outcome != rec.outcome) {
      throw ImpossibleOutcomeError(
          "forced outcome contradicts the stabilizer group");
    }
    return {out, rec};
  }

  // obs commutes with the whole group but is not in it: a logical
  // measurement. Representatives that anticommute are discarded with their
  // pair; there is no removed generator to repair them with.
  rec.outcome = outcome.value_or(rng.bit());
  rec.deterministic = false;
  PauliProduct signed_obs = obs;
  signed_obs.phase_exp = (signed_obs.phase_exp + 2 * rec.outcome) % 4;
  out.stabilizers.push_back(std::move(signed_obs));
  std::erase_if(out.logical_pairs, [&](const LogicalPair& pair) {
    return !commutes(pair.x_bar, obs) || !commutes(pair.z_bar, obs);
  });
  debug_check(out);
  return {out, rec};
}

bool codes_equal(const StabilizerCode& a, const StabilizerCode& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionError("codes_equal: register sizes differ");
  }
  if (a.stabilizers.size() != b.stabilizers.size()) {
    return false;
  }
  std::vector<PauliProduct> ca = canonical_generators(a.stabilizers);
  std::vector<PauliProduct> cb = canonical_generators(b.stabilizers);
  return ca == cb;
}

bool same_logical_class(const StabilizerCode& code, const PauliProduct& a,
                        const PauliProduct& b) {
  std::optional<int> d =
      group_phase_of(code.stabilizers, multiply(a, inverse(b)));
  return d.has_value() && *d == 0;
}

StabilizerCode drop_qubits(const StabilizerCode& code,
                           const std::vector<int>& drop) {
  std::vector<bool> dropped(code.n_qubits, false);
  for (int q : drop) {
    if (q < 0 || q >= code.n_qubits) {
      throw GeometryError("drop_qubits: index out of range");
    }
    dropped[q] = true;
  }
  std::vector<std::optional<PauliProduct>> pin(code.n_qubits);
  std::vector<bool> used_as_pin(code.stabilizers.size(), false);
  for (size_t k = 0; k < code.stabilizers.size(); ++k) {
    const PauliProduct& s = code.stabilizers[k];
    if (weight(s) != 1) {
      continue;
    }
    for (int q : drop) {
      if (s.letter_at(q) != PauliLetter::I && !pin[q].has_value()) {
        pin[q] = s;
        used_as_pin[k] = true;
        break;
      }
    }
  }
  for (int q : drop) {
    if (!pin[q].has_value()) {
      throw ValidationError(
          "dropped qubit is not pinned by a single-qubit stabilizer");
    }
  }
  auto reduce = [&](PauliProduct p) {
    for (int q : drop) {
      PauliLetter l = p.letter_at(q);
      if (l == PauliLetter::I) {
        continue;
      }
      if (l != pin[q]->letter_at(q)) {
        throw ValidationError("operator is entangled with a dropped qubit");
      }
      p = multiply(p, *pin[q]);
    }
    return p;
  };
  std::vector<int> keep;
  for (int q = 0; q < code.n_qubits; ++q) {
    if (!dropped[q]) {
      keep.push_back(q);
    }
  }
  auto restrict_to_kept = [&](const PauliProduct& p) {
    PauliProduct out = PauliProduct::identity(static_cast<int>(keep.size()));
    out.phase_exp = p.phase_exp;
    for (size_t i = 0; i < keep.size(); ++i) {
      out.set_letter(static_cast<int>(i), p.letter_at(keep[i]));
    }
    return out;
  };
  StabilizerCode out;
  out.n_qubits = static_cast<int>(keep.size());
  for (size_t k = 0; k < code.stabilizers.size(); ++k) {
    if (used_as_pin[k]) {
      continue;
    }
    out.stabilizers.push_back(restrict_to_kept(reduce(code.stabilizers[k])));
  }
  for (const LogicalPair& pair : code.logical_pairs) {
    out.logical_pairs.push_back(
        LogicalPair{restrict_to_kept(reduce(pair.x_bar)),
                    restrict_to_kept(reduce(pair.z_bar))});
  }
  debug_check(out);
  return out;
}

std::string to_text(const StabilizerCode& code) {
  std::ostringstream out;
  for (const PauliProduct& s : code.stabilizers) {
    out << to_text(s) << "\n";
  }
  for (size_t k = 0; k < code.logical_pairs.size(); ++k) {
    out << "Xbar_" << (k + 1) << ": " << to_text(code.logical_pairs[k].x_bar)
        << "\n";
    out << "Zbar_" << (k + 1) << ": " << to_text(code.logical_pairs[k].z_bar)
        << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const StabilizerCode& code) {
  nlohmann::json stabs = nlohmann::json::array();
  for (const PauliProduct& s : code.stabilizers) {
    stabs.push_back(to_json(s));
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const LogicalPair& pair : code.logical_pairs) {
    pairs.push_back(nlohmann::json{{"x_bar", to_json(pair.x_bar)},
                                   {"z_bar", to_json(pair.z_bar)}});
  }
  return nlohmann::json{
      {"n", code.n_qubits}, {"stabilizers", stabs}, {"logical_pairs", pairs}};
}

}  // namespace caqc
