#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "caqc/clifford.hpp"
#include "caqc/pauli.hpp"
#include "caqc/rng.hpp"

namespace caqc {

/// Paired logical representatives spanning one encoded qubit.
struct LogicalPair {
  PauliProduct x_bar;
  PauliProduct z_bar;
};

struct MeasurementRecord {
  PauliProduct observable;
  int outcome = 0;           // 0 -> +1 eigenvalue, 1 -> -1
  bool deterministic = false;
};

/// Stabilizer generators plus logical operator pairs: the Heisenberg-picture
/// description of an encoded state space.
struct StabilizerCode {
  int n_qubits = 0;
  std::vector<PauliProduct> stabilizers;
  std::vector<LogicalPair> logical_pairs;

  /// Throws when the commutation/independence/pairing invariants fail.
  void check_invariants() const;
};

/// Canonical generating set: symplectic reduced row echelon form with
/// pivots taken X-part first then Z-part, qubit-ascending; signs follow the
/// row recombinations exactly. Throws when the generators are dependent or
/// the group contains -identity.
std::vector<PauliProduct> canonical_generators(
    const std::vector<PauliProduct>& gens);

/// If the letter part of p lies in the group, returns the phase exponent d
/// such that p = i^d * (product of generators); membership of +/-p then
/// reads d == 0 / d == 2. Returns nullopt when the letters are outside the
/// row space.
std::optional<int> group_phase_of(const std::vector<PauliProduct>& gens,
                                  const PauliProduct& p);

/// The exact group element (sign included) whose letters match p, if any.
std::optional<PauliProduct> group_representative(
    const std::vector<PauliProduct>& gens, const PauliProduct& p);

/// Graph-state code: one generator X_v prod_{u ~ v} Z_u per vertex, no
/// logical pairs. Vertices are 0-based; edges are unordered and distinct.
StabilizerCode graph_state_code(const std::vector<std::pair<int, int>>& edges,
                                int n);

/// Conjugates every stabilizer and logical representative, phases exact.
StabilizerCode conjugate(const StabilizerCode& code, const CliffordMap& map);

/// Projective Pauli measurement in the Heisenberg picture. Anticommuting
/// generators are repaired by the first anticommuting stabilizer in list
/// order, which is then replaced by (-1)^outcome * obs; anticommuting
/// logical representatives are repaired the same way when possible and the
/// affected pair is dropped otherwise. A supplied outcome overrides
/// sampling; deterministic outcomes are forced by the group.
std::pair<StabilizerCode, MeasurementRecord> measure_pauli(
    const StabilizerCode& code, const PauliProduct& obs,
    std::optional<int> outcome, Rng& rng);

/// True iff the generated groups coincide, signs included.
bool codes_equal(const StabilizerCode& a, const StabilizerCode& b);

/// True iff a and b represent the same logical class of the code, i.e.
/// a * b^{-1} is exactly (+1 times) a stabilizer.
bool same_logical_class(const StabilizerCode& code, const PauliProduct& a,
                        const PauliProduct& b);

/// Removes qubits that are pinned by single-qubit stabilizers (e.g. the
/// measured-out input column). All remaining operators are first reduced
/// off the dropped qubits; kept qubits are re-indexed in order.
StabilizerCode drop_qubits(const StabilizerCode& code,
                           const std::vector<int>& drop);

/// One generator per line in the standard text form; logical pairs follow
/// as "Xbar_k: ..." / "Zbar_k: ..." lines.
std::string to_text(const StabilizerCode& code);
nlohmann::json to_json(const StabilizerCode& code);

}  // namespace caqc
