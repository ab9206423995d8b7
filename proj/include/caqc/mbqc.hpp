#pragma once

#include <optional>
#include <vector>

#include "caqc/compiler.hpp"
#include "caqc/cqca.hpp"
#include "caqc/dense.hpp"
#include "caqc/stabilizer.hpp"

namespace caqc {

/// The two-column Clifford map that entangles an input ring with a fresh
/// output ring and advances the automaton one step: a CZ rung, Hadamards
/// on the output, then the rule on the output. Qubits 0..n-1 are the input
/// column, n..2n-1 the output column.
class UTMap final : public CliffordMap {
 public:
  UTMap(const Cqca& t, int n);
  int n_qubits() const override { return 2 * n_; }
  PauliProduct image_x(int site) const override;
  PauliProduct image_z(int site) const override;
  int ring() const { return n_; }

 private:
  PauliProduct embed_out(const PauliProduct& p) const;
  Cqca t_;
  int n_;
};

/// Validates the rule and constructs the map; the four image rules are
/// checked against conjugation through the explicit CZ+H+rule circuit.
UTMap build_ut(const Cqca& t, int n);

/// The Hadamard-composed rule T' with T'(P) = T_1(T(P)).
Cqca hadamard_compose(const Cqca& t);

struct MbqcOptions {
  bool corrected = true;
  bool extended = false;        // alternate U_{T'} and U_{T_1} unit cells
  bool fold_rotations = false;  // bundle each rotation into its measurement
  uint64_t seed = 0;
  /// When set, measurement outcomes are forced instead of sampled.
  std::optional<std::vector<std::vector<int>>> forced_outcomes;
  /// Input register override; defaults to |+>^n as in the algorithm.
  std::optional<DenseState> initial;
};

struct MbqcRun {
  Cqca t;
  int n = 0;
  int depth = 0;  // unit cells for plain runs, cell pairs for extended runs
  std::vector<std::vector<double>> angles;  // cells x n
  std::vector<std::vector<int>> outcomes;   // cells x n
  bool corrected = true;
  bool extended = false;
  uint64_t seed = 0;
  DenseState final_state;
};

/// Runs the unit-cell measurement loop on the dense register: append a
/// fresh |+> column, entangle with U_T, rotate the inputs, measure them in
/// the X basis, correct (or record) byproducts, trace the inputs out.
/// Angles have one row per unit cell (2*depth rows when extended).
MbqcRun run_algorithm1(const Cqca& t, int n, int depth,
                       const std::vector<std::vector<double>>& angles,
                       const MbqcOptions& options);

/// The rotation program implemented by a depth-D corrected run; requires
/// depth to be a whole number of periods.
RotationLayerProgram theorem2_program(const Cqca& t, int n, int depth,
                                      bool extended = false);

struct ByproductLedger {
  struct Entry {
    PauliProduct byproduct;
    int cell = 0;
    int site = 0;
  };
  std::vector<Entry> entries;        // application order
  std::vector<int> sign_flips;       // filled by commute_byproducts
};

/// Byproducts of an uncorrected run, one per -1 outcome, expressed as the
/// generator of the matching program slot.
ByproductLedger make_ledger(const MbqcRun& run,
                            const RotationLayerProgram& prog);

struct CommutedByproducts {
  PauliProduct tail;              // terminal Pauli, applied after the program
  RotationLayerProgram flipped;   // angle signs folded into generator signs
  std::vector<int> sign_flips;    // parameter indices with negated angles
};

/// Pushes every byproduct to the end of the program, flipping the sign of
/// each later rotation whose generator anticommutes with it.
CommutedByproducts commute_byproducts(const ByproductLedger& ledger,
                                      const RotationLayerProgram& prog);

struct HeisenbergReport {
  StabilizerCode after_ut;    // 2n-qubit code after the entangling step
  StabilizerCode final_code;  // n-qubit logical pairs after measure + trace
  bool matches_rule = false;  // final pairs equal (T(X_i), T(Z_i)) exactly
};

/// One unit cell executed purely on stabilizer codes with forced +1
/// outcomes, reporting the transported logical representatives.
HeisenbergReport heisenberg_trace(const Cqca& t, int n);

}  // namespace caqc
