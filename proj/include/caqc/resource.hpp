#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caqc/cqca.hpp"
#include "caqc/dense.hpp"
#include "caqc/stabilizer.hpp"

namespace caqc {

enum class GeneratorRole { LeftBoundary, Bulk, RightBoundary };

/// Local stabilizer generators of the measurement resource state laid out
/// on a rows x cols lattice (rows are the ring direction, columns are
/// computation steps). Qubits are column-major: (row, col) -> col*rows+row.
struct LatticeCode {
  int rows = 0;
  int cols = 0;
  StabilizerCode code;
  std::vector<GeneratorRole> roles;   // one per generator
  std::vector<int> anchor_rows;       // row index i of the generator
  std::vector<int> anchor_cols;      // leftmost column of the generator

  int qubit_index(int row, int col) const { return col * rows + row; }
};

/// Resource state generators of the plain column-wise construction on an
/// n x (D+1) lattice: inverse-image left boundary, two-step-decomposition
/// bulk, and transported right boundary, with signs derived exactly from
/// the Heisenberg evolution of the initial X stabilizers.
LatticeCode build_theorem3(const Cqca& t, int n, int depth);

/// The degenerate case T(Z) = Z: row-wise GHZ-like generators.
LatticeCode build_ghz_case(const Cqca& t, int n, int depth);

/// Extended construction for non-simple rules on an n x (2D+1) lattice,
/// alternating the composed rule T' = T_1 T with plain Hadamard columns.
LatticeCode build_prop2(const Cqca& t, int n, int depth);

/// The constructive route: |+> everywhere, then the column-wise entangling
/// maps as dense circuits.
DenseState build_dense_resource(const Cqca& t, int n, int depth,
                                bool extended);

/// The Heisenberg-evolved initial X stabilizers under the same column-wise
/// maps; spans the same group as the formula-built generators.
std::vector<PauliProduct> evolved_lattice_stabilizers(const Cqca& t, int n,
                                                      int depth,
                                                      bool extended);

/// GF(2) recombination into canonical graph form X_v prod Z with positive
/// signs; nullopt when the code is not a canonical graph state.
std::optional<std::vector<std::pair<int, int>>> recognize_graph_state(
    const LatticeCode& lat);

/// Correction operator for a -1 outcome at measured site (row, col): the
/// complementing bulk or right-boundary generator with its leading Z
/// removed, supported on unmeasured columns only. col ranges over
/// 0..depth-1 on a theorem-3 lattice.
PauliProduct resource_mbqc_correction(const LatticeCode& lat, int row,
                                      int col);

/// Column-by-column measurement of the full resource state with the
/// intermediate corrections; returns the final-column register state.
DenseState run_columnwise_mbqc(const Cqca& t, int n, int depth,
                               const std::vector<std::vector<double>>& angles,
                               const std::vector<std::vector<int>>& outcomes);

/// One picture per generator: rows x cols letters with '.' for identity.
std::string ascii_lattice(const LatticeCode& lat);

/// Graphviz rendering of a recognized graph; vertices named r<i>c<j>.
std::string to_dot(const std::vector<std::pair<int, int>>& edges, int rows,
                   int cols);

}  // namespace caqc
