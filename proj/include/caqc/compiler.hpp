#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "caqc/cqca.hpp"
#include "caqc/dense.hpp"

namespace caqc {

/// One parameterized rotation exp(i * angle * generator). Generators are
/// Hermitian; a sign carried in generator.phase_exp folds into the angle.
struct Rotation {
  PauliProduct generator;
  int param = -1;      // parameter index, or -1 for a literal angle
  double literal = 0;  // used when param < 0
  int layer_j = 0;     // 1-based rotation layer
  int site_i = 0;      // 1-based ring site
  int sublayer = 0;    // 0 = Z-image layer, 1 = X-image layer (extended)
};

struct ProgramMeta {
  std::string rule;
  int period = 0;  // L
  int depth = 0;   // number of rotation layers j
  bool extended = false;
  int blocks = 0;  // depth / L when depth is a whole number of blocks
};

/// Symbolic unitary as an ordered rotation list; the first element acts
/// first on the state. Parameters are indexed (layer, [sublayer,] site)
/// row-major.
struct RotationLayerProgram {
  int n_qubits = 0;
  std::vector<Rotation> rotations;
  ProgramMeta meta;
  int param_count = 0;
};

/// Rotation layers j = 1..depth with generators T^{[L-[j]_L+1]_L}(Z_i),
/// the unitary realized by depth measured columns. depth = q*L gives q
/// whole blocks.
RotationLayerProgram compile_layers(const Cqca& t, int n, int depth);

/// Whole blocks of L layers each.
RotationLayerProgram compile_block(const Cqca& t, int n, int blocks);

/// Extended layers: per j a Z-image layer T^{[L-[j]_L+1]_L}(Z_i) followed
/// by an X-image layer T^{[L-j]_L}(X_i); 2n parameters per layer.
RotationLayerProgram compile_extended_layers(const Cqca& t, int n, int depth);

RotationLayerProgram compile_extended_block(const Cqca& t, int n, int blocks);

struct GateSetReport {
  bool has_free_z = false;
  /// (layer j, sublayer, axis letter) of weight-1 generators.
  std::set<std::tuple<int, int, char>> single_qubit_axes;
  /// Representative (layer j, generator at site 1) with weight > 1.
  std::vector<std::pair<int, PauliProduct>> entangling_generators;
  /// Layers whose rotations do not all commute; their listed order is part
  /// of the program's meaning.
  std::vector<int> noncommuting_layers;
};

/// Scans the first block (or the whole program when shorter).
GateSetReport gate_set_report(const RotationLayerProgram& prog);

/// Applies every rotation in order; params supplies indexed angles.
DenseState evaluate_program(const RotationLayerProgram& prog,
                            const std::vector<double>& params,
                            const DenseState& input);

nlohmann::json program_to_json(const RotationLayerProgram& prog);

}  // namespace caqc
