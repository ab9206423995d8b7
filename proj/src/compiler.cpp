#include "caqc/compiler.hpp"

#include <algorithm>

namespace caqc {

namespace {

int mod_exponent(int j, int l) {
  // [L - [j]_L + 1]_L
  int jl = ((j % l) + l) % l;
  return ((l - jl + 1) % l + l) % l;
}

PauliProduct checked_generator(PauliProduct g) {
  if (!is_hermitian(g)) {
    throw ValidationError("rotation generator is not Hermitian");
  }
  return g;
}

}  // namespace

RotationLayerProgram compile_layers(const Cqca& t, int n, int depth) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("program depth must be positive");
  }
  const int l = period(t, n);
  RotationLayerProgram prog;
  prog.n_qubits = n;
  prog.meta.rule = t.name;
  prog.meta.period = l;
  prog.meta.depth = depth;
  prog.meta.extended = false;
  prog.meta.blocks = depth % l == 0 ? depth / l : 0;
  for (int j = 1; j <= depth; ++j) {
    int k = mod_exponent(j, l);
    PauliProduct base = checked_generator(power_image(t, k, n, Axis::Z, 0));
    for (int i = 0; i < n; ++i) {
      Rotation rot;
      rot.generator = i == 0 ? base : translate(base, i);
      rot.param = (j - 1) * n + i;
      rot.layer_j = j;
      rot.site_i = i + 1;
      rot.sublayer = 0;
      prog.rotations.push_back(std::move(rot));
    }
  }
  prog.param_count = depth * n;
  return prog;
}

RotationLayerProgram compile_block(const Cqca& t, int n, int blocks) {
  if (blocks < 1) {
    throw GeometryError("block count must be positive");
  }
  const int l = period(t, n);
  RotationLayerProgram prog = compile_layers(t, n, blocks * l);
  prog.meta.blocks = blocks;
  return prog;
}

RotationLayerProgram compile_extended_layers(const Cqca& t, int n, int depth) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("program depth must be positive");
  }
  const int l = period(t, n);
  RotationLayerProgram prog;
  prog.n_qubits = n;
  prog.meta.rule = t.name;
  prog.meta.period = l;
  prog.meta.depth = depth;
  prog.meta.extended = true;
  prog.meta.blocks = depth % l == 0 ? depth / l : 0;
  for (int j = 1; j <= depth; ++j) {
    int kz = mod_exponent(j, l);
    int kx = ((l - j) % l + l) % l;
    PauliProduct base_z = checked_generator(power_image(t, kz, n, Axis::Z, 0));
    PauliProduct base_x = checked_generator(power_image(t, kx, n, Axis::X, 0));
    for (int i = 0; i < n; ++i) {
      Rotation rot;
      rot.generator = i == 0 ? base_z : translate(base_z, i);
      rot.param = (j - 1) * 2 * n + i;
      rot.layer_j = j;
      rot.site_i = i + 1;
      rot.sublayer = 0;
      prog.rotations.push_back(std::move(rot));
    }
    for (int i = 0; i < n; ++i) {
      Rotation rot;
      rot.generator = i == 0 ? base_x : translate(base_x, i);
      rot.param = (j - 1) * 2 * n + n + i;
      rot.layer_j = j;
      rot.site_i = i + 1;
      rot.sublayer = 1;
      prog.rotations.push_back(std::move(rot));
    }
  }
  prog.param_count = 2 * depth * n;
  return prog;
}

RotationLayerProgram compile_extended_block(const Cqca& t, int n, int blocks) {
  if (blocks < 1) {
    throw GeometryError("block count must be positive");
  }
  const int l = period(t, n);
  RotationLayerProgram prog = compile_extended_layers(t, n, blocks * l);
  prog.meta.blocks = blocks;
  return prog;
}

GateSetReport gate_set_report(const RotationLayerProgram& prog) {
  GateSetReport report;
  const int scan_depth = std::min(
      prog.meta.depth, prog.meta.period > 0 ? prog.meta.period : prog.meta.depth);
  std::vector<const Rotation*> scanned;
  for (const Rotation& rot : prog.rotations) {
    if (rot.layer_j > scan_depth) {
      continue;
    }
    scanned.push_back(&rot);
    if (rot.site_i != 1) {
      continue;
    }
    int w = weight(rot.generator);
    if (w == 1) {
      char axis = '?';
      for (int q = 0; q < rot.generator.n_qubits; ++q) {
        PauliLetter l = rot.generator.letter_at(q);
        if (l != PauliLetter::I) {
          axis = letter_char(l);
        }
      }
      report.single_qubit_axes.insert({rot.layer_j, rot.sublayer, axis});
      if (axis == 'Z') {
        report.has_free_z = true;
      }
    } else if (w > 1) {
      report.entangling_generators.emplace_back(rot.layer_j, rot.generator);
    }
  }
  for (int j = 1; j <= scan_depth; ++j) {
    bool ordered = false;
    for (size_t a = 0; a < scanned.size() && !ordered; ++a) {
      if (scanned[a]->layer_j != j) {
        continue;
      }
      for (size_t b = a + 1; b < scanned.size(); ++b) {
        if (scanned[b]->layer_j != j) {
          continue;
        }
        if (!commutes(scanned[a]->generator, scanned[b]->generator)) {
          ordered = true;
          break;
        }
      }
    }
    if (ordered) {
      report.noncommuting_layers.push_back(j);
    }
  }
  return report;
}

DenseState evaluate_program(const RotationLayerProgram& prog,
                            const std::vector<double>& params,
                            const DenseState& input) {
  if (input.n_qubits != prog.n_qubits) {
    throw DimensionError("evaluate_program: state size mismatch");
  }
  if (static_cast<int>(params.size()) != prog.param_count) {
    throw DimensionError("evaluate_program: expected " +
                         std::to_string(prog.param_count) + " parameters");
  }
  DenseState state = input;
  for (const Rotation& rot : prog.rotations) {
    double theta = rot.param >= 0 ? params[rot.param] : rot.literal;
    apply_pauli_rotation(state, rot.generator, theta);
  }
  return state;
}

nlohmann::json program_to_json(const RotationLayerProgram& prog) {
  nlohmann::json rots = nlohmann::json::array();
  for (const Rotation& rot : prog.rotations) {
    rots.push_back(nlohmann::json{{"generator", to_json(rot.generator)},
                                  {"param", rot.param},
                                  {"layer", rot.layer_j},
                                  {"site", rot.site_i},
                                  {"sublayer", rot.sublayer}});
  }
  return nlohmann::json{{"n", prog.n_qubits},
                        {"rule", prog.meta.rule},
                        {"period", prog.meta.period},
                        {"depth", prog.meta.depth},
                        {"extended", prog.meta.extended},
                        {"blocks", prog.meta.blocks},
                        {"param_count", prog.param_count},
                        {"rotations", rots}};
}

}  // namespace caqc
