#include "caqc/mbqc.hpp"

#include <algorithm>

namespace caqc {

UTMap::UTMap(const Cqca& t, int n) : t_(t), n_(n) { require_valid(t_, n_); }

PauliProduct UTMap::embed_out(const PauliProduct& p) const {
  PauliProduct out = PauliProduct::identity(2 * n_);
  out.phase_exp = p.phase_exp;
  for (int i = 0; i < n_; ++i) {
    PauliLetter l = p.letter_at(i);
    if (l != PauliLetter::I) {
      out.set_letter(n_ + i, l);
    }
  }
  return out;
}

PauliProduct UTMap::image_x(int site) const {
  if (site < n_) {
    // X_i^in -> X_i^in (x) T(X_i)^out
    PauliProduct in_part = PauliProduct::single(2 * n_, site, PauliLetter::X);
    PauliProduct out_part =
        embed_out(apply(t_, PauliProduct::single(n_, site, PauliLetter::X)));
    return multiply(in_part, out_part);
  }
  // X_i^out -> Z_i^in (x) T(Z_i)^out
  int i = site - n_;
  PauliProduct in_part = PauliProduct::single(2 * n_, i, PauliLetter::Z);
  PauliProduct out_part =
      embed_out(apply(t_, PauliProduct::single(n_, i, PauliLetter::Z)));
  return multiply(in_part, out_part);
}

PauliProduct UTMap::image_z(int site) const {
  if (site < n_) {
    // Z_i^in -> Z_i^in
    return PauliProduct::single(2 * n_, site, PauliLetter::Z);
  }
  // Z_i^out -> T(X_i)^out
  int i = site - n_;
  return embed_out(apply(t_, PauliProduct::single(n_, i, PauliLetter::X)));
}

UTMap build_ut(const Cqca& t, int n) {
  UTMap map(t, n);
  // Check the image rules against the explicit circuit: CZ rung, H on the
  // output column, then the rule on the output column.
  std::vector<std::pair<int, int>> rungs;
  for (int i = 0; i < n; ++i) {
    rungs.emplace_back(i, n + i);
  }
  CzLayerMap cz(2 * n, rungs);
  std::vector<int> out_col(n);
  for (int i = 0; i < n; ++i) {
    out_col[i] = n + i;
  }
  HadamardLayerMap h_inner(n);
  EmbeddedMap h_out(h_inner, out_col, 2 * n);
  CqcaOnRing t_inner(t, n);
  EmbeddedMap t_out(t_inner, out_col, 2 * n);
  ComposedMap circuit(2 * n, {&cz, &h_out, &t_out});
  for (int site = 0; site < 2 * n; ++site) {
    if (map.image_x(site) != circuit.image_x(site) ||
        map.image_z(site) != circuit.image_z(site)) {
      throw ValidationError("entangling-map images disagree with the circuit");
    }
  }
  return map;
}

Cqca hadamard_compose(const Cqca& t) {
  // T_1 exchanges X and Z and negates Y, letter by letter.
  auto transform = [](const LocalPauliPattern& pat) {
    LocalPauliPattern out;
    out.radius = pat.radius;
    out.phase_exp = pat.phase_exp;
    for (const auto& [offset, letter] : pat.letters) {
      switch (letter) {
        case PauliLetter::X:
          out.letters[offset] = PauliLetter::Z;
          break;
        case PauliLetter::Z:
          out.letters[offset] = PauliLetter::X;
          break;
        case PauliLetter::Y:
          out.letters[offset] = PauliLetter::Y;
          out.phase_exp = (out.phase_exp + 2) % 4;
          break;
        case PauliLetter::I:
          break;
      }
    }
    return out;
  };
  Cqca out;
  out.name = t.name.empty() ? "" : "hadamard*" + t.name;
  out.x_image = transform(t.x_image);
  out.z_image = transform(t.z_image);
  return out;
}

namespace {

PauliProduct embed_at(const PauliProduct& p, int offset, int total) {
  PauliProduct out = PauliProduct::identity(total);
  out.phase_exp = p.phase_exp;
  for (int i = 0; i < p.n_qubits; ++i) {
    PauliLetter l = p.letter_at(i);
    if (l != PauliLetter::I) {
      out.set_letter(offset + i, l);
    }
  }
  return out;
}

}  // namespace

MbqcRun run_algorithm1(const Cqca& t, int n, int depth,
                       const std::vector<std::vector<double>>& angles,
                       const MbqcOptions& options) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("depth must be positive");
  }
  if (2 * n > kDenseQubitCap) {
    throw GeometryError("two columns of this ring exceed the dense cap");
  }
  const int cells = options.extended ? 2 * depth : depth;
  if (static_cast<int>(angles.size()) != cells) {
    throw DimensionError("angle grid must have one row per unit cell (" +
                         std::to_string(cells) + ")");
  }
  for (const auto& row : angles) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("angle grid rows must have n entries");
    }
  }
  if (options.forced_outcomes.has_value()) {
    if (static_cast<int>(options.forced_outcomes->size()) != cells) {
      throw DimensionError("forced outcome grid shape mismatch");
    }
  }

  Cqca t_prime = hadamard_compose(t);
  const Cqca& t1 = builtin_rule("hadamard");
  DenseUnitary ut_plain = dense_unitary(CqcaOnRing(t, n));
  DenseUnitary ut_prime;
  DenseUnitary ut_h;
  if (options.extended) {
    ut_prime = dense_unitary(CqcaOnRing(t_prime, n));
    ut_h = dense_unitary(CqcaOnRing(t1, n));
  }
  std::vector<int> out_col(n);
  for (int i = 0; i < n; ++i) {
    out_col[i] = n + i;
  }

  MbqcRun run;
  run.t = t;
  run.n = n;
  run.depth = depth;
  run.angles = angles;
  run.outcomes.assign(cells, std::vector<int>(n, 0));
  run.corrected = options.corrected;
  run.extended = options.extended;
  run.seed = options.seed;

  Rng rng = Rng::stream(options.seed, "outcomes");
  DenseState state;
  if (options.initial.has_value()) {
    if (options.initial->n_qubits != n) {
      throw DimensionError("initial state size mismatch");
    }
    state = *options.initial;
  } else {
    state = prepare_plus(n);
  }
  for (int c = 0; c < cells; ++c) {
    const Cqca& cell_rule =
        options.extended ? (c % 2 == 0 ? t_prime : t1) : t;
    const DenseUnitary& cell_ut =
        options.extended ? (c % 2 == 0 ? ut_prime : ut_h) : ut_plain;
    append_plus(state, n);
    for (int i = 0; i < n; ++i) {
      apply_cz(state, i, n + i);
    }
    for (int i = 0; i < n; ++i) {
      apply_h(state, n + i);
    }
    apply_unitary(state, cell_ut, out_col);
    if (!options.fold_rotations) {
      for (int i = 0; i < n; ++i) {
        apply_pauli_rotation(
            state, PauliProduct::single(2 * n, i, PauliLetter::Z),
            angles[c][i]);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (options.fold_rotations) {
        // The rotated measurement basis exp(i theta Z)|+->.
        apply_pauli_rotation(
            state, PauliProduct::single(2 * n, i, PauliLetter::Z),
            angles[c][i]);
      }
      std::optional<int> forced;
      if (options.forced_outcomes.has_value()) {
        forced = (*options.forced_outcomes)[c][i];
      }
      ProjectiveResult res = measure_projective(
          state, PauliProduct::single(2 * n, i, PauliLetter::X), forced, rng);
      run.outcomes[c][i] = res.outcome;
      if (res.outcome == 1) {
        // fold |-> back to |+> so the input column can be traced out
        apply_pauli(state, PauliProduct::single(2 * n, i, PauliLetter::Z));
      }
      if (options.corrected && res.outcome == 1) {
        PauliProduct correction = embed_at(
            apply(cell_rule, PauliProduct::single(n, i, PauliLetter::Z)), n,
            2 * n);
        apply_pauli(state, correction);
      }
    }
    trace_out_low_plus(state, n);
  }
  run.final_state = std::move(state);
  return run;
}

RotationLayerProgram theorem2_program(const Cqca& t, int n, int depth,
                                      bool extended) {
  const int l = period(t, n);
  if (depth % l != 0) {
    throw GeometryError("depth " + std::to_string(depth) +
                        " is not a multiple of the period " +
                        std::to_string(l));
  }
  return extended ? compile_extended_layers(t, n, depth)
                  : compile_layers(t, n, depth);
}

ByproductLedger make_ledger(const MbqcRun& run,
                            const RotationLayerProgram& prog) {
  const int cells = static_cast<int>(run.outcomes.size());
  const int n = run.n;
  if (prog.n_qubits != n ||
      static_cast<int>(prog.rotations.size()) != cells * n) {
    throw DimensionError("program does not match the run's outcome grid");
  }
  ByproductLedger ledger;
  for (int c = 0; c < cells; ++c) {
    for (int i = 0; i < n; ++i) {
      if (run.outcomes[c][i] == 0) {
        continue;
      }
      const Rotation& rot = prog.rotations[c * n + i];
      ledger.entries.push_back({rot.generator, c, i});
    }
  }
  return ledger;
}

CommutedByproducts commute_byproducts(const ByproductLedger& ledger,
                                      const RotationLayerProgram& prog) {
  const int n = prog.n_qubits;
  std::vector<int> flips(prog.param_count, 0);
  PauliProduct tail = PauliProduct::identity(n);
  for (const ByproductLedger::Entry& entry : ledger.entries) {
    size_t slot = static_cast<size_t>(entry.cell) * n + entry.site;
    if (slot >= prog.rotations.size()) {
      throw DimensionError("ledger entry outside the program grid");
    }
    for (size_t later = slot + 1; later < prog.rotations.size(); ++later) {
      const Rotation& rot = prog.rotations[later];
      if (!commutes(rot.generator, entry.byproduct) && rot.param >= 0) {
        flips[rot.param] ^= 1;
      }
    }
    // Later byproducts stand to the left of earlier ones in the tail.
    tail = multiply(entry.byproduct, tail);
  }
  CommutedByproducts out;
  out.tail = std::move(tail);
  out.flipped = prog;
  for (Rotation& rot : out.flipped.rotations) {
    if (rot.param >= 0 && flips[rot.param]) {
      rot.generator.phase_exp = (rot.generator.phase_exp + 2) % 4;
    }
  }
  for (int p = 0; p < prog.param_count; ++p) {
    if (flips[p]) {
      out.sign_flips.push_back(p);
    }
  }
  return out;
}

HeisenbergReport heisenberg_trace(const Cqca& t, int n) {
  UTMap ut = build_ut(t, n);
  // Inputs carry the logical pairs; the fresh output column is stabilized
  // by its X letters.
  StabilizerCode start;
  start.n_qubits = 2 * n;
  for (int i = 0; i < n; ++i) {
    start.stabilizers.push_back(
        PauliProduct::single(2 * n, n + i, PauliLetter::X));
  }
  for (int i = 0; i < n; ++i) {
    start.logical_pairs.push_back(
        {PauliProduct::single(2 * n, i, PauliLetter::X),
         PauliProduct::single(2 * n, i, PauliLetter::Z)});
  }
  HeisenbergReport report;
  report.after_ut = conjugate(start, ut);

  StabilizerCode code = report.after_ut;
  Rng rng(0);
  for (int i = 0; i < n; ++i) {
    auto [next, rec] = measure_pauli(
        code, PauliProduct::single(2 * n, i, PauliLetter::X), 0, rng);
    (void)rec;
    code = std::move(next);
  }
  std::vector<int> inputs(n);
  for (int i = 0; i < n; ++i) {
    inputs[i] = i;
  }
  report.final_code = drop_qubits(code, inputs);

  report.matches_rule = true;
  for (int i = 0; i < n; ++i) {
    PauliProduct tx = apply(t, PauliProduct::single(n, i, PauliLetter::X));
    PauliProduct tz = apply(t, PauliProduct::single(n, i, PauliLetter::Z));
    if (report.final_code.logical_pairs[i].x_bar != tx ||
        report.final_code.logical_pairs[i].z_bar != tz) {
      report.matches_rule = false;
    }
  }
  return report;
}

}  // namespace caqc
