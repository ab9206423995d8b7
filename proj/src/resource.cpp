#include "caqc/resource.hpp"

#include <algorithm>
#include <sstream>

#include "caqc/mbqc.hpp"

namespace caqc {

namespace {

// Letters of a ring word placed on one lattice column.
PauliProduct on_column(const PauliProduct& ring_word, int col, int rows,
                       int total) {
  PauliProduct out = PauliProduct::identity(total);
  out.phase_exp = ring_word.phase_exp;
  for (int i = 0; i < rows; ++i) {
    PauliLetter l = ring_word.letter_at(i);
    if (l != PauliLetter::I) {
      out.set_letter(col * rows + i, l);
    }
  }
  return out;
}

PauliProduct single_at(int row, int col, int rows, int total, PauliLetter l) {
  return PauliProduct::single(total, col * rows + row, l);
}

// Sites where the word acts as X or Y.
std::vector<int> x_support(const PauliProduct& p) {
  std::vector<int> out;
  for (int i = 0; i < p.n_qubits; ++i) {
    if (p.x_bits.get(i)) {
      out.push_back(i);
    }
  }
  return out;
}

// Sites where the word acts as Z or Y.
std::vector<int> z_support(const PauliProduct& p) {
  std::vector<int> out;
  for (int i = 0; i < p.n_qubits; ++i) {
    if (p.z_bits.get(i)) {
      out.push_back(i);
    }
  }
  return out;
}

bool effective_z_is_fixed(const Cqca& t, int n) {
  return instantiate(t.z_image, 0, n) ==
         PauliProduct::single(n, 0, PauliLetter::Z);
}

// The column-wise entangling sequence at the stabilizer level: one rule per
// column step; step c acts on columns (c, c+1).
std::vector<PauliProduct> evolve_columns(const std::vector<const Cqca*>& steps,
                                         int rows, int cols) {
  const int total = rows * cols;
  std::vector<PauliProduct> gens;
  gens.reserve(total);
  for (int c = 0; c < cols; ++c) {
    for (int i = 0; i < rows; ++i) {
      gens.push_back(single_at(i, c, rows, total, PauliLetter::X));
    }
  }
  for (size_t c = 0; c < steps.size(); ++c) {
    UTMap ut(*steps[c], rows);
    std::vector<int> qubits(2 * rows);
    for (int k = 0; k < 2 * rows; ++k) {
      qubits[k] = static_cast<int>(c) * rows + k;
    }
    EmbeddedMap step(ut, qubits, total);
    for (PauliProduct& g : gens) {
      g = conjugate_pauli(step, g);
    }
  }
  return gens;
}

// Resolves the exact sign of a formula generator against the evolved group.
PauliProduct with_exact_sign(const std::vector<PauliProduct>& evolved,
                             const PauliProduct& pattern) {
  std::optional<PauliProduct> rep = group_representative(evolved, pattern);
  if (!rep.has_value()) {
    throw ValidationError(
        "formula generator lies outside the constructed stabilizer group");
  }
  return *rep;
}

LatticeCode finish(LatticeCode lat) {
  lat.code.n_qubits = lat.rows * lat.cols;
  lat.code.check_invariants();
  return lat;
}

}  // namespace

LatticeCode build_theorem3(const Cqca& t, int n, int depth) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("depth must be positive");
  }
  if (effective_z_is_fixed(t, n)) {
    throw GhzCaseError(
        "rule fixes Z: the construction degenerates to row-wise GHZ states; "
        "use the dedicated GHZ builder");
  }
  const int rows = n;
  const int cols = depth + 1;
  const int total = rows * cols;
  // Coefficients of the two-step rewriting identity are ring-independent;
  // solve on a reference ring when the working ring is too small.
  Lemma2Coefficients lemma =
      lemma2_solve(t, std::max(n, 4 * t.radius() + 1));
  PauliProduct tz0 = apply(t, PauliProduct::single(n, 0, PauliLetter::Z));
  std::vector<int> zsup = z_support(tz0);

  std::vector<const Cqca*> steps(depth, &t);
  std::vector<PauliProduct> evolved = evolve_columns(steps, rows, cols);

  LatticeCode lat;
  lat.rows = rows;
  lat.cols = cols;
  for (int i = 0; i < rows; ++i) {
    // T^{-1}(Z_i) on column 1, Z_i on column 2
    PauliProduct g = on_column(inverse_image(t, n, Axis::Z, i), 0, rows, total);
    g = multiply(g, single_at(i, 1, rows, total, PauliLetter::Z));
    lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
    lat.roles.push_back(GeneratorRole::LeftBoundary);
    lat.anchor_rows.push_back(i);
    lat.anchor_cols.push_back(0);
  }
  for (int c = 0; c + 2 < cols; ++c) {
    for (int i = 0; i < rows; ++i) {
      PauliProduct g = single_at(i, c, rows, total, PauliLetter::Z);
      PauliProduct mid = translate(tz0, i);  // T(Z_i)
      for (int k = 1; k <= lemma.m; ++k) {
        if (lemma.alpha[k - 1]) {
          mid = multiply(mid, PauliProduct::single(n, ((i - k) % n + n) % n,
                                                   PauliLetter::Z));
          mid = multiply(
              mid, PauliProduct::single(n, (i + k) % n, PauliLetter::Z));
        }
      }
      if (lemma.beta) {
        mid = multiply(mid, PauliProduct::single(n, i, PauliLetter::Z));
      }
      for (int k : zsup) {
        mid = multiply(mid, PauliProduct::single(n, (i + k) % n,
                                                 PauliLetter::Z));
      }
      g = multiply(g, on_column(mid, c + 1, rows, total));
      g = multiply(g, single_at(i, c + 2, rows, total, PauliLetter::Z));
      lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
      lat.roles.push_back(GeneratorRole::Bulk);
      lat.anchor_rows.push_back(i);
      lat.anchor_cols.push_back(c);
    }
  }
  for (int i = 0; i < rows; ++i) {
    // Z_i on column D, T(Z_i) on column D+1
    PauliProduct g = single_at(i, cols - 2, rows, total, PauliLetter::Z);
    g = multiply(g, on_column(translate(tz0, i), cols - 1, rows, total));
    lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
    lat.roles.push_back(GeneratorRole::RightBoundary);
    lat.anchor_rows.push_back(i);
    lat.anchor_cols.push_back(cols - 2);
  }
  return finish(std::move(lat));
}

LatticeCode build_ghz_case(const Cqca& t, int n, int depth) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("depth must be positive");
  }
  if (!effective_z_is_fixed(t, n)) {
    throw UnsupportedRuleError(
        "the GHZ builder requires a rule with T(Z) = Z");
  }
  const int rows = n;
  const int cols = depth + 1;
  const int total = rows * cols;
  std::vector<const Cqca*> steps(depth, &t);
  std::vector<PauliProduct> evolved = evolve_columns(steps, rows, cols);
  PauliProduct tx0 = apply(t, PauliProduct::single(n, 0, PauliLetter::X));

  LatticeCode lat;
  lat.rows = rows;
  lat.cols = cols;
  for (int c = 0; c + 1 < cols; ++c) {
    for (int i = 0; i < rows; ++i) {
      PauliProduct g = single_at(i, c, rows, total, PauliLetter::Z);
      g = multiply(g, single_at(i, c + 1, rows, total, PauliLetter::Z));
      lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
      lat.roles.push_back(GeneratorRole::Bulk);
      lat.anchor_rows.push_back(i);
      lat.anchor_cols.push_back(c);
    }
  }
  for (int i = 0; i < rows; ++i) {
    PauliProduct g = single_at(i, 0, rows, total, PauliLetter::X);
    for (int c = 1; c < cols; ++c) {
      g = multiply(g, on_column(translate(tx0, i), c, rows, total));
    }
    lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
    lat.roles.push_back(GeneratorRole::LeftBoundary);
    lat.anchor_rows.push_back(i);
    lat.anchor_cols.push_back(0);
  }
  return finish(std::move(lat));
}

LatticeCode build_prop2(const Cqca& t, int n, int depth) {
  require_valid(t, n);
  if (depth < 1) {
    throw GeometryError("depth must be positive");
  }
  if (classify(t).is_simple) {
    throw UnsupportedRuleError(
        "the extended construction covers non-simple rules only; the simple "
        "case degenerates and needs a separate treatment");
  }
  Cqca tp = hadamard_compose(t);
  if (effective_z_is_fixed(tp, n)) {
    throw UnsupportedRuleError(
        "degenerate extension: the composed rule fixes Z");
  }
  const Cqca& t1 = builtin_rule("hadamard");
  const int rows = n;
  const int cols = 2 * depth + 1;
  const int total = rows * cols;
  std::vector<const Cqca*> steps;
  for (int c = 0; c < 2 * depth; ++c) {
    steps.push_back(c % 2 == 0 ? &tp : &t1);
  }
  std::vector<PauliProduct> evolved = evolve_columns(steps, rows, cols);

  PauliProduct tpz0 = apply(tp, PauliProduct::single(n, 0, PauliLetter::Z));
  PauliProduct tpx0 = apply(tp, PauliProduct::single(n, 0, PauliLetter::X));
  std::vector<int> xsup_z = x_support(tpz0);
  std::vector<int> xsup_x = x_support(tpx0);

  LatticeCode lat;
  lat.rows = rows;
  lat.cols = cols;
  for (int i = 0; i < rows; ++i) {
    // T'^{-1}(Z_i) on column 1, Z_i on column 2
    PauliProduct g =
        on_column(inverse_image(tp, n, Axis::Z, i), 0, rows, total);
    g = multiply(g, single_at(i, 1, rows, total, PauliLetter::Z));
    lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
    lat.roles.push_back(GeneratorRole::LeftBoundary);
    lat.anchor_rows.push_back(i);
    lat.anchor_cols.push_back(0);
  }
  // odd 0-based columns c = 1, 3, ..., 2D-1: Z (x) T'(Z) (x) Z-tail
  for (int c = 1; c < cols - 1; c += 2) {
    for (int i = 0; i < rows; ++i) {
      PauliProduct g = single_at(i, c - 1, rows, total, PauliLetter::Z);
      g = multiply(g, on_column(translate(tpz0, i), c, rows, total));
      for (int k : xsup_z) {
        g = multiply(g, single_at(((i + k) % n + n) % n, c + 1, rows, total,
                                  PauliLetter::Z));
      }
      lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
      lat.roles.push_back(GeneratorRole::Bulk);
      lat.anchor_rows.push_back(i);
      lat.anchor_cols.push_back(c - 1);
    }
  }
  // even 0-based interior columns c = 2, 4, ..., 2D-2:
  // Z (x) X (x) T'(X) (x) Z-tail
  for (int c = 2; c < cols - 1; c += 2) {
    for (int i = 0; i < rows; ++i) {
      PauliProduct g = single_at(i, c - 1, rows, total, PauliLetter::Z);
      g = multiply(g, single_at(i, c, rows, total, PauliLetter::X));
      g = multiply(g, on_column(translate(tpx0, i), c + 1, rows, total));
      for (int k : xsup_x) {
        g = multiply(g, single_at(((i + k) % n + n) % n, c + 2, rows, total,
                                  PauliLetter::Z));
      }
      lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
      lat.roles.push_back(GeneratorRole::Bulk);
      lat.anchor_rows.push_back(i);
      lat.anchor_cols.push_back(c - 1);
    }
  }
  for (int i = 0; i < rows; ++i) {
    PauliProduct g = single_at(i, cols - 2, rows, total, PauliLetter::Z);
    g = multiply(g, single_at(i, cols - 1, rows, total, PauliLetter::X));
    lat.code.stabilizers.push_back(with_exact_sign(evolved, g));
    lat.roles.push_back(GeneratorRole::RightBoundary);
    lat.anchor_rows.push_back(i);
    lat.anchor_cols.push_back(cols - 2);
  }
  return finish(std::move(lat));
}

namespace {

void apply_column_step(DenseState& state, const Cqca& rule,
                       const DenseUnitary& rule_unitary, int rows, int col) {
  (void)rule;
  for (int i = 0; i < rows; ++i) {
    apply_cz(state, col * rows + i, (col + 1) * rows + i);
  }
  for (int i = 0; i < rows; ++i) {
    apply_h(state, (col + 1) * rows + i);
  }
  std::vector<int> next(rows);
  for (int i = 0; i < rows; ++i) {
    next[i] = (col + 1) * rows + i;
  }
  apply_unitary(state, rule_unitary, next);
}

}  // namespace

DenseState build_dense_resource(const Cqca& t, int n, int depth,
                                bool extended) {
  require_valid(t, n);
  const int cols = extended ? 2 * depth + 1 : depth + 1;
  if (n * cols > kDenseQubitCap) {
    throw GeometryError("lattice exceeds the dense register cap");
  }
  DenseState state = prepare_plus(n * cols);
  if (!extended) {
    DenseUnitary u = dense_unitary(CqcaOnRing(t, n));
    for (int c = 0; c + 1 < cols; ++c) {
      apply_column_step(state, t, u, n, c);
    }
    return state;
  }
  Cqca tp = hadamard_compose(t);
  const Cqca& t1 = builtin_rule("hadamard");
  DenseUnitary up = dense_unitary(CqcaOnRing(tp, n));
  DenseUnitary uh = dense_unitary(CqcaOnRing(t1, n));
  for (int c = 0; c + 1 < cols; ++c) {
    if (c % 2 == 0) {
      apply_column_step(state, tp, up, n, c);
    } else {
      apply_column_step(state, t1, uh, n, c);
    }
  }
  return state;
}

std::vector<PauliProduct> evolved_lattice_stabilizers(const Cqca& t, int n,
                                                      int depth,
                                                      bool extended) {
  require_valid(t, n);
  if (!extended) {
    std::vector<const Cqca*> steps(depth, &t);
    return evolve_columns(steps, n, depth + 1);
  }
  Cqca tp = hadamard_compose(t);
  const Cqca& t1 = builtin_rule("hadamard");
  std::vector<const Cqca*> steps;
  for (int c = 0; c < 2 * depth; ++c) {
    steps.push_back(c % 2 == 0 ? &tp : &t1);
  }
  return evolve_columns(steps, n, 2 * depth + 1);
}

std::optional<std::vector<std::pair<int, int>>> recognize_graph_state(
    const LatticeCode& lat) {
  const int total = lat.rows * lat.cols;
  if (static_cast<int>(lat.code.stabilizers.size()) != total) {
    return std::nullopt;
  }
  std::vector<PauliProduct> rows = lat.code.stabilizers;
  // Gauss-Jordan with X-part pivots only.
  std::vector<int> pivot_row(total, -1);
  size_t r = 0;
  for (int q = 0; q < total && r < rows.size(); ++q) {
    size_t pivot = r;
    while (pivot < rows.size() && !rows[pivot].x_bits.get(q)) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      continue;
    }
    std::swap(rows[r], rows[pivot]);
    for (size_t k = 0; k < rows.size(); ++k) {
      if (k != r && rows[k].x_bits.get(q)) {
        rows[k] = multiply(rows[k], rows[r]);
      }
    }
    pivot_row[q] = static_cast<int>(r);
    ++r;
  }
  if (static_cast<int>(r) != total) {
    return std::nullopt;  // X-part not of full rank
  }
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < total; ++v) {
    const PauliProduct& g = rows[pivot_row[v]];
    if (g.phase_exp != 0) {
      return std::nullopt;  // sign cannot be normalized by recombination
    }
    if (g.z_bits.get(v)) {
      return std::nullopt;  // a Y letter on the vertex itself
    }
    for (int u = 0; u < total; ++u) {
      if (g.z_bits.get(u) && u > v) {
        edges.emplace_back(v, u);
      }
      // commutation of the generators forces the adjacency to be symmetric
    }
  }
  return edges;
}

PauliProduct resource_mbqc_correction(const LatticeCode& lat, int row,
                                      int col) {
  const int depth = lat.cols - 1;
  if (row < 0 || row >= lat.rows || col < 0 || col >= depth) {
    throw GeometryError("correction site outside the measured region");
  }
  const GeneratorRole wanted =
      col == depth - 1 ? GeneratorRole::RightBoundary : GeneratorRole::Bulk;
  for (size_t k = 0; k < lat.code.stabilizers.size(); ++k) {
    if (lat.roles[k] != wanted || lat.anchor_rows[k] != row ||
        lat.anchor_cols[k] != col) {
      continue;
    }
    PauliProduct correction =
        multiply(lat.code.stabilizers[k],
                 PauliProduct::single(lat.rows * lat.cols,
                                      lat.qubit_index(row, col),
                                      PauliLetter::Z));
    for (int c = 0; c <= col; ++c) {
      for (int i = 0; i < lat.rows; ++i) {
        if (correction.letter_at(lat.qubit_index(i, c)) != PauliLetter::I) {
          throw ValidationError(
              "correction generator leaks onto measured columns");
        }
      }
    }
    return correction;
  }
  throw GeometryError("no complementing generator anchored at this site");
}

DenseState run_columnwise_mbqc(const Cqca& t, int n, int depth,
                               const std::vector<std::vector<double>>& angles,
                               const std::vector<std::vector<int>>& outcomes) {
  if (static_cast<int>(angles.size()) != depth ||
      static_cast<int>(outcomes.size()) != depth) {
    throw DimensionError("angle/outcome grids must have depth rows");
  }
  LatticeCode lat = build_theorem3(t, n, depth);
  DenseState state = build_dense_resource(t, n, depth, false);
  Rng rng(0);
  const int total = n * (depth + 1);
  for (int c = 0; c < depth; ++c) {
    for (int i = 0; i < n; ++i) {
      apply_pauli_rotation(
          state,
          PauliProduct::single(total, lat.qubit_index(i, c), PauliLetter::Z),
          angles[c][i]);
    }
    for (int i = 0; i < n; ++i) {
      int q = lat.qubit_index(i, c);
      measure_projective(state, PauliProduct::single(total, q, PauliLetter::X),
                         outcomes[c][i], rng);
      if (outcomes[c][i] == 1) {
        // return the measured qubit to |+> for the final trace
        apply_pauli(state, PauliProduct::single(total, q, PauliLetter::Z));
        apply_pauli(state, resource_mbqc_correction(lat, i, c));
      }
    }
  }
  trace_out_low_plus(state, n * depth);
  return state;
}

std::string ascii_lattice(const LatticeCode& lat) {
  static const char* role_names[] = {"left", "bulk", "right"};
  std::ostringstream out;
  for (size_t k = 0; k < lat.code.stabilizers.size(); ++k) {
    const PauliProduct& g = lat.code.stabilizers[k];
    out << "generator " << (k + 1) << " ("
        << role_names[static_cast<int>(lat.roles[k])] << ", row "
        << (lat.anchor_rows[k] + 1) << ", sign "
        << (g.phase_exp == 0 ? "+" : "-") << ")\n";
    for (int i = 0; i < lat.rows; ++i) {
      for (int c = 0; c < lat.cols; ++c) {
        PauliLetter l = g.letter_at(lat.qubit_index(i, c));
        out << (l == PauliLetter::I ? '.' : letter_char(l));
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string to_dot(const std::vector<std::pair<int, int>>& edges, int rows,
                   int cols) {
  (void)cols;
  std::ostringstream out;
  out << "graph resource {\n";
  for (const auto& [a, b] : edges) {
    out << "  r" << (a % rows + 1) << "c" << (a / rows + 1) << " -- r"
        << (b % rows + 1) << "c" << (b / rows + 1) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace caqc
