#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "caqc/mbqc.hpp"
#include "oracle.hpp"

using namespace caqc;

namespace {

std::vector<std::vector<double>> random_angles(Rng& rng, int cells, int n) {
  std::vector<std::vector<double>> grid(cells, std::vector<double>(n, 0));
  for (auto& row : grid) {
    for (double& a : row) {
      a = rng.uniform(-M_PI, M_PI);
    }
  }
  return grid;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& grid) {
  std::vector<double> out;
  for (const auto& row : grid) {
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

PauliProduct embed_at(const PauliProduct& p, int offset, int total) {
  PauliProduct out = PauliProduct::identity(total);
  out.phase_exp = p.phase_exp;
  for (int i = 0; i < p.n_qubits; ++i) {
    if (p.letter_at(i) != PauliLetter::I) {
      out.set_letter(offset + i, p.letter_at(i));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("entangling map image rules") {
  const Cqca& tc = builtin_rule("cluster");
  const int n = 4;
  UTMap ut = build_ut(tc, n);

  for (int i = 0; i < n; ++i) {
    // Z_i^in -> Z_i^in for every rule
    CHECK(ut.image_z(i) == PauliProduct::single(2 * n, i, PauliLetter::Z));
    // Z_i^out -> T(X_i)^out
    PauliProduct expected =
        embed_at(apply(tc, PauliProduct::single(n, i, PauliLetter::X)), n, 2 * n);
    CHECK(ut.image_z(n + i) == expected);
    // X_i^in -> X_i^in (x) T(X_i)^out
    PauliProduct xin = multiply(
        PauliProduct::single(2 * n, i, PauliLetter::X),
        embed_at(apply(tc, PauliProduct::single(n, i, PauliLetter::X)), n, 2 * n));
    CHECK(ut.image_x(i) == xin);
    // X_i^out -> Z_i^in (x) T(Z_i)^out
    PauliProduct xout = multiply(
        PauliProduct::single(2 * n, i, PauliLetter::Z),
        embed_at(apply(tc, PauliProduct::single(n, i, PauliLetter::Z)), n, 2 * n));
    CHECK(ut.image_x(n + i) == xout);
  }

  for (const char* name : {"periodic-cluster", "fractal-cluster", "identity"}) {
    UTMap m = build_ut(builtin_rule(name), 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(m.image_z(i) == PauliProduct::single(6, i, PauliLetter::Z));
    }
  }
}

TEST_CASE("entangling map is a dense Clifford on n=3") {
  const int n = 3;
  UTMap ut = build_ut(builtin_rule("cluster"), n);
  DenseUnitary u = dense_unitary(ut);
  oracle::Mat mu = oracle::Mat::zero(1 << (2 * n));
  for (int r = 0; r < mu.dim; ++r) {
    for (int c = 0; c < mu.dim; ++c) {
      mu.at(r, c) = u.at(r, c);
    }
  }
  CHECK(oracle::max_abs_diff(oracle::matmul(oracle::dagger(mu), mu),
                             oracle::Mat::eye(mu.dim)) < 1e-9);
  // conjugation sweep over random 2-local generators
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    PauliProduct p = PauliProduct::identity(2 * n);
    p.set_letter(static_cast<int>(rng.below(2 * n)),
                 static_cast<PauliLetter>(1 + rng.below(3)));
    p.set_letter(static_cast<int>(rng.below(2 * n)),
                 static_cast<PauliLetter>(1 + rng.below(3)));
    oracle::Mat lhs = oracle::matmul(
        mu, oracle::matmul(oracle::pauli_matrix(p), oracle::dagger(mu)));
    CHECK(oracle::max_abs_diff(lhs,
                               oracle::pauli_matrix(conjugate_pauli(ut, p))) <
          1e-9);
  }
}

TEST_CASE("hadamard_compose") {
  Cqca tp = hadamard_compose(builtin_rule("periodic-cluster"));
  // T_1 * periodic rule = the cluster rule
  const Cqca& tc = builtin_rule("cluster");
  CHECK(tp.x_image == tc.x_image);
  CHECK(tp.z_image == tc.z_image);

  // composition agrees with applying T then T_1 on the ring
  const Cqca& tf = builtin_rule("fractal-cluster");
  Cqca tfp = hadamard_compose(tf);
  const Cqca& t1 = builtin_rule("hadamard");
  for (int i = 0; i < 5; ++i) {
    for (PauliLetter l : {PauliLetter::X, PauliLetter::Z}) {
      PauliProduct p = PauliProduct::single(5, i, l);
      CHECK(apply(tfp, p) == apply(t1, apply(tf, p)));
    }
  }
}

TEST_CASE("zero angles and a whole block act as the identity") {
  for (const char* name : {"cluster", "periodic-cluster"}) {
    const Cqca& t = builtin_rule(name);
    const int n = 2;
    int l = period(t, n);
    std::vector<std::vector<double>> zeros(l, std::vector<double>(n, 0));
    MbqcOptions opt;
    opt.seed = 11;
    MbqcRun run = run_algorithm1(t, n, l, zeros, opt);
    CHECK(fidelity(run.final_state, prepare_plus(n)) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("corrected runs implement the compiled program") {
  struct Config {
    const char* rule;
    int n;
    int mult;  // depth = mult * L
    bool extended;
  };
  for (Config cfg : {Config{"cluster", 2, 1, false},
                     Config{"cluster", 2, 2, false},
                     Config{"cluster", 3, 1, false},
                     Config{"fractal-cluster", 4, 1, false},
                     Config{"periodic-cluster", 2, 1, true}}) {
    const Cqca& t = builtin_rule(cfg.rule);
    int l = period(t, cfg.n);
    int depth = cfg.mult * l;
    RotationLayerProgram prog = theorem2_program(t, cfg.n, depth, cfg.extended);
    Rng rng(42);
    for (int trial = 0; trial < 3; ++trial) {
      int cells = cfg.extended ? 2 * depth : depth;
      auto angles = random_angles(rng, cells, cfg.n);
      for (uint64_t seed : {1ull, 2ull}) {
        MbqcOptions opt;
        opt.seed = seed;
        opt.extended = cfg.extended;
        MbqcRun run = run_algorithm1(t, cfg.n, depth, angles, opt);
        DenseState ref =
            evaluate_program(prog, flatten(angles), prepare_plus(cfg.n));
        CHECK(fidelity(run.final_state, ref) >= 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("corrected runs are outcome-independent") {
  const Cqca& t = builtin_rule("cluster");
  Rng rng(9);
  auto angles = random_angles(rng, 2, 2);
  MbqcOptions opt;
  opt.seed = 100;
  MbqcRun first = run_algorithm1(t, 2, 2, angles, opt);
  for (uint64_t seed = 101; seed <= 110; ++seed) {
    opt.seed = seed;
    MbqcRun other = run_algorithm1(t, 2, 2, angles, opt);
    CHECK(fidelity(first.final_state, other.final_state) >= 1.0 - 1e-9);
  }
}

TEST_CASE("forced all-plus outcomes make corrected and uncorrected agree") {
  const Cqca& t = builtin_rule("cluster");
  Rng rng(21);
  auto angles = random_angles(rng, 2, 2);
  MbqcOptions opt;
  opt.forced_outcomes = std::vector<std::vector<int>>(2, std::vector<int>(2, 0));
  MbqcRun corrected = run_algorithm1(t, 2, 2, angles, opt);
  opt.corrected = false;
  MbqcRun uncorrected = run_algorithm1(t, 2, 2, angles, opt);
  CHECK(fidelity(corrected.final_state, uncorrected.final_state) >= 1.0 - 1e-9);
}

TEST_CASE("folded rotations reproduce the explicit-rotation run") {
  const Cqca& t = builtin_rule("cluster");
  Rng rng(33);
  auto angles = random_angles(rng, 4, 2);
  auto forced = std::vector<std::vector<int>>{{1, 0}, {0, 1}, {1, 1}, {0, 0}};
  MbqcOptions opt;
  opt.forced_outcomes = forced;
  MbqcRun plain = run_algorithm1(t, 2, 4, angles, opt);
  opt.fold_rotations = true;
  MbqcRun folded = run_algorithm1(t, 2, 4, angles, opt);
  CHECK(fidelity(plain.final_state, folded.final_state) >= 1.0 - 1e-12);
}

TEST_CASE("theorem2_program") {
  const Cqca& t = builtin_rule("cluster");
  int l = period(t, 3);
  RotationLayerProgram prog = theorem2_program(t, 3, l);
  RotationLayerProgram block = compile_block(t, 3, 1);
  REQUIRE(prog.rotations.size() == block.rotations.size());
  for (size_t k = 0; k < prog.rotations.size(); ++k) {
    CHECK(prog.rotations[k].generator == block.rotations[k].generator);
    CHECK(prog.rotations[k].param == block.rotations[k].param);
  }
  // layer j = L carries the exponent [L - 0 + 1]_L = 1: generators T(Z_i)
  for (const Rotation& rot : prog.rotations) {
    if (rot.layer_j == l) {
      CHECK(rot.generator ==
            apply(t, PauliProduct::single(3, rot.site_i - 1, PauliLetter::Z)));
    }
  }
  CHECK_THROWS_AS(theorem2_program(t, 3, l + 1), GeometryError);
}

TEST_CASE("byproduct commutation reconstructs uncorrected runs") {
  // empty ledger: nothing changes
  const Cqca& t = builtin_rule("cluster");
  RotationLayerProgram prog = theorem2_program(t, 2, 2);
  ByproductLedger empty;
  CommutedByproducts cb = commute_byproducts(empty, prog);
  CHECK(cb.tail == PauliProduct::identity(2));
  CHECK(cb.sign_flips.empty());

  // a single byproduct: tail is that byproduct
  ByproductLedger single;
  single.entries.push_back({prog.rotations[0].generator, 0, 0});
  cb = commute_byproducts(single, prog);
  CHECK(cb.tail == prog.rotations[0].generator);

  // full reconstruction at random outcomes, plain and extended
  struct Config {
    const char* rule;
    int n;
    bool extended;
  };
  for (Config cfg : {Config{"cluster", 2, false}, Config{"cluster", 3, false},
                     Config{"fractal-cluster", 4, false},
                     Config{"periodic-cluster", 2, true}}) {
    const Cqca& rule = builtin_rule(cfg.rule);
    int l = period(rule, cfg.n);
    RotationLayerProgram program =
        theorem2_program(rule, cfg.n, l, cfg.extended);
    Rng rng(7);
    int cells = cfg.extended ? 2 * l : l;
    for (uint64_t seed = 0; seed < 4; ++seed) {
      auto angles = random_angles(rng, cells, cfg.n);
      MbqcOptions opt;
      opt.corrected = false;
      opt.extended = cfg.extended;
      opt.seed = seed;
      MbqcRun run = run_algorithm1(rule, cfg.n, l, angles, opt);
      ByproductLedger ledger = make_ledger(run, program);
      CommutedByproducts out = commute_byproducts(ledger, program);
      DenseState rebuilt =
          evaluate_program(out.flipped, flatten(angles), prepare_plus(cfg.n));
      apply_pauli(rebuilt, out.tail);
      CHECK(fidelity(rebuilt, run.final_state) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("observable and rotation transport through one cell") {
  const Cqca& t = builtin_rule("cluster");
  const int n = 3;
  std::vector<std::vector<double>> zeros(1, std::vector<double>(n, 0));
  MbqcOptions opt;
  opt.forced_outcomes = std::vector<std::vector<int>>(1, std::vector<int>(n, 0));

  // <O>_in = <T(O)>_out for a non-trivial input state
  DenseState in = prepare_plus(n);
  apply_pauli_rotation(in, PauliProduct::single(n, 0, PauliLetter::Z), 0.7);
  apply_pauli_rotation(in, PauliProduct::single(n, 1, PauliLetter::X), -0.4);
  opt.initial = in;
  MbqcRun run = run_algorithm1(t, n, 1, zeros, opt);
  for (int i = 0; i < n; ++i) {
    for (PauliLetter l : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
      PauliProduct o = PauliProduct::single(n, i, l);
      CHECK(expectation(in, o) ==
            doctest::Approx(expectation(run.final_state, apply(t, o)))
                .epsilon(1e-9));
    }
  }

  // inserting exp(i theta Z_i) before a zero-angle cell equals inserting
  // exp(i theta T(Z_i)) after it
  double theta = 0.9;
  std::vector<std::vector<double>> rotated(1, std::vector<double>(n, 0));
  rotated[0][1] = theta;
  opt.initial = prepare_plus(n);
  MbqcRun with_rot = run_algorithm1(t, n, 1, rotated, opt);
  MbqcRun without = run_algorithm1(t, n, 1, zeros, opt);
  DenseState after = without.final_state;
  apply_pauli_rotation(after, apply(t, PauliProduct::single(n, 1, PauliLetter::Z)),
                       theta);
  CHECK(fidelity(with_rot.final_state, after) >= 1.0 - 1e-9);
}

TEST_CASE("outcomes are empirically uniform") {
  const Cqca& t = builtin_rule("cluster");
  int zeros_count = 0;
  int total = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    MbqcOptions opt;
    opt.seed = seed;
    std::vector<std::vector<double>> zeros(2, std::vector<double>(2, 0));
    MbqcRun run = run_algorithm1(t, 2, 2, zeros, opt);
    for (const auto& row : run.outcomes) {
      for (int m : row) {
        zeros_count += m == 0;
        ++total;
      }
    }
  }
  double sigma = std::sqrt(total * 0.25);
  CHECK(std::abs(zeros_count - total / 2.0) < 3 * sigma);
}

TEST_CASE("heisenberg trace transports the logical pairs") {
  for (const char* name : {"cluster", "periodic-cluster"}) {
    const Cqca& t = builtin_rule(name);
    const int n = 3;
    HeisenbergReport rep = heisenberg_trace(t, n);
    // the intermediate stabilizers are Z_i^in (x) T(Z_i)^out
    StabilizerCode expected;
    expected.n_qubits = 2 * n;
    for (int i = 0; i < n; ++i) {
      expected.stabilizers.push_back(multiply(
          PauliProduct::single(2 * n, i, PauliLetter::Z),
          embed_at(apply(t, PauliProduct::single(n, i, PauliLetter::Z)), n,
                   2 * n)));
    }
    CHECK(codes_equal(StabilizerCode{2 * n, rep.after_ut.stabilizers, {}},
                      expected));
    for (int i = 0; i < n; ++i) {
      PauliProduct xbar = multiply(
          PauliProduct::single(2 * n, i, PauliLetter::X),
          embed_at(apply(t, PauliProduct::single(n, i, PauliLetter::X)), n,
                   2 * n));
      CHECK(rep.after_ut.logical_pairs[i].x_bar == xbar);
      CHECK(rep.after_ut.logical_pairs[i].z_bar ==
            PauliProduct::single(2 * n, i, PauliLetter::Z));
    }
    CHECK(rep.matches_rule);
  }
  // cross-module comparison for the fractal rule
  HeisenbergReport rep = heisenberg_trace(builtin_rule("fractal-cluster"), 4);
  CHECK(rep.matches_rule);
  for (int i = 0; i < 4; ++i) {
    CHECK(rep.final_code.logical_pairs[i].z_bar ==
          apply(builtin_rule("fractal-cluster"),
                PauliProduct::single(4, i, PauliLetter::Z)));
  }
}

TEST_CASE("shape and precondition errors") {
  const Cqca& t = builtin_rule("cluster");
  MbqcOptions opt;
  CHECK_THROWS_AS(run_algorithm1(t, 2, 2, {{0.0, 0.0}}, opt), DimensionError);
  CHECK_THROWS_AS(run_algorithm1(t, 13, 1,
                                 std::vector<std::vector<double>>(
                                     1, std::vector<double>(13, 0)),
                                 opt),
                  GeometryError);
}
