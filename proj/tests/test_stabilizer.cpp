#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "caqc/dense.hpp"
#include "caqc/stabilizer.hpp"
#include "oracle.hpp"

using namespace caqc;

namespace {

PauliProduct from_letters(const std::string& letters, int phase = 0) {
  int n = static_cast<int>(letters.size());
  PauliProduct p(n, BitVec(n), BitVec(n), phase);
  for (int i = 0; i < n; ++i) {
    p.set_letter(i, letter_from_char(letters[i]));
  }
  return p;
}

GateCircuitMap random_circuit(Rng& rng, int n, int depth) {
  std::vector<CliffordGate> gates;
  for (int k = 0; k < depth; ++k) {
    switch (rng.below(3)) {
      case 0:
        gates.push_back({CliffordGate::Kind::H, static_cast<int>(rng.below(n)), 0});
        break;
      case 1:
        gates.push_back({CliffordGate::Kind::S, static_cast<int>(rng.below(n)), 0});
        break;
      default: {
        int a = static_cast<int>(rng.below(n));
        int b = (a + 1 + static_cast<int>(rng.below(n - 1))) % n;
        gates.push_back({CliffordGate::Kind::CZ, a, b});
      }
    }
  }
  return GateCircuitMap(n, gates);
}

oracle::Mat projector_of(const std::vector<PauliProduct>& gens, int n) {
  oracle::Mat p = oracle::Mat::eye(1 << n);
  for (const PauliProduct& s : gens) {
    oracle::Mat half = oracle::add(oracle::Mat::eye(1 << n),
                                   oracle::pauli_matrix(s), 0.5, 0.5);
    p = oracle::matmul(p, half);
  }
  return p;
}

double trace_real(const oracle::Mat& m) {
  double t = 0;
  for (int i = 0; i < m.dim; ++i) {
    t += m.at(i, i).real();
  }
  return t;
}

}  // namespace

TEST_CASE("graph_state_code") {
  StabilizerCode two = graph_state_code({{0, 1}}, 2);
  REQUIRE(two.stabilizers.size() == 2);
  CHECK(two.stabilizers[0] == from_letters("XZ"));
  CHECK(two.stabilizers[1] == from_letters("ZX"));
  CHECK(two.logical_pairs.empty());

  StabilizerCode empty = graph_state_code({}, 3);
  for (int v = 0; v < 3; ++v) {
    CHECK(empty.stabilizers[v] == PauliProduct::single(3, v, PauliLetter::X));
  }

  // 6-qubit ring graph, generators verified on the dense state
  std::vector<std::pair<int, int>> ring;
  for (int v = 0; v < 6; ++v) {
    ring.emplace_back(v, (v + 1) % 6);
  }
  StabilizerCode c6 = graph_state_code(ring, 6);
  DenseState g = prepare_plus(6);
  for (const auto& [a, b] : ring) {
    apply_cz(g, a, b);
  }
  for (const PauliProduct& s : c6.stabilizers) {
    CHECK(expectation(g, s) == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(graph_state_code({{0, 0}}, 2), FormatError);
  CHECK_THROWS_AS(graph_state_code({{0, 1}, {1, 0}}, 2), FormatError);
  CHECK_THROWS_AS(graph_state_code({{0, 5}}, 2), FormatError);
}

TEST_CASE("conjugate: encoding the 2-qubit input into the graph code") {
  StabilizerCode in;
  in.n_qubits = 2;
  in.stabilizers = {from_letters("IX")};
  in.logical_pairs = {{from_letters("XI"), from_letters("ZI")}};
  in.check_invariants();

  CzLayerMap cz(2, {{0, 1}});
  StabilizerCode enc = conjugate(in, cz);
  CHECK(enc.stabilizers[0] == from_letters("ZX"));
  CHECK(enc.logical_pairs[0].x_bar == from_letters("XZ"));
  CHECK(enc.logical_pairs[0].z_bar == from_letters("ZI"));

  IdentityMap id(2);
  StabilizerCode same = conjugate(enc, id);
  CHECK(codes_equal(same, enc));
  CHECK(same.logical_pairs[0].x_bar == enc.logical_pairs[0].x_bar);
}

TEST_CASE("conjugation matches dense-oracle matrix conjugation on n=3") {
  Rng rng(57);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<CliffordGate> gates;
    for (int k = 0; k < 6; ++k) {
      int a = static_cast<int>(rng.below(3));
      int b = (a + 1 + static_cast<int>(rng.below(2))) % 3;
      gates.push_back({CliffordGate::Kind::CZ, a, b});
    }
    GateCircuitMap circuit(3, gates);
    StabilizerCode code = graph_state_code({{0, 1}, {1, 2}}, 3);
    StabilizerCode conj = conjugate(code, circuit);

    oracle::Mat mu = oracle::Mat::zero(8);
    DenseUnitary u = dense_unitary(circuit);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        mu.at(r, c) = u.at(r, c);
      }
    }
    for (size_t k = 0; k < code.stabilizers.size(); ++k) {
      oracle::Mat expected = oracle::matmul(
          mu, oracle::matmul(oracle::pauli_matrix(code.stabilizers[k]),
                             oracle::dagger(mu)));
      CHECK(oracle::max_abs_diff(expected,
                                 oracle::pauli_matrix(conj.stabilizers[k])) <
            1e-9);
    }
  }
}

TEST_CASE("measure_pauli: the teleportation update") {
  StabilizerCode enc;
  enc.n_qubits = 2;
  enc.stabilizers = {from_letters("ZX")};
  enc.logical_pairs = {{from_letters("XZ"), from_letters("ZI")}};
  enc.check_invariants();

  Rng rng(3);
  auto [out, rec] = measure_pauli(enc, from_letters("XI"), 0, rng);
  CHECK_FALSE(rec.deterministic);
  CHECK(rec.outcome == 0);
  REQUIRE(out.stabilizers.size() == 1);
  CHECK(out.stabilizers[0] == from_letters("XI"));
  // the logical classes now live on qubit 2
  CHECK(same_logical_class(out, out.logical_pairs[0].x_bar, from_letters("IZ")));
  CHECK(same_logical_class(out, out.logical_pairs[0].z_bar, from_letters("IX")));

  // measuring a stabilizer is deterministic and leaves the code unchanged
  auto [same, rec2] = measure_pauli(out, from_letters("XI"), std::nullopt, rng);
  CHECK(rec2.deterministic);
  CHECK(rec2.outcome == 0);
  CHECK(codes_equal(same, out));

  // a negative stabilizer forces outcome 1
  StabilizerCode minus;
  minus.n_qubits = 1;
  minus.stabilizers = {from_letters("X", 2)};
  auto [unused, rec3] =
      measure_pauli(minus, from_letters("X"), std::nullopt, rng);
  (void)unused;
  CHECK(rec3.deterministic);
  CHECK(rec3.outcome == 1);
  CHECK_THROWS_AS(measure_pauli(minus, from_letters("X"), 0, rng),
                  ImpossibleOutcomeError);
}

TEST_CASE("measurement update matches the dense projector on random codes") {
  Rng rng(91);
  const int n = 4;
  for (int trial = 0; trial < 25; ++trial) {
    int g = 2 + static_cast<int>(rng.below(3));  // 2..4 generators
    StabilizerCode base;
    base.n_qubits = n;
    for (int i = 0; i < g; ++i) {
      base.stabilizers.push_back(PauliProduct::single(n, i, PauliLetter::Z));
    }
    for (int i = g; i < n; ++i) {
      base.logical_pairs.push_back({PauliProduct::single(n, i, PauliLetter::X),
                                    PauliProduct::single(n, i, PauliLetter::Z)});
    }
    GateCircuitMap circuit = random_circuit(rng, n, 14);
    StabilizerCode code = conjugate(base, circuit);

    PauliProduct obs = PauliProduct::identity(n);
    while (obs.is_identity_bits()) {
      for (int i = 0; i < n; ++i) {
        obs.set_letter(i, static_cast<PauliLetter>(rng.below(4)));
      }
    }
    obs.phase_exp = rng.bit() ? 2 : 0;

    auto [after, rec] = measure_pauli(code, obs, std::nullopt, rng);

    oracle::Mat pi = projector_of(code.stabilizers, n);
    PauliProduct signed_obs = obs;
    signed_obs.phase_exp = (signed_obs.phase_exp + 2 * rec.outcome) % 4;
    oracle::Mat po = oracle::add(oracle::Mat::eye(1 << n),
                                 oracle::pauli_matrix(signed_obs), 0.5, 0.5);
    oracle::Mat proj = oracle::matmul(po, oracle::matmul(pi, po));
    oracle::Mat new_pi = projector_of(after.stabilizers, n);
    double scale = trace_real(new_pi) / trace_real(proj);
    for (auto& v : proj.a) {
      v *= scale;
    }
    CHECK(oracle::max_abs_diff(proj, new_pi) < 1e-9);
  }
}

TEST_CASE("codes_equal") {
  StabilizerCode a;
  a.n_qubits = 2;
  a.stabilizers = {from_letters("XZ"), from_letters("ZX")};

  // second generator replaced by the exact product (X1 Z2)(Z1 X2)
  StabilizerCode b;
  b.n_qubits = 2;
  b.stabilizers = {from_letters("XZ"),
                   multiply(from_letters("XZ"), from_letters("ZX"))};
  CHECK(codes_equal(a, b));

  StabilizerCode plus;
  plus.n_qubits = 1;
  plus.stabilizers = {from_letters("X")};
  StabilizerCode minus;
  minus.n_qubits = 1;
  minus.stabilizers = {from_letters("X", 2)};
  CHECK_FALSE(codes_equal(plus, minus));

  // randomized: canonical-form equality agrees with dense projector equality
  Rng rng(19);
  const int n = 3;
  for (int trial = 0; trial < 15; ++trial) {
    StabilizerCode base;
    base.n_qubits = n;
    for (int i = 0; i < n; ++i) {
      base.stabilizers.push_back(PauliProduct::single(n, i, PauliLetter::Z));
    }
    StabilizerCode c1 = conjugate(base, random_circuit(rng, n, 10));
    StabilizerCode c2 = conjugate(base, random_circuit(rng, n, 10));
    bool equal_groups = codes_equal(c1, c2);
    oracle::Mat p1 = projector_of(c1.stabilizers, n);
    oracle::Mat p2 = projector_of(c2.stabilizers, n);
    CHECK(equal_groups == (oracle::max_abs_diff(p1, p2) < 1e-9));
    // mixing generators never changes the group
    StabilizerCode mixed = c1;
    mixed.stabilizers[0] = multiply(c1.stabilizers[0], c1.stabilizers[1]);
    CHECK(codes_equal(mixed, c1));
  }
}

TEST_CASE("group membership with signs") {
  std::vector<PauliProduct> gens = {from_letters("XZ"), from_letters("ZX")};
  CHECK(group_phase_of(gens, from_letters("XZ")) == 0);
  PauliProduct yy = multiply(from_letters("XZ"), from_letters("ZX"));
  CHECK(group_phase_of(gens, yy) == 0);
  PauliProduct neg = yy;
  neg.phase_exp = (neg.phase_exp + 2) % 4;
  CHECK(group_phase_of(gens, neg) == 2);
  CHECK_FALSE(group_phase_of(gens, from_letters("ZI")).has_value());
}

TEST_CASE("invariants catch malformed codes") {
  StabilizerCode bad;
  bad.n_qubits = 2;
  bad.stabilizers = {from_letters("XI"), from_letters("ZI")};
  CHECK_THROWS_AS(bad.check_invariants(), ValidationError);

  StabilizerCode dep;
  dep.n_qubits = 2;
  dep.stabilizers = {from_letters("XI"), from_letters("XI")};
  CHECK_THROWS_AS(dep.check_invariants(), ValidationError);

  StabilizerCode neg;
  neg.n_qubits = 2;
  neg.stabilizers = {from_letters("XI"), from_letters("XI", 2)};
  CHECK_THROWS_AS(neg.check_invariants(), ValidationError);

  StabilizerCode pairless;
  pairless.n_qubits = 2;
  pairless.logical_pairs = {{from_letters("XI"), from_letters("IZ")}};
  CHECK_THROWS_AS(pairless.check_invariants(), ValidationError);
}

TEST_CASE("drop_qubits removes a measured-out register") {
  StabilizerCode code;
  code.n_qubits = 4;
  code.stabilizers = {from_letters("XIII"), from_letters("IXII")};
  code.logical_pairs = {
      {from_letters("XIXI"), from_letters("IIZI")},
      {from_letters("IXIX"), from_letters("IIIZ")},
  };
  code.check_invariants();
  StabilizerCode out = drop_qubits(code, {0, 1});
  CHECK(out.n_qubits == 2);
  CHECK(out.stabilizers.empty());
  CHECK(out.logical_pairs[0].x_bar == from_letters("XI"));
  CHECK(out.logical_pairs[1].x_bar == from_letters("IX"));

  StabilizerCode ent;
  ent.n_qubits = 2;
  ent.stabilizers = {from_letters("XI")};
  ent.logical_pairs = {{from_letters("ZX"), from_letters("IZ")}};
  CHECK_THROWS(drop_qubits(ent, {0}));
}

TEST_CASE("code text and JSON output") {
  StabilizerCode code = graph_state_code({{0, 1}}, 2);
  std::string text = to_text(code);
  CHECK(text.find("+X1 Z2 @N=2") != std::string::npos);
  nlohmann::json j = to_json(code);
  CHECK(j["n"] == 2);
  CHECK(j["stabilizers"].size() == 2);
}
