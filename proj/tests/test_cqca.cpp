#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "caqc/cqca.hpp"
#include "caqc/dense.hpp"
#include "caqc/rng.hpp"
#include "oracle.hpp"

using namespace caqc;

namespace {

PauliProduct word(int n, std::initializer_list<std::pair<int, PauliLetter>> letters,
                  int phase = 0) {
  PauliProduct p = PauliProduct::identity(n);
  for (const auto& [site, l] : letters) {
    p.set_letter(((site % n) + n) % n, l);
  }
  p.phase_exp = phase;
  return p;
}

Cqca rule_from(std::initializer_list<std::pair<int, PauliLetter>> x_letters,
               std::initializer_list<std::pair<int, PauliLetter>> z_letters) {
  Cqca t;
  int rx = 0, rz = 0;
  for (const auto& [o, l] : x_letters) {
    t.x_image.letters[o] = l;
    rx = std::max(rx, std::abs(o));
  }
  for (const auto& [o, l] : z_letters) {
    t.z_image.letters[o] = l;
    rz = std::max(rz, std::abs(o));
  }
  t.x_image.radius = rx;
  t.z_image.radius = rz;
  return t;
}

}  // namespace

TEST_CASE("validate accepts the cluster rule and rejects broken ones") {
  CHECK(validate(builtin_rule("cluster"), 5).ok);
  CHECK(validate(builtin_rule("periodic-cluster"), 5).ok);
  CHECK(validate(builtin_rule("fractal-cluster"), 5).ok);
  CHECK(validate(builtin_rule("hadamard"), 3).ok);
  CHECK(validate(builtin_rule("identity"), 3).ok);
  // the wrapped cluster rule stays valid on tiny rings
  CHECK(validate(builtin_rule("cluster"), 2).ok);

  // X -> X, Z -> X: images commute but must anticommute
  Cqca broken = rule_from({{0, PauliLetter::X}}, {{0, PauliLetter::X}});
  ValidationReport rep = validate(broken, 4);
  CHECK_FALSE(rep.ok);
  CHECK(rep.violation.find("anticommute") != std::string::npos);
  CHECK_THROWS_AS(require_valid(broken, 4), ValidationError);

  // asymmetric support is rejected
  Cqca asym = rule_from({{0, PauliLetter::Z}, {1, PauliLetter::X}},
                        {{0, PauliLetter::X}});
  CHECK_FALSE(validate(asym, 5).ok);
}

TEST_CASE("random symmetric rules accepted by validate are dense Cliffords") {
  Rng rng(101);
  const int n = 3;
  int accepted = 0;
  for (int trial = 0; trial < 200 && accepted < 8; ++trial) {
    Cqca t;
    auto random_sym = [&](LocalPauliPattern& pat) {
      pat.letters.clear();
      auto center = static_cast<PauliLetter>(rng.below(4));
      if (center != PauliLetter::I) {
        pat.letters[0] = center;
      }
      auto outer = static_cast<PauliLetter>(rng.below(4));
      if (outer != PauliLetter::I && rng.bit()) {
        pat.letters[-1] = outer;
        pat.letters[1] = outer;
      }
      int r = 0;
      for (const auto& [o, l] : pat.letters) {
        (void)l;
        r = std::max(r, std::abs(o));
      }
      pat.radius = r;
    };
    random_sym(t.x_image);
    random_sym(t.z_image);
    if (!validate(t, n).ok) {
      continue;
    }
    ++accepted;
    CqcaOnRing map(t, n);
    oracle::Mat mu = oracle::Mat::zero(1 << n);
    DenseUnitary u = dense_unitary(map);
    for (int r = 0; r < 1 << n; ++r) {
      for (int c = 0; c < 1 << n; ++c) {
        mu.at(r, c) = u.at(r, c);
      }
    }
    CHECK(oracle::max_abs_diff(oracle::matmul(oracle::dagger(mu), mu),
                               oracle::Mat::eye(1 << n)) < 1e-9);
  }
  CHECK(accepted >= 4);
}

TEST_CASE("apply reproduces the worked images") {
  const Cqca& tc = builtin_rule("cluster");
  // T_c: Z_3 -> X_3 on n=6 (sites are 1-based in the notation)
  CHECK(apply(tc, word(6, {{2, PauliLetter::Z}})) ==
        word(6, {{2, PauliLetter::X}}));
  // glider step: Z_2 X_3 -> Z_3 X_4
  CHECK(apply(tc, word(6, {{1, PauliLetter::Z}, {2, PauliLetter::X}})) ==
        word(6, {{2, PauliLetter::Z}, {3, PauliLetter::X}}));

  // fractal rule applied twice to Z_3 on n=8 spreads to X_1 Z_2 X_3 Z_4 X_5,
  // with the phase checked against dense conjugation below
  const Cqca& tf = builtin_rule("fractal-cluster");
  PauliProduct twice = apply(tf, apply(tf, word(8, {{2, PauliLetter::Z}})));
  PauliProduct expected = word(8, {{0, PauliLetter::X},
                                   {1, PauliLetter::Z},
                                   {2, PauliLetter::X},
                                   {3, PauliLetter::Z},
                                   {4, PauliLetter::X}});
  CHECK(twice.x_bits == expected.x_bits);
  CHECK(twice.z_bits == expected.z_bits);

  oracle::Mat mu = oracle::Mat::zero(1 << 8);
  DenseUnitary u = dense_unitary(CqcaOnRing(tf, 8));
  for (int r = 0; r < 1 << 8; ++r) {
    for (int c = 0; c < 1 << 8; ++c) {
      mu.at(r, c) = u.at(r, c);
    }
  }
  oracle::Mat m = oracle::pauli_matrix(word(8, {{2, PauliLetter::Z}}));
  oracle::Mat mud = oracle::dagger(mu);
  m = oracle::matmul(mu, oracle::matmul(m, mud));
  m = oracle::matmul(mu, oracle::matmul(m, mud));
  CHECK(oracle::max_abs_diff(m, oracle::pauli_matrix(twice)) < 1e-9);
}

TEST_CASE("apply preserves commutation, weight bounds, translation covariance") {
  Rng rng(7);
  for (const char* name : {"cluster", "periodic-cluster", "fractal-cluster"}) {
    const Cqca& t = builtin_rule(name);
    const int n = 7;
    for (int trial = 0; trial < 40; ++trial) {
      PauliProduct p = PauliProduct::identity(n);
      PauliProduct q = PauliProduct::identity(n);
      for (int i = 0; i < n; ++i) {
        p.set_letter(i, static_cast<PauliLetter>(rng.below(4)));
        q.set_letter(i, static_cast<PauliLetter>(rng.below(4)));
      }
      CHECK(commutes(p, q) == commutes(apply(t, p), apply(t, q)));
      CHECK(weight(apply(t, p)) <= (2 * t.radius() + 1) * weight(p));
      int s = static_cast<int>(rng.below(n));
      CHECK(apply(t, translate(p, s)) == translate(apply(t, p), s));
    }
  }
}

TEST_CASE("power_image") {
  const Cqca& tc = builtin_rule("cluster");
  // T_c^2(Z_i) = X_{i-1} Z_i X_{i+1}
  CHECK(power_image(tc, 2, 6, Axis::Z, 2) ==
        word(6, {{1, PauliLetter::X}, {2, PauliLetter::Z}, {3, PauliLetter::X}}));
  CHECK(power_image(tc, 0, 6, Axis::Z, 4) == word(6, {{4, PauliLetter::Z}}));
  CHECK(power_image(tc, 0, 6, Axis::X, 1) == word(6, {{1, PauliLetter::X}}));

  Rng rng(13);
  for (const char* name : {"cluster", "fractal-cluster", "periodic-cluster"}) {
    const Cqca& t = builtin_rule(name);
    for (int trial = 0; trial < 10; ++trial) {
      int k = static_cast<int>(rng.below(9));
      int n = 8;
      int site = static_cast<int>(rng.below(n));
      Axis which = rng.bit() ? Axis::X : Axis::Z;
      PauliProduct ref = PauliProduct::single(
          n, site, which == Axis::X ? PauliLetter::X : PauliLetter::Z);
      for (int j = 0; j < k; ++j) {
        ref = apply(t, ref);
      }
      CHECK(power_image(t, k, n, which, site) == ref);
    }
  }
}

TEST_CASE("period") {
  CHECK(period(builtin_rule("periodic-cluster"), 4) == 2);
  CHECK(period(builtin_rule("periodic-cluster"), 7) == 2);
  CHECK(period(builtin_rule("identity"), 5) == 1);
  CHECK(period(builtin_rule("hadamard"), 5) == 2);

  // glider rule on n=4: the found L is a period and divides every other
  // identity power below the cap
  const Cqca& tc = builtin_rule("cluster");
  int l = period(tc, 4);
  CHECK(l <= 16);
  PauliProduct x0 = word(4, {{0, PauliLetter::X}});
  PauliProduct z0 = word(4, {{0, PauliLetter::Z}});
  PauliProduct px = x0, pz = z0;
  for (int k = 1; k <= 16; ++k) {
    px = apply(tc, px);
    pz = apply(tc, pz);
    if (px == x0 && pz == z0) {
      CHECK(k % l == 0);
    }
  }

  // fractal rule: a period is guaranteed on 2^k rings; on n=9 the closing
  // power (42) lies beyond the default 4n cap and surfaces as an error
  const Cqca& tf = builtin_rule("fractal-cluster");
  int lf = period(tf, 4);
  CHECK(power_image(tf, lf, 4, Axis::Z, 1) == word(4, {{1, PauliLetter::Z}}));
  CHECK_THROWS_AS(period(tf, 9), PeriodNotFoundError);
  CHECK(period(tf, 9, 8) == 42);
}

TEST_CASE("classify reproduces the known classes") {
  CqcaClassification c = classify(builtin_rule("cluster"));
  CHECK(c.is_simple);
  CHECK(c.is_entangling);
  CHECK(c.kind == CqcaClassification::Kind::Glider);
  REQUIRE(c.glider.has_value());
  CHECK(std::abs(c.glider->shift) == 1);
  // the glider word is Z X, translated by one site per step
  LocalPauliPattern expected;
  expected.radius = 1;
  expected.letters = {{-1, PauliLetter::Z}, {0, PauliLetter::X}};
  if (c.glider->shift == 1) {
    CHECK(c.glider->pattern == expected);
  }

  c = classify(builtin_rule("periodic-cluster"));
  CHECK_FALSE(c.is_simple);
  CHECK(c.is_entangling);
  CHECK(c.kind == CqcaClassification::Kind::Periodic);
  CHECK(c.pattern_period == 2);

  c = classify(builtin_rule("fractal-cluster"));
  CHECK_FALSE(c.is_simple);
  CHECK(c.is_entangling);
  CHECK(c.kind == CqcaClassification::Kind::Fractal);

  c = classify(builtin_rule("identity"));
  CHECK_FALSE(c.is_entangling);
  CHECK(c.kind == CqcaClassification::Kind::Periodic);
  CHECK(c.pattern_period == 1);

  c = classify(builtin_rule("hadamard"));
  CHECK_FALSE(c.is_entangling);
  CHECK(c.pattern_period == 2);
}

TEST_CASE("inverse_image") {
  const Cqca& tc = builtin_rule("cluster");
  // T_c^{-1}(Z_i) = Z_{i-1} X_i Z_{i+1}
  CHECK(inverse_image(tc, 6, Axis::Z, 2) ==
        word(6, {{1, PauliLetter::Z}, {2, PauliLetter::X}, {3, PauliLetter::Z}}));

  // fractal rule: T^{-1}(Z_i) = Y_{i-1} X_i Y_{i+1} up to phase
  const Cqca& tf = builtin_rule("fractal-cluster");
  PauliProduct inv = inverse_image(tf, 8, Axis::Z, 3);
  PauliProduct pat =
      word(8, {{2, PauliLetter::Y}, {3, PauliLetter::X}, {4, PauliLetter::Y}});
  CHECK(inv.x_bits == pat.x_bits);
  CHECK(inv.z_bits == pat.z_bits);
  CHECK(apply(tf, inv) == word(8, {{3, PauliLetter::Z}}));

  for (const char* name : {"cluster", "periodic-cluster", "hadamard", "identity"}) {
    const Cqca& t = builtin_rule(name);
    for (int site = 0; site < 5; ++site) {
      CHECK(apply(t, inverse_image(t, 5, Axis::Z, site)) ==
            word(5, {{site, PauliLetter::Z}}));
      CHECK(apply(t, inverse_image(t, 5, Axis::X, site)) ==
            word(5, {{site, PauliLetter::X}}));
    }
  }
}

TEST_CASE("two-step decomposition coefficients") {
  Lemma2Coefficients c = lemma2_solve(builtin_rule("cluster"), 9);
  CHECK(c.m == 1);
  CHECK(c.alpha == std::vector<int>{1});
  CHECK(c.beta == 0);
  CHECK(c.phase_exp == 0);

  c = lemma2_solve(builtin_rule("fractal-cluster"), 9);
  CHECK(c.m == 1);
  CHECK(c.alpha == std::vector<int>{1});
  CHECK(c.beta == 1);

  // any rule with T(Z) = Z forces the empty decomposition
  c = lemma2_solve(builtin_rule("periodic-cluster"), 9);
  CHECK(c.m == 0);
  CHECK(c.alpha.empty());
  CHECK(c.beta == 0);
  CHECK(c.phase_exp == 0);

  // the reconstruction identity holds bit-exactly, phase included, on both
  // n and n+2
  for (const char* name : {"cluster", "fractal-cluster", "periodic-cluster"}) {
    const Cqca& t = builtin_rule(name);
    for (int n : {9, 11}) {
      Lemma2Coefficients k = lemma2_solve(t, n);
      PauliProduct z0 = word(n, {{0, PauliLetter::Z}});
      PauliProduct lhs = apply(t, apply(t, z0));
      PauliProduct rhs = z0;
      for (int j = 1; j <= k.m; ++j) {
        if (k.alpha[j - 1]) {
          rhs = multiply(rhs, multiply(apply(t, word(n, {{-j, PauliLetter::Z}})),
                                       apply(t, word(n, {{j, PauliLetter::Z}}))));
        }
      }
      if (k.beta) {
        rhs = multiply(rhs, apply(t, z0));
      }
      rhs.phase_exp = (rhs.phase_exp + k.phase_exp) % 4;
      CHECK(lhs == rhs);
    }
  }

  CHECK_THROWS_AS(lemma2_solve(builtin_rule("cluster"), 3), GeometryError);
}

TEST_CASE("rule JSON round-trips and matches the documented schema") {
  const Cqca& tc = builtin_rule("cluster");
  nlohmann::json j = cqca_to_json(tc);
  CHECK(j["name"] == "cluster");
  CHECK(j["x_image"]["letters"]["-1"] == "X");
  CHECK(j["x_image"]["letters"]["0"] == "Z");
  CHECK(j["x_image"]["letters"]["1"] == "X");
  CHECK(j["z_image"]["letters"]["0"] == "X");
  Cqca back = cqca_from_json(j);
  CHECK(back.x_image == tc.x_image);
  CHECK(back.z_image == tc.z_image);
  CHECK(back.name == tc.name);

  CHECK_THROWS_AS(cqca_from_json(nlohmann::json{{"x_image", 1}}), FormatError);
  CHECK_THROWS_AS(builtin_rule("no-such-rule"), FormatError);
}
