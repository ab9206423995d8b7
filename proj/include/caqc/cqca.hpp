#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caqc/clifford.hpp"
#include "caqc/pauli.hpp"

namespace caqc {

enum class Axis { X, Z };

/// Translation-invariant local transition rule of a Clifford cellular
/// automaton on a qubit ring, given by the images of the single-site X and
/// Z letters. Patterns must be support-symmetric around offset 0.
struct Cqca {
  std::string name;  // empty for ad-hoc rules
  LocalPauliPattern x_image;
  LocalPauliPattern z_image;

  int radius() const { return std::max(x_image.radius, z_image.radius); }
};

struct ValidationReport {
  bool ok = true;
  std::string violation;
};

/// Checks pattern well-formedness, support symmetry, and every pairwise
/// commutation constraint of a Clifford map on a ring of n qubits. Small
/// rings use the wrapped (quotient) rule; see `instantiate`.
ValidationReport validate(const Cqca& t, int n);

/// Throws ValidationError when validate() reports a violation.
void require_valid(const Cqca& t, int n);

/// Heisenberg action of the rule on an arbitrary Pauli product.
PauliProduct apply(const Cqca& t, const PauliProduct& p);

/// T^k applied to a single-site letter; k = 0 returns the letter.
PauliProduct power_image(const Cqca& t, int k, int n, Axis which, int site);

/// Smallest L >= 1 with T^L = id on the ring (phase included). The search
/// is capped at cap_factor * n; exceeding the cap raises
/// PeriodNotFoundError (e.g. fractal rules on rings that are not a power
/// of two).
int period(const Cqca& t, int n, int cap_factor = 4);

/// T^{-1} applied to a single-site letter, computed as T^{L-1}.
PauliProduct inverse_image(const Cqca& t, int n, Axis which, int site);

struct GliderInfo {
  LocalPauliPattern pattern;
  int shift = 0;
};

struct CqcaClassification {
  enum class Kind { Glider, Periodic, Fractal };
  bool is_simple = false;
  bool is_entangling = false;
  Kind kind = Kind::Fractal;
  std::optional<int> pattern_period;  // set for Kind::Periodic
  std::optional<GliderInfo> glider;   // set for Kind::Glider
};

std::string kind_name(CqcaClassification::Kind k);

/// Classifies the rule. Periodicity is decided at the pattern level
/// (ring-independent) up to period_cap; the glider search enumerates the
/// GF(2) kernel of (T - shift) over patterns of radius <= search_radius
/// (default 2r+2) and shifts 0 < |s| <= r+1, a bounded heuristic.
CqcaClassification classify(const Cqca& t, int search_radius = -1,
                            int period_cap = 16);

/// Coefficients of the rewriting identity
///   T^2(Z_0) = i^phase_exp * Z_0 * prod_k (T(Z_-k) T(Z_k))^alpha_k
///              * T(Z_0)^beta,
/// with the smallest m; alpha has length m.
struct Lemma2Coefficients {
  int m = 0;
  std::vector<int> alpha;
  int beta = 0;
  int phase_exp = 0;
};

/// Solves for the coefficients on a ring of n qubits (requires n >= 4r+1
/// so that supports stay distinguishable). The bits are ring-independent.
Lemma2Coefficients lemma2_solve(const Cqca& t, int n);

/// Rules from the literature: "cluster", "periodic-cluster",
/// "fractal-cluster", "hadamard", "identity".
const std::vector<Cqca>& builtin_rules();
const Cqca& builtin_rule(const std::string& name);

nlohmann::json cqca_to_json(const Cqca& t);
Cqca cqca_from_json(const nlohmann::json& j);

/// The rule instantiated on a concrete ring, as a Clifford map.
class CqcaOnRing final : public CliffordMap {
 public:
  CqcaOnRing(const Cqca& t, int n) : t_(t), n_(n) {}
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override {
    return instantiate(t_.x_image, site, n_);
  }
  PauliProduct image_z(int site) const override {
    return instantiate(t_.z_image, site, n_);
  }

 private:
  const Cqca& t_;
  int n_;
};

}  // namespace caqc
