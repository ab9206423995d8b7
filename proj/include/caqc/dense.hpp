#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "caqc/pauli.hpp"
#include "caqc/rng.hpp"

namespace caqc {

using Complex = std::complex<double>;

inline constexpr int kDenseQubitCap = 24;

/// Brute-force statevector over at most kDenseQubitCap qubits.
/// Basis indices are little-endian: qubit 1 (site 0) is the least
/// significant bit.
struct DenseState {
  int n_qubits = 0;
  std::vector<Complex> amps;

  static DenseState zero_state(int n);

  double norm() const;
  void renormalize();
};

DenseState prepare_plus(int n);

void apply_h(DenseState& s, int q);
void apply_s_gate(DenseState& s, int q);
void apply_cz(DenseState& s, int a, int b);
void apply_sqrt_x(DenseState& s, int q);

/// Applies the Pauli product including its phase.
void apply_pauli(DenseState& s, const PauliProduct& p);

/// exp(i theta g) for Hermitian g; exact since g squares to the identity.
void apply_pauli_rotation(DenseState& s, const PauliProduct& g, double theta);

struct ProjectiveResult {
  int outcome = 0;        // 0 -> +1 eigenvalue, 1 -> -1 eigenvalue
  double probability = 0; // pre-measurement Born probability of the outcome
};

/// Projects onto the chosen (or sampled) eigenspace of obs and renormalizes.
ProjectiveResult measure_projective(DenseState& s, const PauliProduct& obs,
                                    std::optional<int> forced, Rng& rng);

double fidelity(const DenseState& a, const DenseState& b);

/// <s|obs|s>; the imaginary part must vanish for Hermitian obs.
double expectation(const DenseState& s, const PauliProduct& obs);

Complex inner_product(const DenseState& a, const DenseState& b);

/// Tensors m fresh |+> qubits above the current register.
void append_plus(DenseState& s, int m);

/// Drops the lowest m qubits, which must hold an (approximate) |+>^m
/// product factor; remaining qubits shift down by m.
void trace_out_low_plus(DenseState& s, int m);

/// Column-major dense matrix of dimension 2^m.
struct DenseUnitary {
  int n_qubits = 0;
  std::vector<Complex> mat;  // mat[col * dim + row]

  int dim() const { return 1 << n_qubits; }
  Complex& at(int row, int col) { return mat[static_cast<size_t>(col) * dim() + row]; }
  const Complex& at(int row, int col) const {
    return mat[static_cast<size_t>(col) * dim() + row];
  }
};

class CliffordMap;

/// Realizes a Clifford map as a dense unitary (fixed up to global phase)
/// from its tableau, column by column.
DenseUnitary dense_unitary(const CliffordMap& map);

/// Applies an m-qubit unitary to the listed qubits of a larger register.
void apply_unitary(DenseState& s, const DenseUnitary& u,
                   const std::vector<int>& qubits);

/// Binary dump: magic "CQSV", u32 qubit count, interleaved f64 re/im,
/// all little-endian.
void write_state(std::ostream& out, const DenseState& s);
DenseState read_state(std::istream& in);

}  // namespace caqc
