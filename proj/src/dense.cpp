#include "caqc/dense.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "caqc/clifford.hpp"

namespace caqc {

namespace {

const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

uint32_t low_mask(const BitVec& bits) {
  uint32_t m = 0;
  for (int i = 0; i < bits.size(); ++i) {
    if (bits.get(i)) {
      m |= uint32_t{1} << i;
    }
  }
  return m;
}

void check_cap(int n) {
  if (n < 1 || n > kDenseQubitCap) {
    throw GeometryError("dense register size out of range (1..24): " +
                        std::to_string(n));
  }
}

void check_hermitian(const PauliProduct& p) {
  if (!is_hermitian(p)) {
    throw Error("non-Hermitian Pauli generator (phase must be +1 or -1)");
  }
}

}  // namespace

DenseState DenseState::zero_state(int n) {
  check_cap(n);
  DenseState s;
  s.n_qubits = n;
  s.amps.assign(size_t{1} << n, Complex{0, 0});
  s.amps[0] = 1;
  return s;
}

double DenseState::norm() const {
  double acc = 0;
  for (const Complex& a : amps) {
    acc += std::norm(a);
  }
  return std::sqrt(acc);
}

void DenseState::renormalize() {
  double nm = norm();
  if (nm <= 0) {
    throw Error("cannot renormalize a zero state");
  }
  double inv = 1.0 / nm;
  for (Complex& a : amps) {
    a *= inv;
  }
}

DenseState prepare_plus(int n) {
  check_cap(n);
  DenseState s;
  s.n_qubits = n;
  double amp = std::pow(2.0, -0.5 * n);
  s.amps.assign(size_t{1} << n, Complex{amp, 0});
  return s;
}

void apply_h(DenseState& s, int q) {
  if (q < 0 || q >= s.n_qubits) {
    throw GeometryError("H: qubit index out of range");
  }
  const uint32_t bit = uint32_t{1} << q;
  const double r = std::sqrt(0.5);
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  for (uint32_t b = 0; b < dim; ++b) {
    if (b & bit) {
      continue;
    }
    Complex lo = s.amps[b];
    Complex hi = s.amps[b | bit];
    s.amps[b] = r * (lo + hi);
    s.amps[b | bit] = r * (lo - hi);
  }
}

void apply_s_gate(DenseState& s, int q) {
  if (q < 0 || q >= s.n_qubits) {
    throw GeometryError("S: qubit index out of range");
  }
  const uint32_t bit = uint32_t{1} << q;
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  for (uint32_t b = 0; b < dim; ++b) {
    if (b & bit) {
      s.amps[b] *= Complex{0, 1};
    }
  }
}

void apply_cz(DenseState& s, int a, int b) {
  if (a < 0 || b < 0 || a >= s.n_qubits || b >= s.n_qubits || a == b) {
    throw GeometryError("CZ: bad qubit pair");
  }
  const uint32_t mask = (uint32_t{1} << a) | (uint32_t{1} << b);
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  for (uint32_t idx = 0; idx < dim; ++idx) {
    if ((idx & mask) == mask) {
      s.amps[idx] = -s.amps[idx];
    }
  }
}

void apply_sqrt_x(DenseState& s, int q) {
  if (q < 0 || q >= s.n_qubits) {
    throw GeometryError("sqrt(X): qubit index out of range");
  }
  const uint32_t bit = uint32_t{1} << q;
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  const Complex u00{0.5, 0.5}, u01{0.5, -0.5};
  for (uint32_t b = 0; b < dim; ++b) {
    if (b & bit) {
      continue;
    }
    Complex lo = s.amps[b];
    Complex hi = s.amps[b | bit];
    s.amps[b] = u00 * lo + u01 * hi;
    s.amps[b | bit] = u01 * lo + u00 * hi;
  }
}

void apply_pauli(DenseState& s, const PauliProduct& p) {
  if (p.n_qubits != s.n_qubits) {
    throw DimensionError("apply_pauli: size mismatch");
  }
  const uint32_t xm = low_mask(p.x_bits);
  const uint32_t zm = low_mask(p.z_bits);
  const Complex base =
      kIPow[(p.phase_exp + BitVec::popcount_and(p.x_bits, p.z_bits)) % 4];
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  if (xm == 0) {
    for (uint32_t b = 0; b < dim; ++b) {
      Complex c = base;
      if (std::popcount(b & zm) & 1) {
        c = -c;
      }
      s.amps[b] *= c;
    }
    return;
  }
  for (uint32_t b = 0; b < dim; ++b) {
    uint32_t f = b ^ xm;
    if (f < b) {
      continue;
    }
    Complex cb = (std::popcount(b & zm) & 1) ? -base : base;
    Complex cf = (std::popcount(f & zm) & 1) ? -base : base;
    Complex ab = s.amps[b];
    Complex af = s.amps[f];
    s.amps[f] = cb * ab;
    s.amps[b] = cf * af;
  }
}

void apply_pauli_rotation(DenseState& s, const PauliProduct& g, double theta) {
  if (g.n_qubits != s.n_qubits) {
    throw DimensionError("apply_pauli_rotation: size mismatch");
  }
  check_hermitian(g);
  const uint32_t xm = low_mask(g.x_bits);
  const uint32_t zm = low_mask(g.z_bits);
  const Complex base =
      kIPow[(g.phase_exp + BitVec::popcount_and(g.x_bits, g.z_bits)) % 4];
  const Complex c{std::cos(theta), 0};
  const Complex is = Complex{0, std::sin(theta)};
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  if (xm == 0) {
    for (uint32_t b = 0; b < dim; ++b) {
      Complex gb = (std::popcount(b & zm) & 1) ? -base : base;
      s.amps[b] *= c + is * gb;
    }
    return;
  }
  for (uint32_t b = 0; b < dim; ++b) {
    uint32_t f = b ^ xm;
    if (f < b) {
      continue;
    }
    // (G psi)[b] = coef(f) psi[f] with coef(b) the amplitude map of G|b>.
    Complex cb = (std::popcount(b & zm) & 1) ? -base : base;
    Complex cf = (std::popcount(f & zm) & 1) ? -base : base;
    Complex ab = s.amps[b];
    Complex af = s.amps[f];
    s.amps[b] = c * ab + is * (cf * af);
    s.amps[f] = c * af + is * (cb * ab);
  }
}

ProjectiveResult measure_projective(DenseState& s, const PauliProduct& obs,
                                    std::optional<int> forced, Rng& rng) {
  if (obs.n_qubits != s.n_qubits) {
    throw DimensionError("measure_projective: size mismatch");
  }
  check_hermitian(obs);
  double g = expectation(s, obs);
  double p_plus = std::clamp(0.5 * (1.0 + g), 0.0, 1.0);
  int outcome;
  if (forced.has_value()) {
    outcome = *forced ? 1 : 0;
  } else {
    outcome = rng.uniform() < p_plus ? 0 : 1;
  }
  double prob = outcome == 0 ? p_plus : 1.0 - p_plus;
  if (prob < 1e-12) {
    throw ImpossibleOutcomeError(
        "projective measurement forced onto a zero-probability outcome");
  }
  // psi <- (psi +/- O psi) / 2, then renormalize.
  DenseState op = s;
  apply_pauli(op, obs);
  double sign = outcome == 0 ? 1.0 : -1.0;
  double inv = 0.5 / std::sqrt(prob);
  for (size_t k = 0; k < s.amps.size(); ++k) {
    s.amps[k] = (s.amps[k] + sign * op.amps[k]) * inv;
  }
  return ProjectiveResult{outcome, prob};
}

Complex inner_product(const DenseState& a, const DenseState& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionError("inner_product: size mismatch");
  }
  Complex acc{0, 0};
  for (size_t k = 0; k < a.amps.size(); ++k) {
    acc += std::conj(a.amps[k]) * b.amps[k];
  }
  return acc;
}

double fidelity(const DenseState& a, const DenseState& b) {
  return std::norm(inner_product(a, b));
}

double expectation(const DenseState& s, const PauliProduct& obs) {
  if (obs.n_qubits != s.n_qubits) {
    throw DimensionError("expectation: size mismatch");
  }
  check_hermitian(obs);
  const uint32_t xm = low_mask(obs.x_bits);
  const uint32_t zm = low_mask(obs.z_bits);
  const Complex base =
      kIPow[(obs.phase_exp + BitVec::popcount_and(obs.x_bits, obs.z_bits)) % 4];
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  Complex acc{0, 0};
  for (uint32_t b = 0; b < dim; ++b) {
    uint32_t f = b ^ xm;
    Complex cb = (std::popcount(b & zm) & 1) ? -base : base;
    acc += std::conj(s.amps[f]) * cb * s.amps[b];
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw Error("expectation of Hermitian observable came out complex");
  }
  return acc.real();
}

void append_plus(DenseState& s, int m) {
  check_cap(s.n_qubits + m);
  const size_t old_dim = s.amps.size();
  const size_t copies = size_t{1} << m;
  double scale = std::pow(2.0, -0.5 * m);
  std::vector<Complex> out(old_dim * copies);
  for (size_t hi = 0; hi < copies; ++hi) {
    for (size_t lo = 0; lo < old_dim; ++lo) {
      out[hi * old_dim + lo] = scale * s.amps[lo];
    }
  }
  s.amps = std::move(out);
  s.n_qubits += m;
}

void trace_out_low_plus(DenseState& s, int m) {
  if (m <= 0 || m >= s.n_qubits) {
    throw GeometryError("trace_out_low_plus: bad register size");
  }
  const size_t low_dim = size_t{1} << m;
  const size_t out_dim = size_t{1} << (s.n_qubits - m);
  double scale = std::pow(2.0, -0.5 * m);
  std::vector<Complex> out(out_dim);
  for (size_t hi = 0; hi < out_dim; ++hi) {
    Complex acc{0, 0};
    for (size_t lo = 0; lo < low_dim; ++lo) {
      acc += s.amps[(hi << m) | lo];
    }
    out[hi] = acc * scale;
  }
  s.amps = std::move(out);
  s.n_qubits -= m;
  double nm = s.norm();
  if (std::abs(nm - 1.0) > 1e-6) {
    throw Error("trace_out_low_plus: dropped register was not in |+> states");
  }
  s.renormalize();
}

DenseUnitary dense_unitary(const CliffordMap& map) {
  const int m = map.n_qubits();
  check_cap(m);
  const int dim = 1 << m;
  std::vector<PauliProduct> zimg(m, PauliProduct::identity(m));
  std::vector<PauliProduct> ximg(m, PauliProduct::identity(m));
  for (int i = 0; i < m; ++i) {
    zimg[i] = map.image_z(i);
    ximg[i] = map.image_x(i);
    check_hermitian(zimg[i]);
    check_hermitian(ximg[i]);
  }
  // Column for |0..0>: the joint +1 eigenstate of all Z images. Project a
  // basis vector through (I + S)/2 for every generator; at least one basis
  // vector has overlap >= 2^-m with the rank-1 result.
  DenseState psi0;
  bool found = false;
  for (int k = 0; k < dim && !found; ++k) {
    DenseState trial = DenseState::zero_state(m);
    trial.amps[0] = 0;
    trial.amps[k] = 1;
    for (int i = 0; i < m; ++i) {
      DenseState sp = trial;
      apply_pauli(sp, zimg[i]);
      for (int b = 0; b < dim; ++b) {
        trial.amps[b] = 0.5 * (trial.amps[b] + sp.amps[b]);
      }
    }
    double nm = trial.norm();
    if (nm * nm > 0.25 / dim) {
      trial.renormalize();
      psi0 = std::move(trial);
      found = true;
    }
  }
  if (!found) {
    throw ValidationError(
        "map images do not define a stabilizer state; not a Clifford map");
  }
  DenseUnitary u;
  u.n_qubits = m;
  u.mat.assign(static_cast<size_t>(dim) * dim, Complex{0, 0});
  std::vector<DenseState> cols(dim);
  cols[0] = std::move(psi0);
  for (int b = 1; b < dim; ++b) {
    int j = std::countr_zero(static_cast<unsigned>(b));
    cols[b] = cols[b & (b - 1)];
    apply_pauli(cols[b], ximg[j]);
  }
  for (int b = 0; b < dim; ++b) {
    for (int r = 0; r < dim; ++r) {
      u.at(r, b) = cols[b].amps[r];
    }
  }
  return u;
}

void apply_unitary(DenseState& s, const DenseUnitary& u,
                   const std::vector<int>& qubits) {
  const int m = u.n_qubits;
  if (static_cast<int>(qubits.size()) != m) {
    throw DimensionError("apply_unitary: qubit list size mismatch");
  }
  uint32_t target_mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= s.n_qubits) {
      throw GeometryError("apply_unitary: qubit index out of range");
    }
    target_mask |= uint32_t{1} << q;
  }
  if (std::popcount(target_mask) != m) {
    throw GeometryError("apply_unitary: duplicate qubit");
  }
  const uint32_t sub_dim = uint32_t{1} << m;
  std::vector<uint32_t> spread(sub_dim, 0);
  for (uint32_t k = 0; k < sub_dim; ++k) {
    uint32_t pos = 0;
    for (int j = 0; j < m; ++j) {
      if (k & (uint32_t{1} << j)) {
        pos |= uint32_t{1} << qubits[j];
      }
    }
    spread[k] = pos;
  }
  const uint32_t dim = uint32_t{1} << s.n_qubits;
  std::vector<Complex> in(sub_dim), out(sub_dim);
  for (uint32_t base = 0; base < dim; ++base) {
    if (base & target_mask) {
      continue;
    }
    for (uint32_t k = 0; k < sub_dim; ++k) {
      in[k] = s.amps[base | spread[k]];
    }
    for (uint32_t r = 0; r < sub_dim; ++r) {
      Complex acc{0, 0};
      for (uint32_t k = 0; k < sub_dim; ++k) {
        acc += u.at(r, k) * in[k];
      }
      out[r] = acc;
    }
    for (uint32_t k = 0; k < sub_dim; ++k) {
      s.amps[base | spread[k]] = out[k];
    }
  }
}

void write_state(std::ostream& out, const DenseState& s) {
  out.write("CQSV", 4);
  uint32_t n = static_cast<uint32_t>(s.n_qubits);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (const Complex& a : s.amps) {
    double re = a.real(), im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

DenseState read_state(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CQSV", 4) != 0) {
    throw FormatError("bad state dump magic");
  }
  uint32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || n < 1 || n > kDenseQubitCap) {
    throw FormatError("bad state dump qubit count");
  }
  DenseState s;
  s.n_qubits = static_cast<int>(n);
  s.amps.resize(size_t{1} << n);
  for (Complex& a : s.amps) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    a = Complex{re, im};
  }
  if (!in) {
    throw FormatError("truncated state dump");
  }
  return s;
}

}  // namespace caqc
