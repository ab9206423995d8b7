#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "caqc/pauli.hpp"

namespace caqc {

/// A Clifford unitary described in the Heisenberg picture by the images of
/// the single-site X and Z letters. Images must be Hermitian and preserve
/// all pairwise (anti)commutation relations.
class CliffordMap {
 public:
  virtual ~CliffordMap() = default;
  virtual int n_qubits() const = 0;
  virtual PauliProduct image_x(int site) const = 0;
  virtual PauliProduct image_z(int site) const = 0;
};

/// Conjugates an arbitrary Pauli product through the map, phase-exactly.
/// Y letters are expanded through Y = iXZ.
PauliProduct conjugate_pauli(const CliffordMap& map, const PauliProduct& p);

/// Identity map on n qubits.
class IdentityMap final : public CliffordMap {
 public:
  explicit IdentityMap(int n) : n_(n) {}
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override {
    return PauliProduct::single(n_, site, PauliLetter::X);
  }
  PauliProduct image_z(int site) const override {
    return PauliProduct::single(n_, site, PauliLetter::Z);
  }

 private:
  int n_;
};

/// A layer of CZ gates on the given (unordered, distinct) qubit pairs.
class CzLayerMap final : public CliffordMap {
 public:
  CzLayerMap(int n, std::vector<std::pair<int, int>> edges);
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override;
  PauliProduct image_z(int site) const override;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
};

/// Hadamard on every qubit: X <-> Z.
class HadamardLayerMap final : public CliffordMap {
 public:
  explicit HadamardLayerMap(int n) : n_(n) {}
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override {
    return PauliProduct::single(n_, site, PauliLetter::Z);
  }
  PauliProduct image_z(int site) const override {
    return PauliProduct::single(n_, site, PauliLetter::X);
  }

 private:
  int n_;
};

/// Elementary gates for building random Clifford circuits in tests and the
/// explicit constructions of the runtime.
struct CliffordGate {
  enum class Kind { H, S, CZ, SqrtX } kind;
  int a = 0;
  int b = 0;  // second qubit for CZ
};

/// Sequential circuit of elementary Clifford gates (first gate acts first).
class GateCircuitMap final : public CliffordMap {
 public:
  GateCircuitMap(int n, std::vector<CliffordGate> gates)
      : n_(n), gates_(std::move(gates)) {}
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override;
  PauliProduct image_z(int site) const override;
  const std::vector<CliffordGate>& gates() const { return gates_; }

 private:
  int n_;
  std::vector<CliffordGate> gates_;
};

/// Embeds a map on a subset of qubits of a larger register; all other
/// qubits are left untouched.
class EmbeddedMap final : public CliffordMap {
 public:
  EmbeddedMap(const CliffordMap& inner, std::vector<int> qubits, int total);
  int n_qubits() const override { return total_; }
  PauliProduct image_x(int site) const override;
  PauliProduct image_z(int site) const override;

 private:
  PauliProduct embed(const PauliProduct& p) const;
  const CliffordMap& inner_;
  std::vector<int> qubits_;
  std::vector<int> position_;  // total-register site -> inner site or -1
  int total_;
};

/// Composition: maps applied in sequence (first element acts first on
/// states, so images are conjugated through the elements in order).
class ComposedMap final : public CliffordMap {
 public:
  ComposedMap(int n, std::vector<const CliffordMap*> maps)
      : n_(n), maps_(std::move(maps)) {}
  int n_qubits() const override { return n_; }
  PauliProduct image_x(int site) const override;
  PauliProduct image_z(int site) const override;

 private:
  PauliProduct chain(PauliProduct p) const;
  int n_;
  std::vector<const CliffordMap*> maps_;
};

}  // namespace caqc
