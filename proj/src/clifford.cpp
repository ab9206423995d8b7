#include "caqc/clifford.hpp"

#include <algorithm>

namespace caqc {

PauliProduct conjugate_pauli(const CliffordMap& map, const PauliProduct& p) {
  const int n = map.n_qubits();
  if (p.n_qubits != n) {
    throw DimensionError("conjugate_pauli: size mismatch");
  }
  PauliProduct out = PauliProduct::identity(n);
  out.phase_exp = p.phase_exp;
  for (int site = 0; site < n; ++site) {
    switch (p.letter_at(site)) {
      case PauliLetter::I:
        break;
      case PauliLetter::X:
        out = multiply(out, map.image_x(site));
        break;
      case PauliLetter::Z:
        out = multiply(out, map.image_z(site));
        break;
      case PauliLetter::Y: {
        // T(Y) = i T(X) T(Z)
        PauliProduct y = multiply(map.image_x(site), map.image_z(site));
        y.phase_exp = (y.phase_exp + 1) % 4;
        out = multiply(out, y);
        break;
      }
    }
  }
  return out;
}

CzLayerMap::CzLayerMap(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)) {
  for (auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
      throw GeometryError("CZ layer: bad edge");
    }
    if (a > b) {
      std::swap(a, b);
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw GeometryError("CZ layer: duplicate edge");
  }
}

PauliProduct CzLayerMap::image_x(int site) const {
  // CZ_{a,b} X_a CZ = X_a Z_b
  PauliProduct p = PauliProduct::single(n_, site, PauliLetter::X);
  for (const auto& [a, b] : edges_) {
    if (a == site) {
      p = multiply(p, PauliProduct::single(n_, b, PauliLetter::Z));
    } else if (b == site) {
      p = multiply(p, PauliProduct::single(n_, a, PauliLetter::Z));
    }
  }
  return p;
}

PauliProduct CzLayerMap::image_z(int site) const {
  return PauliProduct::single(n_, site, PauliLetter::Z);
}

namespace {

PauliProduct conjugate_through_gate(const CliffordGate& g, PauliProduct p) {
  const int n = p.n_qubits;
  auto xz_images = [&](int q, PauliProduct ix, PauliProduct iz) {
    PauliProduct out = PauliProduct::identity(n);
    out.phase_exp = p.phase_exp;
    for (int site = 0; site < n; ++site) {
      PauliLetter l = p.letter_at(site);
      if (l == PauliLetter::I) {
        continue;
      }
      if (site != q) {
        out = multiply(out, PauliProduct::single(n, site, l));
        continue;
      }
      if (l == PauliLetter::X) {
        out = multiply(out, ix);
      } else if (l == PauliLetter::Z) {
        out = multiply(out, iz);
      } else {
        PauliProduct y = multiply(ix, iz);
        y.phase_exp = (y.phase_exp + 1) % 4;
        out = multiply(out, y);
      }
    }
    return out;
  };
  switch (g.kind) {
    case CliffordGate::Kind::H:
      return xz_images(g.a, PauliProduct::single(n, g.a, PauliLetter::Z),
                       PauliProduct::single(n, g.a, PauliLetter::X));
    case CliffordGate::Kind::S:
      // S X S^dag = Y, S Z S^dag = Z
      return xz_images(g.a, PauliProduct::single(n, g.a, PauliLetter::Y),
                       PauliProduct::single(n, g.a, PauliLetter::Z));
    case CliffordGate::Kind::SqrtX: {
      // sqrt(X) X sqrt(X)^dag = X, sqrt(X) Z sqrt(X)^dag = -Y
      PauliProduct my = PauliProduct::single(n, g.a, PauliLetter::Y);
      my.phase_exp = 2;
      return xz_images(g.a, PauliProduct::single(n, g.a, PauliLetter::X), my);
    }
    case CliffordGate::Kind::CZ: {
      CzLayerMap cz(n, {{g.a, g.b}});
      return conjugate_pauli(cz, p);
    }
  }
  return p;
}

}  // namespace

PauliProduct GateCircuitMap::image_x(int site) const {
  PauliProduct p = PauliProduct::single(n_, site, PauliLetter::X);
  for (const CliffordGate& g : gates_) {
    p = conjugate_through_gate(g, std::move(p));
  }
  return p;
}

PauliProduct GateCircuitMap::image_z(int site) const {
  PauliProduct p = PauliProduct::single(n_, site, PauliLetter::Z);
  for (const CliffordGate& g : gates_) {
    p = conjugate_through_gate(g, std::move(p));
  }
  return p;
}

EmbeddedMap::EmbeddedMap(const CliffordMap& inner, std::vector<int> qubits,
                         int total)
    : inner_(inner), qubits_(std::move(qubits)), total_(total) {
  if (static_cast<int>(qubits_.size()) != inner.n_qubits()) {
    throw DimensionError("embedded map: qubit list size mismatch");
  }
  position_.assign(total_, -1);
  for (size_t k = 0; k < qubits_.size(); ++k) {
    int q = qubits_[k];
    if (q < 0 || q >= total_ || position_[q] != -1) {
      throw GeometryError("embedded map: bad qubit list");
    }
    position_[q] = static_cast<int>(k);
  }
}

PauliProduct EmbeddedMap::embed(const PauliProduct& p) const {
  PauliProduct out = PauliProduct::identity(total_);
  out.phase_exp = p.phase_exp;
  for (int k = 0; k < p.n_qubits; ++k) {
    PauliLetter l = p.letter_at(k);
    if (l != PauliLetter::I) {
      out.set_letter(qubits_[k], l);
    }
  }
  return out;
}

PauliProduct EmbeddedMap::image_x(int site) const {
  int pos = position_[site];
  if (pos < 0) {
    return PauliProduct::single(total_, site, PauliLetter::X);
  }
  return embed(inner_.image_x(pos));
}

PauliProduct EmbeddedMap::image_z(int site) const {
  int pos = position_[site];
  if (pos < 0) {
    return PauliProduct::single(total_, site, PauliLetter::Z);
  }
  return embed(inner_.image_z(pos));
}

PauliProduct ComposedMap::chain(PauliProduct p) const {
  for (const CliffordMap* m : maps_) {
    p = conjugate_pauli(*m, p);
  }
  return p;
}

PauliProduct ComposedMap::image_x(int site) const {
  return chain(PauliProduct::single(n_, site, PauliLetter::X));
}

PauliProduct ComposedMap::image_z(int site) const {
  return chain(PauliProduct::single(n_, site, PauliLetter::Z));
}

}  // namespace caqc
