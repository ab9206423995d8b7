#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "caqc/errors.hpp"

namespace caqc {

/// Fixed-length bit vector packed into 64-bit words.
class BitVec {
 public:
  BitVec() : n_(0) {}
  explicit BitVec(int n) : n_(n), words_((n + 63) / 64, 0) {}

  int size() const { return n_; }

  bool get(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(int i, bool v) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(int i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  bool any() const {
    for (uint64_t w : words_) {
      if (w != 0) {
        return true;
      }
    }
    return false;
  }

  int popcount() const {
    int c = 0;
    for (uint64_t w : words_) {
      c += std::popcount(w);
    }
    return c;
  }

  BitVec& operator^=(const BitVec& o) {
    for (size_t k = 0; k < words_.size(); ++k) {
      words_[k] ^= o.words_[k];
    }
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) {
    a ^= b;
    return a;
  }

  bool operator==(const BitVec& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  /// Number of positions set in both vectors.
  static int popcount_and(const BitVec& a, const BitVec& b) {
    int c = 0;
    for (size_t k = 0; k < a.words_.size(); ++k) {
      c += std::popcount(a.words_[k] & b.words_[k]);
    }
    return c;
  }

  /// Cyclic rotation: bit i of the input lands at (i + shift) mod n.
  BitVec rotated(int shift) const {
    BitVec out(n_);
    if (n_ == 0) {
      return out;
    }
    int s = ((shift % n_) + n_) % n_;
    for (int i = 0; i < n_; ++i) {
      if (get(i)) {
        out.set((i + s) % n_, true);
      }
    }
    return out;
  }

  /// Lexicographic comparison, bit 0 most significant.
  bool lex_less(const BitVec& o) const {
    for (int i = 0; i < n_; ++i) {
      bool a = get(i), b = o.get(i);
      if (a != b) {
        return b;
      }
    }
    return false;
  }

 private:
  int n_;
  std::vector<uint64_t> words_;
};

/// Dense GF(2) matrix with row operations, used for rank computations,
/// nullspaces and membership solves.
class Gf2Matrix {
 public:
  Gf2Matrix(int rows, int cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }

  BitVec& row(int r) { return rows_[r]; }
  const BitVec& row(int r) const { return rows_[r]; }

  bool get(int r, int c) const { return rows_[r].get(c); }
  void set(int r, int c, bool v) { rows_[r].set(c, v); }

  /// In-place reduced row echelon form; returns the pivot column of every
  /// surviving row, in row order. `ops`, when non-null, receives the row
  /// recombinations applied (as rows over the original row indices).
  std::vector<int> rref(Gf2Matrix* ops = nullptr) {
    if (ops != nullptr) {
      *ops = identity(rows());
    }
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows(); ++c) {
      int pivot = -1;
      for (int k = r; k < rows(); ++k) {
        if (rows_[k].get(c)) {
          pivot = k;
          break;
        }
      }
      if (pivot < 0) {
        continue;
      }
      std::swap(rows_[r], rows_[pivot]);
      if (ops != nullptr) {
        std::swap(ops->rows_[r], ops->rows_[pivot]);
      }
      for (int k = 0; k < rows(); ++k) {
        if (k != r && rows_[k].get(c)) {
          rows_[k] ^= rows_[r];
          if (ops != nullptr) {
            ops->rows_[k] ^= ops->rows_[r];
          }
        }
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  int rank() const {
    Gf2Matrix copy = *this;
    return static_cast<int>(copy.rref().size());
  }

  /// Basis of the right nullspace (vectors v with M v = 0).
  std::vector<BitVec> nullspace() const {
    Gf2Matrix copy = *this;
    std::vector<int> pivots = copy.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) {
      is_pivot[c] = true;
    }
    std::vector<BitVec> basis;
    for (int c = 0; c < cols_; ++c) {
      if (is_pivot[c]) {
        continue;
      }
      BitVec v(cols_);
      v.set(c, true);
      for (size_t r = 0; r < pivots.size(); ++r) {
        if (copy.rows_[r].get(c)) {
          v.set(pivots[r], true);
        }
      }
      basis.push_back(v);
    }
    return basis;
  }

  static Gf2Matrix identity(int n) {
    Gf2Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      m.set(i, i, true);
    }
    return m;
  }

 private:
  int cols_;
  std::vector<BitVec> rows_;
};

}  // namespace caqc
