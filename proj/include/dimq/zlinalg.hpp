#pragma once

#include "dimq/bigint.hpp"

#include <map>
#include <optional>
#include <vector>

namespace dimq {

// Dense arbitrary-precision integer matrix, row major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(unsigned rows, unsigned cols)
      : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Int(0)) {}

  static IntMatrix identity(unsigned n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>> &rows);

  unsigned rows() const { return rows_; }
  unsigned cols() const { return cols_; }

  Int &at(unsigned r, unsigned c) { return a_[size_t(r) * cols_ + c]; }
  const Int &at(unsigned r, unsigned c) const {
    return a_[size_t(r) * cols_ + c];
  }

  std::vector<Int> row(unsigned r) const;
  bool is_zero() const;
  double density() const; // fraction of nonzero entries

  friend bool operator==(const IntMatrix &x, const IntMatrix &y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  friend IntMatrix operator*(const IntMatrix &x, const IntMatrix &y);

private:
  unsigned rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

struct HnfResult {
  IntMatrix H;                  // row-style Hermite normal form
  IntMatrix U;                  // unimodular, U*A = H
  std::vector<unsigned> pivots; // pivot column per nonzero row
};

// Row-style HNF: positive pivots, entries above each pivot reduced into
// [0, pivot). Deterministic; dense and sparse paths produce identical output
// (the sparse path is chosen automatically below 10% density).
HnfResult hnf(const IntMatrix &a);
HnfResult hnf_dense(const IntMatrix &a);
HnfResult hnf_sparse(const IntMatrix &a);

struct SnfResult {
  IntMatrix D; // diagonal, d_i | d_{i+1}, nonnegative
  IntMatrix U, V; // unimodular, U*A*V = D
};

SnfResult snf(const IntMatrix &a);

// Determinant by fraction-free elimination; used to certify |det U| = 1.
Int determinant(const IntMatrix &a);

// Integer coefficients c with sum c_i * gens_i = v, if any. Verified by
// re-substitution before returning.
std::optional<std::vector<Int>>
lattice_membership(const std::vector<Int> &v,
                   const std::vector<std::vector<Int>> &gens);

// Sparse row: ordered (column, value) pairs, value != 0.
using SparseRow = std::vector<std::pair<unsigned, Int>>;

SparseRow sparse_from_dense(const std::vector<Int> &v);
std::vector<Int> dense_from_sparse(const SparseRow &r, unsigned n);

// Incremental integer row echelon keyed by pivot column; rows added one at
// a time and reduced on the fly. Backbone of the nilpotent quotient and of
// the augmentation-quotient lattice, where row streams are long but sparse.
class IncrementalHnf {
public:
  explicit IncrementalHnf(unsigned cols) : cols_(cols) {}

  // Returns true if the row reduced to zero (already in the lattice).
  bool add_row(SparseRow row);
  bool contains(const SparseRow &row) const;
  void reduce_tail(SparseRow &r) const;
  SparseRow reduce(SparseRow row) const;

  // Full above-diagonal reduction; afterwards rows() is the canonical HNF
  // basis ordered by pivot column.
  void normalize();

  unsigned cols() const { return cols_; }
  unsigned rank() const { return (unsigned)rows_.size(); }
  const std::map<unsigned, SparseRow> &rows() const { return rows_; }

private:
  unsigned cols_;
  std::map<unsigned, SparseRow> rows_; // pivot column -> row
};

} // namespace dimq
