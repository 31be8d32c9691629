#include "dimq/zlinalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace dimq {

IntMatrix IntMatrix::identity(unsigned n) {
  IntMatrix m(n, n);
  for (unsigned i = 0; i < n; ++i)
    m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>> &rows) {
  if (rows.empty())
    return IntMatrix();
  IntMatrix m((unsigned)rows.size(), (unsigned)rows[0].size());
  for (unsigned r = 0; r < m.rows(); ++r) {
    if (rows[r].size() != m.cols())
      throw std::invalid_argument("from_rows: ragged rows");
    for (unsigned c = 0; c < m.cols(); ++c)
      m.at(r, c) = rows[r][c];
  }
  return m;
}

std::vector<Int> IntMatrix::row(unsigned r) const {
  std::vector<Int> v(cols_);
  for (unsigned c = 0; c < cols_; ++c)
    v[c] = at(r, c);
  return v;
}

bool IntMatrix::is_zero() const {
  for (const auto &x : a_)
    if (x != 0)
      return false;
  return true;
}

double IntMatrix::density() const {
  if (a_.empty())
    return 0.0;
  size_t nz = 0;
  for (const auto &x : a_)
    if (x != 0)
      ++nz;
  return double(nz) / double(a_.size());
}

IntMatrix operator*(const IntMatrix &x, const IntMatrix &y) {
  if (x.cols() != y.rows())
    throw std::invalid_argument("matrix product: dimension mismatch");
  IntMatrix r(x.rows(), y.cols());
  for (unsigned i = 0; i < x.rows(); ++i)
    for (unsigned k = 0; k < x.cols(); ++k) {
      const Int &xik = x.at(i, k);
      if (xik == 0)
        continue;
      for (unsigned j = 0; j < y.cols(); ++j) {
        const Int &ykj = y.at(k, j);
        if (ykj != 0)
          r.at(i, j) += xik * ykj;
      }
    }
  return r;
}

// ---------------------------------------------------------------- HNF
//
// Both storage paths perform the identical sequence of row operations:
// columns left to right; the first row with a nonzero entry becomes the
// pivot row; remaining rows are cleared by extended-gcd 2x2 transforms;
// entries above the pivot are reduced into [0, pivot).

namespace {

// rows stored densely; ops applied to (A|U) in lockstep
struct DenseRows {
  std::vector<std::vector<Int>> a, u;

  void swap_rows(unsigned i, unsigned j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  }
  const Int &entry(unsigned r, unsigned c) const { return a[r][c]; }
  // (row_i, row_j) <- (s*row_i + t*row_j, p*row_i + q*row_j)
  void transform2(unsigned i, unsigned j, const Int &s, const Int &t,
                  const Int &p, const Int &q) {
    for (auto *m : {&a, &u}) {
      auto &ri = (*m)[i], &rj = (*m)[j];
      for (size_t c = 0; c < ri.size(); ++c) {
        Int ni = s * ri[c] + t * rj[c];
        Int nj = p * ri[c] + q * rj[c];
        ri[c] = std::move(ni);
        rj[c] = std::move(nj);
      }
    }
  }
  void addmul(unsigned dst, unsigned src, const Int &f) {
    for (auto *m : {&a, &u}) {
      auto &rd = (*m)[dst];
      const auto &rs = (*m)[src];
      for (size_t c = 0; c < rd.size(); ++c)
        if (rs[c] != 0)
          rd[c] += f * rs[c];
    }
  }
  void negate(unsigned i) {
    for (auto *m : {&a, &u})
      for (auto &x : (*m)[i])
        x = -x;
  }
};

SparseRow sparse_addmul(const SparseRow &x, const SparseRow &y, const Int &s,
                        const Int &t) {
  // s*x + t*y, merged; mpz_addmul keeps this allocation-light
  SparseRow r;
  r.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  Int v;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      mpz_mul(v.get_mpz_t(), s.get_mpz_t(), x[i].second.get_mpz_t());
      if (v != 0)
        r.emplace_back(x[i].first, v);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      mpz_mul(v.get_mpz_t(), t.get_mpz_t(), y[j].second.get_mpz_t());
      if (v != 0)
        r.emplace_back(y[j].first, v);
      ++j;
    } else {
      mpz_mul(v.get_mpz_t(), s.get_mpz_t(), x[i].second.get_mpz_t());
      mpz_addmul(v.get_mpz_t(), t.get_mpz_t(), y[j].second.get_mpz_t());
      if (v != 0)
        r.emplace_back(x[i].first, v);
      ++i;
      ++j;
    }
  }
  return r;
}

struct SparseRows {
  std::vector<SparseRow> a, u;

  void swap_rows(unsigned i, unsigned j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  }
  Int entry(unsigned r, unsigned c) const {
    auto it = std::lower_bound(a[r].begin(), a[r].end(), c,
                               [](const auto &p, unsigned col) {
                                 return p.first < col;
                               });
    if (it != a[r].end() && it->first == c)
      return it->second;
    return Int(0);
  }
  void transform2(unsigned i, unsigned j, const Int &s, const Int &t,
                  const Int &p, const Int &q) {
    for (auto *m : {&a, &u}) {
      SparseRow ni = sparse_addmul((*m)[i], (*m)[j], s, t);
      SparseRow nj = sparse_addmul((*m)[i], (*m)[j], p, q);
      (*m)[i] = std::move(ni);
      (*m)[j] = std::move(nj);
    }
  }
  void addmul(unsigned dst, unsigned src, const Int &f) {
    for (auto *m : {&a, &u})
      (*m)[dst] = sparse_addmul((*m)[dst], (*m)[src], 1, f);
  }
  void negate(unsigned i) {
    for (auto *m : {&a, &u})
      for (auto &e : (*m)[i])
        e.second = -e.second;
  }
};

template <class Rows>
std::vector<unsigned> hnf_inplace(Rows &rows, unsigned nrows, unsigned ncols) {
  std::vector<unsigned> pivots;
  unsigned rank = 0;
  for (unsigned col = 0; col < ncols && rank < nrows; ++col) {
    unsigned piv = rank;
    while (piv < nrows && rows.entry(piv, col) == 0)
      ++piv;
    if (piv == nrows)
      continue;
    if (piv != rank)
      rows.swap_rows(rank, piv);
    for (unsigned r = rank + 1; r < nrows; ++r) {
      Int arc = rows.entry(r, col);
      if (arc == 0)
        continue;
      Int apc = rows.entry(rank, col);
      Int g, s, t;
      ext_gcd(apc, arc, g, s, t);
      // (pivot,row) <- (s*p + t*r, -(arc/g)*p + (apc/g)*r); det = +1
      rows.transform2(rank, r, s, t, -arc / g, apc / g);
    }
    if (rows.entry(rank, col) < 0)
      rows.negate(rank);
    const Int apc = rows.entry(rank, col);
    for (unsigned r = 0; r < rank; ++r) {
      Int q = fdiv_q(rows.entry(r, col), apc);
      if (q != 0)
        rows.addmul(r, rank, -q);
    }
    pivots.push_back(col);
    ++rank;
  }
  return pivots;
}

} // namespace

HnfResult hnf_dense(const IntMatrix &m) {
  DenseRows rows;
  rows.a.resize(m.rows());
  rows.u.resize(m.rows());
  for (unsigned r = 0; r < m.rows(); ++r) {
    rows.a[r] = m.row(r);
    rows.u[r].assign(m.rows(), Int(0));
    rows.u[r][r] = 1;
  }
  HnfResult res;
  res.pivots = hnf_inplace(rows, m.rows(), m.cols());
  res.H = IntMatrix(m.rows(), m.cols());
  res.U = IntMatrix(m.rows(), m.rows());
  for (unsigned r = 0; r < m.rows(); ++r) {
    for (unsigned c = 0; c < m.cols(); ++c)
      res.H.at(r, c) = rows.a[r][c];
    for (unsigned c = 0; c < m.rows(); ++c)
      res.U.at(r, c) = rows.u[r][c];
  }
  return res;
}

HnfResult hnf_sparse(const IntMatrix &m) {
  SparseRows rows;
  rows.a.resize(m.rows());
  rows.u.resize(m.rows());
  for (unsigned r = 0; r < m.rows(); ++r) {
    rows.a[r] = sparse_from_dense(m.row(r));
    rows.u[r] = {{r, Int(1)}};
  }
  HnfResult res;
  res.pivots = hnf_inplace(rows, m.rows(), m.cols());
  res.H = IntMatrix(m.rows(), m.cols());
  res.U = IntMatrix(m.rows(), m.rows());
  for (unsigned r = 0; r < m.rows(); ++r) {
    for (const auto &[c, v] : rows.a[r])
      res.H.at(r, c) = v;
    for (const auto &[c, v] : rows.u[r])
      res.U.at(r, c) = v;
  }
  return res;
}

HnfResult hnf(const IntMatrix &m) {
  if (m.rows() > 4 && m.density() < 0.10)
    return hnf_sparse(m);
  return hnf_dense(m);
}

// ---------------------------------------------------------------- SNF

SnfResult snf(const IntMatrix &a) {
  const unsigned R = a.rows(), C = a.cols();
  SnfResult res;
  res.D = a;
  res.U = IntMatrix::identity(R);
  res.V = IntMatrix::identity(C);
  IntMatrix &D = res.D, &U = res.U, &V = res.V;

  auto row_addmul = [&](unsigned dst, unsigned src, const Int &f) {
    for (unsigned c = 0; c < C; ++c)
      D.at(dst, c) += f * D.at(src, c);
    for (unsigned c = 0; c < R; ++c)
      U.at(dst, c) += f * U.at(src, c);
  };
  auto col_addmul = [&](unsigned dst, unsigned src, const Int &f) {
    for (unsigned r = 0; r < R; ++r)
      D.at(r, dst) += f * D.at(r, src);
    for (unsigned r = 0; r < C; ++r)
      V.at(r, dst) += f * V.at(r, src);
  };
  auto row_swap = [&](unsigned i, unsigned j) {
    for (unsigned c = 0; c < C; ++c)
      std::swap(D.at(i, c), D.at(j, c));
    for (unsigned c = 0; c < R; ++c)
      std::swap(U.at(i, c), U.at(j, c));
  };
  auto col_swap = [&](unsigned i, unsigned j) {
    for (unsigned r = 0; r < R; ++r)
      std::swap(D.at(r, i), D.at(r, j));
    for (unsigned r = 0; r < C; ++r)
      std::swap(V.at(r, i), V.at(r, j));
  };
  auto row_negate = [&](unsigned i) {
    for (unsigned c = 0; c < C; ++c)
      D.at(i, c) = -D.at(i, c);
    for (unsigned c = 0; c < R; ++c)
      U.at(i, c) = -U.at(i, c);
  };

  const unsigned n = std::min(R, C);
  for (unsigned k = 0; k < n; ++k) {
    // move a minimal nonzero entry of the trailing block to (k,k)
    for (;;) {
      unsigned br = k, bc = k;
      bool found = false;
      for (unsigned r = k; r < R; ++r)
        for (unsigned c = k; c < C; ++c)
          if (D.at(r, c) != 0 &&
              (!found || abs(D.at(r, c)) < abs(D.at(br, bc)))) {
            br = r;
            bc = c;
            found = true;
          }
      if (!found)
        goto done;
      if (br != k)
        row_swap(k, br);
      if (bc != k)
        col_swap(k, bc);
      if (D.at(k, k) < 0)
        row_negate(k);

      bool clean = true;
      for (unsigned r = k + 1; r < R; ++r)
        if (D.at(r, k) != 0) {
          Int q = fdiv_q(D.at(r, k), D.at(k, k));
          row_addmul(r, k, -q);
          if (D.at(r, k) != 0)
            clean = false;
        }
      for (unsigned c = k + 1; c < C; ++c)
        if (D.at(k, c) != 0) {
          Int q = fdiv_q(D.at(k, c), D.at(k, k));
          col_addmul(c, k, -q);
          if (D.at(k, c) != 0)
            clean = false;
        }
      if (!clean)
        continue; // smaller remainders appeared; pick a new pivot

      // divisibility: d_k must divide the whole trailing block
      bool divides = true;
      for (unsigned r = k + 1; r < R && divides; ++r)
        for (unsigned c = k + 1; c < C && divides; ++c)
          if (D.at(r, c) % D.at(k, k) != 0) {
            col_addmul(k, c, 1); // pull the offending column in and redo
            divides = false;
          }
      if (divides)
        break;
    }
  }
done:
  return res;
}

Int determinant(const IntMatrix &a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("determinant: not square");
  const unsigned n = a.rows();
  if (n == 0)
    return 1;
  // Bareiss fraction-free elimination
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (unsigned k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      unsigned p = k + 1;
      while (p < n && m.at(p, k) == 0)
        ++p;
      if (p == n)
        return 0;
      for (unsigned c = 0; c < n; ++c)
        std::swap(m.at(k, c), m.at(p, c));
      sign = -sign;
    }
    for (unsigned i = k + 1; i < n; ++i)
      for (unsigned j = k + 1; j < n; ++j) {
        Int v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = v / prev; // exact
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

std::optional<std::vector<Int>>
lattice_membership(const std::vector<Int> &v,
                   const std::vector<std::vector<Int>> &gens) {
  for (const auto &g : gens)
    if (g.size() != v.size())
      throw std::invalid_argument("lattice_membership: dimension mismatch");
  if (gens.empty()) {
    for (const auto &x : v)
      if (x != 0)
        return std::nullopt;
    return std::vector<Int>{};
  }
  IntMatrix a = IntMatrix::from_rows(gens);
  HnfResult h = hnf(a);

  // back-substitute v through the echelon rows of H
  std::vector<Int> t = v;
  std::vector<Int> y(a.rows(), Int(0));
  for (unsigned r = 0; r < h.pivots.size(); ++r) {
    unsigned c = h.pivots[r];
    if (t[c] % h.H.at(r, c) != 0)
      return std::nullopt;
    Int q = t[c] / h.H.at(r, c);
    if (q != 0)
      for (unsigned j = 0; j < a.cols(); ++j)
        t[j] -= q * h.H.at(r, j);
    y[r] = std::move(q);
  }
  for (const auto &x : t)
    if (x != 0)
      return std::nullopt;

  // coefficients in terms of the original generators: c = y * U
  std::vector<Int> coeff(a.rows(), Int(0));
  for (unsigned i = 0; i < a.rows(); ++i) {
    if (y[i] == 0)
      continue;
    for (unsigned j = 0; j < a.rows(); ++j)
      coeff[j] += y[i] * h.U.at(i, j);
  }

  // re-substitution check, always
  std::vector<Int> check(v.size(), Int(0));
  for (unsigned i = 0; i < gens.size(); ++i)
    if (coeff[i] != 0)
      for (size_t j = 0; j < v.size(); ++j)
        check[j] += coeff[i] * gens[i][j];
  if (check != v)
    throw std::logic_error("lattice_membership: certificate failed");
  return coeff;
}

SparseRow sparse_from_dense(const std::vector<Int> &v) {
  SparseRow r;
  for (unsigned c = 0; c < v.size(); ++c)
    if (v[c] != 0)
      r.emplace_back(c, v[c]);
  return r;
}

std::vector<Int> dense_from_sparse(const SparseRow &r, unsigned n) {
  std::vector<Int> v(n, Int(0));
  for (const auto &[c, x] : r)
    v[c] = x;
  return v;
}

// ------------------------------------------------------ incremental HNF

// Size-reduce the non-leading entries of r against the other pivot rows.
// Without this, gcd cascades blow intermediate entries up to FFT sizes.
void IncrementalHnf::reduce_tail(SparseRow &r) const {
  size_t scan = 1;
  while (scan < r.size()) {
    auto it = rows_.find(r[scan].first);
    if (it == rows_.end()) {
      ++scan;
      continue;
    }
    Int q = fdiv_q(r[scan].second, it->second[0].second);
    if (q == 0) {
      ++scan;
      continue;
    }
    r = sparse_addmul(r, it->second, 1, -q);
  }
}

bool IncrementalHnf::add_row(SparseRow row) {
  while (!row.empty()) {
    unsigned lead = row[0].first;
    auto it = rows_.find(lead);
    if (it == rows_.end()) {
      if (row[0].second < 0)
        for (auto &e : row)
          e.second = -e.second;
      reduce_tail(row);
      rows_.emplace(lead, std::move(row));
      return false;
    }
    const Int &d = it->second[0].second;
    const Int &e = row[0].second;
    if (e % d == 0) {
      row = sparse_addmul(row, it->second, 1, -(e / d));
    } else {
      Int g, s, t;
      ext_gcd(d, e, g, s, t);
      SparseRow combined = sparse_addmul(it->second, row, s, t); // lead g > 0
      SparseRow reduced = sparse_addmul(row, it->second, d / g, -(e / g));
      reduce_tail(combined);
      it->second = std::move(combined);
      row = std::move(reduced);
    }
  }
  return true;
}

SparseRow IncrementalHnf::reduce(SparseRow row) const {
  size_t scan = 0;
  while (scan < row.size()) {
    unsigned col = row[scan].first;
    auto it = rows_.find(col);
    if (it == rows_.end()) {
      ++scan;
      continue;
    }
    Int q = fdiv_q(row[scan].second, it->second[0].second);
    if (q == 0) {
      ++scan;
      continue;
    }
    row = sparse_addmul(row, it->second, 1, -q);
    // the leading part below `scan` is untouched by rows with pivot >= col
  }
  return row;
}

bool IncrementalHnf::contains(const SparseRow &row) const {
  SparseRow r = row;
  while (!r.empty()) {
    auto it = rows_.find(r[0].first);
    if (it == rows_.end())
      return false;
    const Int &d = it->second[0].second;
    if (r[0].second % d != 0)
      return false;
    r = sparse_addmul(r, it->second, 1, -(r[0].second / d));
  }
  return true;
}

void IncrementalHnf::normalize() {
  // reduce entries above each pivot, processing pivots left to right
  for (auto it = rows_.begin(); it != rows_.end(); ++it) {
    for (auto jt = rows_.begin(); jt != it; ++jt) {
      // reduce entry of row jt at column it->first
      const SparseRow &p = it->second;
      SparseRow &r = jt->second;
      auto pos = std::lower_bound(
          r.begin(), r.end(), it->first,
          [](const auto &e, unsigned col) { return e.first < col; });
      if (pos == r.end() || pos->first != it->first)
        continue;
      Int q = fdiv_q(pos->second, p[0].second);
      if (q != 0)
        r = sparse_addmul(r, p, 1, -q);
    }
  }
}

} // namespace dimq
