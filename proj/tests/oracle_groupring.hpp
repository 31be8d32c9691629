#pragma once

// Test-only brute-force model of ZQ and its augmentation filtration for a
// finite pc group Q: elements of ZQ are dense integer vectors over the group
// elements, w^k lattices are built by iterated products (g - 1) against a
// Hermite basis, independent of the monomial machinery under test.

#include "dimq/pc.hpp"
#include "dimq/zlinalg.hpp"

#include <map>
#include <vector>

namespace oracle {

using namespace dimq;

struct GroupRing {
  const PcPresentation &pc;
  std::vector<PcElement> elements;
  std::map<PcElement, unsigned> index;

  explicit GroupRing(const PcPresentation &p) : pc(p) {
    std::vector<Int> cur(p.ngens, Int(0));
    enumerate(0, cur);
  }

  void enumerate(unsigned i, std::vector<Int> &cur) {
    if (i == pc.ngens) {
      PcElement x = PcElement::from_dense(cur);
      index.emplace(x, (unsigned)elements.size());
      elements.push_back(std::move(x));
      return;
    }
    if (!pc.orders[i])
      throw std::invalid_argument("oracle needs a finite group");
    for (Int v = 0; v < *pc.orders[i]; ++v) {
      cur[i] = v;
      enumerate(i + 1, cur);
    }
    cur[i] = 0;
  }

  size_t order() const { return elements.size(); }

  // v * (g - 1) for a ring element v
  std::vector<Int> times_gminus1(const std::vector<Int> &v,
                                 const PcElement &g) const {
    std::vector<Int> r(order(), Int(0));
    for (unsigned h = 0; h < order(); ++h) {
      if (v[h] == 0)
        continue;
      unsigned hg = index.at(pc.mul(elements[h], g));
      r[hg] += v[h];
      r[h] -= v[h];
    }
    return r;
  }

  // Hermite bases of w^1 .. w^{kmax}
  std::vector<IncrementalHnf> power_lattices(unsigned kmax) const {
    std::vector<IncrementalHnf> out;
    IncrementalHnf w1((unsigned)order());
    for (const auto &g : elements) {
      std::vector<Int> row(order(), Int(0));
      if (g.is_identity())
        continue;
      row[index.at(g)] = 1;
      row[index.at(pc.identity())] -= 1;
      w1.add_row(sparse_from_dense(row));
    }
    w1.normalize();
    out.push_back(std::move(w1));
    for (unsigned k = 1; k < kmax; ++k) {
      IncrementalHnf next((unsigned)order());
      for (const auto &[piv, row] : out.back().rows()) {
        std::vector<Int> r = dense_from_sparse(row, (unsigned)order());
        for (const auto &g : elements) {
          if (g.is_identity())
            continue;
          next.add_row(sparse_from_dense(times_gminus1(r, g)));
        }
      }
      next.normalize();
      out.push_back(std::move(next));
    }
    return out;
  }
};

// elementary divisors of w^k / w^{k+1} from the Hermite bases
inline std::vector<Int> layer_divisors(const GroupRing &R,
                                       const IncrementalHnf &wk,
                                       const IncrementalHnf &wk1) {
  std::vector<std::vector<Int>> basis;
  for (const auto &[piv, row] : wk.rows())
    basis.push_back(dense_from_sparse(row, (unsigned)R.order()));
  std::vector<std::vector<Int>> rel;
  for (const auto &[piv, row] : wk1.rows()) {
    auto c = lattice_membership(dense_from_sparse(row, (unsigned)R.order()),
                                basis);
    if (!c)
      throw std::logic_error("oracle: w^{k+1} not inside w^k");
    rel.push_back(*c);
  }
  std::vector<Int> divisors;
  if (basis.empty())
    return divisors;
  IntMatrix m((unsigned)std::max<size_t>(rel.size(), 1),
              (unsigned)basis.size());
  for (unsigned r = 0; r < rel.size(); ++r)
    for (unsigned c = 0; c < basis.size(); ++c)
      m.at(r, c) = rel[r][c];
  SnfResult s = snf(m);
  unsigned rank = 0;
  for (unsigned k = 0; k < std::min(m.rows(), m.cols()); ++k)
    if (s.D.at(k, k) != 0)
      ++rank;
  for (unsigned k = 0; k < rank; ++k)
    if (s.D.at(k, k) > 1)
      divisors.push_back(s.D.at(k, k));
  for (unsigned k = rank; k < basis.size(); ++k)
    divisors.push_back(0);
  return divisors;
}

// g - 1 in w^n?
inline bool in_delta(const GroupRing &R, const IncrementalHnf &wn,
                     const PcElement &g) {
  std::vector<Int> row(R.order(), Int(0));
  row[R.index.at(g)] += 1;
  row[R.index.at(R.pc.identity())] -= 1;
  return wn.contains(sparse_from_dense(row));
}

} // namespace oracle
