#pragma once

#include "dimq/bigint.hpp"
#include "dimq/zlinalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace dimq {

// Free Lie ring on k generators with a fixed Hall family. Basic commutators
// are tree-shaped; the Hall order is (weight, then creation order), with
// generators ordered by index.
struct LieTerm; // bracket expression node

class HallBasis {
public:
  HallBasis(unsigned rank, unsigned max_weight);

  unsigned rank() const { return rank_; }
  unsigned max_weight() const { return max_weight_; }

  // ids of the basic commutators of a given weight, in basis order
  const std::vector<unsigned> &of_weight(unsigned w) const;
  unsigned weight(unsigned id) const { return weight_[id]; }
  // children of a composite basic commutator id = [left, right]
  std::pair<unsigned, unsigned> parts(unsigned id) const;
  bool is_generator(unsigned id) const { return weight_[id] == 1; }
  unsigned generator_index(unsigned id) const;

  std::string name(unsigned id,
                   const std::vector<std::string> *gen_names = nullptr) const;

  size_t size() const { return weight_.size(); }

private:
  unsigned rank_, max_weight_;
  std::vector<unsigned> weight_;
  std::vector<std::pair<long, long>> kids_; // (-1,-1) for generators
  std::vector<long> genidx_;
  std::vector<std::vector<unsigned>> by_weight_;
};

// Integer combination of basic commutators, homogeneous of one weight.
struct LieElement {
  unsigned weight = 0;
  std::map<unsigned, Int> coords; // basic commutator id -> coefficient

  bool is_zero() const { return coords.empty(); }
  void add(unsigned id, const Int &c);
  LieElement &operator+=(const LieElement &o);
  LieElement &operator*=(const Int &c);
  friend bool operator==(const LieElement &a, const LieElement &b) {
    return a.weight == b.weight && a.coords == b.coords;
  }
};

// Bracket expressions for input to the normal form: leaf generators or
// integer combinations thereof, combined by brackets.
struct LieExpr {
  // leaf: combination of generators; node: [left, right]
  std::map<unsigned, Int> leaf; // generator index -> coefficient
  std::shared_ptr<LieExpr> left, right;

  static LieExpr gen(unsigned i);
  static LieExpr combination(std::map<unsigned, Int> c);
  static LieExpr bracket(LieExpr a, LieExpr b);
  static LieExpr left_normed(const std::vector<LieExpr> &parts);
  bool is_leaf() const { return !left; }
  unsigned weight() const;
};

// Rewrites a homogeneous bracket expression into Hall coordinates via
// antisymmetry and Jacobi. Throws on non-homogeneous input (weight beyond
// the table).
class LieRewriter {
public:
  explicit LieRewriter(std::shared_ptr<const HallBasis> basis)
      : basis_(std::move(basis)) {}

  const HallBasis &basis() const { return *basis_; }

  LieElement normal_form(const LieExpr &e);
  LieElement bracket(const LieElement &a, const LieElement &b);

private:
  LieElement basic_bracket(unsigned a, unsigned b);

  std::shared_ptr<const HallBasis> basis_;
  std::map<std::pair<unsigned, unsigned>, LieElement> memo_;
};

// Witt dimension (1/n) sum_{d|n} mu(d) k^{n/d}.
Int witt_dimension(unsigned k, unsigned n);

// The section-2 computation in V = gamma_3(F)/gamma_4(F) = Z^20:
// W is generated by [r_ij, x_k, x_l] and [x_k, x_l, r_ij] over the four
// mixed relators; decides membership of w and 3w.
struct LieCheckReport {
  unsigned basis_size = 0;
  std::vector<std::string> w_generator_names;
  std::vector<std::vector<Int>> w_generators; // 8 rows of length 20
  std::vector<Int> w_coords;
  IntMatrix hnf_of_W;
  bool w_in_W = true;
  bool three_w_in_W = false;
  std::vector<Int> certificate; // for 3w when present
  bool certificate_ok = false;

  bool pass() const { return !w_in_W && three_w_in_W && certificate_ok; }
};

LieCheckReport weight3_check();

} // namespace dimq
