#pragma once

#include "dimq/bigint.hpp"
#include "dimq/presentation.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace dimq {

// Word over pc generators: (index, exponent) syllables in any order.
using PcWord = std::vector<std::pair<unsigned, Int>>;

// Normal-form exponent vector, stored sparsely: (index, exponent) pairs
// sorted by index, exponents nonzero, entry i reduced into [0, m_i) when
// a_i has finite relative order m_i. Sparse storage keeps collection cost
// proportional to the support, which is what survives quotients with
// thousands of generators.
struct PcElement {
  PcWord t;

  bool is_identity() const { return t.empty(); }
  long leading() const { return t.empty() ? -1 : (long)t[0].first; }
  const Int &leading_exp() const { return t[0].second; }
  Int get(unsigned g) const;
  // add delta to the exponent of a_g, keeping the invariants (no reduction)
  void add_to(unsigned g, const Int &delta);
  const PcWord &syllables() const { return t; }

  static PcElement from_dense(const std::vector<Int> &v);
  std::vector<Int> dense(unsigned n) const;

  friend bool operator==(const PcElement &a, const PcElement &b) {
    return a.t == b.t;
  }
  friend bool operator!=(const PcElement &a, const PcElement &b) {
    return !(a == b);
  }
  friend bool operator<(const PcElement &a, const PcElement &b) {
    return a.t < b.t;
  }
};

// Weighted polycyclic presentation. Conjugation is stored as commutator
// tails: [a_j, a_i] = tail(j,i) for j > i, so a_j a_i = a_i a_j tail(j,i).
// Tails of weight sum beyond the class are empty. Collection is from the
// left, moving whole powers; conjugation by a generator power is memoized.
class PcPresentation {
public:
  PcPresentation() = default;
  PcPresentation(const PcPresentation &o);
  PcPresentation &operator=(const PcPresentation &o);

  unsigned ngens = 0;
  std::vector<unsigned> weights;            // nondecreasing
  std::vector<std::optional<Int>> orders;   // m_i > 0 or infinite
  std::vector<PcWord> power_tails;          // a_i^{m_i} = tail, gens > i
  // nonempty commutator tails only; a dense j x i table would be quadratic
  // in the generator count, which the big quotients cannot afford
  std::map<std::pair<unsigned, unsigned>, PcWord> comm;

  unsigned cls() const; // max weight
  void init_trivial_tails();
  const PcWord &tail(unsigned j, unsigned i) const;
  bool tail_trivial(unsigned j, unsigned i) const {
    return comm.find({j, i}) == comm.end();
  }
  void set_tail(unsigned j, unsigned i, PcWord w);

  // structural sanity of the weight filtration and tail supports
  void validate() const;

  PcElement identity() const;
  PcElement unit(unsigned g) const;
  PcElement element_of(const PcWord &w) const; // collect

  PcElement mul(const PcElement &u, const PcElement &v) const;
  PcElement pow(const PcElement &u, const Int &n) const;
  PcElement inv(const PcElement &u) const;
  PcElement conjugate(const PcElement &u, const PcElement &h) const; // u^h
  PcElement comm_elem(const PcElement &u, const PcElement &v) const;

  // multiply r by a_g^e (resp. by v) on the right, in place
  void append_power(PcElement &r, unsigned g, Int e) const;
  void append_element(PcElement &r, const PcElement &v) const;

private:
  PcElement conj_gen_pow(unsigned h, unsigned g, const Int &e) const;
  PcElement conj_elem(const PcWord &s, unsigned g, const Int &e) const;
  void carry(PcElement &r, unsigned g) const;
  const PcElement &tail_elem(unsigned j, unsigned i) const;
  const PcElement &power_tail_elem(unsigned i) const;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::tuple<unsigned, unsigned, Int>, PcElement> conj_cache_;
  mutable std::map<std::pair<unsigned, unsigned>, PcElement> tail_cache_;
  mutable std::map<unsigned, PcElement> ptail_cache_;
};

struct ConsistencyReport {
  bool consistent = true;
  unsigned checked = 0;
  std::string witness; // first failing overlap, human readable
};

// Standard overlap tests: associativity triples a_k(a_j a_i) = (a_k a_j)a_i
// for k > j > i plus the power overlaps, filtered to weight sums <= max_w
// (0 = the presentation class, sufficient for weighted presentations).
ConsistencyReport check_consistency(const PcPresentation &pc,
                                    unsigned max_w = 0);

// Homomorphic evaluation of a structured word under generator images.
PcElement evaluate(const PcPresentation &pc,
                   const std::vector<PcElement> &images, const WordExpr &w);

// Induced generating sequence in echelon form w.r.t. leading index.
struct SubgroupBasis {
  std::map<unsigned, PcElement> rows; // leading index -> element

  bool trivial() const { return rows.empty(); }
};

// Echelonize + close the subgroup generated by gens (commutator closure and
// torsion-overflow closure). If normal_closure, also close under
// conjugation by all pc generators.
SubgroupBasis subgroup_basis(const PcPresentation &pc,
                             std::vector<PcElement> gens,
                             bool normal_closure = false);

bool is_in_subgroup(const PcPresentation &pc, const SubgroupBasis &basis,
                    const PcElement &g);

// gamma_1 >= gamma_2 >= ...; stops when trivial (or after ngens+1 steps).
std::vector<SubgroupBasis> lcs(const PcPresentation &pc);

// ------------------------------------------------------------------ io

struct PcData {
  PcPresentation pc;
  std::map<std::string, PcElement> images; // optional generator images
};

std::string export_pc(const PcData &data);
PcData import_pc(const std::string &json_text); // throws on malformed input

// ---------------------------------------------------------- verification

struct VerifyReport {
  bool consistent = false;
  std::vector<bool> relation_ok;
  bool all_relations_ok = false;
  bool has_witness = false;
  bool w_trivial = true;
  bool w_in_gamma_n = true;
  bool w_cube_in_gamma_n = true;
  unsigned gamma_n = 0;

  bool pass() const { return consistent && all_relations_ok; }
};

// Evaluate every relation of pres under images; optionally evaluate witness
// w and test membership in gamma_n via lcs + sifting.
VerifyReport verify_relations(const PcPresentation &pc,
                              const std::vector<PcElement> &images,
                              const GroupPresentation &pres,
                              const WordExpr *witness = nullptr,
                              unsigned gamma_n = 7);

} // namespace dimq
