#pragma once

#include "dimq/nq.hpp"
#include "dimq/pc.hpp"
#include "dimq/zlinalg.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace dimq {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AugBudget {
  double seconds = 600.0;
  size_t max_monomials = 200'000;
  size_t max_rows = 5'000'000;
};

// Ring element of ZQ/w^n in the monomial model: coefficient per monomial
// index. Monomials are exponent vectors over the pc generators, read as the
// ordered product prod (a_i - 1)^{e_i}, graded by weighted degree.
using RingVec = std::map<unsigned, Int>;

class AugModule {
public:
  // Builds the monomial basis and the relation lattice L, generated by
  // u * (a_i^{m_i} - tail_i) * v over finite-order generators and monomial
  // pairs, then closed under multiplication by (a_k - 1) on both sides
  // until the Hermite form stabilizes.
  AugModule(const PcPresentation &pc, unsigned cap, const AugBudget &budget = {});

  const PcPresentation &pc() const { return pc_; }
  unsigned cap() const { return cap_; }
  size_t monomial_count() const { return monomials_.size(); }
  const std::vector<std::vector<unsigned>> &monomials() const {
    return monomials_;
  }
  const IncrementalHnf &lattice() const { return lattice_; }
  // elementary divisors of w^d / w^{d+1} for d = 1..cap-1 (0 = free factor)
  const std::vector<std::vector<Int>> &layer_divisors() const {
    return layers_;
  }

  unsigned weighted_degree(const std::vector<unsigned> &mono) const;

  // image of a normal-form group element in the monomial model
  RingVec expand(const PcElement &g) const;
  RingVec mul(const RingVec &a, const RingVec &b) const;

  // g - 1 in w^n, with lattice coefficients as certificate when true
  struct DeltaAnswer {
    bool in_delta = false;
    std::vector<Int> certificate; // over the lattice basis rows
  };
  DeltaAnswer is_in_delta(const PcElement &g) const;

private:
  RingVec expand_gen_power(unsigned i, const Int &e) const;
  RingVec expand_word(const PcWord &w) const;
  RingVec mono_times_gen(unsigned mono, unsigned g) const;
  RingVec vec_times_gen(const RingVec &v, unsigned g) const;
  const RingVec &reorder_correction(unsigned j, unsigned i) const;
  RingVec vec_of_mono(unsigned idx) const;
  void compute_layers();

  PcPresentation pc_;
  unsigned cap_;
  AugBudget budget_;
  std::vector<std::vector<unsigned>> monomials_;
  std::map<std::vector<unsigned>, unsigned> index_;
  IncrementalHnf lattice_{0};
  std::vector<std::vector<Int>> layers_;

  mutable std::map<std::pair<unsigned, unsigned>, RingVec> mono_cache_;
  mutable std::map<std::pair<unsigned, unsigned>, RingVec> corr_cache_;
};

// Full pipeline: Q = G/gamma_n via nq (class n-1 decides delta_n), then the
// augmentation quotient at cap n; gamma_n-membership is image triviality in
// the class-(n-1) quotient.
struct DeltaReport {
  unsigned n = 0;
  unsigned class_used = 0;
  bool completed = false;
  bool budget_exceeded = false;
  std::string budget_note;
  bool in_delta = false;
  bool in_gamma = false;
  size_t monomials = 0;
  std::vector<std::vector<Int>> layers;
  std::vector<Int> certificate;
};

DeltaReport delta_report(const GroupPresentation &pres, const WordExpr &word,
                         unsigned n, const NqBudget &nq_budget = {},
                         const AugBudget &aug_budget = {});

} // namespace dimq
