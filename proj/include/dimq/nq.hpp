#pragma once

#include "dimq/pc.hpp"
#include "dimq/presentation.hpp"

#include <optional>
#include <vector>

namespace dimq {

struct NqBudget {
  double seconds = 600.0;
  unsigned max_gens = 4096;
  size_t max_rows = 2'000'000;
};

// Definition of a pc generator in terms of the epimorphism: image of a
// presentation generator, commutator of two earlier pc generators, or the
// power tail of a torsion generator. Definitions are never given fresh
// correction tails in later classes; everything else is.
struct PcDefinition {
  enum Kind { Gen, Comm, Pow } kind;
  unsigned a = 0, b = 0;
};

struct NilpotentQuotient {
  PcPresentation pc;
  std::vector<PcElement> images; // per presentation generator
  std::vector<PcDefinition> defs;
  unsigned cls = 0; // class reached
  bool budget_exceeded = false;
  // per class k (1-based): elementary divisors of gamma_k/gamma_{k+1},
  // nontrivial torsion d > 1 first (divisibility order), one 0 per free rank
  std::vector<std::vector<Int>> layer_divisors;

  std::vector<unsigned> layer_sizes() const;
};

// Class-by-class computation of G/gamma_{c+1}(G) over Z with the natural
// epimorphism. On budget exhaustion returns the largest completed class
// with budget_exceeded set.
NilpotentQuotient nilpotent_quotient(const GroupPresentation &pres, unsigned c,
                                     const NqBudget &budget = {});

// gamma_n as generated by the pc generators of weight >= n; n <= class+1.
SubgroupBasis gamma_basis(const NilpotentQuotient &nq, unsigned n);

} // namespace dimq
