#pragma once

#include "dimq/fixtures.hpp"
#include "dimq/presentation.hpp"
#include "dimq/word.hpp"

#include <map>
#include <string>
#include <vector>

namespace dimq {

// Monomial in noncommuting variables X_i: the sequence of indices.
using NcMonomial = std::vector<unsigned>;

struct DegLex {
  bool operator()(const NcMonomial &a, const NcMonomial &b) const {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  }
};

// Integer-coefficient noncommutative polynomial truncated at a fixed degree
// cap: monomials of length >= cap are dropped. Mixing caps is an error, not
// an implicit re-truncation.
class NcPoly {
public:
  explicit NcPoly(unsigned cap) : cap_(cap) {}
  static NcPoly constant(unsigned cap, Int c);
  static NcPoly variable(unsigned cap, unsigned i); // X_i

  unsigned cap() const { return cap_; }
  const std::map<NcMonomial, Int, DegLex> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(NcMonomial m, Int c); // drops >= cap, deletes zeros
  Int coefficient(const NcMonomial &m) const;

  NcPoly &operator+=(const NcPoly &q);
  NcPoly &operator-=(const NcPoly &q);
  NcPoly operator-() const;
  NcPoly &operator*=(const Int &c);

  friend bool operator==(const NcPoly &a, const NcPoly &b) {
    return a.cap_ == b.cap_ && a.terms_ == b.terms_;
  }

  std::string str(const std::vector<GeneratorId> *alphabet = nullptr) const;

private:
  unsigned cap_;
  std::map<NcMonomial, Int, DegLex> terms_;
};

NcPoly nc_add(const NcPoly &p, const NcPoly &q);
NcPoly nc_sub(const NcPoly &p, const NcPoly &q);
NcPoly nc_mul(const NcPoly &p, const NcPoly &q);
NcPoly nc_pow(const NcPoly &p, const Int &e); // negative e inverts first
// Inverse of a unit with constant term +-1.
NcPoly nc_inverse(const NcPoly &p);

// x_i -> 1 + X_i, x_i^-1 -> sum (-1)^k X_i^k; multiplicative on words.
NcPoly magnus_embed(const Word &w, unsigned cap);
NcPoly magnus_embed_expr(const WordExpr &e, unsigned cap);

// Smallest degree carrying a nonzero term, with that homogeneous component.
struct LowestDegree {
  unsigned degree;
  NcPoly component;
};
std::optional<LowestDegree> lowest_degree(const NcPoly &p);
NcPoly homogeneous_component(const NcPoly &p, unsigned degree);

// Checks x^d - 1 = sum_{k=1..d} C(d,k) (x-1)^k inside the truncated ring
// with x = 1 + X; the left side is computed by binary powering, the right
// from explicit binomial coefficients.
bool verify_binomial_identity(const Int &d, unsigned cap);

// Mechanical replay of the section-1 congruence computation at cap 7.
struct ReplayReport {
  bool expansion_check = false;
  std::map<std::string, bool> binomial_checks; // "e1".."e8"
  std::map<std::string, unsigned> weight_checks;
  std::map<std::string, std::string> details; // failure diagnostics
  size_t expansion_residual_terms = 0;

  bool pass() const;
};

ReplayReport replay_section1();
ReplayReport replay_section1(const Section1Fixture &fix,
                             const PaperFixture &paper);

} // namespace dimq
