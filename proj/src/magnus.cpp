#include "dimq/magnus.hpp"

#include <sstream>
#include <stdexcept>

namespace dimq {

NcPoly NcPoly::constant(unsigned cap, Int c) {
  NcPoly p(cap);
  p.add_term({}, std::move(c));
  return p;
}

NcPoly NcPoly::variable(unsigned cap, unsigned i) {
  NcPoly p(cap);
  p.add_term({i}, 1);
  return p;
}

void NcPoly::add_term(NcMonomial m, Int c) {
  if (c == 0 || m.size() >= cap_)
    return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), std::move(c));
  } else {
    it->second += c;
    if (it->second == 0)
      terms_.erase(it);
  }
}

Int NcPoly::coefficient(const NcMonomial &m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Int(0) : it->second;
}

static void check_caps(const NcPoly &p, const NcPoly &q) {
  if (p.cap() != q.cap())
    throw std::invalid_argument("NcPoly: cap mismatch");
}

NcPoly &NcPoly::operator+=(const NcPoly &q) {
  check_caps(*this, q);
  for (const auto &[m, c] : q.terms_)
    add_term(m, c);
  return *this;
}

NcPoly &NcPoly::operator-=(const NcPoly &q) {
  check_caps(*this, q);
  for (const auto &[m, c] : q.terms_)
    add_term(m, -c);
  return *this;
}

NcPoly NcPoly::operator-() const {
  NcPoly r(cap_);
  for (const auto &[m, c] : terms_)
    r.terms_.emplace(m, -c);
  return r;
}

NcPoly &NcPoly::operator*=(const Int &c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto &[m, v] : terms_)
    v *= c;
  return *this;
}

NcPoly nc_add(const NcPoly &p, const NcPoly &q) {
  NcPoly r = p;
  r += q;
  return r;
}

NcPoly nc_sub(const NcPoly &p, const NcPoly &q) {
  NcPoly r = p;
  r -= q;
  return r;
}

NcPoly nc_mul(const NcPoly &p, const NcPoly &q) {
  check_caps(p, q);
  NcPoly r(p.cap());
  for (const auto &[mp, cp] : p.terms()) {
    for (const auto &[mq, cq] : q.terms()) {
      if (mp.size() + mq.size() >= r.cap())
        continue;
      NcMonomial m = mp;
      m.insert(m.end(), mq.begin(), mq.end());
      r.add_term(std::move(m), cp * cq);
    }
  }
  return r;
}

NcPoly nc_inverse(const NcPoly &p) {
  Int c = p.coefficient({});
  if (c != 1 && c != -1)
    throw std::invalid_argument("nc_inverse: constant term must be a unit");
  NcPoly q = p;
  q.add_term({}, -c); // augmentation part
  // (c + q)^-1 = c * sum_k (-c q)^k
  NcPoly v = -q;
  v *= c;
  NcPoly acc = NcPoly::constant(p.cap(), 1);
  NcPoly power = NcPoly::constant(p.cap(), 1);
  for (unsigned k = 1; k < p.cap(); ++k) {
    power = nc_mul(power, v);
    if (power.is_zero())
      break;
    acc += power;
  }
  acc *= c;
  return acc;
}

NcPoly nc_pow(const NcPoly &p, const Int &e) {
  if (e < 0)
    return nc_pow(nc_inverse(p), -e);
  NcPoly base = p;
  NcPoly r = NcPoly::constant(p.cap(), 1);
  Int n = e;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t()))
      r = nc_mul(r, base);
    n >>= 1;
    if (n > 0)
      base = nc_mul(base, base);
  }
  return r;
}

// (1 + X_g)^e expanded by the binomial series; exact for negative e too.
static NcPoly syllable_series(unsigned g, const Int &e, unsigned cap) {
  NcPoly p(cap);
  NcMonomial m;
  for (unsigned k = 0; k < cap; ++k) {
    p.add_term(m, binom(e, k));
    m.push_back(g);
  }
  return p;
}

NcPoly magnus_embed(const Word &w, unsigned cap) {
  NcPoly r = NcPoly::constant(cap, 1);
  for (const auto &s : w.syllables())
    r = nc_mul(r, syllable_series(s.gen, s.exp, cap));
  return r;
}

NcPoly magnus_embed_expr(const WordExpr &e, unsigned cap) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    return NcPoly::constant(cap, 1);
  case WordExpr::Kind::Gen:
    return syllable_series(e.gen_index(), 1, cap);
  case WordExpr::Kind::Power: {
    const WordExpr &base = e.children()[0];
    if (base.kind() == WordExpr::Kind::Gen)
      return syllable_series(base.gen_index(), e.exponent(), cap);
    return nc_pow(magnus_embed_expr(base, cap), e.exponent());
  }
  case WordExpr::Kind::Product: {
    NcPoly r = NcPoly::constant(cap, 1);
    for (const auto &k : e.children())
      r = nc_mul(r, magnus_embed_expr(k, cap));
    return r;
  }
  case WordExpr::Kind::Commutator: {
    NcPoly u = magnus_embed_expr(e.children()[0], cap);
    NcPoly v = magnus_embed_expr(e.children()[1], cap);
    return nc_mul(nc_mul(nc_inverse(u), nc_inverse(v)), nc_mul(u, v));
  }
  }
  return NcPoly::constant(cap, 1);
}

std::optional<LowestDegree> lowest_degree(const NcPoly &p) {
  if (p.is_zero())
    return std::nullopt;
  unsigned d = (unsigned)p.terms().begin()->first.size();
  return LowestDegree{d, homogeneous_component(p, d)};
}

NcPoly homogeneous_component(const NcPoly &p, unsigned degree) {
  NcPoly r(p.cap());
  for (const auto &[m, c] : p.terms()) {
    if (m.size() > degree)
      break; // deglex order: done
    if (m.size() == degree)
      r.add_term(m, c);
  }
  return r;
}

std::string NcPoly::str(const std::vector<GeneratorId> *alphabet) const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[m, c] : terms_) {
    if (!first)
      os << (c > 0 ? " + " : " - ");
    else if (c < 0)
      os << "-";
    Int a = abs(c);
    if (a != 1 || m.empty())
      os << a.get_str();
    for (unsigned i : m) {
      if (alphabet)
        os << "X(" << (*alphabet)[i].name << ")";
      else
        os << "X" << i;
    }
    first = false;
  }
  return os.str();
}

bool verify_binomial_identity(const Int &d, unsigned cap) {
  if (d < 1)
    return false;
  NcPoly x = NcPoly::constant(cap, 1);
  x.add_term({0}, 1);
  NcPoly lhs = nc_pow(x, d);
  lhs.add_term({}, -1);

  NcPoly rhs(cap);
  NcMonomial m = {0};
  for (unsigned k = 1; k < cap; ++k) {
    if (d < k)
      break;
    rhs.add_term(m, binom(d, k));
    m.push_back(0);
  }
  return lhs == rhs;
}

// ------------------------------------------------------------- replay

namespace {

NcPoly monomial_poly(unsigned cap, const std::array<unsigned, 3> &letters,
                     const Int &coeff) {
  NcPoly p(cap);
  p.add_term({letters[0], letters[1], letters[2]}, coeff);
  return p;
}

// relation rhs as (commutator expr, power-of-3 exponent)
bool split_rhs(const WordExpr &rhs, WordExpr &comm, unsigned long &pow) {
  if (rhs.kind() == WordExpr::Kind::Commutator) {
    comm = rhs;
    pow = 0;
    return true;
  }
  if (rhs.kind() == WordExpr::Kind::Power &&
      rhs.children()[0].kind() == WordExpr::Kind::Commutator) {
    auto k = pow3_log(rhs.exponent());
    if (!k)
      return false;
    comm = rhs.children()[0];
    pow = *k;
    return true;
  }
  return false;
}

} // namespace

bool ReplayReport::pass() const {
  if (!expansion_check)
    return false;
  for (const auto &[k, v] : binomial_checks)
    if (!v)
      return false;
  return true;
}

ReplayReport replay_section1() {
  return replay_section1(section1_fixture(), paper_fixture());
}

ReplayReport replay_section1(const Section1Fixture &fix,
                             const PaperFixture &paper) {
  constexpr unsigned CAP = 7;
  ReplayReport rep;
  const GroupPresentation &G = paper.G;

  // --- expansion check: the degree-3 parts of the four scaled commutators
  // of w sum to the sixteen grouped monomials of the eight binomials.
  NcPoly t_sum(CAP);
  for (unsigned i = 0; i < 4; ++i) {
    const auto &L = fix.t_letters[i];
    Word c = left_normed({Word::generator(L[0]), Word::generator(L[1]),
                          Word::generator(L[2])});
    NcPoly e = magnus_embed(c, CAP);
    e.add_term({}, -1);
    NcPoly deg3 = homogeneous_component(e, 3);
    deg3 *= pow3(fix.t_coeff_pow[i]);
    t_sum += deg3;
  }

  NcPoly e_sum(CAP);
  for (const auto &b : fix.binomials)
    for (int d = 0; d < 2; ++d)
      e_sum += monomial_poly(CAP, b.mono[d],
                             Int(b.sign) * pow3(b.coeff_pow[d]));

  NcPoly residual = nc_sub(t_sum, e_sum);
  rep.expansion_residual_terms = residual.term_count();
  rep.expansion_check = residual.is_zero();
  if (!rep.expansion_check)
    rep.details["expansion"] = "residual: " + residual.str();

  // the t-rows must also match w itself: deg-3 part of w - 1
  {
    NcPoly ew = magnus_embed_expr(paper.w_x, 4);
    ew.add_term({}, -1);
    NcPoly d3 = homogeneous_component(ew, 3);
    NcPoly t4(4);
    for (const auto &[m, c] : t_sum.terms())
      t4.add_term(m, c);
    if (!(d3 == t4)) {
      rep.expansion_check = false;
      rep.details["expansion_w"] = "t-rows disagree with deg-3 part of w-1";
    }
  }

  // --- per-binomial reduction
  for (const auto &b : fix.binomials) {
    bool ok = true;
    std::string why;
    auto fail = [&](const std::string &msg) {
      if (ok)
        why = msg;
      ok = false;
    };

    // 1. exact factorization: the recorded pair of monomials equals
    //    sign * (outer0-1) ... (3^a(x_j-1)+3^b(x_k-1)) ... (outer1-1)
    {
      NcPoly recorded(CAP);
      for (int d = 0; d < 2; ++d)
        recorded += monomial_poly(CAP, b.mono[d],
                                  Int(b.sign) * pow3(b.coeff_pow[d]));
      NcPoly refactored(CAP);
      for (int d = 0; d < 2; ++d) {
        std::array<unsigned, 3> m{};
        unsigned oi = 0;
        for (unsigned pos = 0; pos < 3; ++pos)
          m[pos] = (pos == b.combined_pos) ? b.pair[d] : b.outer[oi++];
        refactored += monomial_poly(CAP, m, Int(b.sign) * pow3(b.pair_pow[d]));
      }
      if (!(recorded == refactored))
        fail("factored form does not reproduce the two monomials");
    }

    // 2. the combined factor matches a relation of G verbatim
    const Relation &rel = G.relations.at(b.relation);
    {
      WordExpr expect = WordExpr::product(
          {WordExpr::power(WordExpr::gen(b.pair[0]), pow3(b.pair_pow[0])),
           WordExpr::power(WordExpr::gen(b.pair[1]), pow3(b.pair_pow[1]))});
      if (!(rel.lhs == expect))
        fail("relation lhs mismatch for " + b.name);
    }

    // 3. scalar-to-exponent transfers: each scalar is divisible by the
    //    product of the torsion exponents of every letter in its monomial
    for (int d = 0; d < 2; ++d) {
      unsigned long need = fix.torsion_pow[b.pair[d]] +
                           fix.torsion_pow[b.outer[0]] +
                           fix.torsion_pow[b.outer[1]];
      if (b.pair_pow[d] < need)
        fail("transfer divisibility fails for " + b.name);
    }

    // 4. the remaining scalar 3^c distributes exactly onto the outer
    //    letters' torsion relations
    WordExpr rel_comm;
    unsigned long rel_pow = 0;
    if (!split_rhs(rel.rhs, rel_comm, rel_pow))
      fail("relation rhs is not a 3-power of a commutator");
    if (ok) {
      if (rel_pow != b.rhs_pow)
        fail("recorded rhs power disagrees with the relation");
      if (b.outer_pow[0] + b.outer_pow[1] != b.rhs_pow)
        fail("scalar split does not sum to the rhs power");
      for (int i = 0; i < 2; ++i) {
        if (b.outer_pow[i] != fix.torsion_pow[b.outer[i]])
          fail("outer scalar does not match the torsion exponent");
        const Relation &trel = G.relations.at(fix.torsion_relation[b.outer[i]]);
        WordExpr expect = WordExpr::power(WordExpr::gen(b.outer[i]),
                                          pow3(fix.torsion_pow[b.outer[i]]));
        if (!(trel.lhs == expect))
          fail("torsion relation lhs mismatch");
      }
    }

    // 5. the slot bookkeeping: combined slot carries b.relation, outer slots
    //    carry the outer letters' torsion relations, in product order
    if (ok) {
      unsigned oi = 0;
      for (unsigned pos = 0; pos < 3; ++pos) {
        unsigned expect = (pos == b.combined_pos)
                              ? b.relation
                              : fix.torsion_relation[b.outer[oi++]];
        if (b.factor_relation[pos] != expect)
          fail("factor slot bookkeeping mismatch");
      }
    }

    // 6. weights: each relation difference has the recorded filtration
    //    weight, the weights sum to >= 7, and the triple product vanishes
    unsigned wsum = 0;
    if (ok) {
      NcPoly prod = NcPoly::constant(CAP, 1);
      for (unsigned pos = 0; pos < 3 && ok; ++pos) {
        const Relation &frel = G.relations.at(b.factor_relation[pos]);
        WordExpr comm;
        unsigned long cpow = 0;
        if (!split_rhs(frel.rhs, comm, cpow)) {
          fail("factor rhs is not a commutator");
          break;
        }
        NcPoly fp = magnus_embed_expr(comm, CAP);
        fp.add_term({}, -1);
        auto low = lowest_degree(fp);
        if (!low || low->degree != b.factor_weight[pos]) {
          fail("factor weight mismatch at slot " + std::to_string(pos));
          break;
        }
        wsum += b.factor_weight[pos];
        prod = nc_mul(prod, fp);
      }
      if (ok) {
        if (wsum < CAP)
          fail("weights sum below the cap");
        if (!prod.is_zero())
          fail("product of relation differences does not vanish at cap 7");
      }
    }

    rep.binomial_checks[b.name] = ok;
    rep.weight_checks[b.name] = wsum;
    if (!ok)
      rep.details[b.name] = why;
  }
  return rep;
}

} // namespace dimq
