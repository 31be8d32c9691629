#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dimq/augquot.hpp"
#include "dimq/magnus.hpp"
#include "oracle_groupring.hpp"

#include <random>

using namespace dimq;

namespace {

PcPresentation cyclic(const Int &n) {
  PcPresentation pc;
  pc.ngens = 1;
  pc.weights = {1};
  pc.orders = {n};
  pc.init_trivial_tails();
  return pc;
}

PcPresentation c3c3() {
  PcPresentation pc;
  pc.ngens = 2;
  pc.weights = {1, 1};
  pc.orders = {Int(3), Int(3)};
  pc.init_trivial_tails();
  return pc;
}

PcPresentation extraspecial27() {
  PcPresentation pc;
  pc.ngens = 3;
  pc.weights = {1, 1, 2};
  pc.orders = {Int(3), Int(3), Int(3)};
  pc.init_trivial_tails();
  pc.set_tail(1, 0, {{2, 1}});
  return pc;
}

PcPresentation infinite_cyclic() {
  PcPresentation pc;
  pc.ngens = 1;
  pc.weights = {1};
  pc.orders = {std::nullopt};
  pc.init_trivial_tails();
  return pc;
}

GroupPresentation free_group(unsigned rank) {
  std::string text = "gens: ";
  for (unsigned i = 0; i < rank; ++i)
    text += (i ? ", x" : "x") + std::to_string(i + 1);
  text += "\nrels:\nx1 = x1\n";
  return parse_presentation(text);
}

void check_against_oracle(const PcPresentation &pc, unsigned cap) {
  AugModule am(pc, cap);
  oracle::GroupRing R(pc);
  auto lattices = R.power_lattices(cap);
  // per-degree elementary divisors
  REQUIRE(am.layer_divisors().size() == cap - 1);
  for (unsigned d = 1; d < cap; ++d) {
    CAPTURE(d);
    std::vector<Int> got = am.layer_divisors()[d - 1];
    std::vector<Int> want =
        d < cap ? oracle::layer_divisors(R, lattices[d - 1], lattices[d])
                : std::vector<Int>{};
    CHECK(got == want);
  }
  // delta-membership agrees on every group element
  for (const auto &g : R.elements) {
    bool got = am.is_in_delta(g).in_delta;
    bool want = oracle::in_delta(R, lattices[cap - 1], g);
    CAPTURE(g.get(0).get_str());
    CHECK(got == want);
  }
}

} // namespace

TEST_CASE("infinite cyclic: ZQ/w^4 is free of rank 4") {
  AugModule am(infinite_cyclic(), 4);
  CHECK(am.monomial_count() == 4);
  CHECK(am.lattice().rank() == 0);
  for (const auto &layer : am.layer_divisors())
    CHECK(layer == std::vector<Int>{0});
}

TEST_CASE("Z/3 at cap 3: layers Z/3, Z/3") {
  AugModule am(cyclic(3), 3);
  REQUIRE(am.layer_divisors().size() == 2);
  CHECK(am.layer_divisors()[0] == std::vector<Int>{3});
  CHECK(am.layer_divisors()[1] == std::vector<Int>{3});
}

TEST_CASE("expand basics") {
  PcPresentation pc = infinite_cyclic();
  AugModule am(pc, 3);
  RingVec one = am.expand(pc.identity());
  REQUIRE(one.size() == 1);
  CHECK(one.at(0) == 1);
  // a -> 1 + (a-1)
  RingVec a = am.expand(pc.unit(0));
  CHECK(a.size() == 2);
  CHECK(a.at(0) == 1);
  CHECK(a.at(1) == 1);
  // a^-1 -> 1 - (a-1) + (a-1)^2
  PcElement ainv = pc.inv(pc.unit(0));
  RingVec ai = am.expand(ainv);
  CHECK(ai.at(0) == 1);
  CHECK(ai.at(1) == -1);
  CHECK(ai.at(2) == 1);
  // and expand(a) * expand(a^-1) = 1
  RingVec prod = am.mul(a, ai);
  CHECK(prod == one);
}

TEST_CASE("oracle equivalence for the AC5 groups") {
  SUBCASE("Z/3, caps 2..5") {
    for (unsigned cap = 2; cap <= 5; ++cap)
      check_against_oracle(cyclic(3), cap);
  }
  SUBCASE("Z/9, caps 2..5") {
    for (unsigned cap = 2; cap <= 5; ++cap)
      check_against_oracle(cyclic(9), cap);
  }
  SUBCASE("Z/3 x Z/3, caps 2..4") {
    for (unsigned cap = 2; cap <= 4; ++cap)
      check_against_oracle(c3c3(), cap);
  }
  SUBCASE("extraspecial 27, caps 2..4") {
    for (unsigned cap = 2; cap <= 4; ++cap)
      check_against_oracle(extraspecial27(), cap);
  }
}

TEST_CASE("multiplicativity of expand modulo the lattice") {
  std::mt19937_64 rng(93);
  for (const PcPresentation &pc :
       {cyclic(9), c3c3(), extraspecial27()}) {
    AugModule am(pc, 4);
    for (int trial = 0; trial < 100; ++trial) {
      PcWord w1, w2;
      for (unsigned i = 0; i < 3; ++i) {
        w1.emplace_back((unsigned)(rng() % pc.ngens), Int((long)(rng() % 5) - 2));
        w2.emplace_back((unsigned)(rng() % pc.ngens), Int((long)(rng() % 5) - 2));
      }
      PcElement g = pc.element_of(w1), h = pc.element_of(w2);
      RingVec lhs = am.expand(pc.mul(g, h));
      RingVec rhs = am.mul(am.expand(g), am.expand(h));
      // difference must lie in L
      SparseRow diff;
      {
        RingVec d = lhs;
        for (const auto &[m, c] : rhs) {
          auto it = d.find(m);
          if (it == d.end())
            d.emplace(m, -c);
          else {
            it->second -= c;
            if (it->second == 0)
              d.erase(it);
          }
        }
        for (const auto &[m, c] : d)
          diff.emplace_back(m, c);
      }
      CHECK(am.lattice().contains(diff));
    }
  }
}

TEST_CASE("conjugation invariance and certificates") {
  PcPresentation pc = extraspecial27();
  AugModule am(pc, 3);
  oracle::GroupRing R(pc);
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 60; ++trial) {
    const PcElement &g = R.elements[rng() % R.order()];
    const PcElement &h = R.elements[rng() % R.order()];
    PcElement conj = pc.conjugate(g, h);
    auto a = am.is_in_delta(g);
    auto b = am.is_in_delta(conj);
    CHECK(a.in_delta == b.in_delta);
  }
  // gamma_2 = <c> lies in delta_2 with a certificate; a does not
  AugModule am2(pc, 2);
  auto ans = am2.is_in_delta(pc.unit(2));
  CHECK(ans.in_delta);
  CHECK(!ans.certificate.empty());
  CHECK(!am2.is_in_delta(pc.unit(0)).in_delta);
}

TEST_CASE("monotonicity in the cap") {
  PcPresentation pc = cyclic(9);
  AugModule am2(pc, 2), am3(pc, 3), am4(pc, 4);
  oracle::GroupRing R(pc);
  for (const auto &g : R.elements) {
    bool d4 = am4.is_in_delta(g).in_delta;
    bool d3 = am3.is_in_delta(g).in_delta;
    bool d2 = am2.is_in_delta(g).in_delta;
    if (d4)
      CHECK(d3);
    if (d3)
      CHECK(d2);
  }
}

TEST_CASE("delta_report on free groups") {
  GroupPresentation f2 = free_group(2);
  WordExpr comm = parse_word_expr("[x1,x2]", f2);

  DeltaReport r2 = delta_report(f2, comm, 2);
  CHECK(r2.completed);
  CHECK(r2.in_delta);
  CHECK(r2.in_gamma);

  DeltaReport r3 = delta_report(f2, comm, 3);
  CHECK(r3.completed);
  CHECK(!r3.in_delta);
  CHECK(!r3.in_gamma);

  // dimension property of free groups: delta verdict == (lowest degree >= n)
  std::mt19937_64 rng(101);
  for (unsigned rank = 2; rank <= 3; ++rank) {
    GroupPresentation fp = free_group(rank);
    for (int trial = 0; trial < 6; ++trial) {
      // random short word
      std::string wtxt;
      for (unsigned i = 0, len = 1 + rng() % 3; i < len; ++i) {
        if (i)
          wtxt += "*";
        wtxt += "x" + std::to_string(1 + rng() % rank) + "^" +
                std::to_string((rng() % 2) ? 1 : -1);
      }
      WordExpr w = parse_word_expr(wtxt, fp);
      // sprinkle in a commutator so gamma_2 cases appear
      if (trial % 2) {
        WordExpr c = parse_word_expr("[x1,x2]", fp);
        w = WordExpr::product({w, WordExpr::power(c, Int(1 + (long)(rng() % 2)))});
      }
      for (unsigned n = 2; n <= 3; ++n) {
        DeltaReport rep = delta_report(fp, w, n);
        REQUIRE(rep.completed);
        NcPoly p = magnus_embed_expr(w, n);
        p.add_term({}, -1);
        bool deep = p.is_zero(); // all terms below degree n vanish
        CHECK(rep.in_delta == deep);
        CHECK(rep.in_gamma == deep); // free groups have the dimension property
      }
    }
  }
}

TEST_CASE("gamma_n elements are in delta_n") {
  // extraspecial 27 = free2 mod (x^3, y^3, class 2): c = [y,x] in gamma_2
  GroupPresentation p = parse_presentation(
      "gens: x, y\nrels:\nx^3 = 1\ny^3 = 1\n");
  WordExpr c = parse_word_expr("[x,y]", p);
  DeltaReport rep = delta_report(p, c, 2);
  CHECK(rep.completed);
  CHECK(rep.in_gamma);
  CHECK(rep.in_delta);
}

TEST_CASE("inconsistent presentations are rejected") {
  PcPresentation pc;
  pc.ngens = 3;
  pc.weights = {1, 1, 2};
  pc.orders = {Int(3), std::nullopt, Int(2)};
  pc.init_trivial_tails();
  pc.set_tail(1, 0, {{2, 1}});
  CHECK_THROWS_AS(AugModule(pc, 3), std::invalid_argument);
}

TEST_CASE("budget exhaustion raises") {
  AugBudget tiny;
  tiny.max_monomials = 2;
  CHECK_THROWS_AS(AugModule(cyclic(3), 5, tiny), BudgetExceeded);
}
