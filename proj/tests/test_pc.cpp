#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dimq/pc.hpp"

#include <algorithm>
#include <array>
#include <random>

using namespace dimq;

namespace {

// Heisenberg: a, b, c all infinite order, [b,a] = c, c central.
PcPresentation heisenberg() {
  PcPresentation pc;
  pc.ngens = 3;
  pc.weights = {1, 1, 2};
  pc.orders = {std::nullopt, std::nullopt, std::nullopt};
  pc.init_trivial_tails();
  pc.set_tail(1, 0, {{2, 1}});
  pc.validate();
  return pc;
}

PcPresentation cyclic(const Int &n) {
  PcPresentation pc;
  pc.ngens = 1;
  pc.weights = {1};
  pc.orders = {n};
  pc.init_trivial_tails();
  pc.validate();
  return pc;
}

// extraspecial group of order 27, exponent 3
PcPresentation extraspecial27() {
  PcPresentation pc;
  pc.ngens = 3;
  pc.weights = {1, 1, 2};
  pc.orders = {Int(3), Int(3), Int(3)};
  pc.init_trivial_tails();
  pc.set_tail(1, 0, {{2, 1}});
  pc.validate();
  return pc;
}

// 3x3 unitriangular integer matrices model the Heisenberg group:
// a = E+e23, b = E+e12, c = E+e13 gives [b,a] = b^-1 a^-1 b a = c.
struct Mat3 {
  std::array<std::array<Int, 3>, 3> m;

  static Mat3 eye() {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.m[i][j] = (i == j) ? 1 : 0;
    return r;
  }
  friend Mat3 operator*(const Mat3 &a, const Mat3 &b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.m[i][j] = 0;
        for (int k = 0; k < 3; ++k)
          r.m[i][j] += a.m[i][k] * b.m[k][j];
      }
    return r;
  }
  friend bool operator==(const Mat3 &a, const Mat3 &b) { return a.m == b.m; }
};

Mat3 unitri(const Int &x, const Int &y, const Int &z) {
  Mat3 r = Mat3::eye();
  r.m[0][1] = x;
  r.m[1][2] = y;
  r.m[0][2] = z;
  return r;
}

Mat3 mat_pow(Mat3 base, Int n) {
  if (n < 0) {
    base = unitri(-base.m[0][1], -base.m[1][2],
                  base.m[0][1] * base.m[1][2] - base.m[0][2]);
    n = -n;
  }
  Mat3 r = Mat3::eye();
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t()))
      r = r * base;
    n >>= 1;
    if (n > 0)
      base = base * base;
  }
  return r;
}

Mat3 gen_matrix(unsigned g) {
  return g == 0 ? unitri(0, 1, 0) : g == 1 ? unitri(1, 0, 0)
                                           : unitri(0, 0, 1);
}

Mat3 model(const PcElement &x) {
  Mat3 r = mat_pow(gen_matrix(0), x.get(0));
  r = r * mat_pow(gen_matrix(1), x.get(1));
  r = r * mat_pow(gen_matrix(2), x.get(2));
  return r;
}

Mat3 model_word(const PcWord &w) {
  Mat3 r = Mat3::eye();
  for (const auto &[g, e] : w)
    r = r * mat_pow(gen_matrix(g), e);
  return r;
}

PcWord random_word(std::mt19937_64 &rng, unsigned ngens, int maxexp,
                   unsigned len) {
  PcWord w;
  for (unsigned i = 0; i < len; ++i) {
    long e = (long)(rng() % (2 * maxexp + 1)) - maxexp;
    if (e != 0)
      w.emplace_back((unsigned)(rng() % ngens), Int(e));
  }
  return w;
}

} // namespace

TEST_CASE("collection in the Heisenberg group vs the matrix model") {
  PcPresentation pc = heisenberg();

  // the stored convention: b a = a b [b,a] = a b c
  PcElement x = pc.element_of({{1, 1}, {0, 1}});
  CHECK(x.get(0) == 1);
  CHECK(x.get(1) == 1);
  CHECK(x.get(2) == 1);
  CHECK(model(x) == model_word({{1, 1}, {0, 1}}));

  CHECK(pc.element_of({}).is_identity());

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    PcWord w = random_word(rng, 3, 4, rng() % 6);
    PcElement nf = pc.element_of(w);
    CHECK(model(nf) == model_word(w));
  }
  // huge exponents collect via whole-power moves, not letter by letter
  PcWord big = {{1, pow3(12)}, {0, pow3(11)}, {1, Int(-5)}};
  CHECK(model(pc.element_of(big)) == model_word(big));
  PcWord big2 = {{2, Int(-7)}, {1, -pow3(10)}, {0, pow3(9)}, {1, Int(1)}};
  CHECK(model(pc.element_of(big2)) == model_word(big2));
}

TEST_CASE("collection in Z/9") {
  PcPresentation pc = cyclic(9);
  CHECK(pc.element_of({{0, 11}}).get(0) == 2);
  CHECK(pc.element_of({{0, -1}}).get(0) == 8);
  CHECK(pc.element_of({{0, 9}}).is_identity());
}

TEST_CASE("collection confluence under rebracketing and splitting") {
  PcPresentation pc = heisenberg();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    PcWord w = random_word(rng, 3, 3, 2 + rng() % 5);
    PcElement direct = pc.element_of(w);
    size_t cut = w.empty() ? 0 : rng() % (w.size() + 1);
    PcWord left(w.begin(), w.begin() + cut), right(w.begin() + cut, w.end());
    PcElement glued = pc.mul(pc.element_of(left), pc.element_of(right));
    CHECK(direct == glued);
    if (!w.empty()) {
      size_t k = rng() % w.size();
      PcWord split;
      for (size_t i = 0; i < w.size(); ++i) {
        if (i == k) {
          Int h = w[i].second / 2;
          if (h != 0)
            split.emplace_back(w[i].first, h);
          Int r = w[i].second - h;
          if (r != 0)
            split.emplace_back(w[i].first, r);
        } else {
          split.push_back(w[i]);
        }
      }
      CHECK(pc.element_of(split) == direct);
    }
  }
}

TEST_CASE("mul/inv/pow form a group structure on normal forms") {
  for (const PcPresentation &pc : {heisenberg(), extraspecial27()}) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 150; ++trial) {
      PcElement u = pc.element_of(random_word(rng, 3, 3, 3));
      PcElement v = pc.element_of(random_word(rng, 3, 3, 3));
      PcElement w = pc.element_of(random_word(rng, 3, 3, 3));
      CHECK(pc.mul(pc.mul(u, v), w) == pc.mul(u, pc.mul(v, w)));
      CHECK(pc.mul(u, pc.inv(u)).is_identity());
      CHECK(pc.mul(pc.inv(u), u).is_identity());
      CHECK(pc.pow(u, 5) == pc.mul(u, pc.mul(u, pc.mul(u, pc.mul(u, u)))));
      CHECK(pc.pow(u, -3) == pc.inv(pc.pow(u, 3)));
    }
  }
}

TEST_CASE("consistency checking") {
  CHECK(check_consistency(heisenberg()).consistent);
  CHECK(check_consistency(cyclic(9)).consistent);
  CHECK(check_consistency(extraspecial27()).consistent);
}

TEST_CASE("inconsistent presentations are detected with a witness") {
  // [b,a] = c with a of order 3 and c of order 2: [b, a^3] should be both
  // trivial (a^3 = 1) and c^3 = c, so the power overlap b a^3 fails
  PcPresentation pc;
  pc.ngens = 3;
  pc.weights = {1, 1, 2};
  pc.orders = {Int(3), std::nullopt, Int(2)};
  pc.init_trivial_tails();
  pc.set_tail(1, 0, {{2, 1}});
  ConsistencyReport rep = check_consistency(pc, 5);
  CHECK(!rep.consistent);
  CHECK(!rep.witness.empty());

  // b^3 = c alongside [b,a] = c and orders 3,3,3 is the exponent-9
  // extraspecial group, which is consistent; the checker must not flag it
  PcPresentation es9;
  es9.ngens = 3;
  es9.weights = {1, 1, 2};
  es9.orders = {Int(3), Int(3), Int(3)};
  es9.init_trivial_tails();
  es9.set_tail(1, 0, {{2, 1}});
  es9.power_tails[1] = {{2, 1}};
  CHECK(check_consistency(es9, 5).consistent);
}

TEST_CASE("evaluate maps structured words through images") {
  PcPresentation pc = heisenberg();
  GroupPresentation free2 = parse_presentation("gens: x, y\nrels:\nx = x\n");
  std::vector<PcElement> images = {pc.unit(0), pc.unit(1)};
  // [a,b] = [b,a]^-1 = c^-1 under the stored tail convention
  CHECK(evaluate(pc, images, parse_word_expr("[x,y]", free2)) ==
        pc.inv(pc.unit(2)));
  CHECK(evaluate(pc, images, parse_word_expr("[y,x]", free2)) == pc.unit(2));
  CHECK(evaluate(pc, images, WordExpr()).is_identity());
  CHECK(evaluate(pc, images, parse_word_expr("x*x^-1", free2)).is_identity());
  // homomorphism on random pairs
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    PcElement a = pc.element_of(random_word(rng, 3, 2, 3));
    PcElement b = pc.element_of(random_word(rng, 3, 2, 3));
    std::vector<PcElement> im = {a, b};
    WordExpr xy = parse_word_expr("x*y", free2);
    CHECK(evaluate(pc, im, xy) == pc.mul(a, b));
  }
}

TEST_CASE("subgroup sifting vs exhaustive closure in extraspecial 27") {
  PcPresentation pc = extraspecial27();
  std::vector<PcElement> all;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        all.push_back(PcElement::from_dense({Int(a), Int(b), Int(c)}));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<PcElement> gens;
    for (unsigned i = 0, n = 1 + rng() % 2; i < n; ++i)
      gens.push_back(all[rng() % all.size()]);
    SubgroupBasis B = subgroup_basis(pc, gens);
    std::vector<PcElement> closure = gens;
    closure.push_back(pc.identity());
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < closure.size(); ++i)
        for (size_t j = 0; j < closure.size(); ++j) {
          PcElement p = pc.mul(closure[i], closure[j]);
          if (std::find(closure.begin(), closure.end(), p) == closure.end()) {
            closure.push_back(p);
            grew = true;
          }
        }
    }
    for (const auto &x : all)
      CHECK(is_in_subgroup(pc, B, x) ==
            (std::find(closure.begin(), closure.end(), x) != closure.end()));
  }
}

TEST_CASE("subgroup sifting with infinite orders (Heisenberg)") {
  PcPresentation pc = heisenberg();
  // <a^2, b> contains c = [b, a^2]^... : [b, a^2] = c^2; closure adds c^2
  SubgroupBasis B = subgroup_basis(pc, {pc.pow(pc.unit(0), 2), pc.unit(1)});
  PcElement c2 = pc.pow(pc.unit(2), 2);
  CHECK(is_in_subgroup(pc, B, c2));
  CHECK(!is_in_subgroup(pc, B, pc.unit(2)));
  CHECK(!is_in_subgroup(pc, B, pc.unit(0)));
  CHECK(is_in_subgroup(pc, B, pc.pow(pc.unit(0), -2)));
}

TEST_CASE("lower central series of fixture groups") {
  PcPresentation pc = heisenberg();
  auto series = lcs(pc);
  REQUIRE(series.size() >= 2);
  CHECK(series[0].rows.size() == 3);
  CHECK(series[1].rows.size() == 1);
  CHECK(series[1].rows.count(2) == 1);
  CHECK(is_in_subgroup(pc, series[1], pc.unit(2)));
  CHECK(!is_in_subgroup(pc, series[1], pc.unit(0)));
  if (series.size() > 2)
    CHECK(series[2].trivial());

  auto aser = lcs(cyclic(9));
  REQUIRE(aser.size() >= 2);
  CHECK(aser[1].trivial());

  // [gamma_i, gamma_j] <= gamma_{i+j} on sampled pairs
  auto hser = lcs(extraspecial27());
  for (size_t i = 0; i < hser.size(); ++i)
    for (size_t j = 0; j < hser.size(); ++j) {
      size_t target = std::min(i + j + 1, hser.size() - 1);
      PcPresentation es = extraspecial27();
      for (const auto &[li, bi] : hser[i].rows)
        for (const auto &[lj, bj] : hser[j].rows)
          CHECK(is_in_subgroup(es, hser[target], es.comm_elem(bi, bj)));
    }
}

TEST_CASE("pc json round trip") {
  PcData data;
  data.pc = heisenberg();
  data.images["x"] = data.pc.unit(0);
  data.images["y"] = data.pc.unit(1);
  std::string text = export_pc(data);
  PcData back = import_pc(text);
  CHECK(back.pc.ngens == 3);
  CHECK(back.pc.weights == data.pc.weights);
  CHECK(back.pc.orders == data.pc.orders);
  CHECK(back.pc.comm == data.pc.comm);
  CHECK(back.pc.power_tails == data.pc.power_tails);
  CHECK(back.images.at("x") == data.images.at("x"));
  CHECK(export_pc(back) == text);
}

TEST_CASE("pc json rejects malformed input") {
  CHECK_THROWS(import_pc("{"));
  CHECK_THROWS(import_pc("{\"ngens\": 2}"));
  CHECK_THROWS(import_pc(R"({"ngens":2,"weights":[1,1],"orders":[null,null],
    "power_tails":{},"commutator_tails":{"2,0":[[1,1]]}})"));
  CHECK_THROWS(import_pc(R"({"ngens":2,"weights":[1,1],"orders":[null,null],
    "power_tails":{"0":[[1,1]]},"commutator_tails":{}})"));
}

TEST_CASE("verify_relations") {
  PcPresentation pc = extraspecial27();
  GroupPresentation pres = parse_presentation(
      "gens: x, y\nrels:\nx^3 = 1\ny^3 = 1\n[x,y,x] = 1\n[x,y,y] = 1\n");
  std::vector<PcElement> good = {pc.unit(0), pc.unit(1)};
  VerifyReport rep = verify_relations(pc, good, pres);
  CHECK(rep.pass());

  GroupPresentation bad = parse_presentation("gens: x, y\nrels:\nx^3 = y\n");
  VerifyReport rep2 = verify_relations(pc, good, bad);
  CHECK(!rep2.all_relations_ok);
  CHECK(!rep2.relation_ok[0]);
}

TEST_CASE("witness membership checks") {
  PcPresentation pc = heisenberg();
  GroupPresentation free2 = parse_presentation("gens: x, y\nrels:\nx = x\n");
  std::vector<PcElement> images = {pc.unit(0), pc.unit(1)};
  WordExpr comm = parse_word_expr("[x,y]", free2);
  VerifyReport rep = verify_relations(pc, images, free2, &comm, 2);
  CHECK(rep.has_witness);
  CHECK(!rep.w_trivial);
  CHECK(rep.w_in_gamma_n); // [x,y] lies in gamma_2
  CHECK(rep.w_cube_in_gamma_n);
  VerifyReport rep3 = verify_relations(pc, images, free2, &comm, 3);
  CHECK(!rep3.w_in_gamma_n); // c is nontrivial, gamma_3 = 1
  CHECK(!rep3.w_cube_in_gamma_n);
}
