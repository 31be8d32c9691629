#include "dimq/fixtures.hpp"

#include <map>
#include <optional>

namespace dimq {

namespace {

WordExpr gen_named(const GroupPresentation &p, const std::string &name) {
  long i = p.find_generator(name);
  if (i < 0)
    throw std::logic_error("fixture generator missing: " + name);
  return WordExpr::gen((unsigned)i);
}

GroupPresentation build_G() {
  GroupPresentation p;
  const char *names[] = {"x1",    "x2",    "x3",    "x4",    "y1",    "y2",
                         "y3",    "y4",    "y1p",   "y2p",   "y3p",   "y4p",
                         "y12",   "y13",   "y24",   "y34",   "y12p",  "y13p",
                         "y24p",  "y34p",  "y12pp", "y13pp", "y24pp", "y34pp"};
  for (unsigned i = 0; i < 24; ++i)
    p.alphabet.push_back({i, names[i]});

  auto g = [&](const std::string &n) { return gen_named(p, n); };
  auto P = [&](WordExpr e, unsigned long k) {
    return WordExpr::power(std::move(e), pow3(k));
  };

  // x_i^(3^(2i-2)) = [y_i, y_i']
  p.relations.push_back({P(g("x1"), 0), WordExpr::commutator({g("y1"), g("y1p")})});
  p.relations.push_back({P(g("x2"), 2), WordExpr::commutator({g("y2"), g("y2p")})});
  p.relations.push_back({P(g("x3"), 4), WordExpr::commutator({g("y3"), g("y3p")})});
  p.relations.push_back({P(g("x4"), 6), WordExpr::commutator({g("y4"), g("y4p")})});

  // x_i^3^a x_j^3^b = [y_ij, y_ij', y_ij'']^3^c
  auto mixed = [&](const char *xi, unsigned long a, const char *xj,
                   unsigned long b, const char *t, unsigned long c) {
    WordExpr lhs = WordExpr::product({P(g(xi), a), P(g(xj), b)});
    WordExpr rhs = P(WordExpr::commutator({g(t), g(std::string(t) + "p"),
                                           g(std::string(t) + "pp")}),
                     c);
    p.relations.push_back({std::move(lhs), std::move(rhs)});
  };
  mixed("x1", 11, "x2", 12, "y12", 10);
  mixed("x1", 10, "x3", 12, "y13", 8);
  mixed("x2", 9, "x4", 11, "y24", 4);
  mixed("x3", 9, "x4", 10, "y34", 2);
  return p;
}

// substitute generators (by index map; nullopt = identity) into an expression
WordExpr substitute(const WordExpr &e,
                    const std::vector<std::optional<unsigned>> &map) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    return WordExpr();
  case WordExpr::Kind::Gen: {
    auto m = map.at(e.gen_index());
    return m ? WordExpr::gen(*m) : WordExpr();
  }
  case WordExpr::Kind::Power: {
    WordExpr base = substitute(e.children()[0], map);
    if (base.is_identity())
      return base;
    return WordExpr::power(std::move(base), e.exponent());
  }
  case WordExpr::Kind::Product: {
    std::vector<WordExpr> ks;
    for (const auto &k : e.children())
      ks.push_back(substitute(k, map));
    return WordExpr::product(std::move(ks));
  }
  case WordExpr::Kind::Commutator: {
    std::vector<WordExpr> ks;
    for (const auto &k : e.children())
      ks.push_back(substitute(k, map));
    return WordExpr::commutator(std::move(ks));
  }
  }
  return WordExpr();
}

GroupPresentation build_Gbar(const GroupPresentation &G) {
  GroupPresentation p;
  const char *names[] = {"x1", "x2", "x3", "x4", "z1", "z2", "z3", "z4"};
  for (unsigned i = 0; i < 8; ++i)
    p.alphabet.push_back({i, names[i]});

  // identification map on G's alphabet
  std::map<std::string, std::string> ident = {
      {"y1", "z1"},    {"y2", "z1"},   {"y3", "z1"},   {"y34pp", "z1"},
      {"y1p", "z2"},   {"y4", "z2"},   {"y13", "z2"},  {"y24", "z2"},
      {"y34", "z2"},   {"y24pp", "z2"},
      {"y2p", "z3"},   {"y4p", "z3"},
      {"y3p", "z4"},   {"y13p", "z4"}, {"y24p", "z4"}, {"y34p", "z4"},
      {"y13pp", "z4"},
  };
  std::vector<std::optional<unsigned>> map(G.alphabet.size());
  for (const auto &gid : G.alphabet) {
    const std::string &n = gid.name;
    if (n[0] == 'x') {
      map[gid.index] = (unsigned)p.find_generator(n);
    } else if (auto it = ident.find(n); it != ident.end()) {
      map[gid.index] = (unsigned)p.find_generator(it->second);
    } else {
      map[gid.index] = std::nullopt; // y12, y12p, y12pp become trivial
    }
  }

  for (const auto &r : G.relations) {
    Relation img{substitute(r.lhs, map), substitute(r.rhs, map)};
    bool dup = false;
    for (const auto &have : p.relations)
      if (have == img)
        dup = true;
    if (!dup)
      p.relations.push_back(std::move(img));
  }

  // extra commutation relations from the quotient construction
  auto g = [&](const std::string &n) { return gen_named(p, n); };
  for (auto [a, b] : {std::pair{"x3", "z3"}, {"x4", "z3"}, {"x2", "z4"},
                      {"x3", "z4"}, {"x4", "z4"}})
    p.relations.push_back({WordExpr::commutator({g(a), g(b)}), WordExpr()});
  return p;
}

WordExpr build_w_x(const GroupPresentation &G) {
  auto g = [&](const char *n) { return gen_named(G, n); };
  auto piece = [&](const char *a, const char *b, const char *c,
                   unsigned long k) {
    return WordExpr::power(WordExpr::commutator({g(a), g(b), g(c)}), pow3(k));
  };
  return WordExpr::product({piece("x1", "x2", "x3", 9),
                            piece("x1", "x4", "x2", 10),
                            piece("x1", "x4", "x3", 11),
                            piece("x2", "x4", "x3", 12)});
}

WordExpr build_w_z(const GroupPresentation &Gbar) {
  auto g = [&](const char *n) { return gen_named(Gbar, n); };
  return WordExpr::power(
      WordExpr::commutator({g("z4"), g("z3"), g("z4"), g("z2"), g("z2"),
                            g("x4")}),
      pow3(5));
}

Section1Fixture build_section1() {
  Section1Fixture f;
  f.t_coeff_pow = {9, 10, 11, 12};
  f.t_letters = {{{0, 1, 2}, {0, 3, 1}, {0, 3, 2}, {1, 3, 2}}};
  f.torsion_pow = {0, 2, 4, 6};
  f.torsion_relation = {0, 1, 2, 3};

  auto B = [](const char *name, int sign, unsigned long c1,
              std::array<unsigned, 3> m1, unsigned long c2,
              std::array<unsigned, 3> m2, unsigned pos,
              std::array<unsigned, 2> outer, std::array<unsigned, 2> pair,
              std::array<unsigned long, 2> pair_pow, unsigned rel,
              unsigned long rhs_pow, std::array<unsigned long, 2> outer_pow,
              std::array<unsigned, 3> frel, std::array<unsigned, 3> fw) {
    BinomialStep b;
    b.name = name;
    b.sign = sign;
    b.coeff_pow[0] = c1;
    b.coeff_pow[1] = c2;
    b.mono[0] = m1;
    b.mono[1] = m2;
    b.combined_pos = pos;
    b.outer[0] = outer[0];
    b.outer[1] = outer[1];
    b.pair[0] = pair[0];
    b.pair[1] = pair[1];
    b.pair_pow[0] = pair_pow[0];
    b.pair_pow[1] = pair_pow[1];
    b.relation = rel;
    b.rhs_pow = rhs_pow;
    b.outer_pow[0] = outer_pow[0];
    b.outer_pow[1] = outer_pow[1];
    b.factor_relation = frel;
    b.factor_weight = fw;
    return b;
  };

  f.binomials = {
      B("e1", +1, 9, {0, 1, 2}, 11, {0, 3, 2}, 1, {0, 2}, {1, 3}, {9, 11}, 6,
        4, {0, 4}, {0, 6, 2}, {2, 3, 2}),
      B("e2", +1, 10, {0, 3, 1}, 12, {2, 3, 1}, 0, {3, 1}, {0, 2}, {10, 12},
        5, 8, {6, 2}, {5, 3, 1}, {3, 2, 2}),
      B("e3", +1, 12, {1, 3, 2}, 10, {1, 3, 0}, 2, {1, 3}, {0, 2}, {10, 12},
        5, 8, {2, 6}, {1, 3, 5}, {2, 2, 3}),
      B("e4", +1, 9, {2, 1, 0}, 11, {2, 3, 0}, 1, {2, 0}, {1, 3}, {9, 11}, 6,
        4, {4, 0}, {2, 6, 0}, {2, 3, 2}),
      B("e5", -1, 9, {1, 0, 2}, 10, {1, 0, 3}, 2, {1, 0}, {2, 3}, {9, 10}, 7,
        2, {2, 0}, {1, 0, 7}, {2, 2, 3}),
      B("e6", -1, 9, {2, 0, 1}, 10, {3, 0, 1}, 0, {0, 1}, {2, 3}, {9, 10}, 7,
        2, {0, 2}, {7, 0, 1}, {3, 2, 2}),
      B("e7", -1, 11, {3, 0, 2}, 12, {3, 1, 2}, 1, {3, 2}, {0, 1}, {11, 12},
        4, 10, {6, 4}, {3, 4, 2}, {2, 3, 2}),
      B("e8", -1, 11, {2, 0, 3}, 12, {2, 1, 3}, 1, {2, 3}, {0, 1}, {11, 12},
        4, 10, {4, 6}, {2, 4, 3}, {2, 3, 2}),
  };
  return f;
}

} // namespace

const PaperFixture &paper_fixture() {
  static const PaperFixture fx = [] {
    PaperFixture f;
    f.G = build_G();
    f.Gbar = build_Gbar(f.G);
    f.w_x = build_w_x(f.G);
    f.w_z = build_w_z(f.Gbar);
    return f;
  }();
  return fx;
}

const Section1Fixture &section1_fixture() {
  static const Section1Fixture fx = build_section1();
  return fx;
}

std::string fixture_file_G() { return serialize_presentation(paper_fixture().G); }
std::string fixture_file_Gbar() {
  return serialize_presentation(paper_fixture().Gbar);
}
std::string fixture_file_w() {
  const auto &fx = paper_fixture();
  return serialize_word_expr(fx.w_x, fx.G.alphabet) + "\n";
}
std::string fixture_file_wz() {
  const auto &fx = paper_fixture();
  return serialize_word_expr(fx.w_z, fx.Gbar.alphabet) + "\n";
}

} // namespace dimq
