#include "dimq/lie.hpp"

#include <algorithm>
#include <stdexcept>

namespace dimq {

HallBasis::HallBasis(unsigned rank, unsigned max_weight)
    : rank_(rank), max_weight_(max_weight) {
  by_weight_.resize(max_weight + 1);
  for (unsigned i = 0; i < rank; ++i) {
    weight_.push_back(1);
    kids_.push_back({-1, -1});
    genidx_.push_back(i);
    by_weight_[1].push_back((unsigned)weight_.size() - 1);
  }
  // Hall condition with order = creation order (weight-monotone):
  // [u,v] basic iff u > v and (u is a generator or right(u) <= v)
  for (unsigned w = 2; w <= max_weight; ++w) {
    for (unsigned wv = 1; 2 * wv <= w; ++wv) {
      unsigned wu = w - wv;
      for (unsigned v : by_weight_[wv]) {
        for (unsigned u : by_weight_[wu]) {
          if (u <= v)
            continue;
          if (!is_generator(u) && (unsigned)kids_[u].second > v)
            continue;
          weight_.push_back(w);
          kids_.push_back({(long)u, (long)v});
          genidx_.push_back(-1);
          by_weight_[w].push_back((unsigned)weight_.size() - 1);
        }
      }
    }
  }
}

const std::vector<unsigned> &HallBasis::of_weight(unsigned w) const {
  return by_weight_.at(w);
}

std::pair<unsigned, unsigned> HallBasis::parts(unsigned id) const {
  auto [l, r] = kids_.at(id);
  if (l < 0)
    throw std::invalid_argument("parts: generator has no parts");
  return {(unsigned)l, (unsigned)r};
}

unsigned HallBasis::generator_index(unsigned id) const {
  long g = genidx_.at(id);
  if (g < 0)
    throw std::invalid_argument("generator_index: composite commutator");
  return (unsigned)g;
}

std::string HallBasis::name(unsigned id,
                            const std::vector<std::string> *gen_names) const {
  if (is_generator(id)) {
    unsigned g = generator_index(id);
    if (gen_names)
      return (*gen_names)[g];
    return "x" + std::to_string(g + 1);
  }
  auto [l, r] = parts(id);
  return "[" + name(l, gen_names) + "," + name(r, gen_names) + "]";
}

void LieElement::add(unsigned id, const Int &c) {
  if (c == 0)
    return;
  auto it = coords.find(id);
  if (it == coords.end())
    coords.emplace(id, c);
  else {
    it->second += c;
    if (it->second == 0)
      coords.erase(it);
  }
}

LieElement &LieElement::operator+=(const LieElement &o) {
  if (!o.is_zero() && !is_zero() && weight != o.weight)
    throw std::invalid_argument("LieElement: mixed weights");
  if (is_zero())
    weight = o.weight;
  for (const auto &[id, c] : o.coords)
    add(id, c);
  return *this;
}

LieElement &LieElement::operator*=(const Int &c) {
  if (c == 0) {
    coords.clear();
    return *this;
  }
  for (auto &[id, v] : coords)
    v *= c;
  return *this;
}

LieExpr LieExpr::gen(unsigned i) {
  LieExpr e;
  e.leaf[i] = 1;
  return e;
}

LieExpr LieExpr::combination(std::map<unsigned, Int> c) {
  LieExpr e;
  e.leaf = std::move(c);
  return e;
}

LieExpr LieExpr::bracket(LieExpr a, LieExpr b) {
  LieExpr e;
  e.left = std::make_shared<LieExpr>(std::move(a));
  e.right = std::make_shared<LieExpr>(std::move(b));
  return e;
}

LieExpr LieExpr::left_normed(const std::vector<LieExpr> &parts) {
  if (parts.empty())
    throw std::invalid_argument("left_normed: empty");
  LieExpr acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i)
    acc = bracket(std::move(acc), parts[i]);
  return acc;
}

unsigned LieExpr::weight() const {
  if (is_leaf())
    return 1;
  return left->weight() + right->weight();
}

// [a, b] for basic commutators a > b, rewritten into the Hall basis.
// If [a,b] violates the Hall condition, Jacobi rewrites it:
//   [[a1,a2],b] = [[a1,b],a2] + [a1,[a2,b]]   (b < a2 <= a1)
LieElement LieRewriter::basic_bracket(unsigned a, unsigned b) {
  const HallBasis &H = *basis_;
  unsigned w = H.weight(a) + H.weight(b);
  if (w > H.max_weight())
    throw std::invalid_argument("bracket weight beyond basis table");
  if (a == b)
    return LieElement{w, {}};
  if (a < b) {
    LieElement r = basic_bracket(b, a);
    r *= Int(-1);
    return r;
  }
  auto key = std::make_pair(a, b);
  if (auto it = memo_.find(key); it != memo_.end())
    return it->second;

  LieElement res{w, {}};
  if (H.is_generator(a) || H.parts(a).second <= b) {
    // Hall basic: find it (same weight list, matching children)
    for (unsigned id : H.of_weight(w)) {
      if (!H.is_generator(id)) {
        auto [l, r] = H.parts(id);
        if (l == a && r == b) {
          res.add(id, 1);
          memo_.emplace(key, res);
          return res;
        }
      }
    }
    throw std::logic_error("Hall pair not found in basis table");
  }
  auto [a1, a2] = H.parts(a); // a1 > a2 > b
  res += bracket(basic_bracket(a1, b), LieElement{H.weight(a2), {{a2, 1}}});
  res += bracket(LieElement{H.weight(a1), {{a1, 1}}}, basic_bracket(a2, b));
  memo_.emplace(key, res);
  return res;
}

LieElement LieRewriter::bracket(const LieElement &x, const LieElement &y) {
  LieElement r;
  r.weight = x.weight + y.weight;
  for (const auto &[a, ca] : x.coords)
    for (const auto &[b, cb] : y.coords) {
      LieElement t = basic_bracket(a, b);
      t *= ca * cb;
      r += t;
    }
  return r;
}

LieElement LieRewriter::normal_form(const LieExpr &e) {
  if (e.is_leaf()) {
    LieElement r;
    r.weight = 1;
    for (const auto &[g, c] : e.leaf) {
      if (g >= basis_->rank())
        throw std::invalid_argument("generator outside basis rank");
      r.add(g, c); // weight-1 ids coincide with generator indices
    }
    return r;
  }
  return bracket(normal_form(*e.left), normal_form(*e.right));
}

Int witt_dimension(unsigned k, unsigned n) {
  auto mobius = [](unsigned m) -> int {
    int mu = 1;
    for (unsigned p = 2; p * p <= m; ++p) {
      if (m % p == 0) {
        m /= p;
        if (m % p == 0)
          return 0;
        mu = -mu;
      }
    }
    if (m > 1)
      mu = -mu;
    return mu;
  };
  Int sum = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d)
      continue;
    int mu = mobius(d);
    if (mu)
      sum += Int(mu) * pow_int(k, n / d);
  }
  return sum / n;
}

LieCheckReport weight3_check() {
  LieCheckReport rep;
  auto basis = std::make_shared<HallBasis>(4, 3);
  LieRewriter rw(basis);
  const auto &w3 = basis->of_weight(3);
  rep.basis_size = (unsigned)w3.size();

  auto coords_of = [&](const LieElement &e) {
    std::vector<Int> v(w3.size(), Int(0));
    for (const auto &[id, c] : e.coords) {
      auto it = std::find(w3.begin(), w3.end(), id);
      v[(size_t)(it - w3.begin())] = c;
    }
    return v;
  };

  // relators r_ij with their abelianized exponent vectors
  struct Relator {
    unsigned i, j;
    unsigned long pi, pj;
  };
  const Relator rels[4] = {
      {0, 1, 11, 12}, {0, 2, 10, 12}, {1, 3, 9, 11}, {2, 3, 9, 10}};

  for (const auto &r : rels) {
    std::vector<unsigned> comp;
    for (unsigned k = 0; k < 4; ++k)
      if (k != r.i && k != r.j)
        comp.push_back(k);
    LieExpr rbar = LieExpr::combination(
        {{r.i, pow3(r.pi)}, {r.j, pow3(r.pj)}});
    LieExpr xk = LieExpr::gen(comp[0]), xl = LieExpr::gen(comp[1]);
    std::string rn = "r" + std::to_string(r.i + 1) + std::to_string(r.j + 1);
    std::string kn = "x" + std::to_string(comp[0] + 1);
    std::string ln = "x" + std::to_string(comp[1] + 1);

    rep.w_generators.push_back(
        coords_of(rw.normal_form(LieExpr::left_normed({rbar, xk, xl}))));
    rep.w_generator_names.push_back("[" + rn + "," + kn + "," + ln + "]");
    rep.w_generators.push_back(
        coords_of(rw.normal_form(LieExpr::left_normed({xk, xl, rbar}))));
    rep.w_generator_names.push_back("[" + kn + "," + ln + "," + rn + "]");
  }

  // w = 3^9[x1,x2,x3] + 3^10[x1,x4,x2] + 3^11[x1,x4,x3] + 3^12[x2,x4,x3]
  LieElement w;
  const std::tuple<unsigned long, unsigned, unsigned, unsigned> pieces[4] = {
      {9, 0, 1, 2}, {10, 0, 3, 1}, {11, 0, 3, 2}, {12, 1, 3, 2}};
  for (auto [p, a, b, c] : pieces) {
    LieElement t = rw.normal_form(LieExpr::left_normed(
        {LieExpr::gen(a), LieExpr::gen(b), LieExpr::gen(c)}));
    t *= pow3(p);
    w += t;
  }
  rep.w_coords = coords_of(w);

  rep.hnf_of_W = hnf(IntMatrix::from_rows(rep.w_generators)).H;

  rep.w_in_W = lattice_membership(rep.w_coords, rep.w_generators).has_value();

  std::vector<Int> w3v = rep.w_coords;
  for (auto &x : w3v)
    x *= 3;
  auto cert = lattice_membership(w3v, rep.w_generators);
  rep.three_w_in_W = cert.has_value();
  if (cert) {
    rep.certificate = *cert;
    // explicit re-substitution, beyond what lattice_membership already did
    std::vector<Int> sum(rep.w_coords.size(), Int(0));
    for (size_t i = 0; i < cert->size(); ++i)
      for (size_t j = 0; j < sum.size(); ++j)
        sum[j] += (*cert)[i] * rep.w_generators[i][j];
    rep.certificate_ok = (sum == w3v);
  }
  return rep;
}

} // namespace dimq
