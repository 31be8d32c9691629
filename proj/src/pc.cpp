#include "dimq/pc.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dimq {

Int PcElement::get(unsigned g) const {
  auto it = std::lower_bound(
      t.begin(), t.end(), g,
      [](const auto &p, unsigned idx) { return p.first < idx; });
  return (it != t.end() && it->first == g) ? it->second : Int(0);
}

void PcElement::add_to(unsigned g, const Int &delta) {
  if (delta == 0)
    return;
  auto it = std::lower_bound(
      t.begin(), t.end(), g,
      [](const auto &p, unsigned idx) { return p.first < idx; });
  if (it != t.end() && it->first == g) {
    it->second += delta;
    if (it->second == 0)
      t.erase(it);
  } else {
    t.insert(it, {g, delta});
  }
}

PcElement PcElement::from_dense(const std::vector<Int> &v) {
  PcElement x;
  for (unsigned i = 0; i < v.size(); ++i)
    if (v[i] != 0)
      x.t.emplace_back(i, v[i]);
  return x;
}

std::vector<Int> PcElement::dense(unsigned n) const {
  std::vector<Int> v(n, Int(0));
  for (const auto &[g, e] : t)
    v.at(g) = e;
  return v;
}

PcPresentation::PcPresentation(const PcPresentation &o)
    : ngens(o.ngens), weights(o.weights), orders(o.orders),
      power_tails(o.power_tails), comm(o.comm) {}

PcPresentation &PcPresentation::operator=(const PcPresentation &o) {
  if (this != &o) {
    ngens = o.ngens;
    weights = o.weights;
    orders = o.orders;
    power_tails = o.power_tails;
    comm = o.comm;
    std::lock_guard<std::mutex> lk(cache_mutex_);
    conj_cache_.clear();
    tail_cache_.clear();
    ptail_cache_.clear();
  }
  return *this;
}

unsigned PcPresentation::cls() const {
  unsigned c = 0;
  for (unsigned w : weights)
    c = std::max(c, w);
  return c;
}

void PcPresentation::init_trivial_tails() {
  power_tails.assign(ngens, {});
  comm.clear();
}

const PcWord &PcPresentation::tail(unsigned j, unsigned i) const {
  static const PcWord empty;
  auto it = comm.find({j, i});
  return it == comm.end() ? empty : it->second;
}

void PcPresentation::set_tail(unsigned j, unsigned i, PcWord w) {
  if (j <= i)
    throw std::invalid_argument("set_tail: need j > i");
  if (w.empty())
    comm.erase({j, i});
  else
    comm[{j, i}] = std::move(w);
}

void PcPresentation::validate() const {
  if (weights.size() != ngens || orders.size() != ngens ||
      power_tails.size() != ngens)
    throw std::invalid_argument("pc: inconsistent field sizes");
  for (unsigned i = 0; i + 1 < ngens; ++i)
    if (weights[i] > weights[i + 1])
      throw std::invalid_argument("pc: weights not nondecreasing");
  for (unsigned i = 0; i < ngens; ++i) {
    if (orders[i] && *orders[i] <= 0)
      throw std::invalid_argument("pc: nonpositive relative order");
    if (!orders[i] && !power_tails[i].empty())
      throw std::invalid_argument("pc: power tail without finite order");
    for (const auto &[g, ex] : power_tails[i])
      if (g <= i || g >= ngens)
        throw std::invalid_argument("pc: power tail support out of range");
  }
  for (const auto &[ji, w] : comm) {
    auto [j, i] = ji;
    if (j >= ngens || i >= j)
      throw std::invalid_argument("pc: tail key out of range");
    for (const auto &[g, ex] : w) {
      if (g >= ngens)
        throw std::invalid_argument("pc: tail generator out of range");
      if (weights[g] < weights[i] + weights[j])
        throw std::invalid_argument("pc: tail violates weight filtration");
    }
  }
}

PcElement PcPresentation::identity() const { return PcElement{}; }

PcElement PcPresentation::unit(unsigned g) const {
  PcElement x;
  x.t.emplace_back(g, 1);
  return x;
}

const PcElement &PcPresentation::tail_elem(unsigned j, unsigned i) const {
  auto key = std::make_pair(j, i);
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto it = tail_cache_.find(key);
    if (it != tail_cache_.end())
      return it->second;
  }
  PcElement t = element_of(tail(j, i));
  std::lock_guard<std::mutex> lk(cache_mutex_);
  return tail_cache_.emplace(key, std::move(t)).first->second;
}

const PcElement &PcPresentation::power_tail_elem(unsigned i) const {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto it = ptail_cache_.find(i);
    if (it != ptail_cache_.end())
      return it->second;
  }
  PcElement t = element_of(power_tails[i]);
  std::lock_guard<std::mutex> lk(cache_mutex_);
  return ptail_cache_.emplace(i, std::move(t)).first->second;
}

void PcPresentation::carry(PcElement &r, unsigned g) const {
  if (!orders[g])
    return;
  const Int &m = *orders[g];
  Int v = r.get(g);
  if (v >= 0 && v < m)
    return;
  Int q = fdiv_q(v, m);
  r.add_to(g, -q * m);
  if (q == 0 || power_tails[g].empty())
    return;
  PcElement tq = pow(power_tail_elem(g), q);
  append_element(r, tq);
}

void PcPresentation::append_power(PcElement &r, unsigned g, Int e) const {
  if (e == 0)
    return;
  auto cut = std::lower_bound(
      r.t.begin(), r.t.end(), g + 1,
      [](const auto &p, unsigned idx) { return p.first < idx; });
  if (cut == r.t.end()) {
    r.add_to(g, e);
    carry(r, g);
    return;
  }
  // r = P * S * a_g^e = P * a_g^e * S^(a_g^e)
  PcWord suffix(cut, r.t.end());
  r.t.erase(cut, r.t.end());
  PcElement conj = conj_elem(suffix, g, e);
  r.add_to(g, e);
  carry(r, g);
  append_element(r, conj);
}

void PcPresentation::append_element(PcElement &r, const PcElement &v) const {
  for (const auto &[g, e] : v.t)
    append_power(r, g, e);
}

PcElement PcPresentation::conj_elem(const PcWord &s, unsigned g,
                                    const Int &e) const {
  PcElement r = identity();
  for (const auto &[h, f] : s)
    append_element(r, pow(conj_gen_pow(h, g, e), f));
  return r;
}

// a_h conjugated by a_g^e, h > g.
PcElement PcPresentation::conj_gen_pow(unsigned h, unsigned g,
                                       const Int &e) const {
  if (e == 0 || tail_trivial(h, g))
    return unit(h);
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto it = conj_cache_.find({h, g, e});
    if (it != conj_cache_.end())
      return it->second;
  }
  PcElement res;
  if (e == 1) {
    // a_h^(a_g) = a_h * [a_h, a_g]
    res = mul(unit(h), tail_elem(h, g));
  } else if (e == -1) {
    // y = a_h * (t^-1)^(a_g^-1) satisfies y^(a_g) = a_h
    PcElement ti = inv(tail_elem(h, g));
    PcElement d = conj_elem(ti.syllables(), g, Int(-1));
    res = mul(unit(h), d);
  } else {
    Int q = e / 2; // trunc toward zero: q and e-q share e's sign
    Int rest = e - q;
    PcElement x = conj_gen_pow(h, g, q);
    res = conj_elem(x.syllables(), g, rest);
  }
  std::lock_guard<std::mutex> lk(cache_mutex_);
  return conj_cache_.emplace(std::make_tuple(h, g, e), std::move(res))
      .first->second;
}

PcElement PcPresentation::mul(const PcElement &u, const PcElement &v) const {
  PcElement r = u;
  append_element(r, v);
  return r;
}

PcElement PcPresentation::inv(const PcElement &u) const {
  PcElement r;
  for (auto it = u.t.rbegin(); it != u.t.rend(); ++it)
    append_power(r, it->first, -it->second);
  return r;
}

PcElement PcPresentation::pow(const PcElement &u, const Int &n) const {
  if (n == 0 || u.is_identity())
    return identity();
  if (n < 0)
    return pow(inv(u), -n);
  if (n == 1)
    return u;
  // single-syllable fast path: a_g^n collects by one carry
  if (u.t.size() == 1) {
    PcElement r;
    append_power(r, u.t[0].first, u.t[0].second * n);
    return r;
  }
  PcElement base = u;
  PcElement r = identity();
  Int m = n;
  while (m > 0) {
    if (mpz_odd_p(m.get_mpz_t()))
      r = mul(r, base);
    m >>= 1;
    if (m > 0)
      base = mul(base, base);
  }
  return r;
}

PcElement PcPresentation::conjugate(const PcElement &u,
                                    const PcElement &h) const {
  return mul(mul(inv(h), u), h);
}

PcElement PcPresentation::comm_elem(const PcElement &u,
                                    const PcElement &v) const {
  return mul(mul(inv(u), inv(v)), mul(u, v));
}

PcElement PcPresentation::element_of(const PcWord &w) const {
  PcElement r = identity();
  for (const auto &[g, e] : w) {
    if (g >= ngens)
      throw std::out_of_range("element_of: generator out of range");
    append_power(r, g, e);
  }
  return r;
}

// -------------------------------------------------------------- overlaps

ConsistencyReport check_consistency(const PcPresentation &pc, unsigned max_w) {
  ConsistencyReport rep;
  const unsigned W = max_w ? max_w : pc.cls();
  auto describe = [&](const std::string &what, const PcElement &a,
                      const PcElement &b) {
    std::ostringstream os;
    os << what << ": ";
    for (const auto &[g, e] : a.syllables())
      os << "a" << g + 1 << "^" << e.get_str() << " ";
    os << "vs ";
    for (const auto &[g, e] : b.syllables())
      os << "a" << g + 1 << "^" << e.get_str() << " ";
    return os.str();
  };

  // associativity triples a_k (a_j a_i) = (a_k a_j) a_i, k > j > i
  for (unsigned k = 2; k < pc.ngens && rep.consistent; ++k)
    for (unsigned j = 1; j < k && rep.consistent; ++j) {
      if (pc.weights[k] + pc.weights[j] > W)
        break;
      for (unsigned i = 0; i < j; ++i) {
        if (pc.weights[k] + pc.weights[j] + pc.weights[i] > W)
          break;
        PcElement lhs = pc.mul(pc.unit(k), pc.mul(pc.unit(j), pc.unit(i)));
        PcElement rhs = pc.mul(pc.mul(pc.unit(k), pc.unit(j)), pc.unit(i));
        ++rep.checked;
        if (lhs != rhs) {
          rep.consistent = false;
          rep.witness = describe("associativity a" + std::to_string(k + 1) +
                                     ",a" + std::to_string(j + 1) + ",a" +
                                     std::to_string(i + 1),
                                 lhs, rhs);
          break;
        }
      }
    }

  // power overlaps
  for (unsigned j = 0; j < pc.ngens && rep.consistent; ++j) {
    if (pc.orders[j]) {
      const Int &m = *pc.orders[j];
      // a_j * a_j^m = a_j^m * a_j
      PcElement t = pc.element_of(pc.power_tails[j]);
      PcElement lhs = pc.mul(pc.unit(j), t);
      PcElement rhs = pc.mul(t, pc.unit(j));
      ++rep.checked;
      if (lhs != rhs) {
        rep.consistent = false;
        rep.witness =
            describe("power overlap a" + std::to_string(j + 1), lhs, rhs);
        break;
      }
      for (unsigned i = 0; i < pc.ngens; ++i) {
        if (i == j || pc.weights[i] + pc.weights[j] > W)
          continue;
        ++rep.checked;
        PcElement jm1;
        if (m > 1)
          jm1.t.emplace_back(j, m - 1);
        PcElement l2, r2;
        if (j > i) {
          // a_j^m a_i = a_j^(m-1) (a_j a_i)
          l2 = pc.mul(t, pc.unit(i));
          r2 = pc.mul(jm1, pc.mul(pc.unit(j), pc.unit(i)));
        } else {
          // a_i a_j^m = (a_i a_j) a_j^(m-1)
          l2 = pc.mul(pc.unit(i), t);
          r2 = pc.mul(pc.mul(pc.unit(i), pc.unit(j)), jm1);
        }
        if (l2 != r2) {
          rep.consistent = false;
          rep.witness = describe("power overlap a" + std::to_string(j + 1) +
                                     "^m vs a" + std::to_string(i + 1),
                                 l2, r2);
          break;
        }
      }
    }
  }
  return rep;
}

// ------------------------------------------------------------- evaluate

PcElement evaluate(const PcPresentation &pc,
                   const std::vector<PcElement> &images, const WordExpr &w) {
  switch (w.kind()) {
  case WordExpr::Kind::Identity:
    return pc.identity();
  case WordExpr::Kind::Gen: {
    if (w.gen_index() >= images.size())
      throw std::out_of_range("evaluate: no image for generator");
    return images[w.gen_index()];
  }
  case WordExpr::Kind::Power:
    return pc.pow(evaluate(pc, images, w.children()[0]), w.exponent());
  case WordExpr::Kind::Product: {
    PcElement r = pc.identity();
    for (const auto &k : w.children())
      r = pc.mul(r, evaluate(pc, images, k));
    return r;
  }
  case WordExpr::Kind::Commutator: {
    PcElement u = evaluate(pc, images, w.children()[0]);
    PcElement v = evaluate(pc, images, w.children()[1]);
    return pc.comm_elem(u, v);
  }
  }
  return pc.identity();
}

// ------------------------------------------------------------- subgroups

namespace {

// normalize the leading exponent: positive, gcd-minimal against the order;
// overflow powers are pushed onto the queue
PcElement fold_leading(const PcPresentation &pc, PcElement x,
                       std::vector<PcElement> &pending) {
  long l = x.leading();
  if (l < 0)
    return x;
  if (!pc.orders[l]) {
    if (x.leading_exp() < 0)
      x = pc.inv(x);
    return x;
  }
  const Int &m = *pc.orders[l];
  Int e = x.leading_exp();
  Int g = gcd_int(e, m);
  if (g != e) {
    // find s with s*(e/g) = 1 mod (m/g); x^s has leading exponent g
    Int mg = m / g, eg = e / g, s;
    if (mpz_invert(s.get_mpz_t(), eg.get_mpz_t(), mg.get_mpz_t()) == 0)
      throw std::logic_error("fold_leading: no inverse");
    x = pc.pow(x, s);
  }
  // the overflow x^(m/g) starts strictly deeper
  pending.push_back(pc.pow(x, m / g));
  return x;
}

void insert_element(const PcPresentation &pc, SubgroupBasis &B, PcElement x,
                    std::vector<PcElement> &pending) {
  for (;;) {
    long l = x.leading();
    if (l < 0)
      return;
    auto it = B.rows.find((unsigned)l);
    if (it == B.rows.end()) {
      x = fold_leading(pc, std::move(x), pending);
      if (x.leading() != l) { // order folded it away entirely
        pending.push_back(std::move(x));
        return;
      }
      B.rows.emplace((unsigned)l, std::move(x));
      return;
    }
    const Int d = it->second.leading_exp();
    const Int e = x.leading_exp();
    if (e % d == 0) {
      x = pc.mul(pc.pow(it->second, -(e / d)), x);
      continue;
    }
    Int g, s, t;
    ext_gcd(d, e, g, s, t);
    PcElement z = pc.mul(pc.pow(it->second, s), pc.pow(x, t));
    // z has leading exponent congruent to g; re-sift the old row and x
    pending.push_back(it->second);
    pending.push_back(std::move(x));
    B.rows.erase(it);
    insert_element(pc, B, std::move(z), pending);
    return;
  }
}

} // namespace

SubgroupBasis subgroup_basis(const PcPresentation &pc,
                             std::vector<PcElement> gens,
                             bool normal_closure) {
  SubgroupBasis B;
  std::vector<PcElement> pending = std::move(gens);
  auto drain = [&] {
    while (!pending.empty()) {
      PcElement x = std::move(pending.back());
      pending.pop_back();
      insert_element(pc, B, std::move(x), pending);
    }
  };
  drain();

  // close under commutators of basis rows (subgroup property) and, when
  // requested, under conjugation by the ambient generators (normality)
  for (;;) {
    std::vector<PcElement> fresh;
    auto rows_snapshot = B.rows;
    for (auto it = rows_snapshot.begin(); it != rows_snapshot.end(); ++it) {
      for (auto jt = std::next(it); jt != rows_snapshot.end(); ++jt) {
        PcElement c = pc.comm_elem(it->second, jt->second);
        if (!is_in_subgroup(pc, B, c))
          fresh.push_back(std::move(c));
      }
      if (normal_closure) {
        for (unsigned g = 0; g < pc.ngens; ++g) {
          for (int sgn : {1, -1}) {
            PcElement h = sgn < 0 ? pc.inv(pc.unit(g)) : pc.unit(g);
            PcElement c = pc.conjugate(it->second, h);
            if (!is_in_subgroup(pc, B, c))
              fresh.push_back(std::move(c));
          }
        }
      }
    }
    if (fresh.empty())
      break;
    pending = std::move(fresh);
    drain();
  }
  return B;
}

bool is_in_subgroup(const PcPresentation &pc, const SubgroupBasis &basis,
                    const PcElement &g) {
  PcElement x = g;
  for (;;) {
    long l = x.leading();
    if (l < 0)
      return true;
    auto it = basis.rows.find((unsigned)l);
    if (it == basis.rows.end())
      return false;
    const Int &d = it->second.leading_exp();
    if (x.leading_exp() % d != 0)
      return false;
    x = pc.mul(pc.pow(it->second, -(x.leading_exp() / d)), x);
  }
}

std::vector<SubgroupBasis> lcs(const PcPresentation &pc) {
  std::vector<SubgroupBasis> series;
  std::vector<PcElement> gens;
  for (unsigned g = 0; g < pc.ngens; ++g)
    gens.push_back(pc.unit(g));
  series.push_back(subgroup_basis(pc, gens, true));

  while (!series.back().trivial() && series.size() <= pc.ngens + 1) {
    std::vector<PcElement> next;
    for (const auto &[l, b] : series.back().rows)
      for (unsigned g = 0; g < pc.ngens; ++g) {
        PcElement c = pc.comm_elem(b, pc.unit(g));
        if (!c.is_identity())
          next.push_back(std::move(c));
      }
    series.push_back(subgroup_basis(pc, std::move(next), true));
    if (series.back().trivial())
      break;
  }
  return series;
}

// -------------------------------------------------------------------- io

using nlohmann::ordered_json;

namespace {

ordered_json word_to_json(const PcWord &w) {
  ordered_json a = ordered_json::array();
  for (const auto &[g, e] : w) {
    ordered_json pair = ordered_json::array();
    pair.push_back(g);
    if (e.fits_slong_p() && abs(e) < Int(1) << 53)
      pair.push_back((long)e.get_si());
    else
      pair.push_back(e.get_str());
    a.push_back(pair);
  }
  return a;
}

Int json_to_int(const ordered_json &j) {
  if (j.is_number_integer())
    return Int((long)j.get<long long>());
  if (j.is_string())
    return Int(j.get<std::string>());
  throw std::invalid_argument("pc json: expected integer or string");
}

PcWord json_to_word(const ordered_json &j) {
  PcWord w;
  if (!j.is_array())
    throw std::invalid_argument("pc json: word must be an array");
  for (const auto &p : j) {
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("pc json: malformed syllable");
    w.emplace_back(p[0].get<unsigned>(), json_to_int(p[1]));
  }
  return w;
}

} // namespace

std::string export_pc(const PcData &data) {
  const PcPresentation &pc = data.pc;
  ordered_json j;
  j["ngens"] = pc.ngens;
  j["weights"] = pc.weights;
  ordered_json orders = ordered_json::array();
  for (const auto &o : pc.orders) {
    if (!o)
      orders.push_back(nullptr);
    else if (o->fits_slong_p() && *o < Int(1) << 53)
      orders.push_back((long)o->get_si());
    else
      orders.push_back(o->get_str());
  }
  j["orders"] = orders;
  ordered_json pt = ordered_json::object();
  for (unsigned i = 0; i < pc.ngens; ++i)
    if (!pc.power_tails[i].empty())
      pt[std::to_string(i)] = word_to_json(pc.power_tails[i]);
  j["power_tails"] = pt;
  ordered_json ct = ordered_json::object();
  for (const auto &[ji, w] : pc.comm)
    ct[std::to_string(ji.first) + "," + std::to_string(ji.second)] =
        word_to_json(w);
  j["commutator_tails"] = ct;
  if (!data.images.empty()) {
    ordered_json im = ordered_json::object();
    for (const auto &[name, el] : data.images) {
      ordered_json v = ordered_json::array();
      for (const auto &x : el.dense(pc.ngens)) {
        if (x.fits_slong_p() && abs(x) < Int(1) << 53)
          v.push_back((long)x.get_si());
        else
          v.push_back(x.get_str());
      }
      im[name] = v;
    }
    j["images"] = im;
  }
  return j.dump(1) + "\n";
}

PcData import_pc(const std::string &text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception &e) {
    throw std::invalid_argument(std::string("pc json: parse error: ") +
                                e.what());
  }
  PcData data;
  PcPresentation &pc = data.pc;
  if (!j.contains("ngens") || !j.contains("weights") || !j.contains("orders"))
    throw std::invalid_argument("pc json: missing required field");
  pc.ngens = j["ngens"].get<unsigned>();
  pc.weights = j["weights"].get<std::vector<unsigned>>();
  for (const auto &o : j["orders"]) {
    if (o.is_null())
      pc.orders.push_back(std::nullopt);
    else
      pc.orders.push_back(json_to_int(o));
  }
  pc.init_trivial_tails();
  if (j.contains("power_tails"))
    for (auto it = j["power_tails"].begin(); it != j["power_tails"].end();
         ++it) {
      unsigned i = (unsigned)std::stoul(it.key());
      if (i >= pc.ngens)
        throw std::invalid_argument("pc json: power tail index out of range");
      pc.power_tails[i] = json_to_word(it.value());
    }
  if (j.contains("commutator_tails"))
    for (auto it = j["commutator_tails"].begin();
         it != j["commutator_tails"].end(); ++it) {
      auto key = it.key();
      auto comma = key.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("pc json: malformed tail key");
      unsigned a = (unsigned)std::stoul(key.substr(0, comma));
      unsigned b = (unsigned)std::stoul(key.substr(comma + 1));
      if (a >= pc.ngens || b >= a)
        throw std::invalid_argument("pc json: tail key out of range");
      pc.set_tail(a, b, json_to_word(it.value()));
    }
  pc.validate();
  if (j.contains("images"))
    for (auto it = j["images"].begin(); it != j["images"].end(); ++it) {
      std::vector<Int> v;
      for (const auto &x : it.value())
        v.push_back(json_to_int(x));
      if (v.size() != pc.ngens)
        throw std::invalid_argument("pc json: image length mismatch");
      data.images[it.key()] = PcElement::from_dense(v);
    }
  return data;
}

// ------------------------------------------------------------ verification

VerifyReport verify_relations(const PcPresentation &pc,
                              const std::vector<PcElement> &images,
                              const GroupPresentation &pres,
                              const WordExpr *witness, unsigned gamma_n) {
  VerifyReport rep;
  rep.consistent = check_consistency(pc).consistent;
  rep.all_relations_ok = true;
  for (const auto &rel : pres.relations) {
    PcElement l = evaluate(pc, images, rel.lhs);
    PcElement r = evaluate(pc, images, rel.rhs);
    bool ok = (l == r);
    rep.relation_ok.push_back(ok);
    rep.all_relations_ok = rep.all_relations_ok && ok;
  }
  if (witness) {
    rep.has_witness = true;
    rep.gamma_n = gamma_n;
    PcElement w = evaluate(pc, images, *witness);
    rep.w_trivial = w.is_identity();

    // series[k] = gamma_{k+1}; gamma_n is series[n-1], trivial beyond
    auto series = lcs(pc);
    SubgroupBasis trivial;
    const SubgroupBasis &gamma =
        (gamma_n >= 1 && gamma_n - 1 < series.size()) ? series[gamma_n - 1]
                                                      : trivial;
    rep.w_in_gamma_n = is_in_subgroup(pc, gamma, w);
    rep.w_cube_in_gamma_n = is_in_subgroup(pc, gamma, pc.pow(w, 3));
  }
  return rep;
}

} // namespace dimq
