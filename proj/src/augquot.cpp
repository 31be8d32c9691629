#include "dimq/augquot.hpp"

#include <algorithm>
#include <chrono>

namespace dimq {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point start = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

void vec_add(RingVec &a, const RingVec &b, const Int &scale = 1) {
  if (scale == 0)
    return;
  for (const auto &[m, c] : b) {
    auto it = a.find(m);
    if (it == a.end()) {
      Int v = c * scale;
      if (v != 0)
        a.emplace(m, std::move(v));
    } else {
      it->second += c * scale;
      if (it->second == 0)
        a.erase(it);
    }
  }
}

SparseRow vec_to_row(const RingVec &v) {
  SparseRow r;
  r.reserve(v.size());
  for (const auto &[m, c] : v)
    r.emplace_back(m, c);
  return r;
}

} // namespace

unsigned AugModule::weighted_degree(const std::vector<unsigned> &mono) const {
  unsigned d = 0;
  for (unsigned i = 0; i < mono.size(); ++i)
    d += mono[i] * pc_.weights[i];
  return d;
}

AugModule::AugModule(const PcPresentation &pc, unsigned cap,
                     const AugBudget &budget)
    : pc_(pc), cap_(cap), budget_(budget) {
  if (cap < 1)
    throw std::invalid_argument("aug_quotient: cap must be >= 1");
  ConsistencyReport cons = check_consistency(pc_);
  if (!cons.consistent)
    throw std::invalid_argument("aug_quotient: inconsistent presentation: " +
                                cons.witness);
  Stopwatch timer;

  // enumerate monomials of weighted degree < cap, graded by (degree, lex)
  std::vector<unsigned> cur(pc_.ngens, 0);
  std::vector<std::vector<unsigned>> found;
  auto rec = [&](auto &&self, unsigned i, unsigned deg) -> void {
    if (found.size() > budget_.max_monomials)
      throw BudgetExceeded("aug_quotient: monomial budget exceeded");
    if (i == pc_.ngens) {
      found.push_back(cur);
      return;
    }
    self(self, i + 1, deg);
    unsigned w = pc_.weights[i];
    for (unsigned k = 1; deg + k * w < cap_; ++k) {
      cur[i] = k;
      self(self, i + 1, deg + k * w);
    }
    cur[i] = 0;
  };
  rec(rec, 0, 0);
  std::sort(found.begin(), found.end(),
            [&](const std::vector<unsigned> &a, const std::vector<unsigned> &b) {
              unsigned da = weighted_degree(a), db = weighted_degree(b);
              if (da != db)
                return da < db;
              return a < b;
            });
  monomials_ = std::move(found);
  for (unsigned i = 0; i < monomials_.size(); ++i)
    index_.emplace(monomials_[i], i);

  lattice_ = IncrementalHnf((unsigned)monomials_.size());

  // generator rows: u * (a_i^{m_i} - tail_i) * v
  size_t rows = 0;
  for (unsigned i = 0; i < pc_.ngens; ++i) {
    if (!pc_.orders[i])
      continue;
    RingVec rel = expand_gen_power(i, *pc_.orders[i]);
    RingVec tail = expand_word(pc_.power_tails[i]);
    vec_add(rel, tail, -1);
    if (rel.empty())
      continue;
    for (unsigned u = 0; u < monomials_.size(); ++u) {
      unsigned du = weighted_degree(monomials_[u]);
      if (du + pc_.weights[i] >= cap_)
        continue;
      RingVec left = mul(vec_of_mono(u), rel);
      for (unsigned v = 0; v < monomials_.size(); ++v) {
        unsigned dv = weighted_degree(monomials_[v]);
        if (du + pc_.weights[i] + dv >= cap_)
          continue;
        if (++rows > budget_.max_rows)
          throw BudgetExceeded("aug_quotient: row budget exceeded");
        if (timer.elapsed() > budget_.seconds)
          throw BudgetExceeded("aug_quotient: time budget exceeded");
        RingVec row = mul(left, vec_of_mono(v));
        if (!row.empty())
          lattice_.add_row(vec_to_row(row));
      }
    }
  }

  // closure: L must absorb multiplication by (a_k - 1) on either side
  for (unsigned pass = 0;; ++pass) {
    if (pass > 100)
      throw std::logic_error("aug_quotient: closure failed to stabilize");
    std::vector<RingVec> missing;
    for (const auto &[piv, row] : lattice_.rows()) {
      RingVec r;
      for (const auto &[c, x] : row)
        r.emplace(c, x);
      for (unsigned k = 0; k < pc_.ngens; ++k) {
        if (pc_.weights[k] >= cap_)
          continue; // (a_k - 1) alone already lands in w^cap
        RingVec right = vec_times_gen(r, k);
        if (!right.empty() && !lattice_.contains(vec_to_row(right)))
          missing.push_back(std::move(right));
        std::vector<unsigned> m(pc_.ngens, 0);
        m[k] = 1;
        RingVec xk;
        xk.emplace(index_.at(m), 1);
        RingVec left = mul(xk, r);
        if (!left.empty() && !lattice_.contains(vec_to_row(left)))
          missing.push_back(std::move(left));
      }
      if (timer.elapsed() > budget_.seconds)
        throw BudgetExceeded("aug_quotient: time budget exceeded");
    }
    if (missing.empty())
      break;
    for (const auto &m : missing)
      lattice_.add_row(vec_to_row(m));
  }
  lattice_.normalize();
  compute_layers();
}

RingVec AugModule::vec_of_mono(unsigned idx) const {
  RingVec v;
  v.emplace(idx, 1);
  return v;
}

RingVec AugModule::expand_gen_power(unsigned i, const Int &e) const {
  RingVec r;
  std::vector<unsigned> m(pc_.ngens, 0);
  for (unsigned k = 0;; ++k) {
    if (k * pc_.weights[i] >= cap_)
      break;
    Int c = binom(e, k);
    if (c != 0) {
      m[i] = k;
      r.emplace(index_.at(m), std::move(c));
    }
  }
  return r;
}

RingVec AugModule::expand_word(const PcWord &w) const {
  RingVec r;
  r.emplace(0, 1); // the constant monomial has index 0
  for (const auto &[g, e] : w)
    r = mul(r, expand_gen_power(g, e));
  return r;
}

RingVec AugModule::expand(const PcElement &g) const {
  return expand_word(g.syllables());
}

// (a_j - 1)(a_i - 1) = (a_i - 1)(a_j - 1) + a_i a_j ([a_j,a_i] - 1), j > i.
// The correction has weighted degree >= w_i + w_j through the tail.
const RingVec &AugModule::reorder_correction(unsigned j, unsigned i) const {
  auto key = std::make_pair(j, i);
  auto it = corr_cache_.find(key);
  if (it != corr_cache_.end())
    return it->second;
  RingVec c = expand_word(pc_.tail(j, i)); // [a_j, a_i]
  {
    auto one = c.find(0);
    if (one != c.end()) {
      one->second -= 1;
      if (one->second == 0)
        c.erase(one);
    } else {
      c.emplace(0, Int(-1));
    }
  }
  RingVec aij = mul(expand_gen_power(i, 1), expand_gen_power(j, 1));
  RingVec corr = mul(aij, c);
  return corr_cache_.emplace(key, std::move(corr)).first->second;
}

RingVec AugModule::mono_times_gen(unsigned mono, unsigned g) const {
  auto key = std::make_pair(mono, g);
  if (auto it = mono_cache_.find(key); it != mono_cache_.end())
    return it->second;
  const std::vector<unsigned> &m = monomials_[mono];
  long last = -1;
  for (unsigned i = 0; i < m.size(); ++i)
    if (m[i] != 0)
      last = i;
  RingVec res;
  if (last < 0 || (unsigned)last <= g) {
    std::vector<unsigned> m2 = m;
    m2[g] += 1;
    if (weighted_degree(m2) < cap_)
      res.emplace(index_.at(m2), 1);
  } else {
    // m = m1 * (a_last - 1); push (a_g - 1) through it
    unsigned j = (unsigned)last;
    std::vector<unsigned> m1 = m;
    m1[j] -= 1;
    unsigned m1i = index_.at(m1);
    RingVec a = mono_times_gen(m1i, g); // m1 * X_g
    res = vec_times_gen(a, j);          // ... * X_j
    const RingVec &corr = reorder_correction(j, g);
    if (!corr.empty()) {
      RingVec b = mul(vec_of_mono(m1i), corr);
      vec_add(res, b);
    }
  }
  return mono_cache_.emplace(key, std::move(res)).first->second;
}

RingVec AugModule::vec_times_gen(const RingVec &v, unsigned g) const {
  RingVec r;
  for (const auto &[m, c] : v)
    vec_add(r, mono_times_gen(m, g), c);
  return r;
}

RingVec AugModule::mul(const RingVec &a, const RingVec &b) const {
  RingVec r;
  for (const auto &[mb, cb] : b) {
    // decompose the right monomial into its (a_i - 1) factors, ascending
    RingVec t;
    for (const auto &[ma, ca] : a) {
      Int v = ca * cb;
      if (v != 0)
        t.emplace(ma, std::move(v));
    }
    const std::vector<unsigned> &mono = monomials_[mb];
    for (unsigned i = 0; i < mono.size() && !t.empty(); ++i)
      for (unsigned k = 0; k < mono[i] && !t.empty(); ++k)
        t = vec_times_gen(t, i);
    vec_add(r, t);
  }
  return r;
}

void AugModule::compute_layers() {
  layers_.clear();
  const unsigned n = (unsigned)monomials_.size();
  // block boundaries per degree
  std::vector<unsigned> first_of_degree(cap_ + 1, n);
  for (unsigned i = 0; i < n; ++i) {
    unsigned d = weighted_degree(monomials_[i]);
    if (first_of_degree[d] == n || i < first_of_degree[d])
      first_of_degree[d] = std::min(first_of_degree[d], i);
  }
  // make boundaries monotone (empty degrees inherit the next block start)
  for (int d = (int)cap_ - 1; d >= 0; --d)
    if (first_of_degree[d] == n && d + 1 <= (int)cap_)
      first_of_degree[d] = first_of_degree[d + 1];

  for (unsigned d = 1; d < cap_; ++d) {
    unsigned lo = first_of_degree[d];
    unsigned hi = d + 1 < cap_ ? first_of_degree[d + 1] : n;
    IncrementalHnf hn(n);
    for (unsigned m = hi; m < n; ++m)
      hn.add_row({{m, Int(1)}});
    for (const auto &[piv, row] : lattice_.rows())
      hn.add_row(row);
    hn.normalize();
    // rows with pivot inside [lo, hi) restricted to the block
    std::vector<std::vector<Int>> rel;
    for (const auto &[piv, row] : hn.rows()) {
      if (piv < lo || piv >= hi)
        continue;
      std::vector<Int> r(hi - lo, Int(0));
      for (const auto &[c, v] : row) {
        if (c >= hi) {
          if (v != 0)
            throw std::logic_error("layer row leaks into higher degrees");
        } else {
          r[c - lo] = v;
        }
      }
      rel.push_back(std::move(r));
    }
    std::vector<Int> divisors;
    unsigned block = hi - lo;
    if (block > 0) {
      IntMatrix m((unsigned)std::max<size_t>(rel.size(), 1), block);
      for (unsigned r = 0; r < rel.size(); ++r)
        for (unsigned c = 0; c < block; ++c)
          m.at(r, c) = rel[r][c];
      SnfResult s = snf(m);
      unsigned rank = 0;
      for (unsigned k = 0; k < std::min(m.rows(), m.cols()); ++k)
        if (s.D.at(k, k) != 0)
          ++rank;
      for (unsigned k = 0; k < rank; ++k)
        if (s.D.at(k, k) > 1)
          divisors.push_back(s.D.at(k, k));
      for (unsigned k = rank; k < block; ++k)
        divisors.push_back(0);
    }
    layers_.push_back(std::move(divisors));
  }
}

AugModule::DeltaAnswer AugModule::is_in_delta(const PcElement &g) const {
  RingVec v = expand(g);
  // subtract the expansion of the identity
  vec_add(v, [&] {
    RingVec one;
    one.emplace(0, Int(1));
    return one;
  }(), -1);
  DeltaAnswer ans;
  SparseRow row = vec_to_row(v);
  if (!lattice_.contains(row)) {
    ans.in_delta = false;
    return ans;
  }
  ans.in_delta = true;
  // certificate through the plain lattice solver over the basis rows
  std::vector<std::vector<Int>> gens;
  for (const auto &[piv, r] : lattice_.rows())
    gens.push_back(dense_from_sparse(r, (unsigned)monomials_.size()));
  auto cert =
      lattice_membership(dense_from_sparse(row, (unsigned)monomials_.size()),
                         gens);
  if (!cert)
    throw std::logic_error("is_in_delta: containment without certificate");
  ans.certificate = *cert;
  return ans;
}

DeltaReport delta_report(const GroupPresentation &pres, const WordExpr &word,
                         unsigned n, const NqBudget &nq_budget,
                         const AugBudget &aug_budget) {
  if (n < 2)
    throw std::invalid_argument("delta_report: n must be >= 2");
  DeltaReport rep;
  rep.n = n;
  NilpotentQuotient q = nilpotent_quotient(pres, n - 1, nq_budget);
  rep.class_used = q.cls;
  if (q.budget_exceeded) {
    rep.budget_exceeded = true;
    rep.budget_note = "nilpotent quotient stopped at class " +
                      std::to_string(q.cls) + " of " + std::to_string(n - 1);
    return rep;
  }
  PcElement img = evaluate(q.pc, q.images, word);
  rep.in_gamma = img.is_identity(); // w in gamma_n(G) iff trivial in G/gamma_n
  try {
    AugModule am(q.pc, n, aug_budget);
    rep.monomials = am.monomial_count();
    rep.layers = am.layer_divisors();
    auto ans = am.is_in_delta(img);
    rep.in_delta = ans.in_delta;
    rep.certificate = std::move(ans.certificate);
    rep.completed = true;
  } catch (const BudgetExceeded &e) {
    rep.budget_exceeded = true;
    rep.budget_note = e.what();
  }
  return rep;
}

} // namespace dimq
