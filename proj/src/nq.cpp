#include "dimq/nq.hpp"

#include "dimq/zlinalg.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace dimq {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point start = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::vector<Int> layer_divisors_from_lattice(const IncrementalHnf &hn) {
  // elementary divisors of Z^ncols / rowspace: nontrivial torsion then zeros.
  // Unit pivots contribute divisor 1 and are eliminated by substitution
  // first; the Smith form only ever runs on the small non-unit core.
  const unsigned ncols = hn.cols();
  std::vector<Int> divisors;
  if (ncols == 0)
    return divisors;

  std::map<unsigned, const SparseRow *> unit_rows;
  std::vector<SparseRow> core;
  for (const auto &[piv, row] : hn.rows()) {
    if (row[0].second == 1)
      unit_rows.emplace(piv, &row);
    else
      core.push_back(row);
  }
  // clear core entries at unit columns
  for (auto &r : core) {
    size_t scan = 0;
    while (scan < r.size()) {
      auto it = unit_rows.find(r[scan].first);
      if (it == unit_rows.end()) {
        ++scan;
        continue;
      }
      Int q = r[scan].second;
      SparseRow combined;
      combined.reserve(r.size() + it->second->size());
      size_t i = 0, j = 0;
      const SparseRow &u = *it->second;
      while (i < r.size() || j < u.size()) {
        if (j == u.size() || (i < r.size() && r[i].first < u[j].first)) {
          combined.push_back(r[i++]);
        } else if (i == r.size() || u[j].first < r[i].first) {
          Int v = -q * u[j].second;
          if (v != 0)
            combined.emplace_back(u[j].first, std::move(v));
          ++j;
        } else {
          Int v = r[i].second - q * u[j].second;
          if (v != 0)
            combined.emplace_back(r[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      r = std::move(combined);
    }
  }
  // remaining columns, renumbered
  std::vector<long> colmap(ncols, -1);
  unsigned ncore_cols = 0;
  for (unsigned c = 0; c < ncols; ++c)
    if (!unit_rows.count(c))
      colmap[c] = ncore_cols++;

  unsigned rank_units = (unsigned)unit_rows.size();
  if (ncore_cols == 0)
    return divisors;
  IntMatrix m((unsigned)std::max<size_t>(core.size(), 1), ncore_cols);
  for (unsigned r = 0; r < core.size(); ++r)
    for (const auto &[c, v] : core[r]) {
      if (colmap[c] < 0)
        throw std::logic_error("layer divisors: unit column survived");
      m.at(r, (unsigned)colmap[c]) = v;
    }
  SnfResult s = snf(m);
  unsigned rank = 0;
  for (unsigned k = 0; k < std::min(m.rows(), m.cols()); ++k)
    if (s.D.at(k, k) != 0)
      ++rank;
  for (unsigned k = 0; k < rank; ++k)
    if (s.D.at(k, k) > 1)
      divisors.push_back(s.D.at(k, k));
  for (unsigned k = rank; k < ncore_cols; ++k)
    divisors.push_back(0);
  (void)rank_units;
  return divisors;
}

// class-1 quotient: Hermite form of the abelianized relation matrix
NilpotentQuotient abelian_quotient(const GroupPresentation &pres) {
  const unsigned n = pres.ngens();
  IncrementalHnf hn(n);
  for (const auto &rel : pres.relations) {
    std::vector<Int> v = expr_exponent_vector(rel.lhs, n);
    std::vector<Int> w = expr_exponent_vector(rel.rhs, n);
    for (unsigned i = 0; i < n; ++i)
      v[i] -= w[i];
    hn.add_row(sparse_from_dense(v));
  }
  hn.normalize();

  NilpotentQuotient q;
  q.cls = 1;
  q.layer_divisors.push_back(layer_divisors_from_lattice(hn));

  // survivors and their orders
  std::vector<long> newindex(n, -1);
  std::vector<std::optional<Int>> order_of(n);
  for (const auto &[piv, row] : hn.rows()) {
    if (row[0].second == 1)
      continue; // eliminated
    order_of[piv] = row[0].second;
  }
  unsigned m = 0;
  for (unsigned i = 0; i < n; ++i) {
    auto it = hn.rows().find(i);
    if (it != hn.rows().end() && it->second[0].second == 1)
      continue;
    newindex[i] = m++;
  }

  q.pc.ngens = m;
  q.pc.weights.assign(m, 1);
  q.pc.orders.assign(m, std::nullopt);
  q.pc.init_trivial_tails();
  for (unsigned i = 0; i < n; ++i)
    if (newindex[i] >= 0 && order_of[i])
      q.pc.orders[(unsigned)newindex[i]] = *order_of[i];

  // power tails and images from the normalized rows
  for (const auto &[piv, row] : hn.rows()) {
    PcWord tail;
    for (size_t k = 1; k < row.size(); ++k) {
      long ni = newindex[row[k].first];
      if (ni < 0)
        throw std::logic_error("nq: eliminated generator in reduced row");
      tail.emplace_back((unsigned)ni, -row[k].second);
    }
    if (row[0].second == 1)
      continue; // handled below through images
    q.pc.power_tails[(unsigned)newindex[piv]] = tail;
  }
  q.images.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    if (newindex[i] >= 0) {
      q.images[i] = q.pc.unit((unsigned)newindex[i]);
      q.defs.push_back({PcDefinition::Gen, i, 0});
    } else {
      const SparseRow &row = hn.rows().at(i);
      PcWord word;
      for (size_t k = 1; k < row.size(); ++k)
        word.emplace_back((unsigned)newindex[row[k].first], -row[k].second);
      q.images[i] = q.pc.element_of(word);
    }
  }
  return q;
}

struct TempSource {
  enum Kind { Eps, Comm, Pow } kind;
  unsigned a = 0, b = 0; // Eps: fp gen; Comm: (j,i); Pow: gen i
};

} // namespace

std::vector<unsigned> NilpotentQuotient::layer_sizes() const {
  std::vector<unsigned> sizes(cls, 0);
  for (unsigned g = 0; g < pc.ngens; ++g)
    sizes.at(pc.weights[g] - 1)++;
  return sizes;
}

NilpotentQuotient nilpotent_quotient(const GroupPresentation &pres, unsigned c,
                                     const NqBudget &budget) {
  if (c < 1)
    throw std::invalid_argument("nilpotent_quotient: class must be >= 1");
  Stopwatch timer;
  NilpotentQuotient q = abelian_quotient(pres);

  while (q.cls < c) {
    if (timer.elapsed() > budget.seconds || q.pc.ngens > budget.max_gens) {
      q.budget_exceeded = true;
      return q;
    }
    const unsigned cnext = q.cls + 1;
    const unsigned nold = q.pc.ngens;

    // which sources are consumed by definitions
    std::vector<bool> gen_defined(pres.ngens(), false);
    std::vector<bool> pow_defined(nold, false);
    std::vector<std::vector<bool>> comm_defined(nold);
    for (unsigned j = 0; j < nold; ++j)
      comm_defined[j].assign(j, false);
    for (const auto &d : q.defs) {
      switch (d.kind) {
      case PcDefinition::Gen:
        gen_defined[d.a] = true;
        break;
      case PcDefinition::Comm:
        comm_defined[d.a][d.b] = true;
        break;
      case PcDefinition::Pow:
        pow_defined[d.a] = true;
        break;
      }
    }

    // temp generators: image tails, power tails, commutator tails
    std::vector<TempSource> temps;
    for (unsigned l = 0; l < pres.ngens(); ++l)
      if (!gen_defined[l])
        temps.push_back({TempSource::Eps, l, 0});
    for (unsigned i = 0; i < nold; ++i)
      if (q.pc.orders[i] && !pow_defined[i])
        temps.push_back({TempSource::Pow, i, 0});
    for (unsigned j = 1; j < nold; ++j)
      for (unsigned i = 0; i < j; ++i)
        if (q.pc.weights[i] + q.pc.weights[j] <= cnext && !comm_defined[j][i])
          temps.push_back({TempSource::Comm, j, i});
    const unsigned ntemp = (unsigned)temps.size();

    // extended presentation
    PcPresentation ext;
    ext.ngens = nold + ntemp;
    ext.weights = q.pc.weights;
    ext.weights.resize(ext.ngens, cnext);
    ext.orders = q.pc.orders;
    ext.orders.resize(ext.ngens, std::nullopt);
    ext.init_trivial_tails();
    for (unsigned i = 0; i < nold; ++i)
      ext.power_tails[i] = q.pc.power_tails[i];
    ext.comm = q.pc.comm;

    std::vector<PcElement> ext_images(pres.ngens());
    for (unsigned l = 0; l < pres.ngens(); ++l)
      ext_images[l] = q.images[l]; // old support is below nold
    for (unsigned t = 0; t < ntemp; ++t) {
      unsigned col = nold + t;
      switch (temps[t].kind) {
      case TempSource::Eps:
        ext_images[temps[t].a].t.emplace_back(col, 1);
        break;
      case TempSource::Pow:
        ext.power_tails[temps[t].a].emplace_back(col, 1);
        break;
      case TempSource::Comm: {
        PcWord w = ext.tail(temps[t].a, temps[t].b);
        w.emplace_back(col, 1);
        ext.set_tail(temps[t].a, temps[t].b, std::move(w));
        break;
      }
      }
    }

    // collect rows over the temp coordinates
    IncrementalHnf hn(ntemp);
    std::vector<SparseRow> pending_rows;
    size_t rows_seen = 0;
    bool exceeded = false;
    auto out_of_budget = [&] {
      if (exceeded)
        return true;
      if (rows_seen > budget.max_rows || timer.elapsed() > budget.seconds)
        exceeded = true;
      return exceeded;
    };
    auto push_diff = [&](const PcElement &lhs, const PcElement &rhs) {
      // merge-walk the two sorted supports
      SparseRow row;
      size_t i = 0, j = 0;
      const PcWord &a = lhs.t, &b = rhs.t;
      while (i < a.size() || j < b.size()) {
        unsigned ga = i < a.size() ? a[i].first : ~0u;
        unsigned gb = j < b.size() ? b[j].first : ~0u;
        unsigned g = std::min(ga, gb);
        Int d = (ga == g ? a[i].second : Int(0)) -
                (gb == g ? b[j].second : Int(0));
        if (ga == g)
          ++i;
        if (gb == g)
          ++j;
        if (d == 0)
          continue;
        if (g < nold)
          throw std::logic_error(
              "nq: overlap difference leaks below the centre");
        row.emplace_back(g - nold, std::move(d));
      }
      ++rows_seen;
      if (!row.empty())
        pending_rows.push_back(std::move(row));
    };

    // presentation relations first, then consistency overlaps
    for (const auto &rel : pres.relations)
      push_diff(evaluate(ext, ext_images, rel.lhs),
                evaluate(ext, ext_images, rel.rhs));

    for (unsigned k = 2; k < nold && !out_of_budget(); ++k)
      for (unsigned j = 1; j < k; ++j) {
        if (ext.weights[k] + ext.weights[j] + ext.weights[0] > cnext)
          break;
        for (unsigned i = 0; i < j && !out_of_budget(); ++i) {
          if (ext.weights[k] + ext.weights[j] + ext.weights[i] > cnext)
            break;
          push_diff(ext.mul(ext.unit(k), ext.mul(ext.unit(j), ext.unit(i))),
                    ext.mul(ext.mul(ext.unit(k), ext.unit(j)), ext.unit(i)));
        }
      }
    for (unsigned j = 0; j < nold && !out_of_budget(); ++j) {
      if (!ext.orders[j])
        continue;
      const Int &m = *ext.orders[j];
      PcElement t = ext.element_of(ext.power_tails[j]);
      push_diff(ext.mul(ext.unit(j), t), ext.mul(t, ext.unit(j)));
      for (unsigned i = 0; i < nold && !out_of_budget(); ++i) {
        if (i == j || ext.weights[i] + ext.weights[j] > cnext)
          continue;
        PcElement jm1;
        if (m > 1)
          jm1.t.emplace_back(j, m - 1);
        if (j > i)
          push_diff(ext.mul(t, ext.unit(i)),
                    ext.mul(jm1, ext.mul(ext.unit(j), ext.unit(i))));
        else
          push_diff(ext.mul(ext.unit(i), t),
                    ext.mul(ext.mul(ext.unit(i), ext.unit(j)), jm1));
      }
    }
    if (out_of_budget()) {
      // an under-generated lattice would give a wrong quotient; report the
      // class actually completed instead
      q.budget_exceeded = true;
      return q;
    }
    for (auto &row : pending_rows)
      hn.add_row(std::move(row));
    pending_rows.clear();
    // no full above-diagonal normalization: tail vectors are reduced
    // lazily through reduce_temp below, which is much cheaper at scale

    // survivors
    std::vector<long> newcol(ntemp, -1);
    unsigned nsurv = 0;
    for (unsigned t = 0; t < ntemp; ++t) {
      auto it = hn.rows().find(t);
      if (it != hn.rows().end() && it->second[0].second == 1)
        continue;
      newcol[t] = nsurv++;
    }

    auto reduce_temp = [&](std::vector<Int> v) {
      for (unsigned t = 0; t < ntemp; ++t) {
        if (v[t] == 0)
          continue;
        auto it = hn.rows().find(t);
        if (it == hn.rows().end())
          continue;
        Int qq = fdiv_q(v[t], it->second[0].second);
        if (qq == 0)
          continue;
        for (const auto &[cc, vv] : it->second)
          v[cc] -= qq * vv;
      }
      return v;
    };
    auto temp_word = [&](const std::vector<Int> &reduced, unsigned base) {
      PcWord w;
      for (unsigned t = 0; t < ntemp; ++t)
        if (reduced[t] != 0) {
          if (newcol[t] < 0)
            throw std::logic_error("nq: eliminated temp in reduced vector");
          w.emplace_back(base + (unsigned)newcol[t], reduced[t]);
        }
      return w;
    };

    // build the next presentation
    PcPresentation np;
    np.ngens = nold + nsurv;
    np.weights = q.pc.weights;
    np.weights.resize(np.ngens, cnext);
    np.orders = q.pc.orders;
    np.orders.resize(np.ngens, std::nullopt);
    np.init_trivial_tails();

    for (const auto &[piv, row] : hn.rows()) {
      if (row[0].second == 1)
        continue;
      unsigned g = nold + (unsigned)newcol[piv];
      np.orders[g] = row[0].second;
      std::vector<Int> rest(ntemp, Int(0));
      for (size_t k = 1; k < row.size(); ++k)
        rest[row[k].first] = -row[k].second;
      np.power_tails[g] = temp_word(reduce_temp(std::move(rest)), nold);
    }

    std::vector<PcDefinition> ndefs = q.defs;
    ndefs.resize(np.ngens, PcDefinition{PcDefinition::Gen, 0, 0});
    for (unsigned t = 0; t < ntemp; ++t) {
      if (newcol[t] < 0)
        continue;
      unsigned g = nold + (unsigned)newcol[t];
      switch (temps[t].kind) {
      case TempSource::Eps:
        ndefs[g] = {PcDefinition::Gen, temps[t].a, 0};
        break;
      case TempSource::Pow:
        ndefs[g] = {PcDefinition::Pow, temps[t].a, 0};
        break;
      case TempSource::Comm:
        ndefs[g] = {PcDefinition::Comm, temps[t].a, temps[t].b};
        break;
      }
    }

    // rewrite old tails and images: reduce their temp parts onto survivors
    auto temp_unit = [&](unsigned t) {
      std::vector<Int> v(ntemp, Int(0));
      v[t] = 1;
      return v;
    };
    for (unsigned t = 0; t < ntemp; ++t) {
      PcWord extra = temp_word(reduce_temp(temp_unit(t)), nold);
      switch (temps[t].kind) {
      case TempSource::Eps:
        break; // handled with images below
      case TempSource::Pow: {
        PcWord w = q.pc.power_tails[temps[t].a];
        w.insert(w.end(), extra.begin(), extra.end());
        np.power_tails[temps[t].a] = w;
        break;
      }
      case TempSource::Comm: {
        PcWord w = q.pc.tail(temps[t].a, temps[t].b);
        w.insert(w.end(), extra.begin(), extra.end());
        np.set_tail(temps[t].a, temps[t].b, std::move(w));
        break;
      }
      }
    }
    // untouched old tails carry over
    for (unsigned i = 0; i < nold; ++i)
      if (q.pc.orders[i] && np.power_tails[i].empty())
        np.power_tails[i] = q.pc.power_tails[i];
    for (const auto &[ji, w] : q.pc.comm)
      if (np.tail_trivial(ji.first, ji.second))
        np.set_tail(ji.first, ji.second, w);

    std::vector<PcElement> nimages(pres.ngens());
    for (unsigned l = 0; l < pres.ngens(); ++l) {
      std::vector<Int> tpart(ntemp, Int(0));
      PcElement img;
      for (const auto &[g, e] : ext_images[l].t) {
        if (g < nold)
          img.t.emplace_back(g, e);
        else
          tpart[g - nold] = e;
      }
      tpart = reduce_temp(std::move(tpart));
      for (const auto &[g, e] : temp_word(tpart, nold))
        np.append_power(img, g, e);
      nimages[l] = std::move(img);
    }

    q.pc = std::move(np);
    q.pc.validate();
    q.images = std::move(nimages);
    q.defs = std::move(ndefs);
    q.cls = cnext;
    q.layer_divisors.push_back(layer_divisors_from_lattice(hn));
  }
  return q;
}

SubgroupBasis gamma_basis(const NilpotentQuotient &nq, unsigned n) {
  if (n < 1 || n > nq.cls + 1)
    throw std::invalid_argument("gamma_basis: n out of range");
  SubgroupBasis B;
  for (unsigned g = 0; g < nq.pc.ngens; ++g)
    if (nq.pc.weights[g] >= n)
      B.rows.emplace(g, nq.pc.unit(g));
  return B;
}

} // namespace dimq
