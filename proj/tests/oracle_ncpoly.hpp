#pragma once

// Test-only noncommutative polynomial arithmetic, written independently of
// dimq::NcPoly: monomials are strings of letter indices, multiplication is
// the naive double loop, word embedding goes letter by letter with the
// geometric series for inverses. Used as the expansion oracle.

#include "dimq/bigint.hpp"
#include "dimq/word.hpp"

#include <map>
#include <string>

namespace oracle {

using dimq::Int;

struct Poly {
  unsigned cap;
  std::map<std::string, Int> t;

  explicit Poly(unsigned cap) : cap(cap) {}

  void add(const std::string &m, const Int &c) {
    if (m.size() >= cap || c == 0)
      return;
    auto it = t.find(m);
    if (it == t.end())
      t.emplace(m, c);
    else {
      it->second += c;
      if (it->second == 0)
        t.erase(it);
    }
  }
};

inline Poly one(unsigned cap) {
  Poly p(cap);
  p.add("", 1);
  return p;
}

inline Poly mul(const Poly &a, const Poly &b) {
  Poly r(a.cap);
  for (const auto &[ma, ca] : a.t)
    for (const auto &[mb, cb] : b.t)
      r.add(ma + mb, ca * cb);
  return r;
}

inline Poly add(const Poly &a, const Poly &b) {
  Poly r = a;
  for (const auto &[m, c] : b.t)
    r.add(m, c);
  return r;
}

// embedding of one letter g^{+-1}
inline Poly letter(unsigned cap, unsigned g, bool inv) {
  Poly p(cap);
  if (!inv) {
    p.add("", 1);
    p.add(std::string(1, (char)('a' + g)), 1);
  } else {
    std::string m;
    for (unsigned k = 0; k < cap; ++k) {
      p.add(m, (k % 2) ? Int(-1) : Int(1));
      m.push_back((char)('a' + g));
    }
  }
  return p;
}

inline Poly embed(const dimq::Word &w, unsigned cap) {
  Poly r = one(cap);
  for (const auto &s : w.syllables()) {
    bool inv = s.exp < 0;
    Int n = abs(s.exp);
    for (Int i = 0; i < n; ++i)
      r = mul(r, letter(cap, s.gen, inv));
  }
  return r;
}

inline int lowest_degree(const Poly &p) {
  int d = -1;
  for (const auto &[m, c] : p.t)
    if (d < 0 || (int)m.size() < d)
      d = (int)m.size();
  return d;
}

} // namespace oracle
