#include "dimq/word.hpp"

#include <stdexcept>

namespace dimq {

Int Word::letter_length() const {
  Int n = 0;
  for (const auto &s : syls_)
    n += abs(s.exp);
  return n;
}

void Word::append_syllable(unsigned g, Int e) {
  if (e == 0)
    return;
  if (!syls_.empty() && syls_.back().gen == g) {
    syls_.back().exp += e;
    if (syls_.back().exp == 0)
      syls_.pop_back();
    return;
  }
  syls_.push_back({g, std::move(e)});
}

void Word::append(const Word &w) {
  for (const auto &s : w.syls_)
    append_syllable(s.gen, s.exp);
}

void Word::append(std::vector<Syllable> raw) {
  for (auto &s : raw)
    append_syllable(s.gen, std::move(s.exp));
}

bool operator<(const Word &a, const Word &b) {
  const auto &x = a.syllables(), &y = b.syllables();
  if (x.size() != y.size())
    return x.size() < y.size();
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].gen != y[i].gen)
      return x[i].gen < y[i].gen;
    if (x[i].exp != y[i].exp)
      return x[i].exp < y[i].exp;
  }
  return false;
}

Word free_reduce(const std::vector<Syllable> &raw) {
  Word w;
  w.append(raw);
  return w;
}

Word inverse(const Word &w) {
  Word r;
  const auto &s = w.syllables();
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    r.append_syllable(it->gen, -it->exp);
  return r;
}

Word concat(const Word &a, const Word &b) {
  Word r = a;
  r.append(b);
  return r;
}

Word power(const Word &w, const Int &e) {
  if (e == 0 || w.is_identity())
    return Word();
  // single-syllable words take the fast path; general words repeat
  // (fixture powers are always applied to single syllables or commutators,
  // where cyclic reduction does not shrink anything we care about)
  const auto &s = w.syllables();
  if (s.size() == 1)
    return Word::generator(s[0].gen, s[0].exp * e);
  Word base = e > 0 ? w : inverse(w);
  Int n = abs(e);
  if (!n.fits_ulong_p())
    throw std::overflow_error("power: exponent too large for multi-syllable word");
  Word r;
  for (unsigned long i = 0, N = n.get_ui(); i < N; ++i)
    r.append(base);
  return r;
}

Word commutator(const Word &u, const Word &v) {
  Word r = inverse(u);
  r.append(inverse(v));
  r.append(u);
  r.append(v);
  return r;
}

Word left_normed(const std::vector<Word> &ws) {
  if (ws.empty())
    throw std::invalid_argument("left_normed: empty list");
  Word r = ws[0];
  for (size_t i = 1; i < ws.size(); ++i)
    r = commutator(r, ws[i]);
  return r;
}

std::vector<Int> exponent_vector(const Word &w, unsigned n) {
  std::vector<Int> v(n, Int(0));
  for (const auto &s : w.syllables()) {
    if (s.gen >= n)
      throw std::out_of_range("exponent_vector: generator out of range");
    v[s.gen] += s.exp;
  }
  return v;
}

} // namespace dimq
