#pragma once

#include "dimq/bigint.hpp"

#include <string>
#include <vector>

namespace dimq {

// A generator of a free group: index within its alphabet plus display name.
struct GeneratorId {
  unsigned index = 0;
  std::string name;

  friend bool operator==(const GeneratorId &a, const GeneratorId &b) {
    return a.index == b.index && a.name == b.name;
  }
};

struct Syllable {
  unsigned gen = 0; // alphabet index
  Int exp;          // nonzero

  friend bool operator==(const Syllable &a, const Syllable &b) {
    return a.gen == b.gen && a.exp == b.exp;
  }
};

// Freely reduced word: adjacent syllables have distinct generators, no zero
// exponents. The empty word is the identity.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Syllable> raw) { append(std::move(raw)); }

  static Word generator(unsigned g, Int e = 1) {
    Word w;
    w.append_syllable(g, std::move(e));
    return w;
  }

  const std::vector<Syllable> &syllables() const { return syls_; }
  bool is_identity() const { return syls_.empty(); }

  // Word length counted with exponent multiplicity.
  Int letter_length() const;

  void append_syllable(unsigned g, Int e);
  void append(const Word &w);
  void append(std::vector<Syllable> raw);

  friend bool operator==(const Word &a, const Word &b) {
    return a.syls_ == b.syls_;
  }
  friend bool operator!=(const Word &a, const Word &b) { return !(a == b); }
  friend bool operator<(const Word &a, const Word &b);

private:
  std::vector<Syllable> syls_;
};

Word free_reduce(const std::vector<Syllable> &raw);
Word inverse(const Word &w);
Word concat(const Word &a, const Word &b);
Word power(const Word &w, const Int &e);

// [u,v] = u^-1 v^-1 u v
Word commutator(const Word &u, const Word &v);
// [w1,w2,...,wn] = [...[[w1,w2],w3]...,wn]; ws must be nonempty.
Word left_normed(const std::vector<Word> &ws);

// Exponent sum per generator (abelianized image), indexed by alphabet size n.
std::vector<Int> exponent_vector(const Word &w, unsigned n);

} // namespace dimq
