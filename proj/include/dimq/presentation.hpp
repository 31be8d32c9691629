#pragma once

#include "dimq/word.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace dimq {

// Structured group words. Fixture relations carry powers like [u,v,w]^3^10
// whose flat expansion has millions of letters, so presentation sides and
// witnesses are kept as expressions; flat Words are derived on demand.
class WordExpr {
public:
  enum class Kind { Identity, Gen, Power, Product, Commutator };

  WordExpr() : kind_(Kind::Identity) {}

  static WordExpr gen(unsigned g);
  static WordExpr power(WordExpr base, Int e); // e != 0; power(e,1) = e
  static WordExpr product(std::vector<WordExpr> factors);
  static WordExpr commutator(std::vector<WordExpr> parts); // left-normed

  Kind kind() const { return kind_; }
  unsigned gen_index() const { return gen_; }
  const Int &exponent() const { return exp_; }
  const std::vector<WordExpr> &children() const { return kids_; }

  bool is_identity() const { return kind_ == Kind::Identity; }

  friend bool operator==(const WordExpr &a, const WordExpr &b);
  friend bool operator!=(const WordExpr &a, const WordExpr &b) {
    return !(a == b);
  }

private:
  Kind kind_;
  unsigned gen_ = 0;
  Int exp_;
  std::vector<WordExpr> kids_;
};

// Flatten to a freely reduced Word. Throws std::length_error if the flat
// form would exceed max_letters.
Word expr_to_word(const WordExpr &e, const Int &max_letters = Int(1) << 24);

// Abelianized exponent vector over an alphabet of size n.
std::vector<Int> expr_exponent_vector(const WordExpr &e, unsigned n);

// Largest generator index mentioned, or -1 if none.
long expr_max_gen(const WordExpr &e);

struct Relation {
  WordExpr lhs, rhs;

  WordExpr relator() const; // lhs * rhs^-1 ... as product with power(-1)

  friend bool operator==(const Relation &a, const Relation &b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

struct GroupPresentation {
  std::vector<GeneratorId> alphabet;
  std::vector<Relation> relations;

  unsigned ngens() const { return (unsigned)alphabet.size(); }
  long find_generator(const std::string &name) const;
};

struct ParseError : std::runtime_error {
  ParseError(unsigned line, unsigned col, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + what),
        line(line), col(col) {}
  unsigned line, col;
};

// Presentation file format (UTF-8 text, '#' comments):
//   gens: x1, x2, y1p
//   rels:
//   x1^3^2 = [y1, y1p]
//   ...
// Word syntax: generators, ^ integer exponents (decimal or 3^11 power form),
// * concatenation, [u,v,...] left-normed commutators, ( ) grouping, 1 for
// the identity.
GroupPresentation parse_presentation(const std::string &text);
std::string serialize_presentation(const GroupPresentation &p);

// Single word expression against a given alphabet.
WordExpr parse_word_expr(const std::string &text, const GroupPresentation &p);
std::string serialize_word_expr(const WordExpr &e,
                                const std::vector<GeneratorId> &alphabet);

} // namespace dimq
