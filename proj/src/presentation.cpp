#include "dimq/presentation.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace dimq {

WordExpr WordExpr::gen(unsigned g) {
  WordExpr e;
  e.kind_ = Kind::Gen;
  e.gen_ = g;
  return e;
}

WordExpr WordExpr::power(WordExpr base, Int ex) {
  if (ex == 0)
    throw std::invalid_argument("zero exponent");
  if (ex == 1 || base.is_identity())
    return base;
  if (base.kind_ == Kind::Power) // (u^a)^b = u^(ab)
    return power(base.kids_[0], base.exp_ * ex);
  WordExpr e;
  e.kind_ = Kind::Power;
  e.exp_ = std::move(ex);
  e.kids_.push_back(std::move(base));
  return e;
}

WordExpr WordExpr::product(std::vector<WordExpr> factors) {
  std::vector<WordExpr> flat;
  for (auto &f : factors) {
    if (f.is_identity())
      continue;
    if (f.kind_ == Kind::Product) {
      for (auto &k : f.kids_)
        flat.push_back(std::move(k));
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty())
    return WordExpr();
  if (flat.size() == 1)
    return flat[0];
  WordExpr e;
  e.kind_ = Kind::Product;
  e.kids_ = std::move(flat);
  return e;
}

WordExpr WordExpr::commutator(std::vector<WordExpr> parts) {
  if (parts.size() < 2)
    throw std::invalid_argument("commutator needs at least two entries");
  // [1,u] = [u,1] = 1; collapse left-normed from the left
  WordExpr acc = parts[0];
  size_t i = 1;
  for (; i < parts.size(); ++i) {
    if (acc.is_identity() || parts[i].is_identity()) {
      acc = WordExpr();
      continue;
    }
    WordExpr e;
    e.kind_ = Kind::Commutator;
    e.kids_ = {std::move(acc), parts[i]};
    acc = std::move(e);
  }
  return acc;
}

bool operator==(const WordExpr &a, const WordExpr &b) {
  if (a.kind_ != b.kind_ || a.gen_ != b.gen_ || a.exp_ != b.exp_)
    return false;
  return a.kids_ == b.kids_;
}

static void flatten_into(const WordExpr &e, bool inv, std::vector<Syllable> &out,
                         const Int &max_letters, Int &budget);

static void flatten_children_product(const std::vector<WordExpr> &kids,
                                     bool inv, std::vector<Syllable> &out,
                                     const Int &max_letters, Int &budget) {
  if (!inv) {
    for (const auto &k : kids)
      flatten_into(k, false, out, max_letters, budget);
  } else {
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      flatten_into(*it, true, out, max_letters, budget);
  }
}

static void flatten_into(const WordExpr &e, bool inv, std::vector<Syllable> &out,
                         const Int &max_letters, Int &budget) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    return;
  case WordExpr::Kind::Gen:
    out.push_back({e.gen_index(), inv ? Int(-1) : Int(1)});
    budget += 1;
    break;
  case WordExpr::Kind::Power: {
    const WordExpr &base = e.children()[0];
    Int ex = inv ? Int(-e.exponent()) : e.exponent();
    if (base.kind() == WordExpr::Kind::Gen) {
      out.push_back({base.gen_index(), ex});
      budget += abs(ex);
      break;
    }
    Int n = abs(ex);
    budget += n; // coarse, refined by inner calls
    if (budget > max_letters || !n.fits_ulong_p())
      throw std::length_error("expr_to_word: expansion too large");
    bool binv = ex < 0;
    for (unsigned long i = 0, N = n.get_ui(); i < N; ++i)
      flatten_into(base, binv, out, max_letters, budget);
    break;
  }
  case WordExpr::Kind::Product:
    flatten_children_product(e.children(), inv, out, max_letters, budget);
    break;
  case WordExpr::Kind::Commutator: {
    // [u,v] = u^-1 v^-1 u v ; inverse is [v,u]
    const WordExpr &u = e.children()[inv ? 1 : 0];
    const WordExpr &v = e.children()[inv ? 0 : 1];
    flatten_into(u, true, out, max_letters, budget);
    flatten_into(v, true, out, max_letters, budget);
    flatten_into(u, false, out, max_letters, budget);
    flatten_into(v, false, out, max_letters, budget);
    break;
  }
  }
  if (budget > max_letters)
    throw std::length_error("expr_to_word: expansion too large");
}

Word expr_to_word(const WordExpr &e, const Int &max_letters) {
  std::vector<Syllable> raw;
  Int budget = 0;
  flatten_into(e, false, raw, max_letters, budget);
  return free_reduce(raw);
}

static void exp_vec_into(const WordExpr &e, const Int &mult,
                         std::vector<Int> &v) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    return;
  case WordExpr::Kind::Gen:
    if (e.gen_index() >= v.size())
      throw std::out_of_range("expr_exponent_vector: generator out of range");
    v[e.gen_index()] += mult;
    return;
  case WordExpr::Kind::Power:
    exp_vec_into(e.children()[0], mult * e.exponent(), v);
    return;
  case WordExpr::Kind::Product:
    for (const auto &k : e.children())
      exp_vec_into(k, mult, v);
    return;
  case WordExpr::Kind::Commutator:
    return; // commutators die in the abelianization
  }
}

std::vector<Int> expr_exponent_vector(const WordExpr &e, unsigned n) {
  std::vector<Int> v(n, Int(0));
  exp_vec_into(e, 1, v);
  return v;
}

long expr_max_gen(const WordExpr &e) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    return -1;
  case WordExpr::Kind::Gen:
    return (long)e.gen_index();
  default: {
    long m = -1;
    for (const auto &k : e.children())
      m = std::max(m, expr_max_gen(k));
    return m;
  }
  }
}

WordExpr Relation::relator() const {
  if (rhs.is_identity())
    return lhs;
  return WordExpr::product({lhs, WordExpr::power(rhs, -1)});
}

long GroupPresentation::find_generator(const std::string &name) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i].name == name)
      return (long)i;
  return -1;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Cursor {
  const std::string &text;
  size_t pos = 0;
  unsigned line = 1, col = 1;

  explicit Cursor(const std::string &t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_ws_and_comments(bool stop_at_newline = false) {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n')
          advance();
      } else if (c == '\n' && stop_at_newline) {
        return;
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(line, col, msg);
  }
};

bool is_name_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_' || c == '\'';
}

std::string lex_name(Cursor &cur) {
  std::string s;
  while (!cur.eof() && is_name_char(cur.peek()))
    s.push_back(cur.advance());
  return s;
}

Int lex_nat(Cursor &cur) {
  if (!std::isdigit((unsigned char)cur.peek()))
    cur.fail("expected a number");
  std::string s;
  while (!cur.eof() && std::isdigit((unsigned char)cur.peek()))
    s.push_back(cur.advance());
  return Int(s);
}

// integer or power form: [-] nat [^ nat]
Int lex_exponent(Cursor &cur) {
  cur.skip_ws_and_comments(true);
  bool neg = false;
  if (cur.peek() == '-') {
    cur.advance();
    neg = true;
  }
  unsigned eline = cur.line, ecol = cur.col;
  Int base = lex_nat(cur);
  Int value = base;
  if (cur.peek() == '^') {
    cur.advance();
    Int e = lex_nat(cur);
    if (!e.fits_ulong_p())
      throw ParseError(eline, ecol, "exponent tower too large");
    value = pow_int(base, e.get_ui());
  }
  if (value == 0)
    throw ParseError(eline, ecol, "zero exponent");
  return neg ? Int(-value) : value;
}

class WordParser {
public:
  WordParser(Cursor &cur, const GroupPresentation &p) : cur_(cur), pres_(p) {}

  WordExpr parse_word() {
    std::vector<WordExpr> factors;
    factors.push_back(parse_term());
    for (;;) {
      cur_.skip_ws_and_comments(true);
      if (cur_.peek() == '*') {
        cur_.advance();
        factors.push_back(parse_term());
      } else {
        break;
      }
    }
    return WordExpr::product(std::move(factors));
  }

private:
  WordExpr parse_term() {
    WordExpr atom = parse_atom();
    cur_.skip_ws_and_comments(true);
    if (cur_.peek() == '^') {
      cur_.advance();
      Int e = lex_exponent(cur_);
      return WordExpr::power(std::move(atom), std::move(e));
    }
    return atom;
  }

  WordExpr parse_atom() {
    cur_.skip_ws_and_comments(true);
    char c = cur_.peek();
    if (c == '1') {
      cur_.advance();
      return WordExpr();
    }
    if (c == '(') {
      cur_.advance();
      WordExpr w = parse_word();
      cur_.skip_ws_and_comments(true);
      if (cur_.peek() != ')')
        cur_.fail("expected ')'");
      cur_.advance();
      return w;
    }
    if (c == '[') {
      cur_.advance();
      std::vector<WordExpr> parts;
      parts.push_back(parse_word());
      cur_.skip_ws_and_comments(true);
      while (cur_.peek() == ',') {
        cur_.advance();
        parts.push_back(parse_word());
        cur_.skip_ws_and_comments(true);
      }
      if (cur_.peek() != ']')
        cur_.fail("expected ']' or ','");
      cur_.advance();
      if (parts.size() < 2)
        cur_.fail("commutator needs at least two entries");
      return WordExpr::commutator(std::move(parts));
    }
    if (is_name_start(c)) {
      unsigned gline = cur_.line, gcol = cur_.col;
      std::string name = lex_name(cur_);
      long idx = pres_.find_generator(name);
      if (idx < 0)
        throw ParseError(gline, gcol, "unknown generator '" + name + "'");
      return WordExpr::gen((unsigned)idx);
    }
    cur_.fail("expected a word");
  }

  Cursor &cur_;
  const GroupPresentation &pres_;
};

} // namespace

GroupPresentation parse_presentation(const std::string &text) {
  Cursor cur(text);
  GroupPresentation p;

  cur.skip_ws_and_comments();
  std::string kw = lex_name(cur);
  if (kw != "gens")
    cur.fail("expected 'gens:'");
  cur.skip_ws_and_comments();
  if (cur.peek() != ':')
    cur.fail("expected ':' after 'gens'");
  cur.advance();

  for (;;) {
    cur.skip_ws_and_comments();
    if (!is_name_start(cur.peek()))
      cur.fail("expected a generator name");
    std::string name = lex_name(cur);
    if (p.find_generator(name) >= 0)
      cur.fail("duplicate generator '" + name + "'");
    p.alphabet.push_back({(unsigned)p.alphabet.size(), name});
    cur.skip_ws_and_comments();
    if (cur.peek() == ',') {
      cur.advance();
      continue;
    }
    break;
  }

  cur.skip_ws_and_comments();
  kw = lex_name(cur);
  if (kw != "rels")
    cur.fail("expected 'rels:'");
  cur.skip_ws_and_comments();
  if (cur.peek() != ':')
    cur.fail("expected ':' after 'rels'");
  cur.advance();

  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.eof())
      break;
    WordParser wp(cur, p);
    WordExpr lhs = wp.parse_word();
    cur.skip_ws_and_comments(true);
    if (cur.peek() != '=')
      cur.fail("expected '=' in relation");
    cur.advance();
    WordExpr rhs = wp.parse_word();
    p.relations.push_back({std::move(lhs), std::move(rhs)});
    cur.skip_ws_and_comments(true);
    if (!cur.eof() && cur.peek() == ';')
      cur.advance();
  }
  return p;
}

WordExpr parse_word_expr(const std::string &text, const GroupPresentation &p) {
  Cursor cur(text);
  cur.skip_ws_and_comments();
  WordParser wp(cur, p);
  WordExpr e = wp.parse_word();
  cur.skip_ws_and_comments();
  if (!cur.eof())
    cur.fail("trailing input after word");
  return e;
}

// ------------------------------------------------------------ serializing

namespace {

std::string format_exponent(const Int &e) {
  if (auto k = pow3_log(e))
    return (e < 0 ? "-3^" : "3^") + std::to_string(*k);
  return e.get_str();
}

void serialize_expr(const WordExpr &e, const std::vector<GeneratorId> &alpha,
                    std::string &out) {
  switch (e.kind()) {
  case WordExpr::Kind::Identity:
    out += "1";
    return;
  case WordExpr::Kind::Gen:
    out += alpha.at(e.gen_index()).name;
    return;
  case WordExpr::Kind::Power: {
    const WordExpr &base = e.children()[0];
    if (base.kind() == WordExpr::Kind::Product) {
      out += '(';
      serialize_expr(base, alpha, out);
      out += ')';
    } else {
      serialize_expr(base, alpha, out);
    }
    out += '^';
    out += format_exponent(e.exponent());
    return;
  }
  case WordExpr::Kind::Product: {
    bool first = true;
    for (const auto &k : e.children()) {
      if (!first)
        out += '*';
      serialize_expr(k, alpha, out);
      first = false;
    }
    return;
  }
  case WordExpr::Kind::Commutator: {
    // re-flatten left-normed nests into one bracket
    std::vector<const WordExpr *> parts;
    const WordExpr *cur = &e;
    while (cur->kind() == WordExpr::Kind::Commutator) {
      parts.push_back(&cur->children()[1]);
      cur = &cur->children()[0];
    }
    parts.push_back(cur);
    out += '[';
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (it != parts.rbegin())
        out += ',';
      serialize_expr(**it, alpha, out);
    }
    out += ']';
    return;
  }
  }
}

} // namespace

std::string serialize_word_expr(const WordExpr &e,
                                const std::vector<GeneratorId> &alphabet) {
  std::string s;
  serialize_expr(e, alphabet, s);
  return s;
}

std::string serialize_presentation(const GroupPresentation &p) {
  std::string out = "gens: ";
  for (size_t i = 0; i < p.alphabet.size(); ++i) {
    if (i)
      out += ", ";
    out += p.alphabet[i].name;
  }
  out += "\nrels:\n";
  for (const auto &r : p.relations) {
    out += serialize_word_expr(r.lhs, p.alphabet);
    out += " = ";
    out += serialize_word_expr(r.rhs, p.alphabet);
    out += '\n';
  }
  return out;
}

} // namespace dimq
