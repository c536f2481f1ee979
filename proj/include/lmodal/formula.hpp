#pragma once
// Formula language for the modal logic L: propositional connectives plus a
// box operator.  Derived forms (negation, top, iff, strict equivalence) are
// expanded into the six primitives at construction time.  Formulas are
// hash-consed: structurally equal formulas are the same node, so equality is
// pointer equality and sets/maps over formulas are cheap.

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lmodal {

using Var = int;

struct LmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed input (bad arguments, non-propositional formula where one is
// required, unassigned variable, ...).
struct DomainError : LmError {
  using LmError::LmError;
};
// A configured resource bound was exceeded.
struct LimitError : LmError {
  using LmError::LmError;
};
// An internally produced certificate failed its own validation.  This should
// never happen; it indicates a bug, not bad input.
struct SoundnessError : LmError {
  using LmError::LmError;
};

struct ParseError : LmError {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : LmError(msg + " at position " + std::to_string(pos)), position(pos) {}
};

enum class Kind : uint8_t { Bot, Atom, Imp, Or, And, Box };

class Formula {
 public:
  Formula() : node_(nullptr) {}

  static Formula bot();
  static Formula atom(Var v);
  static Formula imp(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula box(Formula a);

  // Derived forms, expanded immediately.
  static Formula neg(Formula a) { return imp(a, bot()); }
  static Formula top() { return neg(bot()); }
  static Formula iff(Formula a, Formula b) {
    return conj(imp(a, b), imp(b, a));
  }
  // Strict equivalence  a == b  :=  [](a -> b) /\ [](b -> a).
  static Formula equiv(Formula a, Formula b) {
    return conj(box(imp(a, b)), box(imp(b, a)));
  }

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  Var var() const { return node_->var; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  // Child of a Box node.
  Formula body() const { return Formula(node_->lhs); }

  // Number of primitive nodes.
  int size() const { return node_->count; }
  bool has_box() const { return node_->boxed; }
  bool is_propositional() const { return !node_->boxed; }
  Var max_var() const { return node_->maxvar; }  // -1 if no atoms
  uint64_t var_mask() const { return node_->varmask; }

  bool operator==(const Formula& o) const { return node_ == o.node_; }
  bool operator!=(const Formula& o) const { return node_ != o.node_; }

  // Deterministic structural order (independent of interning addresses).
  static int compare(Formula a, Formula b);
  bool operator<(const Formula& o) const { return compare(*this, o) < 0; }

  size_t hash() const { return node_->hashv; }

 private:
  struct Node {
    Kind kind;
    Var var;  // Atom only
    const Node* lhs;
    const Node* rhs;
    int count;   // primitive node count
    Var maxvar;  // largest atom index, -1 if none
    uint64_t varmask;
    bool boxed;
    size_t hashv;
  };

  explicit Formula(const Node* n) : node_(n) {}
  static Formula intern(Kind k, Var v, Formula lhs, Formula rhs);

  const Node* node_;
};

struct FormulaHash {
  size_t operator()(const Formula& f) const { return f.hash(); }
};

namespace detail {

struct InternKey {
  Kind kind;
  Var var;
  const void* lhs;
  const void* rhs;
  bool operator==(const InternKey& o) const {
    return kind == o.kind && var == o.var && lhs == o.lhs && rhs == o.rhs;
  }
};
struct InternKeyHash {
  size_t operator()(const InternKey& k) const {
    size_t h = static_cast<size_t>(k.kind) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<size_t>(static_cast<uint32_t>(k.var)) + 0x9e3779b9ull +
         (h << 6) + (h >> 2);
    h ^= reinterpret_cast<size_t>(k.lhs) + 0x9e3779b9ull + (h << 6) + (h >> 2);
    h ^= reinterpret_cast<size_t>(k.rhs) + 0x9e3779b9ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace detail

inline Formula Formula::intern(Kind k, Var v, Formula lhs, Formula rhs) {
  static std::mutex mu;
  static std::deque<Node> store;
  static std::unordered_map<detail::InternKey, const Node*,
                            detail::InternKeyHash>
      table;

  detail::InternKey key{k, v, lhs.node_, rhs.node_};
  std::lock_guard<std::mutex> lock(mu);
  auto it = table.find(key);
  if (it != table.end()) return Formula(it->second);

  Node n;
  n.kind = k;
  n.var = v;
  n.lhs = lhs.node_;
  n.rhs = rhs.node_;
  switch (k) {
    case Kind::Bot:
      n.count = 1;
      n.maxvar = -1;
      n.varmask = 0;
      n.boxed = false;
      break;
    case Kind::Atom:
      n.count = 1;
      n.maxvar = v;
      n.varmask = v < 64 ? (uint64_t{1} << v) : 0;
      n.boxed = false;
      break;
    case Kind::Box:
      n.count = 1 + lhs.node_->count;
      n.maxvar = lhs.node_->maxvar;
      n.varmask = lhs.node_->varmask;
      n.boxed = true;
      break;
    default:
      n.count = 1 + lhs.node_->count + rhs.node_->count;
      n.maxvar = std::max(lhs.node_->maxvar, rhs.node_->maxvar);
      n.varmask = lhs.node_->varmask | rhs.node_->varmask;
      n.boxed = lhs.node_->boxed || rhs.node_->boxed;
      break;
  }
  size_t h = detail::InternKeyHash{}(key);
  n.hashv = h ? h : 1;
  store.push_back(n);
  const Node* p = &store.back();
  table.emplace(key, p);
  return Formula(p);
}

inline Formula Formula::bot() { return intern(Kind::Bot, -1, {}, {}); }
inline Formula Formula::atom(Var v) {
  if (v < 0 || v >= 64) throw DomainError("atom index out of range [0,63]");
  return intern(Kind::Atom, v, {}, {});
}
inline Formula Formula::imp(Formula a, Formula b) {
  return intern(Kind::Imp, -1, a, b);
}
inline Formula Formula::disj(Formula a, Formula b) {
  return intern(Kind::Or, -1, a, b);
}
inline Formula Formula::conj(Formula a, Formula b) {
  return intern(Kind::And, -1, a, b);
}
inline Formula Formula::box(Formula a) { return intern(Kind::Box, -1, a, {}); }

inline int Formula::compare(Formula a, Formula b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Bot:
      return 0;
    case Kind::Atom:
      return a.var() < b.var() ? -1 : (a.var() == b.var() ? 0 : 1);
    case Kind::Box:
      return compare(a.lhs(), b.lhs());
    default: {
      int c = compare(a.lhs(), b.lhs());
      if (c != 0) return c;
      return compare(a.rhs(), b.rhs());
    }
  }
}

// Sorted list of the atom indices occurring in f.
inline std::vector<Var> vars_of(Formula f) {
  std::vector<Var> out;
  uint64_t m = f.var_mask();
  for (int i = 0; i < 64; ++i)
    if (m & (uint64_t{1} << i)) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

// f[x := g], capture is not an issue (no binders in the language).
inline Formula substitute(Formula f, Var x, Formula g) {
  std::unordered_map<Formula, Formula, FormulaHash> memo;
  auto rec = [&](auto&& self, Formula t) -> Formula {
    if (!(t.var_mask() & (uint64_t{1} << x)) &&
        !(t.kind() == Kind::Atom && t.var() == x))
      return t;
    auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    Formula r;
    switch (t.kind()) {
      case Kind::Bot:
        r = t;
        break;
      case Kind::Atom:
        r = (t.var() == x) ? g : t;
        break;
      case Kind::Imp:
        r = Formula::imp(self(self, t.lhs()), self(self, t.rhs()));
        break;
      case Kind::Or:
        r = Formula::disj(self(self, t.lhs()), self(self, t.rhs()));
        break;
      case Kind::And:
        r = Formula::conj(self(self, t.lhs()), self(self, t.rhs()));
        break;
      case Kind::Box:
        r = Formula::box(self(self, t.lhs()));
        break;
    }
    memo.emplace(t, r);
    return r;
  };
  return rec(rec, f);
}

// ---------------------------------------------------------------------------
// Skeleton: abstract every maximal boxed subformula by a fresh variable.
// Identical boxed subformulas share one fresh variable.  Fresh indices start
// above every variable of f and are assigned in first-occurrence order
// (leftmost-outermost), so the result is deterministic.

struct Skeleton {
  Formula body;  // box-free
  std::vector<std::pair<Var, Formula>> mapping;  // fresh var -> boxed formula
};

inline Skeleton skeleton(Formula f) {
  Skeleton sk;
  Var next = f.max_var() + 1;
  std::unordered_map<Formula, Formula, FormulaHash> seen;  // box -> fresh atom
  auto rec = [&](auto&& self, Formula t) -> Formula {
    switch (t.kind()) {
      case Kind::Bot:
      case Kind::Atom:
        return t;
      case Kind::Box: {
        auto it = seen.find(t);
        if (it != seen.end()) return it->second;
        Formula fresh = Formula::atom(next);
        sk.mapping.emplace_back(next, t);
        ++next;
        seen.emplace(t, fresh);
        return fresh;
      }
      case Kind::Imp:
      case Kind::Or:
      case Kind::And: {
        // Sequence the recursion explicitly: fresh-variable numbering must
        // follow leftmost occurrence, not argument evaluation order.
        Formula l = self(self, t.lhs());
        Formula r = self(self, t.rhs());
        return t.kind() == Kind::Imp  ? Formula::imp(l, r)
               : t.kind() == Kind::Or ? Formula::disj(l, r)
                                      : Formula::conj(l, r);
      }
    }
    throw LmError("unreachable");
  };
  sk.body = rec(rec, f);
  return sk;
}

// Undo a skeleton: substitute the boxed subformulas back into the body.
inline Formula skeleton_expand(const Skeleton& sk) {
  Formula f = sk.body;
  for (const auto& [v, boxf] : sk.mapping) f = substitute(f, v, boxf);
  return f;
}

// ---------------------------------------------------------------------------
// Printing.  Primitives only; derived forms do not survive construction.
// Prec levels: atoms/bot/box 4, /\ 3, \/ 2, -> 1 (right-assoc).

inline std::string var_name(Var v) {
  switch (v) {
    case 0: return "p";
    case 1: return "q";
    case 2: return "r";
    default: return "x" + std::to_string(v);
  }
}

namespace detail {
inline int prec(Formula f) {
  switch (f.kind()) {
    case Kind::Imp: return 1;
    case Kind::Or: return 2;
    case Kind::And: return 3;
    default: return 4;
  }
}

inline void print_rec(Formula f, int min_prec, std::string& out) {
  int p = prec(f);
  bool paren = p < min_prec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Kind::Bot:
      out += "bot";
      break;
    case Kind::Atom:
      out += var_name(f.var());
      break;
    case Kind::Box:
      out += "[]";
      print_rec(f.body(), 4, out);
      break;
    case Kind::And:
      print_rec(f.lhs(), 3, out);
      out += " /\\ ";
      print_rec(f.rhs(), 4, out);
      break;
    case Kind::Or:
      print_rec(f.lhs(), 2, out);
      out += " \\/ ";
      print_rec(f.rhs(), 3, out);
      break;
    case Kind::Imp:
      print_rec(f.lhs(), 2, out);
      out += " -> ";
      print_rec(f.rhs(), 1, out);
      break;
  }
  if (paren) out += ')';
}
}  // namespace detail

inline std::string print(Formula f) {
  if (!f.valid()) throw DomainError("print: invalid formula");
  std::string out;
  detail::print_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.
// Grammar (loosest to tightest):
//   equiv :=  imp (("<->" | "==") equiv)?          right-assoc
//   imp   :=  or ("->" imp)?                       right-assoc
//   or    :=  and ("\/" and)*                      left-assoc
//   and   :=  unary ("/\" unary)*                  left-assoc
//   unary :=  "~" unary | "[]" unary | primary
//   primary := "bot" | atom | "(" equiv ")"
// Atoms: p q r (variables 0 1 2) and x0, x1, ...; x0 == p, x1 == q, x2 == r.

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s), pos_(0) {}

  Formula run() {
    Formula f = parse_equiv();
    skip_ws();
    if (pos_ != s_.size())
      throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  const std::string& s_;
  size_t pos_;

  void skip_ws() {
    while (pos_ < s_.size() &&
           (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
            s_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(const char* tok) {
    skip_ws();
    size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, n, tok) == 0) {
      // "->" must not swallow the prefix of "<->"; handled by trying longer
      // tokens first at each call site.
      pos_ += n;
      return true;
    }
    return false;
  }

  Formula parse_equiv() {
    Formula a = parse_imp();
    skip_ws();
    if (eat("<->")) return Formula::iff(a, parse_equiv());
    if (eat("==")) return Formula::equiv(a, parse_equiv());
    return a;
  }

  Formula parse_imp() {
    Formula a = parse_or();
    skip_ws();
    if (s_.compare(pos_, 2, "->") == 0) {
      pos_ += 2;
      return Formula::imp(a, parse_imp());
    }
    return a;
  }

  Formula parse_or() {
    Formula a = parse_and();
    while (eat("\\/")) a = Formula::disj(a, parse_and());
    return a;
  }

  Formula parse_and() {
    Formula a = parse_unary();
    while (eat("/\\")) a = Formula::conj(a, parse_unary());
    return a;
  }

  Formula parse_unary() {
    skip_ws();
    if (eat("~")) return Formula::neg(parse_unary());
    if (eat("[]")) return Formula::box(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    if (eat("(")) {
      Formula f = parse_equiv();
      if (!eat(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    char c = s_[pos_];
    if (c == 'p' && !is_ident_char(peek(1))) {
      ++pos_;
      return Formula::atom(0);
    }
    if (c == 'q' && !is_ident_char(peek(1))) {
      ++pos_;
      return Formula::atom(1);
    }
    if (c == 'r' && !is_ident_char(peek(1))) {
      ++pos_;
      return Formula::atom(2);
    }
    if (s_.compare(pos_, 3, "bot") == 0 && !is_ident_char(peek(3))) {
      pos_ += 3;
      return Formula::bot();
    }
    if (c == 'x') {
      size_t j = pos_ + 1;
      size_t start = j;
      while (j < s_.size() && s_[j] >= '0' && s_[j] <= '9') ++j;
      if (j > start && !is_ident_char(j < s_.size() ? s_[j] : '\0')) {
        long v = std::stol(s_.substr(start, j - start));
        if (v < 0 || v >= 64)
          throw ParseError("atom index out of range", pos_);
        pos_ = j;
        return Formula::atom(static_cast<Var>(v));
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  char peek(size_t off) const {
    return pos_ + off < s_.size() ? s_[pos_ + off] : '\0';
  }
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  }
};

}  // namespace detail

inline Formula parse(const std::string& s) { return detail::Parser(s).run(); }

// ---------------------------------------------------------------------------
// Enumeration of formulas by generator size.  The generator alphabet is
// bot, the first num_vars atoms, ->, \/, /\, and optionally ~ and [] (each
// counting one node).  Since ~a constructs a -> bot, distinct generator trees
// can denote the same formula; each formula is listed once, at its smallest
// generator size.  Order is deterministic: ascending size, and within a size
// the order in which the construction below first produces each new formula.

struct EnumOptions {
  int num_vars = 2;
  int max_size = 5;
  bool with_neg = true;
  bool with_box = true;
};

inline std::vector<Formula> enumerate_formulas(const EnumOptions& opt) {
  if (opt.num_vars < 0 || opt.num_vars > 8)
    throw DomainError("enumerate_formulas: num_vars out of range [0,8]");
  if (opt.max_size < 1 || opt.max_size > 12)
    throw DomainError("enumerate_formulas: max_size out of range [1,12]");

  std::vector<std::vector<Formula>> by_size(opt.max_size + 1);
  std::unordered_set<Formula, FormulaHash> seen;
  auto add = [&](int s, Formula f) {
    if (seen.insert(f).second) by_size[s].push_back(f);
  };

  add(1, Formula::bot());
  for (int v = 0; v < opt.num_vars; ++v) add(1, Formula::atom(v));

  for (int s = 2; s <= opt.max_size; ++s) {
    if (opt.with_neg)
      for (Formula a : by_size[s - 1]) add(s, Formula::neg(a));
    if (opt.with_box)
      for (Formula a : by_size[s - 1]) add(s, Formula::box(a));
    for (int i = 1; i <= s - 2; ++i) {
      for (Formula a : by_size[i])
        for (Formula b : by_size[s - 1 - i]) {
          add(s, Formula::imp(a, b));
          add(s, Formula::disj(a, b));
          add(s, Formula::conj(a, b));
        }
    }
  }

  std::vector<Formula> out;
  for (int s = 1; s <= opt.max_size; ++s)
    out.insert(out.end(), by_size[s].begin(), by_size[s].end());
  return out;
}

}  // namespace lmodal
