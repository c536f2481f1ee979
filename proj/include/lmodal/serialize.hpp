#pragma once
// Canonical text formats for proofs, models, and sweep reports.
//
// Every writer emits a deterministic, line-based block ending in "end"; every
// reader rejects malformed input with a line-numbered ParseError.  Writers
// and readers are exact inverses, so round-tripping is byte-identical.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lmodal/algebra.hpp"
#include "lmodal/hilbert.hpp"
#include "lmodal/kripke.hpp"
#include "lmodal/lkernel.hpp"

namespace lmodal {

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ';') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] inline void bad_line(size_t lineno, const std::string& why) {
  throw ParseError("line " + std::to_string(lineno + 1) + ": " + why,
                   static_cast<int>(lineno + 1));
}

inline int parse_int(const std::string& s, size_t lineno) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) bad_line(lineno, "trailing junk in number");
    return v;
  } catch (ParseError&) {
    throw;
  } catch (std::exception&) {
    bad_line(lineno, "expected a number, got '" + s + "'");
  }
}

inline Var parse_var_name(const std::string& s, size_t lineno) {
  if (s == "p") return 0;
  if (s == "q") return 1;
  if (s == "r") return 2;
  if (s.size() >= 2 && s[0] == 'x') return parse_int(s.substr(1), lineno);
  bad_line(lineno, "expected a variable name, got '" + s + "'");
}

// Shared cursor over the lines of a block.
struct BlockReader {
  std::vector<std::string> lines;
  size_t pos = 0;

  explicit BlockReader(const std::string& text) : lines(split_lines(text)) {}

  bool done() const { return pos >= lines.size(); }
  std::string next() {
    if (done()) throw ParseError("unexpected end of input", 0);
    return lines[pos++];
  }
  void expect(const std::string& want) {
    size_t at = pos;
    std::string got = trim(next());
    if (got != want)
      bad_line(at, "expected '" + want + "', got '" + got + "'");
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Natural-deduction-free Hilbert proofs ("ipcproof" blocks).

inline std::string write_hilbert(const HilbertProof& p) {
  std::string out = "ipcproof\n";
  for (Formula f : p.premises) out += "premise ; " + print(f) + "\n";
  for (size_t k = 0; k < p.lines.size(); ++k) {
    const HLine& ln = p.lines[k];
    out += "line " + std::to_string(k + 1) + " ; " + print(ln.f) + " ; ";
    switch (ln.just.tag) {
      case HJust::Tag::Axiom: {
        out += h_axiom_name(ln.just.ax);
        int ar = h_axiom_arity(ln.just.ax);
        out += " ; " + print(ln.just.a);
        if (ar >= 2) out += " ; " + print(ln.just.b);
        if (ar >= 3) out += " ; " + print(ln.just.c);
        break;
      }
      case HJust::Tag::Hyp:
        out += "hyp " + std::to_string(ln.just.i + 1);
        break;
      case HJust::Tag::MP:
        out += "mp " + std::to_string(ln.just.i + 1) + " " +
               std::to_string(ln.just.j + 1);
        break;
    }
    out += "\n";
  }
  out += "end\n";
  return out;
}

inline HilbertProof read_hilbert(const std::string& text) {
  detail::BlockReader r(text);
  r.expect("ipcproof");
  HilbertProof p;
  while (!r.done()) {
    size_t at = r.pos;
    std::string raw = r.next();
    std::string t = detail::trim(raw);
    if (t.empty()) continue;
    if (t == "end") return p;
    auto fields = detail::split_fields(raw);
    auto head = detail::split_ws(fields[0]);
    if (head.empty()) detail::bad_line(at, "empty directive");
    if (head[0] == "premise") {
      if (fields.size() != 2) detail::bad_line(at, "premise wants 1 formula");
      if (!p.lines.empty()) detail::bad_line(at, "premise after first line");
      p.premises.push_back(parse(fields[1]));
      continue;
    }
    if (head[0] != "line" || head.size() != 2)
      detail::bad_line(at, "expected 'line N'");
    int num = detail::parse_int(head[1], at);
    if (num != static_cast<int>(p.lines.size()) + 1)
      detail::bad_line(at, "line numbers must be consecutive from 1");
    if (fields.size() < 3) detail::bad_line(at, "line wants formula and rule");
    HLine ln;
    ln.f = parse(fields[1]);
    auto rule = detail::split_ws(fields[2]);
    if (rule.empty()) detail::bad_line(at, "missing rule");
    if (rule[0] == "hyp" && rule.size() == 2) {
      ln.just.tag = HJust::Tag::Hyp;
      ln.just.i = detail::parse_int(rule[1], at) - 1;
    } else if (rule[0] == "mp" && rule.size() == 3) {
      ln.just.tag = HJust::Tag::MP;
      ln.just.i = detail::parse_int(rule[1], at) - 1;
      ln.just.j = detail::parse_int(rule[2], at) - 1;
    } else if (rule.size() == 1 && rule[0].size() == 2 && rule[0][0] == 'a' &&
               rule[0][1] >= '1' && rule[0][1] <= '9') {
      ln.just.tag = HJust::Tag::Axiom;
      ln.just.ax = static_cast<HAxiom>(rule[0][1] - '1');
      int ar = h_axiom_arity(ln.just.ax);
      if (static_cast<int>(fields.size()) != 3 + ar)
        detail::bad_line(at, "axiom wants " + std::to_string(ar) +
                                 " instantiation formulas");
      ln.just.a = parse(fields[3]);
      if (ar >= 2) ln.just.b = parse(fields[4]);
      if (ar >= 3) ln.just.c = parse(fields[5]);
    } else {
      detail::bad_line(at, "unknown rule '" + fields[2] + "'");
    }
    p.lines.push_back(ln);
  }
  throw ParseError("missing 'end'", 0);
}

// ---------------------------------------------------------------------------
// Proofs in L ("lproof" blocks).

inline std::string write_lproof(const LProof& p) {
  std::string out = "lproof\n";
  for (Formula f : p.premises) out += "premise ; " + print(f) + "\n";
  for (size_t k = 0; k < p.lines.size(); ++k) {
    const LLine& ln = p.lines[k];
    out += "line " + std::to_string(k + 1) + " ; " + print(ln.f) + " ; ";
    switch (ln.just.tag) {
      case LTag::AxI:
      case LTag::AxII:
      case LTag::AxIII:
      case LTag::AxIV:
      case LTag::ThmEM:
        out += l_tag_name(ln.just.tag);
        break;
      case LTag::Hyp:
        out += "hyp " + std::to_string(ln.just.i + 1);
        break;
      case LTag::MP:
        out += "mp " + std::to_string(ln.just.i + 1) + " " +
               std::to_string(ln.just.j + 1);
        break;
      case LTag::AN:
        out += "an " + std::to_string(ln.just.i + 1);
        break;
      case LTag::ThmSP:
        out += "sp " + var_name(ln.just.x) + " ; " + print(ln.just.a) +
               " ; " + print(ln.just.b) + " ; " + print(ln.just.c);
        break;
    }
    out += "\n";
  }
  out += "end\n";
  return out;
}

inline LProof read_lproof(const std::string& text) {
  detail::BlockReader r(text);
  r.expect("lproof");
  LProof p;
  while (!r.done()) {
    size_t at = r.pos;
    std::string raw = r.next();
    std::string t = detail::trim(raw);
    if (t.empty()) continue;
    if (t == "end") return p;
    auto fields = detail::split_fields(raw);
    auto head = detail::split_ws(fields[0]);
    if (head.empty()) detail::bad_line(at, "empty directive");
    if (head[0] == "premise") {
      if (fields.size() != 2) detail::bad_line(at, "premise wants 1 formula");
      if (!p.lines.empty()) detail::bad_line(at, "premise after first line");
      p.premises.push_back(parse(fields[1]));
      continue;
    }
    if (head[0] != "line" || head.size() != 2)
      detail::bad_line(at, "expected 'line N'");
    int num = detail::parse_int(head[1], at);
    if (num != static_cast<int>(p.lines.size()) + 1)
      detail::bad_line(at, "line numbers must be consecutive from 1");
    if (fields.size() < 3) detail::bad_line(at, "line wants formula and rule");
    LLine ln;
    ln.f = parse(fields[1]);
    auto rule = detail::split_ws(fields[2]);
    if (rule.empty()) detail::bad_line(at, "missing rule");
    const std::string& r0 = rule[0];
    if (r0 == "axI" || r0 == "axII" || r0 == "axIII" || r0 == "axIV" ||
        r0 == "em") {
      if (rule.size() != 1 || fields.size() != 3)
        detail::bad_line(at, "rule '" + r0 + "' takes no arguments");
      ln.just.tag = r0 == "axI"     ? LTag::AxI
                    : r0 == "axII"  ? LTag::AxII
                    : r0 == "axIII" ? LTag::AxIII
                    : r0 == "axIV"  ? LTag::AxIV
                                    : LTag::ThmEM;
    } else if (r0 == "hyp" && rule.size() == 2) {
      ln.just.tag = LTag::Hyp;
      ln.just.i = detail::parse_int(rule[1], at) - 1;
    } else if (r0 == "mp" && rule.size() == 3) {
      ln.just.tag = LTag::MP;
      ln.just.i = detail::parse_int(rule[1], at) - 1;
      ln.just.j = detail::parse_int(rule[2], at) - 1;
    } else if (r0 == "an" && rule.size() == 2) {
      ln.just.tag = LTag::AN;
      ln.just.i = detail::parse_int(rule[1], at) - 1;
    } else if (r0 == "sp" && rule.size() == 2) {
      if (fields.size() != 6)
        detail::bad_line(at, "sp wants 3 instantiation formulas");
      ln.just.tag = LTag::ThmSP;
      ln.just.x = detail::parse_var_name(rule[1], at);
      ln.just.a = parse(fields[3]);
      ln.just.b = parse(fields[4]);
      ln.just.c = parse(fields[5]);
    } else {
      detail::bad_line(at, "unknown rule '" + fields[2] + "'");
    }
    p.lines.push_back(ln);
  }
  throw ParseError("missing 'end'", 0);
}

// ---------------------------------------------------------------------------
// Algebras and models.

namespace detail {

inline void write_table(std::string& out, const char* name,
                        const std::vector<uint8_t>& t) {
  out += name;
  for (uint8_t v : t) out += " " + std::to_string(static_cast<int>(v));
  out += "\n";
}

inline std::vector<uint8_t> read_table(const std::string& line, size_t at,
                                       const char* name, int want) {
  auto toks = split_ws(line);
  if (toks.empty() || toks[0] != name)
    bad_line(at, std::string("expected '") + name + "' row");
  if (static_cast<int>(toks.size()) != want + 1)
    bad_line(at, std::string(name) + " row wants " + std::to_string(want) +
                     " entries");
  std::vector<uint8_t> t;
  for (int i = 1; i <= want; ++i)
    t.push_back(static_cast<uint8_t>(parse_int(toks[i], at)));
  return t;
}

inline void write_heyting_body(std::string& out, const Heyting& h) {
  out += "size " + std::to_string(h.n) + "\n";
  out += "bot " + std::to_string(h.bot) + "\n";
  out += "top " + std::to_string(h.top) + "\n";
  write_table(out, "meet", h.meet_t);
  write_table(out, "join", h.join_t);
  write_table(out, "imp", h.imp_t);
}

inline Heyting read_heyting_body(BlockReader& r) {
  Heyting h;
  size_t at = r.pos;
  auto toks = split_ws(r.next());
  if (toks.size() != 2 || toks[0] != "size") bad_line(at, "expected 'size N'");
  h.n = parse_int(toks[1], at);
  if (h.n < 1 || h.n > 32) bad_line(at, "size out of range [1,32]");
  at = r.pos;
  toks = split_ws(r.next());
  if (toks.size() != 2 || toks[0] != "bot") bad_line(at, "expected 'bot N'");
  h.bot = parse_int(toks[1], at);
  at = r.pos;
  toks = split_ws(r.next());
  if (toks.size() != 2 || toks[0] != "top") bad_line(at, "expected 'top N'");
  h.top = parse_int(toks[1], at);
  at = r.pos;
  h.meet_t = read_table(r.next(), at, "meet", h.n * h.n);
  at = r.pos;
  h.join_t = read_table(r.next(), at, "join", h.n * h.n);
  at = r.pos;
  h.imp_t = read_table(r.next(), at, "imp", h.n * h.n);
  return h;
}

}  // namespace detail

inline std::string write_heyting(const Heyting& h) {
  std::string out = "algebra\n";
  detail::write_heyting_body(out, h);
  out += "end\n";
  return out;
}

inline Heyting read_heyting(const std::string& text) {
  detail::BlockReader r(text);
  r.expect("algebra");
  Heyting h = detail::read_heyting_body(r);
  r.expect("end");
  if (auto why = validate_heyting(h))
    throw ParseError("invalid algebra: " + *why, 0);
  return h;
}

inline std::string write_lmodel(const LModel& m, const Assignment& g = {}) {
  std::string out = "lmodel\n";
  detail::write_heyting_body(out, m.H);
  detail::write_table(out, "box", m.box);
  out += "true";
  for (int i = 0; i < m.H.n; ++i)
    if ((m.true_mask >> i) & 1) out += " " + std::to_string(i);
  out += "\n";
  for (auto& [v, e] : g)
    out += "assign " + var_name(v) + " " + std::to_string(e) + "\n";
  out += "end\n";
  return out;
}

inline std::pair<LModel, Assignment> read_lmodel(const std::string& text) {
  detail::BlockReader r(text);
  r.expect("lmodel");
  LModel m;
  m.H = detail::read_heyting_body(r);
  size_t at = r.pos;
  m.box = detail::read_table(r.next(), at, "box", m.H.n);
  at = r.pos;
  auto toks = detail::split_ws(r.next());
  if (toks.empty() || toks[0] != "true")
    detail::bad_line(at, "expected 'true' row");
  for (size_t i = 1; i < toks.size(); ++i) {
    int e = detail::parse_int(toks[i], at);
    if (e < 0 || e >= m.H.n) detail::bad_line(at, "true element out of range");
    m.true_mask |= uint32_t{1} << e;
  }
  Assignment g;
  for (;;) {
    at = r.pos;
    std::string line = detail::trim(r.next());
    if (line == "end") break;
    toks = detail::split_ws(line);
    if (toks.size() != 3 || toks[0] != "assign")
      detail::bad_line(at, "expected 'assign VAR N' or 'end'");
    Var v = detail::parse_var_name(toks[1], at);
    g[v] = detail::parse_int(toks[2], at);
  }
  if (auto why = check_model_conditions(m))
    throw ParseError("invalid model: " + *why, 0);
  return {m, g};
}

// ---------------------------------------------------------------------------
// Kripke models.

inline std::string write_kripke(const KripkeModel& k) {
  std::string out = "kripke\n";
  out += "worlds " + std::to_string(k.size()) + "\n";
  out += "root " + std::to_string(k.root) + "\n";
  for (int w = 0; w < k.size(); ++w) {
    out += "up " + std::to_string(w) + " :";
    for (int v = 0; v < k.size(); ++v)
      if ((k.up[w] >> v) & 1) out += " " + std::to_string(v);
    out += "\n";
  }
  for (int w = 0; w < k.size(); ++w) {
    out += "val " + std::to_string(w) + " :";
    for (int x = 0; x < 64; ++x)
      if ((k.val[w] >> x) & 1) out += " " + var_name(x);
    out += "\n";
  }
  out += "end\n";
  return out;
}

inline KripkeModel read_kripke(const std::string& text) {
  detail::BlockReader r(text);
  r.expect("kripke");
  KripkeModel k;
  size_t at = r.pos;
  auto toks = detail::split_ws(r.next());
  if (toks.size() != 2 || toks[0] != "worlds")
    detail::bad_line(at, "expected 'worlds N'");
  int n = detail::parse_int(toks[1], at);
  if (n < 1 || n > 32) detail::bad_line(at, "world count out of range");
  k.up.assign(n, 0);
  k.val.assign(n, 0);
  at = r.pos;
  toks = detail::split_ws(r.next());
  if (toks.size() != 2 || toks[0] != "root")
    detail::bad_line(at, "expected 'root N'");
  k.root = detail::parse_int(toks[1], at);
  for (int w = 0; w < n; ++w) {
    at = r.pos;
    toks = detail::split_ws(r.next());
    if (toks.size() < 3 || toks[0] != "up" || toks[2] != ":" ||
        detail::parse_int(toks[1], at) != w)
      detail::bad_line(at, "expected 'up " + std::to_string(w) + " : ...'");
    for (size_t i = 3; i < toks.size(); ++i) {
      int v = detail::parse_int(toks[i], at);
      if (v < 0 || v >= n) detail::bad_line(at, "world out of range");
      k.up[w] |= uint32_t{1} << v;
    }
  }
  for (int w = 0; w < n; ++w) {
    at = r.pos;
    toks = detail::split_ws(r.next());
    if (toks.size() < 3 || toks[0] != "val" || toks[2] != ":" ||
        detail::parse_int(toks[1], at) != w)
      detail::bad_line(at, "expected 'val " + std::to_string(w) + " : ...'");
    for (size_t i = 3; i < toks.size(); ++i)
      k.val[w] |= uint64_t{1} << detail::parse_var_name(toks[i], at);
  }
  r.expect("end");
  if (auto why = validate_kripke(k))
    throw ParseError("invalid kripke model: " + *why, 0);
  return k;
}

// ---------------------------------------------------------------------------
// Misc.

// First word of the first line: "ipcproof", "lproof", "lmodel", ...
inline std::string sniff_kind(const std::string& text) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) return "";
  auto toks = detail::split_ws(lines[0]);
  return toks.empty() ? "" : toks[0];
}

inline void save_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LmError("cannot open for writing: " + path);
  out << content;
  if (!out) throw LmError("write failed: " + path);
}

inline std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LmError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lmodal
