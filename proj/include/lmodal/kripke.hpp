#pragma once
// Finite rooted intuitionistic Kripke models.  Worlds are indices 0..n-1;
// the order is kept as per-world successor bitmasks (reflexive-transitive,
// root below everything); valuations are monotone atom masks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmodal/formula.hpp"

namespace lmodal {

struct KripkeModel {
  int root = 0;
  // up[w] = bitmask of worlds v with w <= v (always includes w itself).
  std::vector<uint32_t> up;
  // val[w] = bitmask of atoms true at w.
  std::vector<uint64_t> val;

  int size() const { return static_cast<int>(up.size()); }
};

// Empty result means the model is well-formed; otherwise the reason.
inline std::optional<std::string> validate_kripke(const KripkeModel& k) {
  int n = k.size();
  if (n <= 0 || n > 32) return "world count out of range [1,32]";
  if (static_cast<int>(k.val.size()) != n) return "valuation size mismatch";
  if (k.root < 0 || k.root >= n) return "root out of range";
  uint32_t all = n == 32 ? ~uint32_t{0} : ((uint32_t{1} << n) - 1);
  for (int w = 0; w < n; ++w) {
    if (k.up[w] & ~all) return "order references missing world";
    if (!(k.up[w] & (uint32_t{1} << w)))
      return "order not reflexive at world " + std::to_string(w);
  }
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (k.up[w] & (uint32_t{1} << v)) {
        if ((k.up[v] & ~k.up[w]))
          return "order not transitive at " + std::to_string(w) + "," +
                 std::to_string(v);
        if (v != w && (k.up[v] & (uint32_t{1} << w)))
          return "order not antisymmetric at " + std::to_string(w) + "," +
                 std::to_string(v);
        if (k.val[w] & ~k.val[v])
          return "valuation not monotone from " + std::to_string(w) + " to " +
                 std::to_string(v);
      }
  if (k.up[k.root] != all) return "root is not a least element";
  return std::nullopt;
}

// Standard intuitionistic forcing; the formula must be box-free.
inline bool kripke_eval(const KripkeModel& k, int w, Formula f) {
  if (w < 0 || w >= k.size()) throw DomainError("kripke_eval: bad world");
  if (!f.is_propositional())
    throw DomainError("kripke_eval: formula contains box");
  switch (f.kind()) {
    case Kind::Bot:
      return false;
    case Kind::Atom:
      return f.var() < 64 && (k.val[w] >> f.var()) & 1;
    case Kind::And:
      return kripke_eval(k, w, f.lhs()) && kripke_eval(k, w, f.rhs());
    case Kind::Or:
      return kripke_eval(k, w, f.lhs()) || kripke_eval(k, w, f.rhs());
    case Kind::Imp: {
      for (int v = 0; v < k.size(); ++v)
        if ((k.up[w] >> v) & 1)
          if (kripke_eval(k, v, f.lhs()) && !kripke_eval(k, v, f.rhs()))
            return false;
      return true;
    }
    case Kind::Box:
      throw DomainError("kripke_eval: formula contains box");
  }
  throw LmError("unreachable");
}

}  // namespace lmodal
