#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eosnu/errors.hpp"
#include "eosnu/matching.hpp"
#include "eosnu/multiset.hpp"

namespace eosnu {

// A name's token counts, one entry per place in declaration order.
using Vec = std::vector<Count>;
// Configuration: a multiset of per-name vectors.
using Config = Multiset<Vec>;
using VarBag = Multiset<std::string>;

struct NuTransition {
  std::map<std::string, VarBag> in;   // F(p, t), keyed by p
  std::map<std::string, VarBag> out;  // F(t, p), keyed by p

  friend bool operator==(const NuTransition&, const NuTransition&) = default;
};

/// ν-Petri net: places p_1..p_ℓ, transitions, and variable-labelled flows.
/// Variables are split into standard (𝒳) and fresh (Υ) kinds.
struct NuPn {
  std::vector<std::string> places;
  std::set<std::string> standard_vars;
  std::set<std::string> fresh_vars;
  std::map<std::string, NuTransition> transitions;

  std::size_t arity() const { return places.size(); }

  std::size_t place_index(const std::string& p) const {
    auto it = std::find(places.begin(), places.end(), p);
    if (it == places.end()) throw InputError("unknown place '" + p + "'");
    return static_cast<std::size_t>(it - places.begin());
  }

  const NuTransition& transition(const std::string& t) const {
    auto it = transitions.find(t);
    if (it == transitions.end())
      throw InputError("unknown transition '" + t + "'");
    return it->second;
  }

  bool is_fresh(const std::string& v) const { return fresh_vars.count(v) > 0; }

  // Var(t) = pre(t) ∪ post(t)
  std::set<std::string> vars_of(const std::string& t) const {
    std::set<std::string> out;
    const auto& tr = transition(t);
    for (const auto* side : {&tr.in, &tr.out})
      for (const auto& [p, bag] : *side)
        for (const auto& [v, c] : bag) out.insert(v);
    return out;
  }

  // 𝒳(t) = Var(t) ∩ 𝒳, sorted.
  std::vector<std::string> standard_vars_of(const std::string& t) const {
    std::vector<std::string> out;
    for (const auto& v : vars_of(t))
      if (!is_fresh(v)) out.push_back(v);
    return out;
  }

  // Υ(t) = Var(t) ∩ Υ, sorted.
  std::vector<std::string> fresh_vars_of(const std::string& t) const {
    std::vector<std::string> out;
    for (const auto& v : vars_of(t))
      if (is_fresh(v)) out.push_back(v);
    return out;
  }

  // F_x(P, t)
  Vec flow_in(const std::string& t, const std::string& x) const {
    Vec v(arity(), 0);
    for (const auto& [p, bag] : transition(t).in) v[place_index(p)] = bag.count(x);
    return v;
  }

  // F_x(t, P)
  Vec flow_out(const std::string& t, const std::string& x) const {
    Vec v(arity(), 0);
    for (const auto& [p, bag] : transition(t).out)
      v[place_index(p)] = bag.count(x);
    return v;
  }

  // The fresh variable used on output arcs, if any (unique when normal).
  std::optional<std::string> designated_fresh() const {
    for (const auto& [t, tr] : transitions)
      for (const auto& [p, bag] : tr.out)
        for (const auto& [v, c] : bag)
          if (is_fresh(v)) return v;
    return std::nullopt;
  }

  friend bool operator==(const NuPn&, const NuPn&) = default;
};

struct Violation {
  std::string transition;  // empty for net-level violations
  std::string place;
  std::string clause;
  std::string message;

  std::string describe() const {
    std::string where;
    if (!transition.empty()) where += "transition '" + transition + "'";
    if (!place.empty())
      where += (where.empty() ? "" : ", ") + std::string("place '") + place + "'";
    return (where.empty() ? "" : where + ": ") + message + " [" + clause + "]";
  }
};

namespace clause {
inline const std::string kNonEmptyPlaces = "P is a finite non-empty set";
inline const std::string kDisjoint = "T disjoint from P";
inline const std::string kDeclared = "variables declared";
inline const std::string kKinds = "𝒳 ∩ Υ = ∅";
inline const std::string kUnknownPlace = "flow over P";
inline const std::string kFreshInPre = "Υ∩pre(t)=∅";
inline const std::string kPostInPre = "post(t)∖Υ⊆pre(t)";
inline const std::string kNormal = "normality: F(t,p)⊑𝒳^⊕ or F(t,p)={{ν}}";
}  // namespace clause

/// Checks the flow constraints of a νPN and normality. Returns every
/// violation found; an empty list means the net is valid.
inline std::vector<Violation> validate(const NuPn& net) {
  std::vector<Violation> out;
  auto report = [&out](std::string t, std::string p, const std::string& cl,
                       std::string msg) {
    out.push_back({std::move(t), std::move(p), cl, std::move(msg)});
  };

  if (net.places.empty())
    report("", "", clause::kNonEmptyPlaces, "the net has no places");
  std::set<std::string> seen;
  for (const auto& p : net.places)
    if (!seen.insert(p).second)
      report("", p, clause::kNonEmptyPlaces, "place declared twice");
  for (const auto& [t, tr] : net.transitions)
    if (seen.count(t))
      report(t, t, clause::kDisjoint, "id used as place and transition");
  for (const auto& v : net.standard_vars)
    if (net.fresh_vars.count(v))
      report("", "", clause::kKinds,
             "variable '" + v + "' is both standard and fresh");

  std::set<std::string> fresh_on_outputs;
  for (const auto& [t, tr] : net.transitions) {
    std::set<std::string> pre_vars;
    for (const auto& [p, bag] : tr.in) {
      if (!seen.count(p))
        report(t, p, clause::kUnknownPlace, "arc from undeclared place");
      for (const auto& [v, c] : bag) {
        pre_vars.insert(v);
        if (!net.standard_vars.count(v) && !net.fresh_vars.count(v))
          report(t, p, clause::kDeclared, "undeclared variable '" + v + "'");
        if (net.is_fresh(v))
          report(t, p, clause::kFreshInPre,
                 "fresh variable '" + v + "' on an input arc");
      }
    }
    for (const auto& [p, bag] : tr.out) {
      if (!seen.count(p))
        report(t, p, clause::kUnknownPlace, "arc to undeclared place");
      bool has_fresh = false;
      for (const auto& [v, c] : bag) {
        if (!net.standard_vars.count(v) && !net.fresh_vars.count(v))
          report(t, p, clause::kDeclared, "undeclared variable '" + v + "'");
        if (net.is_fresh(v)) {
          has_fresh = true;
          fresh_on_outputs.insert(v);
        } else if (!pre_vars.count(v)) {
          report(t, p, clause::kPostInPre,
                 "standard variable '" + v + "' is produced but not consumed");
        }
      }
      if (has_fresh && (bag.size() != 1))
        report(t, p, clause::kNormal,
               "F(t,p) = " + render(bag) + " mixes ν with other variables");
    }
  }
  if (fresh_on_outputs.size() > 1) {
    std::string names;
    for (const auto& v : fresh_on_outputs) names += (names.empty() ? "" : ", ") + v;
    report("", "", clause::kNormal,
           "more than one fresh variable on output arcs (" + names + ")");
  }
  return out;
}

inline void require_valid(const NuPn& net) {
  auto violations = validate(net);
  if (violations.empty()) return;
  std::string msg = "invalid νPN:";
  for (const auto& v : violations) msg += "\n  " + v.describe();
  throw InputError(msg);
}

// v ≤ w componentwise
inline bool dominated(const Vec& v, const Vec& w) {
  if (v.size() != w.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > w[i]) return false;
  return true;
}

// in(t) = Σ_{x∈𝒳(t)} {{F_x(P,t)}}. Not used by firing; kept for inspection.
inline Config in_vectors(const NuPn& net, const std::string& t) {
  Config out;
  for (const auto& x : net.standard_vars_of(t)) out.insert(net.flow_in(t, x));
  return out;
}

// out_Υ(t) = Σ_{ν∈Υ(t)} {{F_ν(t,P)}}
inline Config out_fresh(const NuPn& net, const std::string& t) {
  Config out;
  for (const auto& v : net.fresh_vars_of(t)) out.insert(net.flow_out(t, v));
  return out;
}

// The tuples of M in canonical order, repeated by multiplicity. Mode indices
// point into this list.
inline std::vector<Vec> occurrences(const Config& m) { return m.expand(); }

/// Mode e: each standard variable of t mapped to a distinct occurrence index.
struct NuMode {
  std::vector<std::pair<std::string, std::size_t>> assignment;  // sorted by var

  friend bool operator==(const NuMode&, const NuMode&) = default;
  friend bool operator<(const NuMode& a, const NuMode& b) {
    return a.assignment < b.assignment;
  }
};

/// Every injective occurrence assignment e with F_x(P,t) ≤ m_e(x), in
/// lexicographic order of the index tuple. No deduplication.
inline std::vector<NuMode> nu_enabled_modes_raw(const NuPn& net,
                                                const Config& m,
                                                const std::string& t) {
  auto vars = net.standard_vars_of(t);
  auto occ = occurrences(m);
  std::vector<Vec> need;
  for (const auto& x : vars) need.push_back(net.flow_in(t, x));

  std::vector<NuMode> out;
  std::vector<std::size_t> pick(vars.size());
  std::vector<char> used(occ.size(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == vars.size()) {
      NuMode mode;
      for (std::size_t k = 0; k < vars.size(); ++k)
        mode.assignment.emplace_back(vars[k], pick[k]);
      out.push_back(std::move(mode));
      return;
    }
    for (std::size_t j = 0; j < occ.size(); ++j) {
      if (used[j] || !dominated(need[i], occ[j])) continue;
      used[j] = 1;
      pick[i] = j;
      self(self, i + 1);
      used[j] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

/// Enabled modes deduplicated by effect: two modes that bind every variable
/// to equal vectors produce the same successor, so only the first is kept.
inline std::vector<NuMode> nu_enabled_modes(const NuPn& net, const Config& m,
                                            const std::string& t) {
  auto occ = occurrences(m);
  std::set<std::vector<Vec>> effects;
  std::vector<NuMode> out;
  for (auto& mode : nu_enabled_modes_raw(net, m, t)) {
    std::vector<Vec> key;
    for (const auto& [x, idx] : mode.assignment) key.push_back(occ[idx]);
    if (effects.insert(std::move(key)).second) out.push_back(std::move(mode));
  }
  return out;
}

/// M' = M'' + out_Υ(t) + Σ_x {{m_e(x) - F_x(P,t) + F_x(t,P)}}.
inline Config nu_fire(const NuPn& net, const Config& m, const std::string& t,
                      const NuMode& e) {
  auto vars = net.standard_vars_of(t);
  auto occ = occurrences(m);
  if (e.assignment.size() != vars.size())
    throw PreconditionError("mode does not bind exactly the standard "
                            "variables of '" + t + "'");
  Config consumed, produced;
  std::set<std::size_t> used;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& [x, idx] = e.assignment[k];
    if (x != vars[k])
      throw PreconditionError("mode binds unexpected variable '" + x + "'");
    if (idx >= occ.size() || !used.insert(idx).second)
      throw PreconditionError("mode index out of range or reused");
    Vec need = net.flow_in(t, x);
    const Vec& cur = occ[idx];
    if (!dominated(need, cur))
      throw PreconditionError("mode is not enabled: F_" + x +
                              "(P,t) exceeds the selected tuple");
    Vec next = cur;
    Vec gain = net.flow_out(t, x);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = checked_add(next[i] - need[i], gain[i]);
    consumed.insert(cur);
    produced.insert(std::move(next));
  }
  return exact_sub(m, consumed) + out_fresh(net, t) + produced;
}

// |D| = max(|P|, |T|, Σ_{p,t} |F(p,t)| + |F(t,p)|)
inline std::size_t nu_size(const NuPn& net) {
  Count arcs = 0;
  for (const auto& [t, tr] : net.transitions)
    for (const auto* side : {&tr.in, &tr.out})
      for (const auto& [p, bag] : *side) arcs = checked_add(arcs, bag.size());
  return std::max<std::size_t>(
      {net.places.size(), net.transitions.size(), static_cast<std::size_t>(arcs)});
}

enum class CoverOrder {
  Embedding,       // injective tuple embedding with componentwise ≤
  ExactInclusion,  // plain multiset inclusion τ ⊑ τ'
};

inline bool nu_covers(const Config& m, const Config& target,
                      CoverOrder order = CoverOrder::Embedding) {
  std::optional<std::size_t> arity;
  for (const auto* c : {&m, &target})
    for (const auto& [v, k] : *c) {
      if (arity && *arity != v.size())
        throw InputError("configurations have different place arity");
      arity = v.size();
    }
  if (order == CoverOrder::ExactInclusion) return leq(target, m);
  auto have = occurrences(m);
  auto want = occurrences(target);
  return saturates_left(want.size(), have.size(),
                        [&](std::size_t i, std::size_t j) {
                          return dominated(want[i], have[j]);
                        });
}

}  // namespace eosnu
