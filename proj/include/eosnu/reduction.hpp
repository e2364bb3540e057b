#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eosnu/eos.hpp"
#include "eosnu/nupn.hpp"
#include "eosnu/petri.hpp"

namespace eosnu {

inline const std::string kSim = "sim";
inline const std::string kSelectTran = "selectTran";
inline const std::string kSimulatorNet = "ND";

namespace role {
inline const std::string kShared = "shared_place";
inline const std::string kObjectNet = "object_net";
inline const std::string kObjectTransition = "object_transition";
inline const std::string kSelectPlace = "select_place";
inline const std::string kSelected = "selected";
inline const std::string kRun = "run";
inline const std::string kReport = "report";
inline const std::string kSelect = "select";
inline const std::string kFire = "fire";
inline const std::string kDone = "done";
}  // namespace role

// Generated ids follow `<t>::<role>::<x>` (or `<t>::<role>`).
inline std::string gadget_id(const std::string& t, const std::string& what,
                             const std::string& var = {}) {
  return var.empty() ? t + "::" + what : t + "::" + what + "::" + var;
}

struct NameEntry {
  std::string id;
  std::string role;
  std::string source_transition;  // empty for shared elements
  std::string source_variable;    // empty when not variable-specific

  friend bool operator==(const NameEntry&, const NameEntry&) = default;
};

/// Bidirectional map between generated ids and the νPN elements they
/// simulate.
class NameTable {
 public:
  void add(NameEntry e) {
    auto key = std::make_tuple(e.role, e.source_transition, e.source_variable);
    if (!by_id_.emplace(e.id, e).second)
      throw InputError("duplicate generated id '" + e.id + "'");
    by_source_.emplace(std::move(key), e.id);
  }

  const NameEntry* find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second;
  }

  std::optional<std::string> id_of(const std::string& role,
                                   const std::string& t = {},
                                   const std::string& x = {}) const {
    auto it = by_source_.find(std::make_tuple(role, t, x));
    if (it == by_source_.end()) return std::nullopt;
    return it->second;
  }

  // Sorted by generated id.
  const std::map<std::string, NameEntry>& entries() const { return by_id_; }

 private:
  std::map<std::string, NameEntry> by_id_;
  std::map<std::tuple<std::string, std::string, std::string>, std::string>
      by_source_;
};

/// N_D: the places of D and one transition t_x per (t, x ∈ Var(t)) whose
/// flow is the restriction F_x.
namespace detail {

inline PetriNet object_net_unchecked(const NuPn& d) {
  PetriNet net;
  for (const auto& p : d.places) net.add_place(p);
  for (const auto& [t, tr] : d.transitions) {
    for (const auto& x : d.vars_of(t)) {
      Marking pre, post;
      for (const auto& [p, bag] : tr.in) pre.insert(p, bag.count(x));
      for (const auto& [p, bag] : tr.out) post.insert(p, bag.count(x));
      net.add_transition(gadget_id(t, "step", x), std::move(pre),
                         std::move(post));
    }
  }
  return net;
}

}  // namespace detail

inline PetriNet object_net(const NuPn& d) {
  require_valid(d);
  return detail::object_net_unchecked(d);
}

/// The system-net fragment simulating one νPN transition.
struct Gadget {
  std::vector<std::pair<std::string, std::string>> places;  // (id, type)
  std::vector<std::pair<std::string, TransitionFlow>> transitions;
  std::vector<Event> events;
  std::vector<NameEntry> names;
  Count report_weight = 0;
  // Number of events in a minimal run through this gadget.
  std::size_t run_length = 0;
};

/// Builds the selection chain, run/report bookkeeping and synchronised fire
/// events for t.
///
/// With Var(t) = {x_1..x_n, ν}: selectTran → t_select_{x_1} → select^t_{x_2}
/// → ... → t_select_{x_n} → select^t_ν → t_select_ν, each t_select_{x_i}
/// also moving one object sim → t_selected_{x_i}. t_select_ν marks every run
/// place; t_fire_x moves the object back to sim while firing t_x inside it;
/// t_done collects n+1 report tokens and restores selectTran. Without ν the
/// last t_select_{x_n} marks the run places and t_done needs n reports. When
/// Var(t) = ∅ the gadget is a single t_done with pre = post = selectTran.
namespace detail {

inline Gadget build_gadget_unchecked(const NuPn& d, const std::string& t) {
  const auto xs = d.standard_vars_of(t);
  const auto fresh = d.fresh_vars_of(t);
  const bool has_nu = !fresh.empty();
  const std::string nu = has_nu ? fresh.front() : std::string{};
  const std::size_t n = xs.size();

  Gadget g;
  auto add_place = [&](const std::string& what, const std::string& x,
                       const std::string& type, const std::string& role) {
    std::string id = gadget_id(t, what, x);
    g.places.emplace_back(id, type);
    g.names.push_back({id, role, t, x});
    return id;
  };
  auto add_transition = [&](const std::string& what, const std::string& x,
                            Marking pre, Marking post, const std::string& role,
                            std::map<std::string, Multiset<std::string>> theta =
                                {}) {
    std::string id = gadget_id(t, what, x);
    g.transitions.emplace_back(id, TransitionFlow{std::move(pre), std::move(post)});
    g.events.push_back(Event{id, id, std::move(theta)});
    g.names.push_back({id, role, t, x});
  };

  if (n == 0 && !has_nu) {
    add_transition("done", "", Marking{kSelectTran}, Marking{kSelectTran},
                   role::kDone);
    g.run_length = 1;
    return g;
  }

  std::vector<std::string> selected, run;
  for (const auto& x : xs) {
    selected.push_back(add_place("selected", x, kSimulatorNet, role::kSelected));
    run.push_back(add_place("run", x, kBlackNet, role::kRun));
  }
  if (has_nu) run.push_back(add_place("run", nu, kBlackNet, role::kRun));
  const std::string report = add_place("report", "", kBlackNet, role::kReport);

  Marking all_runs = Marking::from_elements(run);
  std::string chain = kSelectTran;
  for (std::size_t i = 0; i < n; ++i) {
    Marking post{selected[i]};
    std::string next;
    if (i + 1 < n) {
      next = add_place("ready", xs[i + 1], kBlackNet, role::kSelectPlace);
      post.insert(next);
    } else if (has_nu) {
      next = add_place("ready", nu, kBlackNet, role::kSelectPlace);
      post.insert(next);
    } else {
      post += all_runs;
    }
    add_transition("select", xs[i], Marking{chain, kSim}, std::move(post),
                   role::kSelect);
    chain = next;
  }
  if (has_nu)
    add_transition("select", nu, Marking{chain}, all_runs, role::kSelect);

  for (std::size_t i = 0; i < n; ++i)
    add_transition("fire", xs[i], Marking{selected[i], run[i]},
                   Marking{kSim, report}, role::kFire,
                   {{kSimulatorNet, Multiset<std::string>{gadget_id(t, "step", xs[i])}}});
  if (has_nu)
    add_transition("fire", nu, Marking{run.back()}, Marking{kSim, report},
                   role::kFire,
                   {{kSimulatorNet, Multiset<std::string>{gadget_id(t, "step", nu)}}});

  g.report_weight = n + (has_nu ? 1 : 0);
  Marking reports;
  reports.insert(report, g.report_weight);
  add_transition("done", "", std::move(reports), Marking{kSelectTran},
                 role::kDone);
  g.run_length = has_nu ? 2 * n + 3 : 2 * n + 1;
  return g;
}

}  // namespace detail

inline Gadget build_gadget(const NuPn& d, const std::string& t) {
  require_valid(d);
  d.transition(t);
  return detail::build_gadget_unchecked(d, t);
}

// Length of every minimal run simulating t: 2n+3 with ν, 2n+1 without.
inline std::size_t gadget_length(const NuPn& d, const std::string& t) {
  std::size_t n = d.standard_vars_of(t).size();
  return d.fresh_vars_of(t).empty() ? 2 * n + 1 : 2 * n + 3;
}

inline std::size_t max_gadget_length(const NuPn& d) {
  std::size_t best = 0;
  for (const auto& [t, tr] : d.transitions)
    best = std::max(best, gadget_length(d, t));
  return best;
}

struct ReductionOutput {
  Eos eos;
  NameTable names;
};

/// Compiles a valid νPN into a conservative EOS over the object nets ■ and
/// N_D. The system net holds the shared places sim (N_D) and selectTran (■)
/// plus one gadget per transition.
inline ReductionOutput reduce(const NuPn& d) {
  require_valid(d);
  EosParts parts;
  NameTable names;
  parts.object_nets.emplace(kSimulatorNet, detail::object_net_unchecked(d));
  names.add({kSimulatorNet, role::kObjectNet, "", ""});
  for (const auto& [t, tr] : d.transitions)
    for (const auto& x : d.vars_of(t))
      names.add({gadget_id(t, "step", x), role::kObjectTransition, t, x});

  parts.system.add_place(kSim);
  parts.typing[kSim] = kSimulatorNet;
  names.add({kSim, role::kShared, "", ""});
  parts.system.add_place(kSelectTran);
  parts.typing[kSelectTran] = kBlackNet;
  names.add({kSelectTran, role::kShared, "", ""});

  std::vector<Gadget> gadgets;
  for (const auto& [t, tr] : d.transitions) gadgets.push_back(detail::build_gadget_unchecked(d, t));
  for (const auto& g : gadgets)
    for (const auto& [p, type] : g.places) {
      if (parts.system.has_place(p))
        throw InputError("generated place '" + p + "' collides");
      parts.system.add_place(p);
      parts.typing[p] = type;
    }
  for (auto& g : gadgets) {
    for (auto& [id, flow] : g.transitions)
      parts.system.add_transition(id, std::move(flow.pre), std::move(flow.post));
    for (auto& e : g.events) parts.events.push_back(std::move(e));
    for (auto& entry : g.names) names.add(std::move(entry));
  }
  return ReductionOutput{Eos(std::move(parts)), std::move(names)};
}

inline Marking vec_to_marking(const NuPn& d, const Vec& v) {
  if (v.size() != d.arity())
    throw InputError("tuple has " + std::to_string(v.size()) +
                     " entries, the net has " + std::to_string(d.arity()) +
                     " places");
  Marking m;
  for (std::size_t i = 0; i < v.size(); ++i) m.insert(d.places[i], v[i]);
  return m;
}

inline Vec marking_to_vec(const NuPn& d, const Marking& m) {
  Vec v(d.arity(), 0);
  for (const auto& [p, c] : m) v[d.place_index(p)] = c;
  return v;
}

// M̄ = Σ_i ⟨sim, m_i⟩ + ⟨selectTran, ε⟩
inline NestedMarking encode_config(const NuPn& d, const Config& m) {
  NestedMarking out;
  for (const auto& [v, c] : m) out.insert({kSim, vec_to_marking(d, v)}, c);
  out.insert({kSelectTran, {}});
  return out;
}

// Inverse of encode_config; nullopt unless mu is exactly an encoding.
inline std::optional<Config> decode_config(const NuPn& d,
                                           const NestedMarking& mu) {
  Config out;
  Count select_tokens = 0;
  for (const auto& [tok, c] : mu) {
    if (tok.place == kSim) {
      for (const auto& [p, k] : tok.inner)
        if (std::find(d.places.begin(), d.places.end(), p) == d.places.end())
          return std::nullopt;
      out.insert(marking_to_vec(d, tok.inner), c);
    } else if (tok.place == kSelectTran && tok.inner.empty()) {
      select_tokens += c;
    } else {
      return std::nullopt;
    }
  }
  if (select_tokens != 1) return std::nullopt;
  return out;
}

}  // namespace eosnu
