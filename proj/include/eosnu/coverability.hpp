#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "eosnu/eos.hpp"
#include "eosnu/errors.hpp"
#include "eosnu/nupn.hpp"
#include "eosnu/reduction.hpp"

namespace eosnu {

struct ExploreOptions {
  std::size_t max_states = 1'000'000;
  // Worker threads for frontier expansion. Results are identical for any value.
  unsigned threads = 1;
};

struct NuStep {
  std::string transition;
  NuMode mode;

  friend bool operator==(const NuStep&, const NuStep&) = default;
  friend bool operator<(const NuStep& a, const NuStep& b) {
    return std::tie(a.transition, a.mode) < std::tie(b.transition, b.mode);
  }
};

struct EosStep {
  std::string event;
  EventMode mode;

  friend bool operator==(const EosStep&, const EosStep&) = default;
  friend bool operator<(const EosStep& a, const EosStep& b) {
    return std::tie(a.event, a.mode) < std::tie(b.event, b.mode);
  }
};

template <typename Step>
struct Edge {
  std::size_t from;
  Step step;
  std::size_t to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

template <typename State, typename Step>
struct ExploreResult {
  // Breadth-first order; within one depth layer, canonical order.
  std::vector<State> states;
  std::vector<std::size_t> depth;
  std::vector<Edge<Step>> edges;
  // True when the reachable set was closed before the depth bound.
  bool frontier_exhausted = false;
  std::size_t depth_reached = 0;

  bool contains(const State& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
  }

  friend bool operator==(const ExploreResult&, const ExploreResult&) = default;
};

template <typename State, typename Step>
struct CoverAnswer {
  bool covered = false;
  std::vector<Step> witness;
  // States along the witness, starting with the initial one.
  std::vector<State> trace;
  std::size_t depth = 0;
  std::size_t states_explored = 0;
};

namespace detail {

template <typename Fn>
void for_each_index(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  for (auto& th : pool) th.join();
}

template <typename State, typename Step>
struct Search {
  std::map<State, std::size_t> index;
  std::vector<const State*> states;
  std::vector<std::size_t> depth;
  std::vector<std::optional<std::pair<std::size_t, Step>>> parent;
  std::vector<Edge<Step>> edges;
  bool exhausted = false;
  std::size_t depth_reached = 0;
  std::optional<std::size_t> hit;
};

// Layered breadth-first search with canonical dedup. Each new layer is
// numbered in canonical state order; a state's parent is the first edge that
// reached it while scanning the previous layer in order. Stops at the first
// goal state of the shallowest layer that has one.
template <typename State, typename Step, typename Successors, typename Goal>
Search<State, Step> bfs(const State& init, std::size_t max_depth,
                        const ExploreOptions& opt, bool record_edges,
                        Successors&& successors, Goal&& goal) {
  Search<State, Step> s;
  auto add = [&](State st, std::size_t d,
                 std::optional<std::pair<std::size_t, Step>> par) {
    if (s.index.size() >= opt.max_states)
      throw ResourceCapExceeded("max-states", opt.max_states);
    auto [it, ok] = s.index.emplace(std::move(st), s.states.size());
    s.states.push_back(&it->first);
    s.depth.push_back(d);
    s.parent.push_back(std::move(par));
    return it->second;
  };
  add(init, 0, std::nullopt);
  if (goal(init)) {
    s.hit = 0;
    return s;
  }

  std::vector<std::size_t> frontier{0};
  std::size_t d = 0;
  while (!frontier.empty() && d < max_depth) {
    std::vector<std::vector<std::pair<Step, State>>> expanded(frontier.size());
    for_each_index(frontier.size(), opt.threads, [&](std::size_t i) {
      expanded[i] = successors(*s.states[frontier[i]]);
    });

    std::map<State, std::pair<std::size_t, const Step*>> fresh;
    for (std::size_t i = 0; i < frontier.size(); ++i)
      for (const auto& [step, next] : expanded[i])
        if (!s.index.count(next)) fresh.try_emplace(next, frontier[i], &step);

    std::vector<std::size_t> next_frontier;
    for (auto& [st, par] : fresh)
      next_frontier.push_back(
          add(st, d + 1, std::make_pair(par.first, *par.second)));

    if (record_edges)
      for (std::size_t i = 0; i < frontier.size(); ++i)
        for (auto& [step, next] : expanded[i])
          s.edges.push_back({frontier[i], std::move(step), s.index.at(next)});

    ++d;
    if (!next_frontier.empty()) s.depth_reached = d;
    frontier = std::move(next_frontier);
    for (std::size_t idx : frontier)
      if (goal(*s.states[idx])) {
        s.hit = idx;
        return s;
      }
  }
  s.exhausted = frontier.empty();
  return s;
}

template <typename State, typename Step>
ExploreResult<State, Step> to_result(Search<State, Step>&& s) {
  ExploreResult<State, Step> r;
  r.states.reserve(s.states.size());
  for (const State* st : s.states) r.states.push_back(*st);
  r.depth = std::move(s.depth);
  r.edges = std::move(s.edges);
  r.frontier_exhausted = s.exhausted;
  r.depth_reached = s.depth_reached;
  return r;
}

template <typename State, typename Step>
CoverAnswer<State, Step> to_answer(const Search<State, Step>& s,
                                   std::size_t depth) {
  CoverAnswer<State, Step> a;
  a.depth = depth;
  a.states_explored = s.states.size();
  if (!s.hit) return a;
  a.covered = true;
  std::size_t cur = *s.hit;
  a.trace.push_back(*s.states[cur]);
  while (s.parent[cur]) {
    a.witness.push_back(s.parent[cur]->second);
    cur = s.parent[cur]->first;
    a.trace.push_back(*s.states[cur]);
  }
  std::reverse(a.witness.begin(), a.witness.end());
  std::reverse(a.trace.begin(), a.trace.end());
  return a;
}

inline void require_arity(const NuPn& d, const Config& m, const char* what) {
  for (const auto& [v, c] : m)
    if (v.size() != d.arity())
      throw InputError(std::string(what) + " has a tuple of length " +
                       std::to_string(v.size()) + ", expected " +
                       std::to_string(d.arity()));
}

inline bool marks_select_tran(const NestedMarking& mu) {
  for (const auto& [tok, c] : mu)
    if (tok.place == kSelectTran) return true;
  return false;
}

}  // namespace detail

/// All (t, e, M') with M →^{t,e} M', transitions in order, modes deduplicated.
inline std::vector<std::pair<NuStep, Config>> nu_successors(const NuPn& d,
                                                            const Config& m) {
  std::vector<std::pair<NuStep, Config>> out;
  for (const auto& [t, tr] : d.transitions)
    for (auto& mode : nu_enabled_modes(d, m, t)) {
      Config next = nu_fire(d, m, t, mode);
      out.emplace_back(NuStep{t, std::move(mode)}, std::move(next));
    }
  return out;
}

inline std::vector<std::pair<EosStep, NestedMarking>> eos_successors(
    const Eos& eos, const NestedMarking& mu) {
  std::vector<std::pair<EosStep, NestedMarking>> out;
  for (const auto& e : eos.events())
    for (auto& mode : enabled_modes(eos, mu, e)) {
      NestedMarking next = fire_event(mu, mode);
      out.emplace_back(EosStep{e.label, std::move(mode)}, std::move(next));
    }
  return out;
}

inline ExploreResult<Config, NuStep> explore_nupn(
    const NuPn& d, const Config& iota, std::size_t depth,
    const ExploreOptions& opt = {}) {
  require_valid(d);
  detail::require_arity(d, iota, "initial configuration");
  auto s = detail::bfs<Config, NuStep>(
      iota, depth, opt, true,
      [&](const Config& m) { return nu_successors(d, m); },
      [](const Config&) { return false; });
  return detail::to_result(std::move(s));
}

inline ExploreResult<NestedMarking, EosStep> explore_eos(
    const Eos& eos, const NestedMarking& mu0, std::size_t depth,
    const ExploreOptions& opt = {}) {
  eos.validate_marking(mu0);
  auto s = detail::bfs<NestedMarking, EosStep>(
      mu0, depth, opt, true,
      [&](const NestedMarking& mu) { return eos_successors(eos, mu); },
      [](const NestedMarking&) { return false; });
  return detail::to_result(std::move(s));
}

/// Shortest run from iota within `depth` firings reaching a configuration
/// that covers target.
inline CoverAnswer<Config, NuStep> cover_nupn(
    const NuPn& d, const Config& iota, const Config& target, std::size_t depth,
    const ExploreOptions& opt = {}, CoverOrder order = CoverOrder::Embedding) {
  require_valid(d);
  detail::require_arity(d, iota, "initial configuration");
  detail::require_arity(d, target, "target configuration");
  auto s = detail::bfs<Config, NuStep>(
      iota, depth, opt, false,
      [&](const Config& m) { return nu_successors(d, m); },
      [&](const Config& m) { return nu_covers(m, target, order); });
  return detail::to_answer(s, depth);
}

inline CoverAnswer<NestedMarking, EosStep> cover_eos(
    const Eos& eos, const NestedMarking& mu0, const NestedMarking& target,
    std::size_t depth, const ExploreOptions& opt = {}) {
  eos.validate_marking(mu0);
  eos.validate_marking(target);
  auto s = detail::bfs<NestedMarking, EosStep>(
      mu0, depth, opt, false,
      [&](const NestedMarking& mu) { return eos_successors(eos, mu); },
      [&](const NestedMarking& mu) { return covers(mu, target); });
  return detail::to_answer(s, depth);
}

// Replays a νPN run; throws PreconditionError on the first invalid step.
inline std::vector<Config> replay_nupn(const NuPn& d, const Config& iota,
                                      const std::vector<NuStep>& run) {
  std::vector<Config> trace{iota};
  for (const auto& step : run)
    trace.push_back(nu_fire(d, trace.back(), step.transition, step.mode));
  return trace;
}

inline std::vector<NestedMarking> replay_eos(const Eos& eos,
                                             const NestedMarking& mu0,
                                             const std::vector<EosStep>& run) {
  std::vector<NestedMarking> trace{mu0};
  for (const auto& step : run) {
    const Event& e = eos.event(step.event);
    if (!phi(eos, e, step.mode.lambda, step.mode.rho))
      throw PreconditionError("step '" + step.event +
                              "' violates the enabledness condition");
    trace.push_back(fire_event(trace.back(), step.mode));
  }
  return trace;
}

struct MinimalRun {
  std::vector<EosStep> steps;
  NestedMarking endpoint;
  Config decoded;
};

/// Reorders adjacent steps that are enabled independently of each other
/// into ascending step order, keeping selectTran unmarked in between. Runs
/// that differ only by interleaving of such steps get the same form.
inline std::vector<EosStep> canonical_interleaving(const NestedMarking& start,
                                                   std::vector<EosStep> steps) {
  bool changed = true;
  while (changed) {
    changed = false;
    NestedMarking mu = start;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      const auto& a = steps[i];
      const auto& b = steps[i + 1];
      if (b < a && leq(b.mode.lambda, exact_sub(mu, a.mode.lambda))) {
        NestedMarking mid = fire_event(mu, b.mode);
        if (!detail::marks_select_tran(mid)) {
          std::swap(steps[i], steps[i + 1]);
          changed = true;
          break;
        }
      }
      mu = fire_event(mu, a.mode);
    }
  }
  return steps;
}

/// Runs of length 1..max_len from mbar whose intermediate markings never mark
/// selectTran and whose endpoint is an encoding. Branches are cut as soon as
/// selectTran is marked again. With merge_commuting, runs equal up to
/// reordering of independent adjacent steps are reported once.
inline std::vector<MinimalRun> minimal_runs(const NuPn& d,
                                            const ReductionOutput& r,
                                            const NestedMarking& mbar,
                                            std::size_t max_len,
                                            bool merge_commuting = true) {
  if (!decode_config(d, mbar))
    throw InputError("start marking is not the encoding of a configuration");
  const Eos& eos = r.eos;
  std::map<std::vector<EosStep>, MinimalRun> found;
  std::vector<EosStep> steps;
  auto rec = [&](auto&& self, const NestedMarking& mu) -> void {
    if (steps.size() == max_len) return;
    for (const auto& e : eos.events())
      for (auto& mode : enabled_modes(eos, mu, e)) {
        NestedMarking next = fire_event(mu, mode);
        steps.push_back(EosStep{e.label, std::move(mode)});
        if (detail::marks_select_tran(next)) {
          if (auto dec = decode_config(d, next)) {
            auto key = merge_commuting ? canonical_interleaving(mbar, steps)
                                       : steps;
            found.try_emplace(key, MinimalRun{key, next, *dec});
          }
        } else {
          self(self, next);
        }
        steps.pop_back();
      }
  };
  rec(rec, mbar);
  std::vector<MinimalRun> out;
  for (auto& [k, run] : found) out.push_back(std::move(run));
  return out;
}

struct LemmaReport {
  Config start;
  std::set<Config> direct;     // {M' | M →^{t,e} M'}
  std::set<Config> simulated;  // decoded endpoints of minimal runs from M̄
  bool pass = false;
};

/// Compares one-step νPN successors of m with the endpoints of minimal runs
/// of the compiled EOS from the encoding of m.
inline LemmaReport check_lemma(const NuPn& d, const ReductionOutput& r,
                               const Config& m, std::size_t max_len) {
  require_valid(d);
  detail::require_arity(d, m, "configuration");
  if (max_len < max_gadget_length(d))
    throw PreconditionError("max_len " + std::to_string(max_len) +
                            " is below the longest minimal run (" +
                            std::to_string(max_gadget_length(d)) + ")");
  LemmaReport rep;
  rep.start = m;
  for (auto& [step, next] : nu_successors(d, m)) rep.direct.insert(next);
  for (auto& run : minimal_runs(d, r, encode_config(d, m), max_len, false))
    rep.simulated.insert(run.decoded);
  rep.pass = rep.direct == rep.simulated;
  return rep;
}

inline LemmaReport check_lemma(const NuPn& d, const Config& m,
                               std::size_t max_len) {
  return check_lemma(d, reduce(d), m, max_len);
}

struct TransferReport {
  CoverAnswer<Config, NuStep> nupn;
  CoverAnswer<NestedMarking, EosStep> eos;
  std::size_t eos_depth = 0;
  bool agree = false;
};

/// Runs cover_nupn at depth k and cover_eos on the compiled system from ῑ to
/// τ̄ with budget k·L, L the longest gadget run.
inline TransferReport cover_transfer(const NuPn& d, const Config& iota,
                                     const Config& target, std::size_t k,
                                     const ExploreOptions& opt = {}) {
  TransferReport rep;
  rep.nupn = cover_nupn(d, iota, target, k, opt);
  auto r = reduce(d);
  rep.eos_depth = k * max_gadget_length(d);
  rep.eos = cover_eos(r.eos, encode_config(d, iota), encode_config(d, target),
                      rep.eos_depth, opt);
  rep.agree = rep.nupn.covered == rep.eos.covered;
  return rep;
}

}  // namespace eosnu
