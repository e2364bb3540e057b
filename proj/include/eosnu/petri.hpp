#pragma once

#include <map>
#include <set>
#include <string>

#include "eosnu/errors.hpp"
#include "eosnu/multiset.hpp"

namespace eosnu {

using Marking = Multiset<std::string>;

struct TransitionFlow {
  Marking pre;
  Marking post;

  friend bool operator==(const TransitionFlow&, const TransitionFlow&) = default;
};

/// Place/transition net N = (P, T, F) with F stored as pre/post multisets.
class PetriNet {
 public:
  void add_place(const std::string& p) {
    if (transitions_.count(p))
      throw InputError("id '" + p + "' used both as place and transition");
    if (!places_.insert(p).second) throw InputError("duplicate place '" + p + "'");
  }

  void add_transition(const std::string& t, Marking pre, Marking post) {
    if (places_.count(t))
      throw InputError("id '" + t + "' used both as place and transition");
    if (transitions_.count(t))
      throw InputError("duplicate transition '" + t + "'");
    for (const auto* side : {&pre, &post})
      for (const auto& [p, c] : *side)
        if (!places_.count(p))
          throw InputError("transition '" + t + "' refers to unknown place '" +
                           p + "'");
    transitions_.emplace(t, TransitionFlow{std::move(pre), std::move(post)});
  }

  void remove_transition(const std::string& t) { transitions_.erase(t); }

  bool has_place(const std::string& p) const { return places_.count(p) > 0; }
  bool has_transition(const std::string& t) const {
    return transitions_.count(t) > 0;
  }

  const std::set<std::string>& places() const { return places_; }
  const std::map<std::string, TransitionFlow>& transitions() const {
    return transitions_;
  }

  const TransitionFlow& flow(const std::string& t) const {
    auto it = transitions_.find(t);
    if (it == transitions_.end())
      throw InputError("unknown transition '" + t + "'");
    return it->second;
  }
  const Marking& pre(const std::string& t) const { return flow(t).pre; }
  const Marking& post(const std::string& t) const { return flow(t).post; }

  // Σ pre(t_i) over an enumeration of ts counting multiplicities.
  Marking pre_of(const Multiset<std::string>& ts) const {
    Marking out;
    for (const auto& [t, c] : ts) out += scale(pre(t), c);
    return out;
  }
  Marking post_of(const Multiset<std::string>& ts) const {
    Marking out;
    for (const auto& [t, c] : ts) out += scale(post(t), c);
    return out;
  }

  bool empty() const { return places_.empty() && transitions_.empty(); }

  friend bool operator==(const PetriNet&, const PetriNet&) = default;

 private:
  std::set<std::string> places_;
  std::map<std::string, TransitionFlow> transitions_;
};

// The empty net ■ = (∅, ∅, ∅); its only marking is ε.
inline const PetriNet& black_net() {
  static const PetriNet net;
  return net;
}

inline bool pn_enabled(const PetriNet& net, const Marking& mu,
                       const std::string& t) {
  return leq(net.pre(t), mu);
}

inline Marking pn_fire(const PetriNet& net, const Marking& mu,
                       const std::string& t) {
  const auto& f = net.flow(t);
  if (!leq(f.pre, mu))
    throw PreconditionError("transition '" + t + "' is not enabled");
  return exact_sub(mu, f.pre) + f.post;
}

// Fires the multiset ts as one step: enabled iff Σpre ⊑ mu.
inline Marking pn_fire_multiset(const PetriNet& net, const Marking& mu,
                                const Multiset<std::string>& ts) {
  Marking pre = net.pre_of(ts);
  if (!leq(pre, mu))
    throw PreconditionError("transition multiset is not enabled");
  return exact_sub(mu, pre) + net.post_of(ts);
}

}  // namespace eosnu
