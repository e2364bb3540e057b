#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "eosnu/errors.hpp"
#include "eosnu/matching.hpp"
#include "eosnu/multiset.hpp"
#include "eosnu/petri.hpp"

namespace eosnu {

// Id of the empty object net ■.
inline const std::string kBlackNet = "black";

struct NestedToken {
  std::string place;
  Marking inner;

  friend bool operator==(const NestedToken&, const NestedToken&) = default;
  friend bool operator<(const NestedToken& a, const NestedToken& b) {
    return std::tie(a.place, a.inner) < std::tie(b.place, b.inner);
  }
};

using NestedMarking = Multiset<NestedToken>;

/// Event (τ̂, θ): a system transition synchronised with a multiset of
/// transitions per object net. Nets absent from `theta` carry ∅.
struct Event {
  std::string label;
  std::string sys_transition;
  std::map<std::string, Multiset<std::string>> theta;

  const Multiset<std::string>& theta_of(const std::string& net) const {
    static const Multiset<std::string> kNone;
    auto it = theta.find(net);
    return it == theta.end() ? kNone : it->second;
  }

  friend bool operator==(const Event&, const Event&) = default;
};

/// Mode (λ, ρ) of an event firing.
struct EventMode {
  NestedMarking lambda;
  NestedMarking rho;

  friend bool operator==(const EventMode&, const EventMode&) = default;
  friend bool operator<(const EventMode& a, const EventMode& b) {
    return std::tie(a.lambda, a.rho) < std::tie(b.lambda, b.rho);
  }
};

/// Raw components of an EOS. The system net here never lists idle
/// transitions; `Eos` synthesises them.
struct EosParts {
  PetriNet system;
  std::map<std::string, PetriNet> object_nets;
  std::map<std::string, std::string> typing;
  std::vector<Event> events;

  friend bool operator==(const EosParts&, const EosParts&) = default;
};

/// Validated elementary object system E = (N̂, 𝒩, d, Θ).
///
/// Construction enforces: ■ ∈ 𝒩 under the id `black`; pairwise disjoint
/// place and transition ids across all nets; d total on system places; every
/// event names a known system transition and only transitions of the right
/// object net in θ; events on an idle transition id_p have θ(d(p)) ≠ ∅.
/// One idle transition `id::<p>` is added per system place.
class Eos {
 public:
  explicit Eos(EosParts parts) : parts_(std::move(parts)) {
    auto [black, inserted] = parts_.object_nets.try_emplace(kBlackNet);
    if (!inserted && !black->second.empty())
      throw InputError("object net 'black' is reserved for the empty net");

    std::map<std::string, std::string> owner;
    auto claim = [&owner](const std::string& id, const std::string& where) {
      auto [it, fresh] = owner.emplace(id, where);
      if (!fresh)
        throw InputError("id '" + id + "' is used by both " + it->second +
                         " and " + where);
    };
    for (const auto& p : parts_.system.places()) claim(p, "the system net");
    for (const auto& [t, f] : parts_.system.transitions())
      claim(t, "the system net");
    for (const auto& [name, net] : parts_.object_nets) {
      for (const auto& p : net.places()) claim(p, "object net '" + name + "'");
      for (const auto& [t, f] : net.transitions())
        claim(t, "object net '" + name + "'");
    }
    for (const auto& p : parts_.system.places())
      claim(idle_id(p), "the idle transition of '" + p + "'");

    for (const auto& [p, type] : parts_.typing) {
      if (!parts_.system.has_place(p))
        throw InputError("typing refers to unknown system place '" + p + "'");
      if (!parts_.object_nets.count(type))
        throw InputError("system place '" + p + "' has undeclared type '" +
                         type + "'");
    }
    for (const auto& p : parts_.system.places())
      if (!parts_.typing.count(p))
        throw InputError("system place '" + p + "' has no type");

    system_ = parts_.system;
    for (const auto& p : parts_.system.places())
      system_.add_transition(idle_id(p), Marking{p}, Marking{p});

    std::set<std::string> labels;
    for (auto& e : parts_.events) {
      if (!labels.insert(e.label).second)
        throw InputError("duplicate event '" + e.label + "'");
      if (!system_.has_transition(e.sys_transition))
        throw InputError("event '" + e.label +
                         "' refers to unknown system transition '" +
                         e.sys_transition + "'");
      for (auto it = e.theta.begin(); it != e.theta.end();) {
        auto net = parts_.object_nets.find(it->first);
        if (net == parts_.object_nets.end())
          throw InputError("event '" + e.label + "' refers to unknown net '" +
                           it->first + "'");
        for (const auto& [t, c] : it->second)
          if (!net->second.has_transition(t))
            throw InputError("event '" + e.label + "': '" + t +
                             "' is not a transition of net '" + it->first +
                             "'");
        it = it->second.empty() ? e.theta.erase(it) : std::next(it);
      }
      if (auto place = idle_place(e.sys_transition)) {
        if (e.theta_of(parts_.typing.at(*place)).empty())
          throw InputError("event '" + e.label + "' on idle transition '" +
                           e.sys_transition + "' needs θ(d(" + *place +
                           ")) ≠ ∅");
      }
    }
    std::sort(parts_.events.begin(), parts_.events.end(),
              [](const Event& a, const Event& b) { return a.label < b.label; });
  }

  static std::string idle_id(const std::string& place) {
    return "id::" + place;
  }

  // The place p if t is the idle transition id_p.
  std::optional<std::string> idle_place(const std::string& t) const {
    if (t.rfind("id::", 0) != 0) return std::nullopt;
    std::string p = t.substr(4);
    if (!parts_.system.has_place(p)) return std::nullopt;
    return p;
  }
  bool is_idle(const std::string& t) const { return idle_place(t).has_value(); }

  // System net including the synthesised idle transitions.
  const PetriNet& system() const { return system_; }
  const std::map<std::string, PetriNet>& object_nets() const {
    return parts_.object_nets;
  }
  const PetriNet& object_net(const std::string& name) const {
    auto it = parts_.object_nets.find(name);
    if (it == parts_.object_nets.end())
      throw InputError("unknown object net '" + name + "'");
    return it->second;
  }
  const std::map<std::string, std::string>& typing() const {
    return parts_.typing;
  }
  const std::string& type_of(const std::string& place) const {
    auto it = parts_.typing.find(place);
    if (it == parts_.typing.end())
      throw InputError("unknown system place '" + place + "'");
    return it->second;
  }
  // Events sorted by label.
  const std::vector<Event>& events() const { return parts_.events; }
  const Event& event(std::string_view label) const {
    auto it = std::lower_bound(
        parts_.events.begin(), parts_.events.end(), label,
        [](const Event& e, std::string_view key) { return e.label < key; });
    if (it == parts_.events.end() || it->label != label)
      throw InputError("unknown event '" + std::string(label) + "'");
    return *it;
  }

  const EosParts& parts() const { return parts_; }

  // Throws InputError unless every token sits on a system place and its inner
  // marking lives on the places of the place's type (ε for ■).
  void validate_marking(const NestedMarking& mu) const {
    for (const auto& [tok, c] : mu) {
      const auto& net = object_net(type_of(tok.place));
      for (const auto& [q, k] : tok.inner)
        if (!net.has_place(q))
          throw InputError("token on '" + tok.place + "' marks '" + q +
                           "', which is not a place of net '" +
                           type_of(tok.place) + "'");
    }
  }

  friend bool operator==(const Eos& a, const Eos& b) {
    return a.parts_ == b.parts_;
  }

 private:
  EosParts parts_;
  PetriNet system_;
};

// Π¹(μ): the system-net marking underlying μ.
inline Marking project_system(const NestedMarking& mu) {
  Marking out;
  for (const auto& [tok, c] : mu) out.insert(tok.place, c);
  return out;
}

// Π²_N(μ): sum of inner markings of tokens whose place has type N.
inline Marking project_object(const Eos& eos, const NestedMarking& mu,
                              const std::string& net) {
  if (!eos.object_nets().count(net))
    throw InputError("unknown object net '" + net + "'");
  Marking out;
  for (const auto& [tok, c] : mu)
    if (eos.type_of(tok.place) == net) out += scale(tok.inner, c);
  return out;
}

/// Enabledness condition Φ(e, λ, ρ).
inline bool phi(const Eos& eos, const Event& e, const NestedMarking& lambda,
                const NestedMarking& rho) {
  const auto& sys = eos.system();
  if (!sys.has_transition(e.sys_transition)) return false;
  if (project_system(lambda) != sys.pre(e.sys_transition)) return false;
  if (project_system(rho) != sys.post(e.sys_transition)) return false;
  for (const auto& [name, net] : eos.object_nets()) {
    const auto& th = e.theta_of(name);
    Marking pre = net.pre_of(th);
    Marking in = project_object(eos, lambda, name);
    if (!leq(pre, in)) return false;
    if (project_object(eos, rho, name) != exact_sub(in, pre) + net.post_of(th))
      return false;
  }
  return true;
}

namespace detail {

template <typename E>
void sub_multisets_rec(const std::vector<std::pair<E, Count>>& entries,
                       std::size_t i, Count k, Multiset<E>& cur,
                       std::vector<Multiset<E>>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  if (i == entries.size()) return;
  const auto& [e, c] = entries[i];
  for (Count take = std::min(c, k) + 1; take-- > 0;) {
    cur.insert(e, take);
    sub_multisets_rec(entries, i + 1, k - take, cur, out);
    cur.erase(e, take);
  }
}

// All sub-multisets of `pool` with exactly k elements.
template <typename E>
std::vector<Multiset<E>> sub_multisets_of_size(const Multiset<E>& pool,
                                               Count k) {
  std::vector<std::pair<E, Count>> entries(pool.begin(), pool.end());
  std::vector<Multiset<E>> out;
  Multiset<E> cur;
  sub_multisets_rec(entries, 0, k, cur, out);
  return out;
}

// All weak compositions of n into `parts` summands, lexicographic.
inline std::vector<std::vector<Count>> compositions(Count n,
                                                    std::size_t parts) {
  std::vector<std::vector<Count>> out;
  if (parts == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  std::vector<Count> cur(parts, 0);
  auto rec = [&](auto&& self, std::size_t i, Count left) -> void {
    if (i + 1 == parts) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (Count v = 0; v <= left; ++v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// All ways of splitting `total` over `slots` ordered slots.
inline std::vector<std::vector<Marking>> distribute(const Marking& total,
                                                    std::size_t slots) {
  std::vector<std::vector<Marking>> out;
  if (slots == 0) {
    if (total.empty()) out.emplace_back();
    return out;
  }
  out.emplace_back(slots);
  for (const auto& [q, c] : total) {
    std::vector<std::vector<Marking>> next;
    for (const auto& comp : compositions(c, slots)) {
      for (const auto& partial : out) {
        auto extended = partial;
        for (std::size_t s = 0; s < slots; ++s) extended[s].insert(q, comp[s]);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Every mode (λ, ρ) with λ ⊑ μ and Φ(e, λ, ρ), duplicate-free and sorted.
///
/// λ is chosen place by place as a sub-multiset of μ's tokens matching
/// pre(τ̂). For each object net N the aggregate Π²_N(λ) - pre_N(θ(N)) +
/// post_N(θ(N)) is then split over the N-typed slots of post(τ̂) in every
/// possible way; each split is one ρ.
inline std::vector<EventMode> enabled_modes(const Eos& eos,
                                            const NestedMarking& mu,
                                            const Event& e) {
  const auto& sys = eos.system();
  const Marking& pre = sys.pre(e.sys_transition);
  const Marking& post = sys.post(e.sys_transition);

  std::map<std::string, Multiset<Marking>> at_place;
  for (const auto& [tok, c] : mu) at_place[tok.place].insert(tok.inner, c);

  // (a) candidate λ
  std::vector<NestedMarking> lambdas{NestedMarking{}};
  for (const auto& [p, need] : pre) {
    auto it = at_place.find(p);
    if (it == at_place.end() || it->second.size() < need) return {};
    std::vector<NestedMarking> next;
    for (const auto& choice : detail::sub_multisets_of_size(it->second, need))
      for (const auto& partial : lambdas) {
        NestedMarking ext = partial;
        for (const auto& [inner, c] : choice) ext.insert({p, inner}, c);
        next.push_back(std::move(ext));
      }
    lambdas = std::move(next);
  }

  // Post slots per object net, places repeated by arc weight.
  std::map<std::string, std::vector<std::string>> slots;
  for (const auto& [p, w] : post)
    for (Count i = 0; i < w; ++i) slots[eos.type_of(p)].push_back(p);

  std::set<EventMode> modes;
  for (const auto& lambda : lambdas) {
    // (b) third conjunct
    std::map<std::string, Marking> aggregate;
    bool ok = true;
    for (const auto& [name, net] : eos.object_nets()) {
      const auto& th = e.theta_of(name);
      Marking in = project_object(eos, lambda, name);
      Marking need = net.pre_of(th);
      if (!leq(need, in)) {
        ok = false;
        break;
      }
      aggregate[name] = exact_sub(in, need) + net.post_of(th);
    }
    if (!ok) continue;

    // (c) distribute each aggregate over its slots
    std::vector<NestedMarking> rhos{NestedMarking{}};
    for (const auto& [name, total] : aggregate) {
      auto sit = slots.find(name);
      std::size_t n_slots = sit == slots.end() ? 0 : sit->second.size();
      auto splits = detail::distribute(total, n_slots);
      if (splits.empty()) {
        rhos.clear();
        break;
      }
      if (n_slots == 0) continue;
      std::vector<NestedMarking> next;
      for (const auto& split : splits)
        for (const auto& partial : rhos) {
          NestedMarking ext = partial;
          for (std::size_t s = 0; s < n_slots; ++s)
            ext.insert({sit->second[s], split[s]});
          next.push_back(std::move(ext));
        }
      rhos = std::move(next);
    }
    for (auto& rho : rhos) modes.insert(EventMode{lambda, std::move(rho)});
  }
  return {modes.begin(), modes.end()};
}

// μ - λ + ρ, requiring λ ⊑ μ.
inline NestedMarking fire_event(const NestedMarking& mu,
                                const EventMode& mode) {
  if (!leq(mode.lambda, mu))
    throw PreconditionError("mode consumes tokens that are not present");
  return exact_sub(mu, mode.lambda) + mode.rho;
}

/// Every system transition that consumes from a place of type N also
/// produces onto some place of type N.
inline bool is_conservative(const Eos& eos) {
  for (const auto& [t, f] : eos.system().transitions()) {
    for (const auto& [p, c] : f.pre) {
      const auto& type = eos.type_of(p);
      bool kept = std::any_of(f.post.begin(), f.post.end(), [&](const auto& q) {
        return eos.type_of(q.first) == type;
      });
      if (!kept) return false;
    }
  }
  return true;
}

/// target ≤_f mu: target tokens embed injectively into mu tokens on the same
/// system place with inner ⊑ inner'.
inline bool covers(const NestedMarking& mu, const NestedMarking& target) {
  std::map<std::string, std::vector<const Marking*>> have, want;
  for (const auto& [tok, c] : mu)
    for (Count i = 0; i < c; ++i) have[tok.place].push_back(&tok.inner);
  for (const auto& [tok, c] : target)
    for (Count i = 0; i < c; ++i) want[tok.place].push_back(&tok.inner);
  for (const auto& [place, needed] : want) {
    auto it = have.find(place);
    if (it == have.end()) return false;
    const auto& avail = it->second;
    if (!saturates_left(needed.size(), avail.size(),
                        [&](std::size_t i, std::size_t j) {
                          return leq(*needed[i], *avail[j]);
                        }))
      return false;
  }
  return true;
}

}  // namespace eosnu
