#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eosnu/nupn.hpp"

namespace eosnu {

using Rng = std::mt19937_64;

// Uniform-ish draw from [0, n) using only the engine's raw output, so the
// sequence is identical across standard library implementations.
inline std::size_t draw(Rng& rng, std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

inline std::size_t draw_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + draw(rng, hi - lo + 1);
}

inline bool coin(Rng& rng) { return draw(rng, 2) == 1; }

/// Bounds of the random νPN family used by the property suites.
struct FuzzBounds {
  std::size_t max_places = 3;
  std::size_t max_transitions = 3;
  Count max_mult = 2;
  std::size_t max_standard = 2;
  std::size_t max_tuples = 3;
  Count max_entry = 2;
};

/// Random valid, normal νPN within the bounds. Every standard variable of a
/// transition consumes at least one token; ν-labelled output arcs carry
/// exactly {{nu}}.
inline NuPn random_nupn(Rng& rng, const FuzzBounds& b = {}) {
  static const std::vector<std::string> kVarNames = {"x", "y", "z", "w",
                                                     "u", "v"};
  NuPn d;
  std::size_t n_places = draw_between(rng, 1, b.max_places);
  for (std::size_t i = 0; i < n_places; ++i)
    d.places.push_back("p" + std::to_string(i));
  std::size_t n_vars = std::min(b.max_standard, kVarNames.size());
  for (std::size_t i = 0; i < n_vars; ++i) d.standard_vars.insert(kVarNames[i]);
  d.fresh_vars.insert("nu");

  std::size_t n_trans = draw_between(rng, 0, b.max_transitions);
  for (std::size_t ti = 0; ti < n_trans; ++ti) {
    NuTransition tr;
    std::size_t k = draw_between(rng, 0, n_vars);
    bool has_nu = coin(rng);
    std::vector<char> nu_place(n_places, 0);
    if (has_nu) {
      nu_place[draw(rng, n_places)] = 1;
      for (std::size_t p = 0; p < n_places; ++p)
        if (draw(rng, 3) == 0) nu_place[p] = 1;
    }
    for (std::size_t vi = 0; vi < k; ++vi) {
      const auto& x = kVarNames[vi];
      std::size_t main = draw(rng, n_places);
      for (std::size_t p = 0; p < n_places; ++p) {
        Count in = p == main ? draw_between(rng, 1, b.max_mult)
                             : (coin(rng) ? 0 : draw_between(rng, 0, b.max_mult));
        if (in) tr.in[d.places[p]].insert(x, in);
        if (nu_place[p]) continue;
        Count out = coin(rng) ? 0 : draw_between(rng, 0, b.max_mult);
        if (out) tr.out[d.places[p]].insert(x, out);
      }
    }
    for (std::size_t p = 0; p < n_places; ++p)
      if (nu_place[p]) tr.out[d.places[p]].insert("nu");
    d.transitions.emplace("t" + std::to_string(ti), std::move(tr));
  }
  return d;
}

inline Config random_config(Rng& rng, std::size_t arity,
                            const FuzzBounds& b = {}) {
  Config m;
  std::size_t tuples = draw_between(rng, 0, b.max_tuples);
  for (std::size_t i = 0; i < tuples; ++i) {
    Vec v(arity);
    for (auto& c : v) c = draw_between(rng, 0, b.max_entry);
    m.insert(std::move(v));
  }
  return m;
}

}  // namespace eosnu
