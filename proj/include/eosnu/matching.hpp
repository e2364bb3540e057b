#pragma once

#include <cstddef>
#include <vector>

namespace eosnu {

/// True iff the bipartite graph (left x right, edge(i, j)) has a matching
/// covering every left vertex. Kuhn's augmenting-path algorithm.
template <typename EdgeFn>
bool saturates_left(std::size_t left, std::size_t right, EdgeFn&& edge) {
  if (left > right) return false;
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> adj(left);
  for (std::size_t i = 0; i < left; ++i)
    for (std::size_t j = 0; j < right; ++j)
      if (edge(i, j)) adj[i].push_back(j);

  std::vector<std::size_t> match_right(right, kFree);
  std::vector<char> seen;

  auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      if (match_right[j] == kFree || self(self, match_right[j])) {
        match_right[j] = i;
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < left; ++i) {
    if (adj[i].empty()) return false;
    seen.assign(right, 0);
    if (!augment(augment, i)) return false;
  }
  return true;
}

}  // namespace eosnu
