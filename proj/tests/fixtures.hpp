#pragma once

#include <string>

#include "eosnu/nupn.hpp"

namespace fixtures {

// P = {p, q}; t1 moves x's name from p to q and creates a fresh name on p.
inline eosnu::NuPn d0() {
  eosnu::NuPn d;
  d.places = {"p", "q"};
  d.standard_vars = {"x"};
  d.fresh_vars = {"nu"};
  eosnu::NuTransition t1;
  t1.in["p"] = {"x"};
  t1.out["q"] = {"x"};
  t1.out["p"] = {"nu"};
  d.transitions.emplace("t1", t1);
  return d;
}

inline const char* kD0Text = R"(nupn
places p q
vars x
fresh nu
trans t1
  in p : x
  out p : nu
  out q : x
end
)";

}  // namespace fixtures
