#include "catch_amalgamated.hpp"
#include "eosnu/fuzz.hpp"
#include "eosnu/nupn.hpp"
#include "eosnu/petri.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace eosnu;

namespace {

bool has_clause(const std::vector<Violation>& vs, const std::string& cl) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.clause == cl; });
}

NuPn one_place() {
  NuPn d;
  d.places = {"p"};
  d.standard_vars = {"x", "y"};
  d.fresh_vars = {"nu"};
  return d;
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate(fixtures::d0()).empty());

  auto fresh_in = fixtures::d0();
  fresh_in.transitions["t1"].in["p"].insert("nu");
  CHECK(has_clause(validate(fresh_in), clause::kFreshInPre));

  auto mixed = fixtures::d0();
  mixed.transitions["t1"].out["p"].insert("x");
  CHECK(has_clause(validate(mixed), clause::kNormal));

  auto unconsumed = fixtures::d0();
  unconsumed.standard_vars.insert("y");
  unconsumed.transitions["t1"].out["q"].insert("y");
  auto vs = validate(unconsumed);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].clause == clause::kPostInPre);
  CHECK(vs[0].transition == "t1");
  CHECK(vs[0].place == "q");

  auto two_fresh = fixtures::d0();
  two_fresh.fresh_vars.insert("mu");
  two_fresh.transitions["t2"].out["q"] = {"mu"};
  CHECK(has_clause(validate(two_fresh), clause::kNormal));

  NuPn empty;
  CHECK(has_clause(validate(empty), clause::kNonEmptyPlaces));
  CHECK_THROWS_AS(require_valid(empty), InputError);
}

TEST_CASE("modes of D0") {
  auto d = fixtures::d0();
  auto modes = nu_enabled_modes(d, Config{{1, 0}}, "t1");
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].assignment == std::vector<std::pair<std::string, std::size_t>>{{"x", 0}});
  CHECK(nu_enabled_modes(d, Config{{0, 1}}, "t1").empty());
  Config twice;
  twice.insert({1, 0}, 2);
  CHECK(nu_enabled_modes_raw(d, twice, "t1").size() == 2);
  CHECK(nu_enabled_modes(d, twice, "t1").size() == 1);
}

TEST_CASE("firing D0") {
  auto d = fixtures::d0();
  Config m{{1, 0}};
  auto next = nu_fire(d, m, "t1", nu_enabled_modes(d, m, "t1").at(0));
  CHECK(next == Config{{0, 1}, {1, 0}});
  CHECK_THROWS_AS(nu_fire(d, Config{{0, 1}}, "t1", NuMode{{{"x", 0}}}), PreconditionError);
  CHECK_THROWS_AS(nu_fire(d, m, "t1", NuMode{}), PreconditionError);
}

TEST_CASE("degenerate transitions") {
  auto d = one_place();
  d.transitions["idle"];
  d.transitions["make"].out["p"] = {"nu"};
  REQUIRE(validate(d).empty());
  Config m{{3}};
  CHECK(nu_fire(d, m, "idle", NuMode{}) == m);
  CHECK(nu_fire(d, Config{}, "make", NuMode{}) == Config{{1}});
}

TEST_CASE("size measure") {
  CHECK(nu_size(fixtures::d0()) == 3);
  auto d = one_place();
  d.places = {"a", "b", "c", "d"};
  CHECK(nu_size(d) == 4);
  auto e = one_place();
  e.transitions["t"].in["p"] = {"x", "x"};
  e.transitions["t"].out["p"] = {"x"};
  CHECK(nu_size(e) == 3);
}

TEST_CASE("coverability order") {
  Config m{{0, 1}, {1, 0}};
  CHECK(nu_covers(m, m));
  CHECK(nu_covers(m, Config{{0, 1}}));
  CHECK_FALSE(nu_covers(Config{{1, 1}}, Config{{1, 0}, {0, 1}}));
  CHECK_FALSE(nu_covers(Config{{1, 1}}, Config{{1, 0}, {0, 1}}, CoverOrder::ExactInclusion));
  CHECK(nu_covers(Config{{2, 1}}, Config{{1, 1}}));
  CHECK_FALSE(nu_covers(Config{{2, 1}}, Config{{1, 1}}, CoverOrder::ExactInclusion));
  CHECK_THROWS_AS(nu_covers(Config{{1}}, Config{{1, 0}}), InputError);
}

TEST_CASE("in(t) is exposed for inspection") {
  auto d = fixtures::d0();
  CHECK(in_vectors(d, "t1") == Config{{1, 0}});
  CHECK(out_fresh(d, "t1") == Config{{1, 0}});
}

TEST_CASE("random nets are valid") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) REQUIRE(validate(random_nupn(rng)).empty());
}

TEST_CASE("modes and successors match the literal definition") {
  Rng rng(17);
  FuzzBounds b;
  b.max_tuples = 4;
  for (int i = 0; i < 400; ++i) {
    NuPn d = random_nupn(rng, b);
    Config m = random_config(rng, d.arity(), b);
    for (const auto& [t, tr] : d.transitions) {
      std::set<std::vector<std::size_t>> want;
      for (const auto& f : oracle::nu_all_functions(d, m, t))
        if (f.fireable) want.insert(f.index);
      std::set<std::vector<std::size_t>> got;
      for (const auto& mode : nu_enabled_modes_raw(d, m, t)) {
        std::vector<std::size_t> idx;
        for (const auto& [x, k] : mode.assignment) idx.push_back(k);
        got.insert(idx);
      }
      REQUIRE(got == want);

      std::set<Config> succ;
      for (const auto& mode : nu_enabled_modes(d, m, t)) {
        Config next = nu_fire(d, m, t, mode);
        REQUIRE(next.size() == m.size() + d.fresh_vars_of(t).size());
        succ.insert(next);
      }
      REQUIRE(succ == oracle::nu_successors(d, m, t));
    }
  }
}

TEST_CASE("single-variable nets behave like a Petri net per name") {
  // Each transition uses one variable on every arc, so a name's vector
  // evolves exactly like a PN marking.
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    NuPn d;
    d.places = {"a", "b", "c"};
    d.standard_vars = {"x"};
    PetriNet pn;
    for (const auto& p : d.places) pn.add_place(p);
    for (int k = 0; k < 2; ++k) {
      NuTransition tr;
      Marking pre, post;
      for (const auto& p : d.places) {
        Count a = draw(rng, 3), c = draw(rng, 3);
        if (a) tr.in[p].insert("x", a), pre.insert(p, a);
        if (c) tr.out[p].insert("x", c), post.insert(p, c);
      }
      if (tr.in.empty()) tr.in["a"].insert("x"), pre.insert("a");
      std::string t = "t" + std::to_string(k);
      d.transitions[t] = tr;
      pn.add_transition(t, pre, post);
    }
    REQUIRE(validate(d).empty());
    Vec v{draw(rng, 4), draw(rng, 4), draw(rng, 4)};
    Marking mv;
    for (std::size_t j = 0; j < 3; ++j) mv.insert(d.places[j], v[j]);
    for (const auto& [t, tr] : d.transitions) {
      auto modes = nu_enabled_modes(d, Config{v}, t);
      REQUIRE(modes.empty() == !pn_enabled(pn, mv, t));
      if (modes.empty()) continue;
      Config next = nu_fire(d, Config{v}, t, modes[0]);
      Marking fired = pn_fire(pn, mv, t);
      Vec expect;
      for (const auto& p : d.places) expect.push_back(fired.count(p));
      REQUIRE(next == Config{expect});
    }
  }
}

TEST_CASE("nu_covers agrees with exhaustive embedding") {
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    Config a = random_config(rng, 2), b = random_config(rng, 2), c = random_config(rng, 2);
    REQUIRE(nu_covers(a, b) == oracle::nu_covers(a, b));
    REQUIRE(nu_covers(a, a));
    if (nu_covers(a, b) && nu_covers(b, c)) REQUIRE(nu_covers(a, c));
    if (nu_covers(a, b, CoverOrder::ExactInclusion)) REQUIRE(nu_covers(a, b));
  }
}
