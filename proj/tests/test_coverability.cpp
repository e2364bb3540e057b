#include "catch_amalgamated.hpp"
#include "eosnu/coverability.hpp"
#include "eosnu/fuzz.hpp"
#include "fixtures.hpp"

using namespace eosnu;

namespace {

const NuPn& d0() {
  static const NuPn d = fixtures::d0();
  return d;
}

const ReductionOutput& r0() {
  static const ReductionOutput r = reduce(d0());
  return r;
}

// Creates a new name on every firing, so the state space is infinite.
NuPn counter() {
  NuPn d;
  d.places = {"a"};
  d.fresh_vars = {"nu"};
  d.transitions["gen"].out["a"] = {"nu"};
  return d;
}

}  // namespace

TEST_CASE("explore the nu net") {
  auto one = explore_nupn(d0(), Config{{1, 0}}, 1);
  CHECK(one.states == std::vector<Config>{Config{{1, 0}}, Config{{0, 1}, {1, 0}}});
  CHECK(one.edges.size() == 1);
  auto zero = explore_nupn(d0(), Config{{1, 0}}, 0);
  CHECK(zero.states.size() == 1);

  NuPn idle;
  idle.places = {"a"};
  auto still = explore_nupn(idle, Config{{2}}, 10);
  CHECK(still.states.size() == 1);
  CHECK(still.frontier_exhausted);
}

TEST_CASE("explore the compiled system") {
  const Eos& eos = r0().eos;
  auto start = encode_config(d0(), Config{{1, 0}});
  auto res = explore_eos(eos, start, 5);
  CHECK(res.contains(encode_config(d0(), Config{{0, 1}, {1, 0}})));
  for (const auto& e : res.edges) {
    REQUIRE(e.from < res.states.size());
    REQUIRE(e.to < res.states.size());
    REQUIRE(replay_eos(eos, res.states[e.from], {e.step}).back() == res.states[e.to]);
  }
  CHECK(explore_eos(eos, start, 0).states.size() == 1);
  auto empty = explore_eos(eos, {}, 4);
  CHECK(empty.states == std::vector<NestedMarking>{NestedMarking{}});
  CHECK(empty.frontier_exhausted);
}

TEST_CASE("D0 coverability on both sides") {
  auto nu = cover_nupn(d0(), Config{{1, 0}}, Config{{0, 1}}, 1);
  CHECK(nu.covered);
  CHECK(nu.witness.size() == 1);
  CHECK(nu_covers(replay_nupn(d0(), Config{{1, 0}}, nu.witness).back(), Config{{0, 1}}));

  auto ibar = encode_config(d0(), Config{{1, 0}});
  auto tbar = encode_config(d0(), Config{{0, 1}});
  auto eos5 = cover_eos(r0().eos, ibar, tbar, 5);
  CHECK(eos5.covered);
  CHECK(eos5.witness.size() == 5);
  CHECK(covers(replay_eos(r0().eos, ibar, eos5.witness).back(), tbar));
  CHECK(eos5.trace.size() == 6);

  auto eos4 = cover_eos(r0().eos, ibar, tbar, 4);
  CHECK_FALSE(eos4.covered);
  CHECK(eos4.depth == 4);
}

TEST_CASE("covered stays covered at larger depth") {
  auto ibar = encode_config(d0(), Config{{1, 0}});
  auto tbar = encode_config(d0(), Config{{0, 1}});
  for (std::size_t k = 5; k <= 8; ++k) CHECK(cover_eos(r0().eos, ibar, tbar, k).covered);
  for (std::size_t k = 1; k <= 4; ++k)
    CHECK(cover_nupn(d0(), Config{{1, 0}}, Config{{0, 1}}, k).covered);
}

TEST_CASE("state cap is a named error") {
  ExploreOptions opt;
  opt.max_states = 5;
  try {
    explore_nupn(counter(), Config{}, 100, opt);
    FAIL("expected the cap to trigger");
  } catch (const ResourceCapExceeded& e) {
    CHECK(e.cap == "max-states");
    CHECK(e.limit == 5);
  }
}

TEST_CASE("minimal runs of D0") {
  auto runs = minimal_runs(d0(), r0(), encode_config(d0(), Config{{1, 0}}), 8);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].steps.size() == 5);
  CHECK(runs[0].endpoint == encode_config(d0(), Config{{0, 1}, {1, 0}}));
  // Without merging, the two fire steps may come in either order.
  CHECK(minimal_runs(d0(), r0(), encode_config(d0(), Config{{1, 0}}), 8, false).size() == 2);
  CHECK(minimal_runs(d0(), r0(), encode_config(d0(), Config{}), 8).empty());
  CHECK_THROWS_AS(minimal_runs(d0(), r0(), NestedMarking{}, 5), InputError);
}

TEST_CASE("minimal run lengths follow the gadget shape") {
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    NuPn d = random_nupn(rng);
    auto r = reduce(d);
    Config m = random_config(rng, d.arity());
    for (const auto& run : minimal_runs(d, r, encode_config(d, m), max_gadget_length(d))) {
      // The last step is some t::done; its transition fixes the length.
      const std::string& last = run.steps.back().event;
      std::string t = last.substr(0, last.find("::"));
      REQUIRE(run.steps.size() == gadget_length(d, t));
    }
  }
}

TEST_CASE("lemma on D0") {
  auto rep = check_lemma(d0(), Config{{1, 0}}, 5);
  CHECK(rep.pass);
  CHECK(rep.direct == std::set<Config>{Config{{0, 1}, {1, 0}}});
  CHECK(rep.simulated == rep.direct);
  CHECK_THROWS_AS(check_lemma(d0(), Config{{1, 0}}, 4), PreconditionError);

  NuPn idle;
  idle.places = {"a"};
  auto none = check_lemma(idle, Config{{1}}, 1);
  CHECK(none.pass);
  CHECK(none.direct.empty());
}

TEST_CASE("lemma harness notices a broken gadget") {
  auto parts = r0().eos.parts();
  auto flow = parts.system.flow("t1::select::nu");
  flow.post.erase("t1::run::x");
  parts.system.remove_transition("t1::select::nu");
  parts.system.add_transition("t1::select::nu", flow.pre, flow.post);
  ReductionOutput broken{Eos(parts), r0().names};
  CHECK_FALSE(check_lemma(d0(), broken, Config{{1, 0}}, 5).pass);
}

TEST_CASE("transfer on D0") {
  auto rep = cover_transfer(d0(), Config{{1, 0}}, Config{{0, 1}}, 3);
  CHECK(rep.agree);
  CHECK(rep.nupn.covered);
  CHECK(rep.eos.covered);
  CHECK(rep.eos_depth == 15);
}

TEST_CASE("exploration is deterministic and thread-count independent") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    NuPn d = random_nupn(rng);
    Config m = random_config(rng, d.arity());
    ExploreOptions one, many;
    many.threads = 4;
    auto a = explore_nupn(d, m, 3, one);
    REQUIRE(a == explore_nupn(d, m, 3, one));
    REQUIRE(a == explore_nupn(d, m, 3, many));
    auto r = reduce(d);
    auto mbar = encode_config(d, m);
    auto b = explore_eos(r.eos, mbar, 5, one);
    REQUIRE(b == explore_eos(r.eos, mbar, 5, many));
  }
}

TEST_CASE("witnesses replay") {
  Rng rng(8);
  for (int i = 0; i < 40; ++i) {
    NuPn d = random_nupn(rng);
    Config m = random_config(rng, d.arity());
    Config target = random_config(rng, d.arity());
    auto a = cover_nupn(d, m, target, 3);
    if (!a.covered) continue;
    auto trace = replay_nupn(d, m, a.witness);
    REQUIRE(trace == a.trace);
    REQUIRE(nu_covers(trace.back(), target));
  }
}

TEST_CASE("a k*L budget can fit more than k short gadget runs") {
  // t_a has a 3-event gadget, t_b a 7-event one, so L = 7. Covering the target
  // takes three t_a firings: not possible in 2 νPN steps, but 3 * 3 = 9 events
  // fit in the EOS budget 2 * 7 = 14.
  NuPn d;
  d.places = {"p", "q"};
  d.standard_vars = {"x", "y"};
  d.fresh_vars = {"nu"};
  d.transitions["ta"].in["p"] = {"x"};
  d.transitions["ta"].out["q"] = {"x"};
  d.transitions["tb"].in["p"] = {"x", "y"};
  d.transitions["tb"].out["p"] = {"x", "y"};
  d.transitions["tb"].out["q"] = {"nu"};
  REQUIRE(max_gadget_length(d) == 7);
  Config iota, tau;
  iota.insert({1, 0}, 3);
  tau.insert({0, 1}, 3);

  auto rep = cover_transfer(d, iota, tau, 2);
  CHECK_FALSE(rep.nupn.covered);
  CHECK(rep.eos.covered);
  CHECK(rep.eos.witness.size() == 9);
  CHECK_FALSE(rep.agree);
  // Counting completed gadget runs restores the correspondence.
  CHECK(cover_nupn(d, iota, tau, 3).covered);
}
