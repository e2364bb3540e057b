#include "catch_amalgamated.hpp"
#include "eosnu/petri.hpp"

using namespace eosnu;

namespace {

PetriNet net_with(Marking pre, Marking post) {
  PetriNet n;
  n.add_place("p");
  n.add_place("q");
  n.add_transition("t", std::move(pre), std::move(post));
  return n;
}

}  // namespace

TEST_CASE("enabledness") {
  CHECK(pn_enabled(net_with({"p"}, {}), {"p", "q"}, "t"));
  CHECK_FALSE(pn_enabled(net_with({"p", "p"}, {}), {"p"}, "t"));
  CHECK(pn_enabled(net_with({}, {}), {}, "t"));
  CHECK_THROWS_AS(pn_enabled(net_with({}, {}), {}, "nope"), InputError);
}

TEST_CASE("firing") {
  CHECK(pn_fire(net_with({"p"}, {"q"}), {"p"}, "t") == Marking{"q"});
  CHECK(pn_fire(net_with({"p"}, {"p"}), {"p", "q"}, "t") == Marking{"p", "q"});
  CHECK(pn_fire(net_with({"p"}, {"q", "q"}), {"p", "p"}, "t") == Marking{"p", "q", "q"});
  CHECK_THROWS_AS(pn_fire(net_with({"p"}, {}), {"q"}, "t"), PreconditionError);
}

TEST_CASE("token count bookkeeping") {
  auto n = net_with({"p", "p"}, {"q"});
  Marking mu{"p", "p", "p", "q"};
  auto next = pn_fire(n, mu, "t");
  CHECK(next.size() == mu.size() - n.pre("t").size() + n.post("t").size());
}

TEST_CASE("multiset firing aggregates flows") {
  PetriNet n;
  n.add_place("a");
  n.add_place("b");
  n.add_transition("u", {"a"}, {"b"});
  n.add_transition("v", {"b"}, {"a", "a"});
  Multiset<std::string> ts{"u", "u", "v"};
  CHECK(n.pre_of(ts) == Marking{"a", "a", "b"});
  CHECK(pn_fire_multiset(n, {"a", "a", "b"}, ts) == Marking{"a", "a", "b", "b"});
  CHECK_THROWS_AS(pn_fire_multiset(n, {"a", "b"}, ts), PreconditionError);
}

TEST_CASE("construction rejects bad nets") {
  PetriNet n;
  n.add_place("p");
  CHECK_THROWS_AS(n.add_place("p"), InputError);
  CHECK_THROWS_AS(n.add_transition("p", {}, {}), InputError);
  CHECK_THROWS_AS(n.add_transition("t", {"zz"}, {}), InputError);
  n.add_transition("t", {}, {});
  CHECK_THROWS_AS(n.add_transition("t", {}, {}), InputError);
  CHECK_THROWS_AS(n.add_place("t"), InputError);
}

TEST_CASE("black net is empty") {
  CHECK(black_net().empty());
  CHECK(black_net().places().empty());
}
