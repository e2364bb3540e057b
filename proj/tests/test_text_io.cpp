#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "eosnu/coverability.hpp"
#include "eosnu/fuzz.hpp"
#include "eosnu/text_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace eosnu;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every line of a DOT file, sorted: node and edge statements as a multiset.
std::vector<std::string> dot_lines(const std::string& dot) {
  std::vector<std::string> out;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  std::sort(out.begin(), out.end());
  return out;
}

const char* kSmallEos = R"(eos
# one object net plus a black place
objectnet N
  places a b
  trans u
    in a : 1
    out b : 2
  end
end
system
  places s:N go:black
  trans T
    in s : 1
    in go : 1
    out s : 1
  end
end
events
  event e = T with N: u
  event idle = id::s with N: u u
end
init s{ a:2 } go{ }
target s{ b:1 }
)";

}  // namespace

TEST_CASE("parse D0") {
  auto file = parse_nupn(fixtures::kD0Text);
  CHECK(file.net == fixtures::d0());
  CHECK_FALSE(file.init);
  CHECK(print_nupn(file) == fixtures::kD0Text);
}

TEST_CASE("parse init and target") {
  std::string text = std::string(fixtures::kD0Text) + "init [1 0] [1 0]\ntarget [0 1]\n";
  auto file = parse_nupn(text);
  Config two;
  two.insert({1, 0}, 2);
  CHECK(file.init == two);
  CHECK(file.target == Config{{0, 1}});
  CHECK(parse_nupn(print_nupn(file)) == file);
}

TEST_CASE("nupn syntax errors carry positions") {
  try {
    parse_nupn("nupn\nvars x\n\ntrans t\nend\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.column == 1);
  }
  try {
    parse_nupn("nupn\nplaces p q\ninit [1 0] [1]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column == 12);
  }
  CHECK_THROWS_AS(parse_nupn("nupn\nplaces p\nbogus\n"), ParseError);
  CHECK_THROWS_AS(parse_nupn("nupn\nplaces p\ntrans t\n  in p : x\n"), ParseError);
  CHECK_THROWS_AS(parse_nupn("eos\n"), ParseError);
  CHECK_THROWS_AS(parse_nupn(""), ParseError);
}

TEST_CASE("semantic violations are reported with their clause") {
  std::string text = "nupn\nplaces p\nvars x\nfresh nu\ntrans t\n  in p : x\n  out p : x nu\nend\n";
  try {
    parse_nupn(text);
    FAIL("expected a validation error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find(clause::kNormal) != std::string::npos);
  }
  CHECK_NOTHROW(parse_nupn(text, false));
}

TEST_CASE("identifiers with double colons") {
  CHECK(text::is_identifier("t1::run::x"));
  CHECK(text::is_identifier("a.b-c'"));
  CHECK_FALSE(text::is_identifier("a:b"));
  CHECK_FALSE(text::is_identifier("1a"));
  CHECK_FALSE(text::is_identifier("a::"));
}

TEST_CASE("parse a small EOS") {
  auto file = parse_eos(kSmallEos);
  const Eos& eos = file.eos;
  CHECK(eos.type_of("go") == kBlackNet);
  CHECK(eos.object_net("N").post("u") == Marking{"b", "b"});
  CHECK(eos.event("idle").sys_transition == "id::s");
  CHECK(file.init == parse_marking("s{ a:2 } go{ }"));
  CHECK(file.target == parse_marking("s{ b }"));
  CHECK(parse_eos(print_eos(file)) == file);
  CHECK(print_eos(parse_eos(print_eos(file))) == print_eos(file));
}

TEST_CASE("EOS semantic errors") {
  std::string wrong_net = kSmallEos;
  wrong_net.replace(wrong_net.find("with N: u\n"), 10, "with N: T\n");
  CHECK_THROWS_AS(parse_eos(wrong_net), InputError);
  std::string bad_type = kSmallEos;
  bad_type.replace(bad_type.find("s:N"), 3, "s:M");
  CHECK_THROWS_AS(parse_eos(bad_type), InputError);
  std::string empty_idle = kSmallEos;
  empty_idle.replace(empty_idle.find("id::s with N: u u"), 17, "id::s");
  CHECK_THROWS_AS(parse_eos(empty_idle), InputError);
  std::string bad_init = kSmallEos;
  bad_init.replace(bad_init.find("go{ }"), 5, "go{ a }");
  try {
    parse_eos(bad_init);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 22);
  }
}

TEST_CASE("reduce output round-trips") {
  auto r = reduce(fixtures::d0());
  auto text = print_eos(r.eos);
  CHECK(parse_eos(text).eos == r.eos);
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    NuPn d = random_nupn(rng);
    NuPnFile f{d, random_config(rng, d.arity()), std::nullopt};
    if (coin(rng)) f.target = random_config(rng, d.arity());
    REQUIRE(parse_nupn(print_nupn(f)) == f);
    auto out = reduce(d);
    EosFile ef{out.eos, encode_config(d, *f.init), std::nullopt};
    REQUIRE(parse_eos(print_eos(ef)) == ef);
  }
}

TEST_CASE("random EOS round-trip") {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    Eos eos = oracle::random_eos(rng);
    EosFile f{eos, oracle::random_marking(rng, eos), oracle::random_marking(rng, eos)};
    REQUIRE(parse_eos(print_eos(f)) == f);
  }
}

TEST_CASE("inline configurations") {
  CHECK(parse_config("[0 1] [1 0]", 2) == Config{{0, 1}, {1, 0}});
  CHECK(parse_config("", 2).empty());
  CHECK_THROWS_AS(parse_config("[0 1 2]", 2), ParseError);
  CHECK(print_config(Config{{1, 0}, {0, 1}}) == "[0 1] [1 0]");
  auto mu = parse_marking("sim{ p:1 } selectTran{ }");
  CHECK(mu == encode_config(fixtures::d0(), Config{{1, 0}}));
  CHECK(print_marking(mu) == "selectTran{ } sim{ p:1 }");
}

TEST_CASE("name table") {
  auto r = reduce(fixtures::d0());
  auto tsv = print_name_table(r.names);
  CHECK(tsv.rfind("generated_id\trole\tsource_transition\tsource_variable\n", 0) == 0);
  CHECK(tsv.find("t1::run::x\trun\tt1\tx\n") != std::string::npos);
  CHECK(tsv.find("sim\tshared_place\t-\t-\n") != std::string::npos);
}

TEST_CASE("DOT output") {
  CHECK(emit_dot(PetriNet{}) == "digraph \"net\" {\n}\n");
  auto r = reduce(fixtures::d0());
  CHECK(dot_lines(emit_dot(r.eos)) ==
        dot_lines(slurp(std::string(EOSNU_GOLDEN_DIR) + "/d0_reduced.dot")));
  auto d = fixtures::d0();
  auto answer = cover_eos(r.eos, encode_config(d, Config{{1, 0}}),
                          encode_config(d, Config{{0, 1}}), 5);
  REQUIRE(answer.covered);
  CHECK(emit_dot(answer) == slurp(std::string(EOSNU_GOLDEN_DIR) + "/d0_witness.dot"));
  auto marked = emit_dot(r.eos, encode_config(d, Config{{1, 0}}));
  CHECK(marked.find("style=dashed, arrowhead=none") != std::string::npos);
  CHECK(marked.find("shape=triangle") != std::string::npos);
  CHECK(emit_dot(r.eos) == emit_dot(parse_eos(print_eos(r.eos)).eos));
}
