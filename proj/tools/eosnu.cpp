// Command-line driver: validate, simulate, reduce, cover, cover-transfer,
// check-lemma and dot.
//
// Exit codes: 0 ok / covered, 1 usage or input error, 2 not covered within
// the depth, 3 resource cap exceeded, 4 lemma or transfer check failed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eosnu/coverability.hpp"
#include "eosnu/fuzz.hpp"
#include "eosnu/text_io.hpp"

using namespace eosnu;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotCovered = 2;
constexpr int kCapExceeded = 3;
constexpr int kCheckFailed = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// A --target or --config argument: inline syntax, or a file holding it.
std::string inline_or_file(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

// Errors from a file are reported with its name in front.
struct FileError : InputError {
  using InputError::InputError;
};

template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
  std::string text = read_file(path);
  try {
    return fn(text);
  } catch (const InputError& e) {
    throw FileError(path + ": " + e.what());
  }
}

struct Args {
  std::string file;
  std::string output;
  std::string name_table;
  std::string target;
  std::string config;
  std::string dot;
  std::size_t steps = 10;
  std::uint64_t seed = 1;
  std::size_t depth = 0;
  std::size_t max_states = ExploreOptions{}.max_states;
  unsigned threads = 1;
  std::size_t max_len = 0;
  std::size_t trials = 100;
  bool random = false;
  bool exact = false;
};

ExploreOptions explore_options(const Args& a) {
  ExploreOptions opt;
  opt.max_states = a.max_states;
  opt.threads = a.threads;
  return opt;
}

// --- validate -------------------------------------------------------------

int run_validate(const Args& a) {
  std::string kind = with_file(a.file, [](const std::string& t) { return detect_kind(t); });
  if (kind == "nupn") {
    auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t, false); });
    auto violations = validate(file.net);
    for (const auto& v : violations) std::cerr << a.file << ": " << v.describe() << '\n';
    if (!violations.empty()) return kUsage;
    std::cout << "ok: nupn, " << file.net.places.size() << " places, "
              << file.net.transitions.size() << " transitions, size "
              << nu_size(file.net) << '\n';
    return kOk;
  }
  auto file = with_file(a.file, [](const std::string& t) { return parse_eos(t); });
  std::size_t non_idle = 0;
  for (const auto& [t, f] : file.eos.system().transitions()) non_idle += !file.eos.is_idle(t);
  std::cout << "ok: eos, " << file.eos.system().places().size() << " system places, "
            << non_idle << " transitions, " << file.eos.events().size() << " events, "
            << (is_conservative(file.eos) ? "conservative" : "not conservative") << '\n';
  return kOk;
}

// --- simulate -------------------------------------------------------------

template <typename State, typename Successors, typename ShowState, typename ShowStep>
int simulate(State cur, std::size_t steps, std::uint64_t seed, Successors successors,
             ShowState show_state, ShowStep show_step) {
  Rng rng(seed);
  std::cout << "state 0: " << show_state(cur) << '\n';
  for (std::size_t i = 0; i < steps; ++i) {
    auto next = successors(cur);
    if (next.empty()) {
      std::cout << "deadlock after " << i << " step(s)\n";
      return kOk;
    }
    auto& [step, state] = next[draw(rng, next.size())];
    std::cout << "fire " << show_step(cur, step) << '\n';
    cur = std::move(state);
    std::cout << "state " << i + 1 << ": " << show_state(cur) << '\n';
  }
  return kOk;
}

int run_simulate(const Args& a) {
  if (with_file(a.file, [](const std::string& t) { return detect_kind(t); }) == "nupn") {
    auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t); });
    const NuPn& d = file.net;
    return simulate(
        file.init.value_or(Config{}), a.steps, a.seed,
        [&](const Config& m) { return nu_successors(d, m); },
        [](const Config& m) { return "{" + print_config(m) + "}"; },
        [](const Config& m, const NuStep& s) { return print_nu_step(m, s); });
  }
  auto file = with_file(a.file, [](const std::string& t) { return parse_eos(t); });
  const Eos& eos = file.eos;
  return simulate(
      file.init.value_or(NestedMarking{}), a.steps, a.seed,
      [&](const NestedMarking& mu) { return eos_successors(eos, mu); },
      [](const NestedMarking& mu) { return print_marking(mu); },
      [](const NestedMarking&, const EosStep& s) { return print_eos_step(s); });
}

// --- reduce ---------------------------------------------------------------

int run_reduce(const Args& a) {
  auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t); });
  auto out = reduce(file.net);
  EosFile ef{out.eos, std::nullopt, std::nullopt};
  if (file.init) ef.init = encode_config(file.net, *file.init);
  if (file.target) ef.target = encode_config(file.net, *file.target);
  write_file(a.output, print_eos(ef));
  if (!a.name_table.empty()) write_file(a.name_table, print_name_table(out.names));
  std::size_t non_idle = 0;
  for (const auto& [t, f] : out.eos.system().transitions()) non_idle += !out.eos.is_idle(t);
  std::cout << "wrote " << a.output << ": " << out.eos.system().places().size()
            << " system places, " << non_idle << " transitions, "
            << out.eos.events().size() << " events\n";
  return kOk;
}

// --- cover ----------------------------------------------------------------

template <typename Answer>
int report(const Answer& answer, const Args& a) {
  std::cout << print_answer(answer);
  if (!a.dot.empty() && answer.covered) write_file(a.dot, emit_dot(answer));
  return answer.covered ? kOk : kNotCovered;
}

int run_cover(const Args& a) {
  auto opt = explore_options(a);
  if (with_file(a.file, [](const std::string& t) { return detect_kind(t); }) == "nupn") {
    auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t); });
    Config target = a.target.empty() ? file.target.value_or(Config{})
                                     : parse_config(inline_or_file(a.target), file.net.arity());
    if (a.target.empty() && !file.target) throw InputError("no target given");
    auto order = a.exact ? CoverOrder::ExactInclusion : CoverOrder::Embedding;
    return report(cover_nupn(file.net, file.init.value_or(Config{}), target, a.depth, opt, order), a);
  }
  auto file = with_file(a.file, [](const std::string& t) { return parse_eos(t); });
  if (a.target.empty() && !file.target) throw InputError("no target given");
  NestedMarking target =
      a.target.empty() ? *file.target : parse_marking(inline_or_file(a.target));
  return report(cover_eos(file.eos, file.init.value_or(NestedMarking{}), target, a.depth, opt), a);
}

int run_cover_transfer(const Args& a) {
  auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t); });
  if (a.target.empty() && !file.target) throw InputError("no target given");
  Config target = a.target.empty() ? *file.target
                                   : parse_config(inline_or_file(a.target), file.net.arity());
  Config iota = file.init.value_or(Config{});
  auto rep = cover_transfer(file.net, iota, target, a.depth, explore_options(a));
  auto verdict = [](bool c) { return c ? "covered" : "not covered"; };
  std::cout << "nupn: " << verdict(rep.nupn.covered) << " within depth " << a.depth;
  if (rep.nupn.covered) std::cout << " (witness length " << rep.nupn.witness.size() << ")";
  std::cout << "\neos:  " << verdict(rep.eos.covered) << " within depth " << rep.eos_depth;
  if (rep.eos.covered) std::cout << " (witness length " << rep.eos.witness.size() << ")";
  std::cout << '\n' << (rep.agree ? "verdicts agree" : "verdicts DISAGREE") << '\n';
  if (!rep.agree) return kCheckFailed;
  return rep.nupn.covered ? kOk : kNotCovered;
}

// --- check-lemma ----------------------------------------------------------

std::string config_set(const std::set<Config>& s) {
  std::string out = "{";
  for (const auto& m : s) out += (out.size() > 1 ? ", " : "") + ("{" + print_config(m) + "}");
  return out + "}";
}

int run_check_lemma(const Args& a) {
  auto file = with_file(a.file, [](const std::string& t) { return parse_nupn(t); });
  const NuPn& d = file.net;
  std::vector<Config> configs;
  if (a.random) {
    Rng rng(a.seed);
    for (std::size_t i = 0; i < a.trials; ++i) configs.push_back(random_config(rng, d.arity()));
  } else if (!a.config.empty()) {
    configs.push_back(parse_config(inline_or_file(a.config), d.arity()));
  } else {
    configs.push_back(file.init.value_or(Config{}));
  }
  std::size_t max_len = a.max_len ? a.max_len : max_gadget_length(d);
  auto r = reduce(d);
  std::size_t failed = 0;
  for (const auto& m : configs) {
    auto rep = check_lemma(d, r, m, max_len);
    std::cout << (rep.pass ? "pass" : "FAIL") << "  M = {" << print_config(m) << "}\n"
              << "  S1 = " << config_set(rep.direct) << "\n"
              << "  S2 = " << config_set(rep.simulated) << "\n";
    failed += !rep.pass;
  }
  std::cout << configs.size() - failed << "/" << configs.size() << " configurations pass\n";
  return failed ? kCheckFailed : kOk;
}

// --- dot ------------------------------------------------------------------

int run_dot(const Args& a) {
  std::string dot;
  if (with_file(a.file, [](const std::string& t) { return detect_kind(t); }) == "nupn") {
    dot = emit_dot(with_file(a.file, [](const std::string& t) { return parse_nupn(t); }).net);
  } else {
    auto file = with_file(a.file, [](const std::string& t) { return parse_eos(t); });
    dot = file.init ? emit_dot(file.eos, *file.init) : emit_dot(file.eos);
  }
  if (a.output.empty() || a.output == "-")
    std::cout << dot;
  else
    write_file(a.output, dot);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elementary object systems and ν-Petri nets: simulation, reduction, coverability"};
  app.require_subcommand(1);
  Args a;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a .nupn or .eos file");
  validate_cmd->add_option("file", a.file, "Net file")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Random walk from the file's init");
  simulate_cmd->add_option("file", a.file, "Net file")->required();
  simulate_cmd->add_option("--steps", a.steps, "Number of firings")->capture_default_str();
  simulate_cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();

  auto* reduce_cmd = app.add_subcommand("reduce", "Compile a νPN into a conservative EOS");
  reduce_cmd->add_option("file", a.file, "νPN file")->required();
  reduce_cmd->add_option("-o,--output", a.output, "EOS output file")->required();
  reduce_cmd->add_option("--name-table", a.name_table, "Write the id table (TSV) here");

  auto* cover_cmd = app.add_subcommand("cover", "Bounded coverability search");
  cover_cmd->add_option("file", a.file, "Net file")->required();
  cover_cmd->add_option("--target", a.target, "Target, inline or a file (default: file's target)");
  cover_cmd->add_option("--depth", a.depth, "Maximum number of firings")->required();
  cover_cmd->add_option("--max-states", a.max_states, "State cap")->capture_default_str();
  cover_cmd->add_option("--threads", a.threads, "Frontier expansion threads")->capture_default_str();
  cover_cmd->add_option("--dot", a.dot, "Write the witness as DOT here");
  cover_cmd->add_flag("--exact", a.exact, "νPN: plain multiset inclusion instead of embedding");

  auto* transfer_cmd = app.add_subcommand(
      "cover-transfer", "Cover a νPN at depth k and its compiled EOS at depth k·L");
  transfer_cmd->add_option("file", a.file, "νPN file")->required();
  transfer_cmd->add_option("--target", a.target, "Target, inline or a file");
  transfer_cmd->add_option("--depth", a.depth, "νPN depth k")->required();
  transfer_cmd->add_option("--max-states", a.max_states, "State cap")->capture_default_str();
  transfer_cmd->add_option("--threads", a.threads, "Frontier expansion threads")->capture_default_str();

  auto* lemma_cmd = app.add_subcommand(
      "check-lemma", "Compare one-step successors with minimal runs of the compiled EOS");
  lemma_cmd->add_option("file", a.file, "νPN file")->required();
  auto* config_opt = lemma_cmd->add_option("--config", a.config, "Configuration, inline or a file");
  auto* random_opt = lemma_cmd->add_flag("--random", a.random, "Check random configurations");
  config_opt->excludes(random_opt);
  lemma_cmd->add_option("--trials", a.trials, "Random configurations to check")->capture_default_str();
  lemma_cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  lemma_cmd->add_option("--max-len", a.max_len, "Minimal run length bound (default: longest gadget)");

  auto* dot_cmd = app.add_subcommand("dot", "Render a net as Graphviz DOT");
  dot_cmd->add_option("file", a.file, "Net file")->required();
  dot_cmd->add_option("-o,--output", a.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return run_validate(a);
    if (*simulate_cmd) return run_simulate(a);
    if (*reduce_cmd) return run_reduce(a);
    if (*cover_cmd) return run_cover(a);
    if (*transfer_cmd) return run_cover_transfer(a);
    if (*lemma_cmd) return run_check_lemma(a);
    if (*dot_cmd) return run_dot(a);
  } catch (const ResourceCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const FileError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
