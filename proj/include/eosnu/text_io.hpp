#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eosnu/coverability.hpp"
#include "eosnu/eos.hpp"
#include "eosnu/errors.hpp"
#include "eosnu/nupn.hpp"
#include "eosnu/reduction.hpp"

namespace eosnu {

// Net files
//
//   nupn                          eos
//   places p q                    objectnet ND
//   vars x y                        places p q
//   fresh nu                        trans a
//   trans t                           in p : 1
//     in p : x x                      out q : 2
//     out q : x                     end
//     out p : nu                  end
//   end                           system
//   init [1 0] [0 2]                places sim:ND go:black
//   target [0 1]                    trans s
//                                     in go : 1
//                                     out sim : 1
//                                   end
//                                 end
//                                 events
//                                   event e = s with ND: a a ; Other: b
//                                 end
//                                 init sim{ p:1 } go{ }
//
// `#` starts a comment. Idle transitions are never written; they are
// synthesised when the EOS is built.

struct NuPnFile {
  NuPn net;
  std::optional<Config> init;
  std::optional<Config> target;

  friend bool operator==(const NuPnFile&, const NuPnFile&) = default;
};

struct EosFile {
  Eos eos;
  std::optional<NestedMarking> init;
  std::optional<NestedMarking> target;

  friend bool operator==(const EosFile&, const EosFile&) = default;
};

namespace text {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t col;
};

inline bool is_punct(char c) {
  return c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == '=';
}

inline std::vector<Token> tokenize_line(std::string_view line,
                                        std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_punct(c)) {
      out.push_back({std::string(1, c), lineno, i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           !is_punct(line[i]) && line[i] != '#')
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), lineno, start + 1});
  }
  return out;
}

struct Line {
  std::vector<Token> tokens;
  std::size_t number;
};

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    auto toks = tokenize_line(text.substr(pos, end - pos), lineno);
    if (!toks.empty()) out.push_back({std::move(toks), lineno});
    pos = end + 1;
  }
  return out;
}

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '\'' || c == '-';
}

// [A-Za-z_][name chars]* ( '::' [name chars]+ )*
inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ':') {
      if (i + 2 >= s.size() || s[i + 1] != ':' || !is_name_char(s[i + 2]))
        return false;
      i += 2;
      continue;
    }
    if (!is_name_char(s[i])) return false;
    ++i;
  }
  return true;
}

[[noreturn]] inline void fail(const Token& t, const std::string& msg) {
  throw ParseError(t.line, t.col, msg);
}

inline const std::string& ident(const Token& t, const char* what) {
  if (!is_identifier(t.text))
    fail(t, std::string("expected ") + what + ", got '" + t.text + "'");
  return t.text;
}

inline Count number(const Token& t) {
  Count v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
    fail(t, "expected a natural number, got '" + t.text + "'");
  return v;
}

// Position of the single ':' separating "name:suffix" (not part of "::").
inline std::optional<std::size_t> single_colon(std::string_view s) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != ':') continue;
    bool left = i > 0 && s[i - 1] == ':';
    bool right = i + 1 < s.size() && s[i + 1] == ':';
    if (!left && !right) found = i;
  }
  return found;
}

// Reads `<name> :` or `<name>:` starting at tokens[i]; returns the name and
// advances i past the colon.
inline std::string name_then_colon(const std::vector<Token>& toks, std::size_t& i,
                                   const Token& anchor, const char* what) {
  if (i >= toks.size()) fail(anchor, std::string("expected ") + what);
  const Token& t = toks[i];
  auto colon = single_colon(t.text);
  if (colon && *colon + 1 == t.text.size()) {
    Token name{t.text.substr(0, *colon), t.line, t.col};
    ++i;
    return ident(name, what);
  }
  std::string name = ident(t, what);
  ++i;
  if (i >= toks.size() || toks[i].text != ":")
    fail(i < toks.size() ? toks[i] : t, "expected ':' after '" + name + "'");
  ++i;
  return name;
}

// Sequence of vectors `[a b c] [d e f]` from tokens[i..].
inline Config parse_vectors(const std::vector<Token>& toks, std::size_t i,
                            std::size_t arity) {
  Config out;
  while (i < toks.size()) {
    const Token& open = toks[i];
    if (open.text != "[") fail(open, "expected '[' to start a tuple");
    Vec v;
    ++i;
    while (i < toks.size() && toks[i].text != "]") v.push_back(number(toks[i++]));
    if (i >= toks.size()) fail(open, "unterminated tuple");
    ++i;
    if (v.size() != arity)
      fail(open, "tuple has " + std::to_string(v.size()) + " entries, the net has " +
                     std::to_string(arity) + " places");
    out.insert(std::move(v));
  }
  return out;
}

// Sequence of tokens `place{ q:2 p }` from tokens[i..].
inline NestedMarking parse_tokens(const std::vector<Token>& toks, std::size_t i) {
  NestedMarking out;
  while (i < toks.size()) {
    const Token& place_tok = toks[i];
    std::string place = ident(place_tok, "a system place");
    ++i;
    if (i >= toks.size() || toks[i].text != "{")
      fail(i < toks.size() ? toks[i] : place_tok, "expected '{' after '" + place + "'");
    ++i;
    Marking inner;
    while (i < toks.size() && toks[i].text != "}") {
      const Token& t = toks[i++];
      auto colon = single_colon(t.text);
      if (colon) {
        Token name{t.text.substr(0, *colon), t.line, t.col};
        Token count{t.text.substr(*colon + 1), t.line, t.col + *colon + 1};
        inner.insert(ident(name, "an object place"), number(count));
      } else {
        inner.insert(ident(t, "an object place"));
      }
    }
    if (i >= toks.size()) fail(place_tok, "unterminated inner marking");
    ++i;
    out.insert({std::move(place), std::move(inner)});
  }
  return out;
}

inline std::string vec_text(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? " " : "") + std::to_string(v[i]);
  return out + "]";
}

}  // namespace text

inline std::string print_config(const Config& m) {
  std::string out;
  for (const auto& [v, c] : m)
    for (Count i = 0; i < c; ++i) out += (out.empty() ? "" : " ") + text::vec_text(v);
  return out;
}

inline std::string print_marking(const NestedMarking& mu) {
  std::string out;
  for (const auto& [tok, c] : mu) {
    std::string one = tok.place + "{";
    for (const auto& [q, k] : tok.inner) one += " " + q + ":" + std::to_string(k);
    one += " }";
    for (Count i = 0; i < c; ++i) out += (out.empty() ? "" : " ") + one;
  }
  return out;
}

// Inline tuples, e.g. "[0 1] [1 0]".
inline Config parse_config(std::string_view s, std::size_t arity) {
  auto lines = text::split_lines(s);
  std::vector<text::Token> toks;
  for (auto& l : lines)
    for (auto& t : l.tokens) toks.push_back(std::move(t));
  return text::parse_vectors(toks, 0, arity);
}

// Inline nested tokens, e.g. "sim{ p:1 } selectTran{ }".
inline NestedMarking parse_marking(std::string_view s) {
  auto lines = text::split_lines(s);
  std::vector<text::Token> toks;
  for (auto& l : lines)
    for (auto& t : l.tokens) toks.push_back(std::move(t));
  return text::parse_tokens(toks, 0);
}

/// Parses a νPN file. With `check`, structural violations are raised as an
/// InputError listing each failed clause.
inline NuPnFile parse_nupn(std::string_view src, bool check = true) {
  using text::fail;
  using text::ident;
  auto lines = text::split_lines(src);
  if (lines.empty()) throw ParseError(1, 1, "empty file, expected 'nupn'");
  if (lines[0].tokens[0].text != "nupn" || lines[0].tokens.size() != 1)
    fail(lines[0].tokens[0], "expected header 'nupn'");

  NuPnFile file;
  bool have_places = false;
  std::optional<std::string> open_trans;
  text::Token open_tok;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& toks = lines[li].tokens;
    const auto& kw = toks[0];
    if (open_trans) {
      auto& tr = file.net.transitions[*open_trans];
      if (kw.text == "end") {
        if (toks.size() != 1) fail(toks[1], "unexpected token after 'end'");
        open_trans.reset();
      } else if (kw.text == "in" || kw.text == "out") {
        std::size_t i = 1;
        std::string place = text::name_then_colon(toks, i, kw, "a place");
        if (i >= toks.size()) fail(kw, "arc without variables");
        auto& bag = (kw.text == "in" ? tr.in : tr.out)[place];
        for (; i < toks.size(); ++i) bag.insert(ident(toks[i], "a variable"));
      } else {
        fail(kw, "expected 'in', 'out' or 'end' inside transition '" +
                     *open_trans + "'");
      }
      continue;
    }
    if (kw.text == "places") {
      if (have_places) fail(kw, "duplicate 'places' line");
      have_places = true;
      for (std::size_t i = 1; i < toks.size(); ++i)
        file.net.places.push_back(ident(toks[i], "a place name"));
    } else if (kw.text == "vars" || kw.text == "fresh") {
      auto& set = kw.text == "vars" ? file.net.standard_vars : file.net.fresh_vars;
      for (std::size_t i = 1; i < toks.size(); ++i)
        set.insert(ident(toks[i], "a variable name"));
    } else if (kw.text == "trans") {
      if (!have_places) fail(kw, "'places' must be declared before transitions");
      if (toks.size() != 2) fail(kw, "expected 'trans <name>'");
      const auto& name = ident(toks[1], "a transition name");
      if (file.net.transitions.count(name))
        fail(toks[1], "duplicate transition '" + name + "'");
      file.net.transitions[name];
      open_trans = name;
      open_tok = kw;
    } else if (kw.text == "init" || kw.text == "target") {
      if (!have_places) fail(kw, "'places' must be declared before configurations");
      auto& slot = kw.text == "init" ? file.init : file.target;
      if (slot) fail(kw, "duplicate '" + kw.text + "' line");
      slot = text::parse_vectors(toks, 1, file.net.arity());
    } else {
      fail(kw, "unknown keyword '" + kw.text + "'");
    }
  }
  if (open_trans) text::fail(open_tok, "transition '" + *open_trans + "' lacks 'end'");
  if (!have_places) throw ParseError(lines.back().number, 1, "missing 'places' line");
  if (check) require_valid(file.net);
  return file;
}

inline std::string print_nupn(const NuPnFile& file) {
  const NuPn& d = file.net;
  std::ostringstream os;
  os << "nupn\nplaces";
  for (const auto& p : d.places) os << ' ' << p;
  os << '\n';
  if (!d.standard_vars.empty()) {
    os << "vars";
    for (const auto& v : d.standard_vars) os << ' ' << v;
    os << '\n';
  }
  if (!d.fresh_vars.empty()) {
    os << "fresh";
    for (const auto& v : d.fresh_vars) os << ' ' << v;
    os << '\n';
  }
  for (const auto& [t, tr] : d.transitions) {
    os << "trans " << t << '\n';
    for (const auto& [kw, side] : {std::pair{"in", &tr.in}, std::pair{"out", &tr.out}})
      for (const auto& p : d.places) {
        auto it = side->find(p);
        if (it == side->end() || it->second.empty()) continue;
        os << "  " << kw << ' ' << p << " :";
        for (const auto& v : it->second.expand()) os << ' ' << v;
        os << '\n';
      }
    os << "end\n";
  }
  if (file.init) os << "init" << (file.init->empty() ? "" : " ") << print_config(*file.init) << '\n';
  if (file.target)
    os << "target" << (file.target->empty() ? "" : " ") << print_config(*file.target) << '\n';
  return os.str();
}

inline std::string print_nupn(const NuPn& d) { return print_nupn(NuPnFile{d, {}, {}}); }

namespace text {

// Body of `objectnet` / `system` sections: places line plus trans blocks with
// integer weights. Typed places (`name:Type`) are accepted only when typing
// is non-null.
inline std::size_t parse_net_body(const std::vector<Line>& lines, std::size_t li,
                                  const Token& section, PetriNet& net,
                                  std::map<std::string, std::string>* typing) {
  bool have_places = false;
  for (; li < lines.size(); ++li) {
    const auto& toks = lines[li].tokens;
    const auto& kw = toks[0];
    if (kw.text == "end") {
      if (toks.size() != 1) fail(toks[1], "unexpected token after 'end'");
      return li + 1;
    }
    if (kw.text == "places") {
      if (have_places) fail(kw, "duplicate 'places' line");
      have_places = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (typing) {
          auto colon = single_colon(t.text);
          if (!colon) fail(t, "expected 'place:Type', got '" + t.text + "'");
          Token name{t.text.substr(0, *colon), t.line, t.col};
          Token type{t.text.substr(*colon + 1), t.line, t.col + *colon + 1};
          const auto& p = ident(name, "a place name");
          if (net.has_place(p)) fail(name, "duplicate place '" + p + "'");
          net.add_place(p);
          (*typing)[p] = ident(type, "a net name");
        } else {
          const auto& p = ident(t, "a place name");
          if (net.has_place(p)) fail(t, "duplicate place '" + p + "'");
          net.add_place(p);
        }
      }
    } else if (kw.text == "trans") {
      if (!have_places) fail(kw, "'places' must be declared before transitions");
      if (toks.size() != 2) fail(kw, "expected 'trans <name>'");
      const Token& name_tok = toks[1];
      std::string name = ident(name_tok, "a transition name");
      Marking pre, post;
      ++li;
      for (;; ++li) {
        if (li >= lines.size()) fail(kw, "transition '" + name + "' lacks 'end'");
        const auto& arc = lines[li].tokens;
        if (arc[0].text == "end") {
          if (arc.size() != 1) fail(arc[1], "unexpected token after 'end'");
          break;
        }
        if (arc[0].text != "in" && arc[0].text != "out")
          fail(arc[0], "expected 'in', 'out' or 'end' inside transition '" + name + "'");
        std::size_t i = 1;
        std::string place = name_then_colon(arc, i, arc[0], "a place");
        if (!net.has_place(place)) fail(arc[1], "unknown place '" + place + "'");
        if (i + 1 != arc.size()) fail(arc[0], "expected '<place> : <weight>'");
        (arc[0].text == "in" ? pre : post).insert(place, number(arc[i]));
      }
      try {
        net.add_transition(name, std::move(pre), std::move(post));
      } catch (const InputError& e) {
        fail(name_tok, e.what());
      }
    } else {
      fail(kw, "expected 'places', 'trans' or 'end' in section '" + section.text + "'");
    }
  }
  fail(section, "section '" + section.text + "' lacks 'end'");
}

// `event <label> = <trans> [with <Net>: t t ; <Net>: t]`
inline Event parse_event(const std::vector<Token>& toks) {
  const Token& kw = toks[0];
  if (toks.size() < 4 || toks[2].text != "=")
    fail(kw, "expected 'event <name> = <transition> [with ...]'");
  Event e;
  e.label = ident(toks[1], "an event name");
  e.sys_transition = ident(toks[3], "a system transition");
  std::size_t i = 4;
  if (i == toks.size()) return e;
  if (toks[i].text != "with") fail(toks[i], "expected 'with'");
  ++i;
  while (i < toks.size()) {
    std::string net = name_then_colon(toks, i, kw, "a net name");
    auto& bag = e.theta[net];
    while (i < toks.size() && toks[i].text != ";")
      bag.insert(ident(toks[i++], "an object transition"));
    if (i < toks.size()) ++i;
  }
  return e;
}

}  // namespace text

inline EosFile parse_eos(std::string_view src) {
  using text::fail;
  auto lines = text::split_lines(src);
  if (lines.empty()) throw ParseError(1, 1, "empty file, expected 'eos'");
  if (lines[0].tokens[0].text != "eos" || lines[0].tokens.size() != 1)
    fail(lines[0].tokens[0], "expected header 'eos'");

  EosParts parts;
  bool have_system = false;
  std::optional<std::pair<text::Token, NestedMarking>> init, target;
  std::size_t li = 1;
  while (li < lines.size()) {
    const auto& toks = lines[li].tokens;
    const auto& kw = toks[0];
    if (kw.text == "objectnet") {
      if (toks.size() != 2) fail(kw, "expected 'objectnet <name>'");
      const auto& name = text::ident(toks[1], "a net name");
      if (parts.object_nets.count(name)) fail(toks[1], "duplicate object net '" + name + "'");
      PetriNet net;
      li = text::parse_net_body(lines, li + 1, kw, net, nullptr);
      parts.object_nets.emplace(name, std::move(net));
    } else if (kw.text == "system") {
      if (have_system) fail(kw, "duplicate 'system' section");
      have_system = true;
      li = text::parse_net_body(lines, li + 1, kw, parts.system, &parts.typing);
    } else if (kw.text == "events") {
      ++li;
      for (;; ++li) {
        if (li >= lines.size()) fail(kw, "section 'events' lacks 'end'");
        const auto& ev = lines[li].tokens;
        if (ev[0].text == "end") break;
        if (ev[0].text != "event") fail(ev[0], "expected 'event' or 'end'");
        parts.events.push_back(text::parse_event(ev));
      }
      ++li;
    } else if (kw.text == "init" || kw.text == "target") {
      auto& slot = kw.text == "init" ? init : target;
      if (slot) fail(kw, "duplicate '" + kw.text + "' line");
      slot.emplace(kw, text::parse_tokens(toks, 1));
      ++li;
    } else {
      fail(kw, "unknown keyword '" + kw.text + "'");
    }
  }
  if (!have_system) throw ParseError(lines.back().number, 1, "missing 'system' section");
  EosFile file{Eos(std::move(parts)), std::nullopt, std::nullopt};
  for (auto* slot : {&init, &target}) {
    if (!*slot) continue;
    try {
      file.eos.validate_marking((*slot)->second);
    } catch (const InputError& e) {
      fail((*slot)->first, e.what());
    }
  }
  if (init) file.init = std::move(init->second);
  if (target) file.target = std::move(target->second);
  return file;
}

namespace text {

inline void print_net_body(std::ostream& os, const PetriNet& net,
                           const std::map<std::string, std::string>* typing,
                           const Eos* skip_idle) {
  os << "  places";
  for (const auto& p : net.places()) {
    os << ' ' << p;
    if (typing) os << ':' << typing->at(p);
  }
  os << '\n';
  for (const auto& [t, f] : net.transitions()) {
    if (skip_idle && skip_idle->is_idle(t)) continue;
    os << "  trans " << t << '\n';
    for (const auto& [p, c] : f.pre) os << "    in " << p << " : " << c << '\n';
    for (const auto& [p, c] : f.post) os << "    out " << p << " : " << c << '\n';
    os << "  end\n";
  }
}

}  // namespace text

inline std::string print_eos(const EosFile& file) {
  const Eos& eos = file.eos;
  std::ostringstream os;
  os << "eos\n";
  for (const auto& [name, net] : eos.object_nets()) {
    if (name == kBlackNet) continue;
    os << "objectnet " << name << '\n';
    text::print_net_body(os, net, nullptr, nullptr);
    os << "end\n";
  }
  os << "system\n";
  text::print_net_body(os, eos.system(), &eos.typing(), &eos);
  os << "end\n";
  if (!eos.events().empty()) {
    os << "events\n";
    for (const auto& e : eos.events()) {
      os << "  event " << e.label << " = " << e.sys_transition;
      bool first = true;
      for (const auto& [net, bag] : e.theta) {
        if (bag.empty()) continue;
        os << (first ? " with " : " ; ") << net << ':';
        for (const auto& t : bag.expand()) os << ' ' << t;
        first = false;
      }
      os << '\n';
    }
    os << "end\n";
  }
  if (file.init) os << "init" << (file.init->empty() ? "" : " ") << print_marking(*file.init) << '\n';
  if (file.target)
    os << "target" << (file.target->empty() ? "" : " ") << print_marking(*file.target) << '\n';
  return os.str();
}

inline std::string print_eos(const Eos& eos) { return print_eos(EosFile{eos, {}, {}}); }

// generated-id, role, source-transition, source-variable; '-' for empty.
inline std::string print_name_table(const NameTable& names) {
  std::ostringstream os;
  os << "generated_id\trole\tsource_transition\tsource_variable\n";
  for (const auto& [id, e] : names.entries())
    os << id << '\t' << e.role << '\t'
       << (e.source_transition.empty() ? "-" : e.source_transition) << '\t'
       << (e.source_variable.empty() ? "-" : e.source_variable) << '\n';
  return os.str();
}

// "nupn" or "eos", from the first non-comment token.
inline std::string detect_kind(std::string_view src) {
  auto lines = text::split_lines(src);
  if (lines.empty()) throw ParseError(1, 1, "empty file");
  const auto& first = lines[0].tokens[0];
  if (first.text == "nupn" || first.text == "eos") return first.text;
  text::fail(first, "expected header 'nupn' or 'eos'");
}

// --- steps and witnesses --------------------------------------------------

inline std::string print_nu_step(const Config& before, const NuStep& step) {
  auto occ = occurrences(before);
  std::string out = step.transition;
  for (const auto& [x, idx] : step.mode.assignment)
    out += " " + x + "=" + (idx < occ.size() ? text::vec_text(occ[idx]) : "?");
  return out;
}

inline std::string print_eos_step(const EosStep& step) {
  return step.event + " lambda: " + print_marking(step.mode.lambda) +
         " rho: " + print_marking(step.mode.rho);
}

template <typename State, typename Step, typename ShowState, typename ShowStep>
std::string print_answer(const CoverAnswer<State, Step>& a, ShowState show_state,
                         ShowStep show_step) {
  std::ostringstream os;
  if (!a.covered) {
    os << "not covered within depth " << a.depth << " (" << a.states_explored
       << " states)\n";
    return os.str();
  }
  os << "covered in " << a.witness.size() << " step(s) (" << a.states_explored
     << " states)\n";
  os << "  state 0: " << show_state(a.trace[0]) << '\n';
  for (std::size_t i = 0; i < a.witness.size(); ++i) {
    os << "  fire " << show_step(a.trace[i], a.witness[i]) << '\n';
    os << "  state " << i + 1 << ": " << show_state(a.trace[i + 1]) << '\n';
  }
  return os.str();
}

inline std::string print_answer(const CoverAnswer<Config, NuStep>& a) {
  return print_answer(
      a, [](const Config& m) { return "{" + print_config(m) + "}"; },
      [](const Config& before, const NuStep& s) { return print_nu_step(before, s); });
}

inline std::string print_answer(const CoverAnswer<NestedMarking, EosStep>& a) {
  return print_answer(
      a, [](const NestedMarking& mu) { return print_marking(mu); },
      [](const NestedMarking&, const EosStep& s) { return print_eos_step(s); });
}

// --- DOT ------------------------------------------------------------------

namespace dot {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline void arcs(std::ostream& os, const std::string& prefix, const PetriNet& net,
                 const Eos* skip_idle) {
  for (const auto& [t, f] : net.transitions()) {
    if (skip_idle && skip_idle->is_idle(t)) continue;
    for (const auto& [p, c] : f.pre) {
      os << "  " << quote(prefix + "p:" + p) << " -> " << quote(prefix + "t:" + t);
      if (c > 1) os << " [label=" << quote(std::to_string(c)) << "]";
      os << ";\n";
    }
    for (const auto& [p, c] : f.post) {
      os << "  " << quote(prefix + "t:" + t) << " -> " << quote(prefix + "p:" + p);
      if (c > 1) os << " [label=" << quote(std::to_string(c)) << "]";
      os << ";\n";
    }
  }
}

inline void system_net(std::ostream& os, const Eos& eos,
                       const NestedMarking* marking) {
  std::map<std::string, Count> black_tokens;
  if (marking)
    for (const auto& [tok, c] : *marking)
      if (eos.type_of(tok.place) == kBlackNet) black_tokens[tok.place] += c;

  for (const auto& p : eos.system().places()) {
    bool black = eos.type_of(p) == kBlackNet;
    std::string label = p;
    if (auto it = black_tokens.find(p); it != black_tokens.end())
      label += "\n" + (it->second > 2 ? std::to_string(it->second)
                                      : std::string(it->second == 1 ? "■" : "■■"));
    os << "  " << quote("p:" + p) << " [shape=" << (black ? "triangle" : "circle")
       << ", label=" << quote(label) << "];\n";
  }
  std::map<std::string, std::vector<const Event*>> by_transition;
  for (const auto& e : eos.events()) by_transition[e.sys_transition].push_back(&e);
  for (const auto& [t, f] : eos.system().transitions()) {
    auto evs = by_transition.find(t);
    if (eos.is_idle(t) && evs == by_transition.end()) continue;
    std::string label = t;
    if (evs != by_transition.end())
      for (const Event* e : evs->second) {
        std::string theta;
        for (const auto& [net, bag] : e->theta)
          for (const auto& tr : bag.expand()) theta += (theta.empty() ? "" : ", ") + tr;
        if (!theta.empty()) label += "\n⟨" + theta + "⟩";
      }
    os << "  " << quote("t:" + t) << " [shape=box, label=" << quote(label) << "];\n";
  }
  arcs(os, "", eos.system(), &eos);

  if (!marking) return;
  std::size_t k = 0;
  for (const auto& [tok, c] : *marking) {
    if (eos.type_of(tok.place) == kBlackNet) continue;
    for (Count i = 0; i < c; ++i, ++k) {
      std::string id = "tok:" + std::to_string(k);
      os << "  subgraph " << quote("cluster_" + id) << " {\n"
         << "    label=" << quote(eos.type_of(tok.place)) << ";\n"
         << "    style=dashed;\n"
         << "    " << quote(id) << " [shape=note, label=" << quote(render(tok.inner))
         << "];\n  }\n";
      os << "  " << quote("p:" + tok.place) << " -> " << quote(id)
         << " [style=dashed, arrowhead=none];\n";
    }
  }
}

}  // namespace dot

inline std::string emit_dot(const PetriNet& net, const std::string& name = "net") {
  std::ostringstream os;
  os << "digraph " << dot::quote(name) << " {\n";
  for (const auto& p : net.places())
    os << "  " << dot::quote("p:" + p) << " [shape=circle, label=" << dot::quote(p)
       << "];\n";
  for (const auto& [t, f] : net.transitions())
    os << "  " << dot::quote("t:" + t) << " [shape=box, label=" << dot::quote(t)
       << "];\n";
  dot::arcs(os, "", net, nullptr);
  os << "}\n";
  return os.str();
}

/// System net (circles for typed places, triangles for ■ places, event
/// labels ⟨θ⟩) followed by one dashed cluster per object net.
inline std::string emit_dot(const Eos& eos, const NestedMarking* marking = nullptr) {
  std::ostringstream os;
  os << "digraph \"eos\" {\n  rankdir=LR;\n";
  dot::system_net(os, eos, marking);
  for (const auto& [name, net] : eos.object_nets()) {
    if (name == kBlackNet) continue;
    std::string prefix = name + "/";
    os << "  subgraph " << dot::quote("cluster_net:" + name) << " {\n"
       << "    label=" << dot::quote(name) << ";\n    style=dashed;\n";
    for (const auto& p : net.places())
      os << "    " << dot::quote(prefix + "p:" + p) << " [shape=circle, label="
         << dot::quote(p) << "];\n";
    for (const auto& [t, f] : net.transitions())
      os << "    " << dot::quote(prefix + "t:" + t) << " [shape=box, label="
         << dot::quote(t) << "];\n";
    os << "  }\n";
    dot::arcs(os, prefix, net, nullptr);
  }
  os << "}\n";
  return os.str();
}

inline std::string emit_dot(const Eos& eos, const NestedMarking& marking) {
  return emit_dot(eos, &marking);
}

inline std::string emit_dot(const NuPn& d) {
  std::ostringstream os;
  os << "digraph \"nupn\" {\n  rankdir=LR;\n";
  for (const auto& p : d.places)
    os << "  " << dot::quote("p:" + p) << " [shape=circle, label=" << dot::quote(p)
       << "];\n";
  for (const auto& [t, tr] : d.transitions) {
    os << "  " << dot::quote("t:" + t) << " [shape=box, label=" << dot::quote(t)
       << "];\n";
    for (const auto& [p, bag] : tr.in)
      os << "  " << dot::quote("p:" + p) << " -> " << dot::quote("t:" + t)
         << " [label=" << dot::quote(render(bag)) << "];\n";
    for (const auto& [p, bag] : tr.out)
      os << "  " << dot::quote("t:" + t) << " -> " << dot::quote("p:" + p)
         << " [label=" << dot::quote(render(bag)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

/// A witness as a chain of marking snapshots joined by the fired steps.
template <typename State, typename Step, typename ShowState, typename StepLabel>
std::string emit_witness_dot(const CoverAnswer<State, Step>& a, ShowState show_state,
                             StepLabel step_label) {
  std::ostringstream os;
  os << "digraph \"witness\" {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < a.trace.size(); ++i)
    os << "  " << dot::quote("s" + std::to_string(i)) << " [shape=box, label="
       << dot::quote(show_state(a.trace[i])) << "];\n";
  for (std::size_t i = 0; i < a.witness.size(); ++i)
    os << "  " << dot::quote("s" + std::to_string(i)) << " -> "
       << dot::quote("s" + std::to_string(i + 1))
       << " [label=" << dot::quote(step_label(a.witness[i])) << "];\n";
  os << "}\n";
  return os.str();
}

inline std::string emit_dot(const CoverAnswer<NestedMarking, EosStep>& a) {
  return emit_witness_dot(
      a, [](const NestedMarking& mu) { return print_marking(mu); },
      [](const EosStep& s) { return s.event; });
}

inline std::string emit_dot(const CoverAnswer<Config, NuStep>& a) {
  return emit_witness_dot(
      a, [](const Config& m) { return "{" + print_config(m) + "}"; },
      [](const NuStep& s) { return s.transition; });
}

}  // namespace eosnu
