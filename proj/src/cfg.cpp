#include "dcc/cfg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

#include "dcc/text_io.hpp"

namespace dcc::cfg {

namespace {

bool all_nonterminal(const std::vector<Symbol>& syms) {
  return !syms.empty() &&
         std::none_of(syms.begin(), syms.end(), [](const Symbol& s) { return s.terminal; });
}

bool is_terminal_rule(const Rule& r) {
  auto v = r.visible();
  return v.size() == 1 && v[0].terminal;
}

bool is_nonterminal_rule(const Rule& r) { return all_nonterminal(r.visible()); }

std::set<std::string> all_names(const Cfg& g) {
  std::set<std::string> names = g.nonterminals();
  names.insert(std::string(kEpsilon));
  return names;
}

// Yields prefix1, prefix2, ... skipping names already in use.
class FreshNames {
 public:
  FreshNames(std::string prefix, std::set<std::string> taken)
      : prefix_(std::move(prefix)), taken_(std::move(taken)) {}
  std::string next() {
    while (true) {
      std::string name = prefix_ + std::to_string(++counter_);
      if (taken_.insert(name).second) return name;
    }
  }

 private:
  std::string prefix_;
  std::set<std::string> taken_;
  int counter_ = 0;
};

std::vector<Symbol> tokenize_alternative(std::string_view alt, std::size_t line_no) {
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < alt.size()) {
    if (std::isspace(static_cast<unsigned char>(alt[i]))) {
      ++i;
      continue;
    }
    if (alt[i] == '"') {
      auto close = alt.find('"', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated terminal", line_no);
      if (close == i + 1) throw ParseError("empty terminal", line_no);
      out.push_back({std::string(alt.substr(i + 1, close - i - 1)), true});
      i = close + 1;
      continue;
    }
    std::size_t j = i;
    while (j < alt.size() && !std::isspace(static_cast<unsigned char>(alt[j])) && alt[j] != '"') ++j;
    out.push_back({std::string(alt.substr(i, j - i)), false});
    i = j;
  }
  if (out.empty()) throw ParseError("empty alternative", line_no);
  return out;
}

}  // namespace

bool liftable(ViolationKind kind) {
  return kind == ViolationKind::mixed_rule || kind == ViolationKind::basic_and_complex;
}

std::vector<Symbol> Rule::visible() const {
  std::vector<Symbol> out;
  for (const auto& s : rhs)
    if (!s.is_epsilon()) out.push_back(s);
  return out;
}

std::string Rule::to_string() const {
  std::string out = lhs + " ->";
  for (const auto& s : rhs) out += s.terminal ? " \"" + s.name + "\"" : " " + s.name;
  return out;
}

std::set<std::string> Cfg::nonterminals() const {
  std::set<std::string> out;
  for (const auto& r : rules) {
    out.insert(r.lhs);
    for (const auto& s : r.rhs)
      if (!s.terminal && !s.is_epsilon()) out.insert(s.name);
  }
  if (!start.empty()) out.insert(start);
  return out;
}

std::set<std::string> Cfg::terminals() const {
  std::set<std::string> out;
  for (const auto& r : rules)
    for (const auto& s : r.rhs)
      if (s.terminal) out.insert(s.name);
  return out;
}

Cfg parse_grammar(std::string_view text) {
  Cfg g;
  auto lines = text::split(text, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = text::trim(line);
    if (line.empty()) continue;
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw ParseError("expected '->'", n + 1);
    std::string lhs(text::trim(line.substr(0, arrow)));
    if (lhs.empty() || lhs.find_first_of(" \t\"") != std::string::npos)
      throw ParseError("bad left-hand side '" + lhs + "'", n + 1);
    if (lhs == kEpsilon) throw ParseError("EPS cannot be a left-hand side", n + 1);
    if (g.start.empty()) g.start = lhs;

    std::string_view body = line.substr(arrow + 2);
    std::vector<std::string_view> alts;
    quoted = false;
    std::size_t from = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '|' && !quoted) {
        alts.push_back(body.substr(from, i - from));
        from = i + 1;
      }
    }
    alts.push_back(body.substr(from));
    for (auto alt : alts) g.rules.push_back({lhs, tokenize_alternative(alt, n + 1)});
  }
  if (g.rules.empty()) throw ParseError("grammar has no rules", 0);
  return g;
}

Cfg load_grammar(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_grammar(all);
}

std::string format_grammar(const Cfg& g) {
  std::ostringstream out;
  for (const auto& r : g.rules) out << r.to_string() << '\n';
  return out.str();
}

ValidationReport validate(const Cfg& g) {
  ValidationReport rep;
  auto add = [&](ViolationKind k, std::string subject, std::string reason) {
    rep.violations.push_back({k, std::move(subject), std::move(reason)});
  };

  std::set<std::string> lhs_set;
  for (const auto& r : g.rules) lhs_set.insert(r.lhs);

  for (const auto& r : g.rules) {
    auto vis = r.visible();
    if (vis.empty()) {
      add(ViolationKind::empty_production, r.to_string(), "right-hand side is only EPS");
      continue;
    }
    if (vis.size() > 2) rep.binarized = false;
    bool has_t = std::any_of(vis.begin(), vis.end(), [](const Symbol& s) { return s.terminal; });
    bool has_nt = std::any_of(vis.begin(), vis.end(), [](const Symbol& s) { return !s.terminal; });
    if (has_t && has_nt)
      add(ViolationKind::mixed_rule, r.to_string(), "mixes terminals and non-terminals");
    else if (has_t && vis.size() > 1)
      add(ViolationKind::mixed_rule, r.to_string(), "produces more than one terminal");
    else if (has_t)
      rep.basic_types.insert(r.lhs);
    else
      rep.complex_types.insert(r.lhs);
  }
  for (const auto& sym : rep.basic_types)
    if (rep.complex_types.count(sym))
      add(ViolationKind::basic_and_complex, sym, "lhs of both terminal and non-terminal rules");

  for (const auto& nt : g.nonterminals())
    if (!lhs_set.count(nt))
      add(ViolationKind::undefined_nonterminal, nt, "never on a left-hand side");

  // reachability over all symbols
  std::set<std::string> seen_nt{g.start};
  std::set<std::string> seen_t;
  std::vector<std::string> stack{g.start};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    for (const auto& r : g.rules) {
      if (r.lhs != cur) continue;
      for (const auto& s : r.visible()) {
        if (s.terminal)
          seen_t.insert(s.name);
        else if (seen_nt.insert(s.name).second)
          stack.push_back(s.name);
      }
    }
  }
  for (const auto& nt : g.nonterminals())
    if (!seen_nt.count(nt)) add(ViolationKind::unreachable, nt, "unreachable from " + g.start);
  for (const auto& t : g.terminals())
    if (!seen_t.count(t)) add(ViolationKind::unreachable, "\"" + t + "\"", "unreachable from " + g.start);

  // unit-rule cycles
  std::map<std::string, std::set<std::string>> unit;
  for (const auto& r : g.rules) {
    auto vis = r.visible();
    if (vis.size() == 1 && !vis[0].terminal) unit[r.lhs].insert(vis[0].name);
  }
  for (const auto& [from, _] : unit) {
    std::set<std::string> visited;
    std::vector<std::string> todo(unit[from].begin(), unit[from].end());
    bool cyclic = false;
    while (!todo.empty() && !cyclic) {
      auto cur = todo.back();
      todo.pop_back();
      if (cur == from) cyclic = true;
      if (!visited.insert(cur).second) continue;
      auto it = unit.find(cur);
      if (it != unit.end()) todo.insert(todo.end(), it->second.begin(), it->second.end());
    }
    if (cyclic) add(ViolationKind::unit_cycle, from, "derives itself through unary rules");
  }

  rep.pseudo_proper = rep.violations.empty();
  return rep;
}

Cfg binarize(const Cfg& g) {
  FreshNames fresh("_Bin", all_names(g));
  Cfg out{g.start, {}};
  for (const auto& r : g.rules) {
    auto vis = r.visible();
    if (vis.size() <= 2) {
      out.rules.push_back(r);
      continue;
    }
    std::string lhs = r.lhs;
    while (vis.size() > 2) {
      std::string prefix = fresh.next();
      out.rules.push_back({lhs, {Symbol{prefix, false}, vis.back()}});
      vis.pop_back();
      lhs = prefix;
    }
    out.rules.push_back({lhs, vis});
  }
  return out;
}

Cfg lift_terminals(const Cfg& g) {
  FreshNames fresh("_T", all_names(g));
  std::set<std::string> complex_lhs;
  for (const auto& r : g.rules)
    if (!is_terminal_rule(r) && !r.visible().empty()) complex_lhs.insert(r.lhs);

  Cfg out{g.start, {}};
  std::map<std::string, std::string> word_symbol;  // word in a mixed rule -> fresh basic type
  std::map<std::string, std::string> lhs_symbol;   // complex lhs -> fresh basic type
  auto emit_once = [&](const Rule& r) {
    if (std::find(out.rules.begin(), out.rules.end(), r) == out.rules.end()) out.rules.push_back(r);
  };

  for (const auto& r : g.rules) {
    auto vis = r.visible();
    if (is_terminal_rule(r) && complex_lhs.count(r.lhs)) {
      auto [it, inserted] = lhs_symbol.try_emplace(r.lhs);
      if (inserted) it->second = fresh.next();
      emit_once({r.lhs, {Symbol{it->second, false}}});
      emit_once({it->second, {vis[0]}});
      continue;
    }
    bool needs_lift = std::any_of(vis.begin(), vis.end(), [](const Symbol& s) { return s.terminal; }) &&
                      !is_terminal_rule(r);
    if (!needs_lift) {
      out.rules.push_back(r);
      continue;
    }
    Rule rewritten{r.lhs, {}};
    std::vector<Rule> added;
    for (const auto& s : r.rhs) {
      if (!s.terminal) {
        rewritten.rhs.push_back(s);
        continue;
      }
      auto [it, inserted] = word_symbol.try_emplace(s.name);
      if (inserted) {
        it->second = fresh.next();
        added.push_back({it->second, {s}});
      }
      rewritten.rhs.push_back({it->second, false});
    }
    out.rules.push_back(rewritten);
    for (auto& a : added) out.rules.push_back(std::move(a));
  }
  return out;
}

const PregroupType& TypeDictionary::type_of(const std::string& nonterminal) const {
  auto it = nonterminal_types.find(nonterminal);
  if (it == nonterminal_types.end()) throw Error("no type for non-terminal " + nonterminal);
  return it->second;
}

TypeDictionary initial_dictionary(const Cfg& g) {
  TypeDictionary d;
  std::set<std::string> used;
  for (const auto& nt : g.nonterminals()) {
    std::string base = nt;
    std::transform(base.begin(), base.end(), base.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string name = base;
    for (int k = 2; !used.insert(name).second; ++k) name = base + std::to_string(k);
    d.nonterminal_types[nt] = PregroupType::atom(name);
  }
  d.nonterminal_types[std::string(kEpsilon)] = PregroupType{};
  return d;
}

std::vector<Rule> nonterminal_rules(const Cfg& g) {
  std::vector<Rule> out;
  for (const auto& r : g.rules)
    if (is_nonterminal_rule(r)) out.push_back(r);
  return out;
}

namespace {

TypeDictionary substituted(const TypeDictionary& d, const std::string& atom, const PregroupType& value) {
  TypeDictionary out;
  for (const auto& [sym, t] : d.nonterminal_types) out.nonterminal_types[sym] = substitute(t, atom, value);
  return out;
}

// Children of one inference-tree node for one rule, left child first.
std::vector<TypeDictionary> expand(const TypeDictionary& d0, const TypeDictionary& dj, const Rule& rule) {
  std::vector<TypeDictionary> children;
  auto vis = rule.visible();
  const auto& a = dj.type_of(rule.lhs);

  // a symbol can still be refined only while it holds its initial atom
  auto untouched = [&](const std::string& sym) { return dj.type_of(sym) == d0.type_of(sym); };
  auto atom_of = [&](const std::string& sym) { return d0.type_of(sym).atoms().front().name; };

  if (vis.size() == 1) {
    const std::string& b_sym = vis[0].name;
    const auto& b = dj.type_of(b_sym);
    if (b == a) {
      children.push_back(dj);
    } else if (untouched(b_sym) && !a.mentions(atom_of(b_sym))) {
      children.push_back(substituted(dj, atom_of(b_sym), a));
    } else if (reduces_to(b.atoms(), a.atoms())) {
      children.push_back(dj);
    }
    return children;
  }

  const std::string& b_sym = vis[0].name;
  const std::string& c_sym = vis[1].name;
  const auto& b = dj.type_of(b_sym);
  const auto& c = dj.type_of(c_sym);

  // left element compound: B := A C^l
  if (b_sym != rule.lhs && untouched(b_sym)) {
    const auto name = atom_of(b_sym);
    if (!a.mentions(name) && !c.mentions(name))
      children.push_back(substituted(dj, name, a * adjoint(c, Side::left)));
  }
  // right element compound: C := B^r A
  if (c_sym != rule.lhs && untouched(c_sym)) {
    const auto name = atom_of(c_sym);
    if (!a.mentions(name) && !b.mentions(name))
      children.push_back(substituted(dj, name, adjoint(b, Side::right) * a));
  }
  if (children.empty()) {
    std::vector<Atom> bc = (b * c).atoms();
    if (reduces_to(bc, a.atoms())) children.push_back(dj);
  }
  return children;
}

}  // namespace

std::vector<TypeDictionary> infer_types(const Cfg& g, InferenceMode mode) {
  const TypeDictionary d0 = initial_dictionary(g);
  const auto rules = nonterminal_rules(g);

  if (mode == InferenceMode::fast) {
    // Depth-first, left child first, backing up only out of dead ends, so the
    // result is the first leaf of the full tree.
    std::size_t deepest = 0;
    std::function<std::optional<TypeDictionary>(const TypeDictionary&, std::size_t)> descend =
        [&](const TypeDictionary& dj, std::size_t k) -> std::optional<TypeDictionary> {
      if (k == rules.size()) return dj;
      deepest = std::max(deepest, k);
      for (const auto& child : expand(d0, dj, rules[k]))
        if (auto leaf = descend(child, k + 1)) return leaf;
      return std::nullopt;
    };
    auto leaf = descend(d0, 0);
    if (!leaf) throw InferenceDeadlock(rules[deepest]);
    return {*leaf};
  }

  std::vector<TypeDictionary> boundary{d0};
  for (const auto& rule : rules) {
    std::vector<TypeDictionary> next;
    for (const auto& dj : boundary) {
      for (auto& c : expand(d0, dj, rule)) next.push_back(std::move(c));
    }
    if (next.empty()) throw InferenceDeadlock(rule);
    boundary = std::move(next);
  }
  return boundary;
}

TypeDictionary term_dictionary(const Cfg& g, const TypeDictionary& d) {
  TypeDictionary out = d;
  out.term_types = Lexicon{};
  std::set<std::string> complex;
  for (const auto& r : g.rules)
    if (is_nonterminal_rule(r)) complex.insert(r.lhs);
  for (const auto& r : g.rules) {
    auto vis = r.visible();
    if (vis.empty() || !std::any_of(vis.begin(), vis.end(), [](const Symbol& s) { return s.terminal; }))
      continue;
    if (!is_terminal_rule(r))
      throw RestrictionViolation("rule " + r.to_string() + " mixes terminals; lift terminals first");
    if (complex.count(r.lhs))
      throw RestrictionViolation("terminal \"" + vis[0].name + "\" produced by complex type " + r.lhs);
    out.term_types.add(vis[0].name, d.type_of(r.lhs));
  }
  return out;
}

Cfg normalize(const Cfg& g) {
  auto rep = validate(g);
  std::string fatal;
  for (const auto& v : rep.violations)
    if (!liftable(v.kind)) fatal += "\n  " + v.subject + ": " + v.reason;
  if (!fatal.empty()) throw RestrictionViolation("grammar is not pseudo-proper:" + fatal);
  Cfg n = binarize(lift_terminals(g));
  auto after = validate(n);
  if (!after.pseudo_proper || !after.binarized)
    throw RestrictionViolation("grammar still violates restrictions after normalisation");
  return n;
}

std::vector<TypeDictionary> translate(const Cfg& g, InferenceMode mode) {
  Cfg n = normalize(g);
  auto dicts = infer_types(n, mode);
  for (auto& d : dicts) d = term_dictionary(n, d);
  return dicts;
}

}  // namespace dcc::cfg
