#pragma once

// Context-free grammars restricted to the shape that admits a pregroup
// reading, the normalisations that get a grammar into that shape, and the
// type-inference procedure that turns it into pregroup type dictionaries.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dcc/error.hpp"
#include "dcc/pregroup.hpp"

namespace dcc::cfg {

/// Reserved spelling of the empty string.
inline constexpr std::string_view kEpsilon = "EPS";

struct Symbol {
  std::string name;
  bool terminal = false;

  bool is_epsilon() const { return !terminal && name == kEpsilon; }
  auto operator<=>(const Symbol&) const = default;
};

struct Rule {
  std::string lhs;
  std::vector<Symbol> rhs;

  /// rhs with epsilon occurrences dropped.
  std::vector<Symbol> visible() const;
  bool operator==(const Rule&) const = default;
  std::string to_string() const;
};

struct Cfg {
  std::string start;
  std::vector<Rule> rules;

  std::set<std::string> nonterminals() const;  // excludes EPS
  std::set<std::string> terminals() const;
};

/// `A -> B C | "word"` lines, '#' comments, start = lhs of the first rule.
Cfg parse_grammar(std::string_view text);
Cfg load_grammar(const std::string& path);
std::string format_grammar(const Cfg& g);

enum class ViolationKind {
  undefined_nonterminal,  // never on a left-hand side
  unreachable,            // not derivable from the start symbol
  unit_cycle,             // A =>+ A through unary rules
  empty_production,       // nothing but EPS on the right
  mixed_rule,             // terminals next to non-terminals, or several terminals
  basic_and_complex,      // lhs of both terminal and non-terminal rules
};

/// Whether lift_terminals repairs this kind of violation.
bool liftable(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // rule text or symbol name
  std::string reason;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  bool pseudo_proper = true;
  std::vector<Violation> violations;
  std::set<std::string> basic_types;    // lhs of terminal rules
  std::set<std::string> complex_types;  // lhs of non-terminal rules
  bool binarized = true;                // every visible rhs has 1 or 2 symbols
};

ValidationReport validate(const Cfg& g);

/// Left-branching binarisation: A -> B C D E becomes A -> _Bin1 E,
/// _Bin1 -> _Bin2 D, _Bin2 -> B C. Epsilons are dropped from rules with
/// more than one visible symbol.
Cfg binarize(const Cfg& g);

/// Moves terminals out of mixed rules and out of non-terminals that also
/// have non-terminal rules, introducing fresh basic types _T1, _T2, ...
Cfg lift_terminals(const Cfg& g);

enum class InferenceMode { full, fast };

struct TypeDictionary {
  std::map<std::string, PregroupType> nonterminal_types;  // includes EPS -> 1
  Lexicon term_types;

  const PregroupType& type_of(const std::string& nonterminal) const;
  bool operator==(const TypeDictionary& o) const {
    return nonterminal_types == o.nonterminal_types;
  }
};

class InferenceDeadlock : public Error {
 public:
  explicit InferenceDeadlock(const Rule& rule)
      : Error("type inference deadlock at rule " + rule.to_string()), rule_(rule) {}
  const Rule& rule() const { return rule_; }

 private:
  Rule rule_;
};

class RestrictionViolation : public Error {
 public:
  using Error::Error;
};

/// Initial dictionary: every non-terminal gets a distinct atom named after
/// its lowercased symbol; EPS maps to the unit.
TypeDictionary initial_dictionary(const Cfg& g);

/// Non-terminal rules in grammar order; these drive inference.
std::vector<Rule> nonterminal_rules(const Cfg& g);

/// Runs the inference tree over the non-terminal rules. `full` returns every
/// leaf (at most 2^|rules|), left children first; `fast` returns the first
/// of those leaves, searching depth-first and backing out of dead ends. Expects a grammar that is
/// validated, binarised and has its terminals lifted.
std::vector<TypeDictionary> infer_types(const Cfg& g, InferenceMode mode);

/// Fills `term_types` from the terminal rules: each word gets the type of
/// every basic non-terminal producing it.
TypeDictionary term_dictionary(const Cfg& g, const TypeDictionary& d);

/// validate (throwing on violations other than non-binary rules), lift,
/// binarise, infer, and attach term dictionaries.
std::vector<TypeDictionary> translate(const Cfg& g, InferenceMode mode);

/// Normalised grammar that `translate` runs inference on.
Cfg normalize(const Cfg& g);

}  // namespace dcc::cfg
