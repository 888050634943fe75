#pragma once

// Free pregroup types and contraction-only reduction.
//
// An atom carries an integer adjoint order: 0 is the plain atom, -1 its left
// adjoint (a^l), +1 its right adjoint (a^r), and +-k iterated adjoints. Two
// adjacent atoms x y contract to the unit iff they share a name and
// order(y) == order(x) + 1, which covers both a a^r and a^l a.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcc/error.hpp"

namespace dcc {

struct Atom {
  std::string name;
  int adjoint = 0;

  auto operator<=>(const Atom&) const = default;
  std::string to_string() const;
};

bool contracts(const Atom& x, const Atom& y);

class PregroupType {
 public:
  PregroupType() = default;
  explicit PregroupType(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  static PregroupType atom(std::string name, int adjoint = 0) {
    return PregroupType({Atom{std::move(name), adjoint}});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_unit() const { return atoms_.empty(); }
  bool is_atomic() const { return atoms_.size() == 1; }
  bool mentions(std::string_view name) const;

  PregroupType operator*(const PregroupType& rhs) const;
  auto operator<=>(const PregroupType&) const = default;

  /// Notation accepted by parse_type; the unit prints as "1".
  std::string to_string() const;

 private:
  std::vector<Atom> atoms_;
};

/// Parses whitespace-separated atoms with optional ^l / ^r suffix runs
/// ("n^r s n^l", "a^ll"). "1" is the unit. Throws ParseError on "a^lr",
/// "^r" or an empty suffix; the position is the token index.
PregroupType parse_type(std::string_view text);

enum class Side { left, right };

/// (a b)^r = b^r a^r, and the same for left adjoints.
PregroupType adjoint(const PregroupType& t, Side side);

/// Applies `k` iterated adjoints: right for k > 0, left for k < 0.
PregroupType iterated_adjoint(const PregroupType& t, int k);

/// Replaces every occurrence of the atom `name` (at any adjoint order k) by
/// the k-th iterated adjoint of `replacement`.
PregroupType substitute(const PregroupType& t, std::string_view name,
                        const PregroupType& replacement);

PregroupType concat(std::span<const PregroupType> seq);

struct ContractionStep {
  std::size_t position = 0;  // index of the left atom in the sequence before the step
  Atom left;
  Atom right;

  bool operator==(const ContractionStep&) const = default;
  /// e.g. "n n^r" or "n^l n".
  std::string pair() const;
};

struct ReductionTrace {
  std::vector<ContractionStep> steps;
  PregroupType residual;
};

/// Replays `steps` on `input`; throws dcc::Error if a step does not name a
/// contractible adjacent pair.
PregroupType replay(const PregroupType& input, std::span<const ContractionStep> steps);

/// True iff the concatenated atoms reduce to `target` by contractions alone.
/// Cubic-time interval recognition; no trace.
bool reduces_to(std::span<const Atom> atoms, std::span<const Atom> target);

/// Finds a contraction-only reduction of the concatenation of `seq` to
/// `target`. Among all reductions the one returned is the first reached by
/// trying adjacent contractions leftmost-first. nullopt means no reduction
/// exists.
std::optional<ReductionTrace> reduce(std::span<const PregroupType> seq, const PregroupType& target);

/// word -> one or more candidate types, in insertion order.
class Lexicon {
 public:
  void add(const std::string& word, PregroupType type);
  const std::vector<PregroupType>* find(const std::string& word) const;
  const std::map<std::string, std::vector<PregroupType>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// `word<TAB>type` lines; blank lines and '#' comments skipped.
  static Lexicon parse_tsv(std::string_view text);
  static Lexicon load(const std::string& path);
  std::string to_tsv() const;

 private:
  std::map<std::string, std::vector<PregroupType>> entries_;
};

class LexiconMiss : public Error {
 public:
  explicit LexiconMiss(const std::string& word)
      : Error("no lexicon entry for '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

struct GrammaticalityResult {
  bool grammatical = false;
  std::vector<PregroupType> assignment;  // empty when not grammatical
  std::optional<ReductionTrace> trace;
};

/// Tries per-token type assignments in lexicon order and returns the first
/// that reduces to `target`. Throws LexiconMiss for unknown tokens.
GrammaticalityResult is_grammatical(std::span<const std::string> tokens, const Lexicon& lexicon,
                                    const PregroupType& target);

}  // namespace dcc
