#pragma once

// Phrase-similarity evaluation: dataset loading, per-entry model scores and
// Spearman correlation against annotator judgements.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcc/distrib_space.hpp"
#include "dcc/ngram.hpp"
#include "dcc/tensor.hpp"

namespace dcc::eval {

enum class Kind { intransitive, transitive, adj_transitive };
enum class Band { high, low };

Kind parse_kind(std::string_view name);
std::string to_string(Kind k);

struct Entry {
  Kind kind = Kind::intransitive;
  /// intransitive: noun verb landmark
  /// transitive:   subject verb landmark object
  /// adj:          adj1 subject verb landmark adj2 object
  std::vector<std::string> slots;
  Band band = Band::high;
  std::string annotator;
  int score = 0;
  std::size_t line = 0;

  /// Identifies the item independently of who annotated it.
  std::string item_key() const;
  Sentence sentence(bool landmark) const;
};

/// Every malformed line is reported, with its line number, in one Error.
std::vector<Entry> parse_dataset(std::string_view text, Kind kind);
std::vector<Entry> load_dataset(const std::string& path, Kind kind);

struct Resources {
  const VectorSpace* space = nullptr;
  const TensorStore* tensors = nullptr;
  const NgramModel* bigram = nullptr;
  const NgramModel* trigram = nullptr;
  BaselineParams params;  // for weighted-add and mixture
};

struct Score {
  double value = 0;
  bool skipped = false;   // a word, tensor or language model was unavailable
  std::string missing;
};

/// Model ids: verb, add, multiply, categorical, kronecker, weighted-add,
/// mixture, bigram, trigram; for adjective data also additive, addmult,
/// multadd and `<verb-model>+<adj-model>` with adj-model one of adjmult,
/// catadj, adjnoun (plain verb models use adjmult).
Score entry_score(const Entry& e, const std::string& model, const Resources& r);

/// Pearson correlation of average ranks. Throws Error for fewer than two
/// pairs, mismatched lengths, or a constant list.
double spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks, 1-based.
std::vector<double> ranks(std::span<const double> x);

/// Mean pairwise Spearman over annotators, each pair restricted to the items
/// both scored. Pairs with fewer than two common items or constant scores
/// are left out. Throws Error when no pair qualifies.
double upper_bound(std::span<const Entry> entries);

struct Report {
  std::string model;
  std::optional<double> rho;  // unset when the correlation is undefined
  std::size_t n = 0;
  std::size_t skipped = 0;
  std::optional<double> upper_bound;
  std::optional<double> high_mean, low_mean;
  std::string error;
};

struct ExperimentOptions {
  /// Correlate one averaged human score per item instead of one row per
  /// annotation.
  bool aggregate_mean = false;
};

/// One report per model, sorted by rho descending (undefined last).
std::vector<Report> run_experiment(std::span<const Entry> entries, std::span<const std::string> models,
                                   const Resources& r, const ExperimentOptions& options = {});

std::string report_json(std::span<const Report> reports);
std::string report_table(std::span<const Report> reports);

}  // namespace dcc::eval
