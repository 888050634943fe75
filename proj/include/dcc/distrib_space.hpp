#pragma once

// Corpus-derived lexical vectors: basis selection, windowed co-occurrence
// counting and the weighting schemes applied on top of raw counts.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dcc/error.hpp"

namespace dcc {

using Vec = std::vector<double>;
using Sentence = std::vector<std::string>;
using Corpus = std::vector<Sentence>;

/// One sentence per line, whitespace tokenised, blank lines skipped.
Corpus parse_corpus(std::string_view text);
Corpus load_corpus(const std::string& path);

struct Window {
  enum class Kind { sentence, words };
  Kind kind = Kind::words;
  std::size_t radius = 5;  // tokens each side for Kind::words; never crosses sentences

  static Window whole_sentence() { return {Kind::sentence, 0}; }
  static Window words(std::size_t k) { return {Kind::words, k}; }
};

enum class Weighting { raw, ratio, tfidf, ppmi };

Weighting parse_weighting(std::string_view name);
std::string to_string(Weighting w);

struct SpaceMeta {
  std::size_t total_tokens = 0;
  std::map<std::string, double> word_freq;   // f_w over the whole corpus
  std::map<std::string, double> basis_freq;  // f_b
  /// f_b*: total corpus occurrences of all basis words.
  double basis_total = 0;
  Weighting weighting = Weighting::raw;
  std::vector<std::string> warnings;
};

class VectorSpace {
 public:
  VectorSpace() = default;
  explicit VectorSpace(std::vector<std::string> basis) : basis_(std::move(basis)) {}

  const std::vector<std::string>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  /// Throws ShapeError if the length differs from the basis.
  void set(const std::string& word, Vec v);
  bool contains(const std::string& word) const { return vectors_.count(word) > 0; }
  /// nullptr when the word has no vector.
  const Vec* find(const std::string& word) const;
  const Vec& at(const std::string& word) const;
  const std::map<std::string, Vec>& vectors() const { return vectors_; }

  SpaceMeta& meta() { return meta_; }
  const SpaceMeta& meta() const { return meta_; }

  /// `#basis<TAB>b1...` header then `word<TAB>w1...` rows, %.9g.
  std::string to_tsv() const;
  static VectorSpace parse_tsv(std::string_view text);
  static VectorSpace load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::string> basis_;
  std::map<std::string, Vec> vectors_;
  SpaceMeta meta_;
};

struct SpaceOptions {
  std::size_t basis_size = 2000;
  Window window = Window::words(5);
  Weighting weighting = Weighting::ratio;
  std::set<std::string> stoplist;
  /// Restrict the basis to these words when set (after the stop list).
  std::optional<std::vector<std::string>> fixed_basis;
  /// Build vectors only for these words when set; otherwise every word.
  std::optional<std::set<std::string>> targets;
};

/// Top basis_size words by frequency (ties lexicographic), stop list removed.
std::vector<std::string> select_basis(const Corpus& corpus, std::size_t basis_size,
                                      const std::set<std::string>& stoplist,
                                      std::vector<std::string>* warnings = nullptr);

/// Raw windowed co-occurrence counts with frequency metadata.
VectorSpace count_cooccurrences(const Corpus& corpus, const std::vector<std::string>& basis,
                                const Window& window,
                                const std::optional<std::set<std::string>>& targets = std::nullopt);

/// f_{w,b} f_{b*} / (f_b f_w); 0 whenever any factor is 0.
double ratio_weight(double f_wb, double f_w, double f_b, double f_bstar);

VectorSpace weight_ratio(const VectorSpace& counts);
VectorSpace weight_ppmi(const VectorSpace& counts);
VectorSpace weight_tfidf(const VectorSpace& counts);
VectorSpace reweight(const VectorSpace& counts, Weighting w);

/// Throws Error on an empty corpus.
VectorSpace build_space(const Corpus& corpus, const SpaceOptions& options);

struct Similarity {
  double value = 0;
  bool degenerate = false;  // a zero vector was involved; value is 0
};

/// Throws ShapeError on length mismatch.
Similarity cosine(std::span<const double> u, std::span<const double> v);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

}  // namespace dcc
