#pragma once

// Add-λ smoothed n-gram language model, used for the bigram/trigram
// similarity baselines.

#include <map>
#include <string>
#include <vector>

#include "dcc/distrib_space.hpp"

namespace dcc {

class NgramModel {
 public:
  /// order >= 1; lambda > 0.
  explicit NgramModel(std::size_t order, double lambda = 1.0);

  /// Sentences are padded with order-1 `<s>` tokens and a closing `</s>`.
  void train(const Corpus& corpus);

  /// Natural-log probability of the padded sentence. Unseen words share one
  /// unknown-word slot in the vocabulary.
  double log_prob(const Sentence& sentence) const;

  std::size_t order() const { return order_; }
  std::size_t vocabulary_size() const { return vocab_.size() + 1; }

 private:
  using Key = std::vector<std::string>;

  std::size_t order_;
  double lambda_;
  std::map<std::string, std::size_t> vocab_;  // includes </s>, excludes <s>
  std::map<Key, double> ngram_counts_;
  std::map<Key, double> history_counts_;
};

}  // namespace dcc
