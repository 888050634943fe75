#include "dcc/ngram.hpp"

#include <cmath>

namespace dcc {

namespace {
const std::string kBos = "<s>";
const std::string kEos = "</s>";
}  // namespace

NgramModel::NgramModel(std::size_t order, double lambda) : order_(order), lambda_(lambda) {
  if (order == 0) throw Error("n-gram order must be at least 1");
  if (!(lambda > 0)) throw Error("add-lambda smoothing needs lambda > 0");
}

void NgramModel::train(const Corpus& corpus) {
  for (const auto& s : corpus) {
    std::vector<std::string> padded(order_ - 1, kBos);
    padded.insert(padded.end(), s.begin(), s.end());
    padded.push_back(kEos);
    for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
      vocab_.emplace(padded[i], vocab_.size());
      Key key(padded.begin() + (i + 1 - order_), padded.begin() + i + 1);
      ngram_counts_[key] += 1;
      key.pop_back();
      history_counts_[key] += 1;
    }
  }
}

double NgramModel::log_prob(const Sentence& sentence) const {
  std::vector<std::string> padded(order_ - 1, kBos);
  padded.insert(padded.end(), sentence.begin(), sentence.end());
  padded.push_back(kEos);
  const double v = static_cast<double>(vocabulary_size());
  double lp = 0;
  for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
    Key key(padded.begin() + (i + 1 - order_), padded.begin() + i + 1);
    auto c = ngram_counts_.find(key);
    key.pop_back();
    auto h = history_counts_.find(key);
    double num = (c == ngram_counts_.end() ? 0.0 : c->second) + lambda_;
    double den = (h == history_counts_.end() ? 0.0 : h->second) + lambda_ * v;
    lp += std::log(num / den);
  }
  return lp;
}

}  // namespace dcc
