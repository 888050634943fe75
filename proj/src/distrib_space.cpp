#include "dcc/distrib_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "dcc/text_io.hpp"

namespace dcc {

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  for (const auto& line : text::split(text, '\n')) {
    auto toks = text::split_ws(line);
    if (!toks.empty()) corpus.push_back(std::move(toks));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  for (const auto& line : text::read_lines(path)) {
    auto toks = text::split_ws(line);
    if (!toks.empty()) corpus.push_back(std::move(toks));
  }
  return corpus;
}

Weighting parse_weighting(std::string_view name) {
  if (name == "raw") return Weighting::raw;
  if (name == "ratio") return Weighting::ratio;
  if (name == "tfidf") return Weighting::tfidf;
  if (name == "ppmi" || name == "pmi") return Weighting::ppmi;
  throw Error("unknown weighting '" + std::string(name) + "'");
}

std::string to_string(Weighting w) {
  switch (w) {
    case Weighting::raw: return "raw";
    case Weighting::ratio: return "ratio";
    case Weighting::tfidf: return "tfidf";
    case Weighting::ppmi: return "ppmi";
  }
  return "?";
}

void VectorSpace::set(const std::string& word, Vec v) {
  if (v.size() != basis_.size())
    throw ShapeError("vector for '" + word + "' has " + std::to_string(v.size()) +
                     " weights, basis has " + std::to_string(basis_.size()));
  vectors_[word] = std::move(v);
}

const Vec* VectorSpace::find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

const Vec& VectorSpace::at(const std::string& word) const {
  if (const Vec* v = find(word)) return *v;
  throw Error("no vector for '" + word + "'");
}

std::string VectorSpace::to_tsv() const {
  std::ostringstream out;
  out << "#basis";
  for (const auto& b : basis_) out << '\t' << b;
  out << '\n';
  for (const auto& [word, v] : vectors_) {
    out << word;
    for (double x : v) out << '\t' << text::format_number(x);
    out << '\n';
  }
  return out.str();
}

VectorSpace VectorSpace::parse_tsv(std::string_view text) {
  auto lines = text::split(text, '\n');
  std::size_t i = 0;
  while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ParseError("space file is empty", 0);
  auto header = text::split(lines[i], '\t');
  if (header.empty() || header[0] != "#basis") throw ParseError("space file must start with #basis", i + 1);
  VectorSpace space(std::vector<std::string>(header.begin() + 1, header.end()));
  for (++i; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != space.dim() + 1)
      throw ParseError("row has " + std::to_string(cols.size() - 1) + " weights, expected " +
                           std::to_string(space.dim()),
                       i + 1);
    Vec v;
    v.reserve(space.dim());
    for (std::size_t c = 1; c < cols.size(); ++c) v.push_back(text::parse_number(cols[c]));
    space.set(cols[0], std::move(v));
  }
  return space;
}

VectorSpace VectorSpace::load(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_tsv(all);
}

void VectorSpace::save(const std::string& path) const { text::write_file(path, to_tsv()); }

std::vector<std::string> select_basis(const Corpus& corpus, std::size_t basis_size,
                                      const std::set<std::string>& stoplist,
                                      std::vector<std::string>* warnings) {
  std::map<std::string, std::size_t> freq;
  for (const auto& s : corpus)
    for (const auto& t : s) ++freq[t];
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (const auto& [w, f] : freq)
    if (!stoplist.count(w)) ranked.emplace_back(w, f);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (basis_size > ranked.size()) {
    if (warnings)
      warnings->push_back("basis size " + std::to_string(basis_size) + " exceeds vocabulary of " +
                          std::to_string(ranked.size()) + "; clamped");
    basis_size = ranked.size();
  }
  std::vector<std::string> basis;
  basis.reserve(basis_size);
  for (std::size_t i = 0; i < basis_size; ++i) basis.push_back(ranked[i].first);
  return basis;
}

VectorSpace count_cooccurrences(const Corpus& corpus, const std::vector<std::string>& basis,
                                const Window& window,
                                const std::optional<std::set<std::string>>& targets) {
  std::unordered_map<std::string, std::size_t> basis_index;
  for (std::size_t i = 0; i < basis.size(); ++i) basis_index.emplace(basis[i], i);

  VectorSpace space(basis);
  auto& meta = space.meta();
  std::map<std::string, Vec> counts;
  for (const auto& sentence : corpus) {
    const std::size_t n = sentence.size();
    meta.total_tokens += n;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& w = sentence[i];
      meta.word_freq[w] += 1;
      if (targets && !targets->count(w)) continue;
      auto& row = counts[w];
      if (row.empty()) row.assign(basis.size(), 0.0);
      std::size_t lo = 0, hi = n;
      if (window.kind == Window::Kind::words) {
        lo = i > window.radius ? i - window.radius : 0;
        hi = std::min(n, i + window.radius + 1);
      }
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        auto it = basis_index.find(sentence[j]);
        if (it != basis_index.end()) row[it->second] += 1;
      }
    }
  }
  for (const auto& b : basis) {
    auto it = meta.word_freq.find(b);
    double f = it == meta.word_freq.end() ? 0.0 : it->second;
    meta.basis_freq[b] = f;
    meta.basis_total += f;
  }
  if (targets)
    for (const auto& t : *targets)
      if (!counts.count(t)) counts[t] = Vec(basis.size(), 0.0);
  for (auto& [w, row] : counts) space.set(w, std::move(row));
  meta.weighting = Weighting::raw;
  return space;
}

double ratio_weight(double f_wb, double f_w, double f_b, double f_bstar) {
  if (f_wb == 0 || f_w == 0 || f_b == 0 || f_bstar == 0) return 0;
  return f_wb * f_bstar / (f_b * f_w);
}

namespace {

VectorSpace map_weights(const VectorSpace& counts, Weighting w,
                        const std::function<double(const std::string&, std::size_t, double)>& f) {
  VectorSpace out(counts.basis());
  out.meta() = counts.meta();
  out.meta().weighting = w;
  for (const auto& [word, row] : counts.vectors()) {
    Vec v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v[i] = f(word, i, row[i]);
    out.set(word, std::move(v));
  }
  return out;
}

double lookup(const std::map<std::string, double>& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? 0.0 : it->second;
}

}  // namespace

VectorSpace weight_ratio(const VectorSpace& counts) {
  const auto& meta = counts.meta();
  return map_weights(counts, Weighting::ratio, [&](const std::string& w, std::size_t i, double c) {
    return ratio_weight(c, lookup(meta.word_freq, w), lookup(meta.basis_freq, counts.basis()[i]),
                        meta.basis_total);
  });
}

VectorSpace weight_ppmi(const VectorSpace& counts) {
  const auto& meta = counts.meta();
  return map_weights(counts, Weighting::ppmi, [&](const std::string& w, std::size_t i, double c) {
    double r = ratio_weight(c, lookup(meta.word_freq, w), lookup(meta.basis_freq, counts.basis()[i]),
                            meta.basis_total);
    return r > 1.0 ? std::log(r) : 0.0;
  });
}

VectorSpace weight_tfidf(const VectorSpace& counts) {
  std::vector<double> df(counts.dim(), 0.0);
  for (const auto& [_, row] : counts.vectors())
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] > 0) df[i] += 1;
  const double docs = static_cast<double>(counts.vectors().size());
  return map_weights(counts, Weighting::tfidf, [&](const std::string&, std::size_t i, double c) {
    return c > 0 && df[i] > 0 ? c * std::log(docs / df[i]) : 0.0;
  });
}

VectorSpace reweight(const VectorSpace& counts, Weighting w) {
  switch (w) {
    case Weighting::raw: return counts;
    case Weighting::ratio: return weight_ratio(counts);
    case Weighting::tfidf: return weight_tfidf(counts);
    case Weighting::ppmi: return weight_ppmi(counts);
  }
  throw Error("unknown weighting");
}

VectorSpace build_space(const Corpus& corpus, const SpaceOptions& options) {
  std::size_t tokens = 0;
  for (const auto& s : corpus) tokens += s.size();
  if (tokens == 0) throw Error("corpus is empty");

  std::vector<std::string> warnings;
  std::vector<std::string> basis;
  if (options.fixed_basis) {
    for (const auto& b : *options.fixed_basis)
      if (!options.stoplist.count(b)) basis.push_back(b);
  } else {
    basis = select_basis(corpus, options.basis_size, options.stoplist, &warnings);
  }
  auto counts = count_cooccurrences(corpus, basis, options.window, options.targets);
  auto space = reweight(counts, options.weighting);
  space.meta().warnings = std::move(warnings);
  return space;
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ShapeError("dot: length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

Similarity cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw ShapeError("cosine: lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  const double nu = norm(u), nv = norm(v);
  if (nu == 0 || nv == 0) return {0.0, true};
  return {std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0), false};
}

}  // namespace dcc
