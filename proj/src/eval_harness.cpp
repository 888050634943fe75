#include "dcc/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dcc/text_io.hpp"

namespace dcc::eval {

Kind parse_kind(std::string_view name) {
  if (name == "intransitive") return Kind::intransitive;
  if (name == "transitive") return Kind::transitive;
  if (name == "adj-transitive" || name == "adj") return Kind::adj_transitive;
  throw Error("unknown dataset kind '" + std::string(name) + "'");
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::intransitive: return "intransitive";
    case Kind::transitive: return "transitive";
    case Kind::adj_transitive: return "adj-transitive";
  }
  return "?";
}

namespace {

std::size_t slot_count(Kind k) {
  switch (k) {
    case Kind::intransitive: return 3;
    case Kind::transitive: return 4;
    case Kind::adj_transitive: return 6;
  }
  return 0;
}

// Position of the verb slot; the landmark follows it.
std::size_t verb_slot(Kind k) { return k == Kind::adj_transitive ? 2 : 1; }

}  // namespace

std::string Entry::item_key() const {
  std::string k = to_string(kind);
  for (const auto& s : slots) k += '\t' + s;
  return k + (band == Band::high ? "\tHIGH" : "\tLOW");
}

Sentence Entry::sentence(bool landmark) const {
  const std::size_t v = verb_slot(kind);
  Sentence out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i == v + 1) continue;
    out.push_back(i == v && landmark ? slots[v + 1] : slots[i]);
  }
  return out;
}

std::vector<Entry> parse_dataset(std::string_view text, Kind kind) {
  const std::size_t slots = slot_count(kind);
  std::vector<Entry> out;
  std::vector<std::string> problems;
  std::size_t first_bad = 0;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    auto bad = [&](const std::string& why) {
      if (problems.empty()) first_bad = lineno;
      problems.push_back("line " + std::to_string(lineno) + ": " + why);
    };
    if (cols.size() != slots + 3) {
      bad("expected " + std::to_string(slots + 3) + " columns, found " + std::to_string(cols.size()));
      continue;
    }
    Entry e;
    e.kind = kind;
    e.line = lineno;
    e.annotator = cols[0];
    e.slots.assign(cols.begin() + 1, cols.begin() + 1 + slots);
    const auto& band = cols[slots + 1];
    if (band == "HIGH" || band == "high") {
      e.band = Band::high;
    } else if (band == "LOW" || band == "low") {
      e.band = Band::low;
    } else {
      bad("band must be HIGH or LOW, found '" + band + "'");
      continue;
    }
    const auto& sc = cols[slots + 2];
    double v = 0;
    try {
      v = text::parse_number(sc);
    } catch (const Error&) {
      bad("score '" + sc + "' is not a number");
      continue;
    }
    if (v != std::floor(v) || v < 1 || v > 7) {
      bad("score " + sc + " is outside 1..7");
      continue;
    }
    e.score = static_cast<int>(v);
    out.push_back(std::move(e));
  }
  if (!problems.empty()) {
    std::string msg = "malformed dataset:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ParseError(msg, first_bad);
  }
  return out;
}

std::vector<Entry> load_dataset(const std::string& path, Kind kind) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_dataset(all, kind);
}

namespace {

struct Missing {
  std::string what;
};

class Scorer {
 public:
  Scorer(const Entry& e, const Resources& r) : e_(e), r_(r) {}

  double score(const std::string& model) {
    if (model == "bigram" || model == "trigram") {
      const NgramModel* lm = model == "bigram" ? r_.bigram : r_.trigram;
      if (!lm) throw Missing{model + " language model"};
      return lm->log_prob(e_.sentence(false)) + lm->log_prob(e_.sentence(true));
    }
    if (!r_.space) throw Missing{"vector space"};
    if (model == "kronecker" || model.starts_with("kronecker+")) return kronecker(model);
    auto s1 = sentence(model, false);
    auto s2 = sentence(model, true);
    return cosine(s1, s2).value;
  }

 private:
  const Vec& vec(const std::string& w) {
    const Vec* v = r_.space->find(w);
    if (!v) throw Missing{"vector for '" + w + "'"};
    return *v;
  }

  const Tensor& tensor(const std::string& w) {
    if (!r_.tensors) throw Missing{"tensor store"};
    auto it = r_.tensors->find(w);
    if (it == r_.tensors->end()) throw Missing{"tensor for '" + w + "'"};
    return it->second;
  }

  Vec apply_relation(const Tensor& t, std::span<const Vec> args) {
    if (t.method() == Method::regression) return compose_regression(t, args);
    return compose_reduced(t, args);
  }

  // Adjective-noun composition for the adjective data set.
  Vec adj_noun(const std::string& adj_model, const std::string& adj, const std::string& noun) {
    if (adj_model == "adjmult") return hadamard(vec(adj), vec(noun));
    if (adj_model == "catadj") {
      std::vector<Vec> a{vec(noun)};
      return apply_relation(tensor(adj), a);
    }
    if (adj_model == "adjnoun") return vec(adj + "_" + noun);
    throw Error("unknown adjective model '" + adj_model + "'");
  }

  std::pair<std::string, std::string> split_model(const std::string& model) {
    auto plus = model.find('+');
    if (plus == std::string::npos) return {model, "adjmult"};
    return {model.substr(0, plus), model.substr(plus + 1)};
  }

  // Arguments of the verb after any adjective composition.
  std::vector<Vec> arguments(const std::string& adj_model) {
    const auto& s = e_.slots;
    switch (e_.kind) {
      case Kind::intransitive: return {vec(s[0])};
      case Kind::transitive: return {vec(s[0]), vec(s[3])};
      case Kind::adj_transitive:
        return {adj_noun(adj_model, s[0], s[1]), adj_noun(adj_model, s[4], s[5])};
    }
    return {};
  }

  const std::string& verb(bool landmark) {
    std::size_t v = verb_slot(e_.kind);
    return e_.slots[landmark ? v + 1 : v];
  }

  Vec sentence(const std::string& model, bool landmark) {
    const auto& w = verb(landmark);
    if (model == "verb") return vec(w);

    if (e_.kind == Kind::adj_transitive && (model == "additive" || model == "addmult" || model == "multadd")) {
      const auto& s = e_.slots;
      const Vec &a1 = vec(s[0]), &n1 = vec(s[1]), &v = vec(w), &a2 = vec(s[4]), &n2 = vec(s[5]);
      std::vector<Vec> parts;
      if (model == "additive") {
        parts = {a1, n1, v, a2, n2};
        return compose_baseline(Baseline::add, parts);
      }
      if (model == "addmult") {
        std::vector<Vec> l{a1, n1}, r{a2, n2};
        parts = {compose_baseline(Baseline::add, l), v, compose_baseline(Baseline::add, r)};
        return compose_baseline(Baseline::multiply, parts);
      }
      parts = {hadamard(a1, n1), v, hadamard(a2, n2)};
      return compose_baseline(Baseline::add, parts);
    }

    auto [verb_model, adj_model] = split_model(model);
    if (e_.kind != Kind::adj_transitive && verb_model != model)
      throw Error("model '" + model + "' needs the adjective data set");
    auto args = arguments(adj_model);
    if (verb_model == "categorical") return apply_relation(tensor(w), args);

    // Baselines over the words in sentence order with the verb in slot 1.
    std::vector<Vec> words{args[0], vec(w)};
    if (args.size() > 1) words.push_back(args[1]);
    if (verb_model == "add" && e_.kind == Kind::adj_transitive)
      throw Error("use 'additive' for the adjective data set");
    return compose_baseline(parse_baseline(verb_model), words, r_.params);
  }

  double kronecker(const std::string& model) {
    auto [verb_model, adj_model] = split_model(model);
    if (e_.kind != Kind::adj_transitive && verb_model != model)
      throw Error("model '" + model + "' needs the adjective data set");
    auto args = arguments(adj_model);
    const Vec& v1 = vec(verb(false));
    const Vec& v2 = vec(verb(true));
    if (args.size() == 1) return cosine(hadamard(v1, args[0]), hadamard(v2, args[0])).value;
    return kronecker_similarity_factorized(v1, v2, args[0], args[1]).value;
  }

  const Entry& e_;
  const Resources& r_;
};

}  // namespace

Score entry_score(const Entry& e, const std::string& model, const Resources& r) {
  try {
    return {Scorer(e, r).score(model), false, {}};
  } catch (const Missing& m) {
    return {0, true, m.what};
  }
}

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("score lists differ in length");
  if (x.size() < 2) throw Error("correlation needs at least two pairs");
  auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) throw Error("correlation is undefined for a constant score list");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double upper_bound(std::span<const Entry> entries) {
  std::map<std::string, std::map<std::string, std::pair<double, int>>> by_annotator;
  for (const auto& e : entries) {
    auto& cell = by_annotator[e.annotator][e.item_key()];
    cell.first += e.score;
    cell.second += 1;
  }
  std::vector<const std::map<std::string, std::pair<double, int>>*> anns;
  for (const auto& [_, items] : by_annotator) anns.push_back(&items);

  double total = 0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < anns.size(); ++a) {
    for (std::size_t b = a + 1; b < anns.size(); ++b) {
      std::vector<double> xs, ys;
      for (const auto& [item, sa] : *anns[a]) {
        auto it = anns[b]->find(item);
        if (it == anns[b]->end()) continue;
        xs.push_back(sa.first / sa.second);
        ys.push_back(it->second.first / it->second.second);
      }
      if (xs.size() < 2) continue;
      try {
        total += spearman(xs, ys);
        ++pairs;
      } catch (const Error&) {
      }
    }
  }
  if (pairs == 0) throw Error("no pair of annotators shares enough items to measure agreement");
  return total / static_cast<double>(pairs);
}

std::vector<Report> run_experiment(std::span<const Entry> entries, std::span<const std::string> models,
                                   const Resources& r, const ExperimentOptions& options) {
  std::optional<double> ub;
  try {
    if (!models.empty()) ub = upper_bound(entries);
  } catch (const Error&) {
  }

  std::vector<Report> reports;
  for (const auto& model : models) {
    Report rep;
    rep.model = model;
    rep.upper_bound = ub;
    try {
      // Scores depend only on the item, so each distinct item is scored once.
      std::map<std::string, Score> cache;
      std::vector<double> model_scores, human;
      std::map<std::string, std::pair<double, int>> per_item;  // aggregate mode
      std::map<std::string, double> item_model;
      std::map<std::string, Band> item_band;
      std::vector<double> high, low;
      for (const auto& e : entries) {
        auto key = e.item_key();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, entry_score(e, model, r)).first;
        const Score& s = it->second;
        if (s.skipped) {
          ++rep.skipped;
          continue;
        }
        if (options.aggregate_mean) {
          auto& cell = per_item[key];
          cell.first += e.score;
          cell.second += 1;
          item_model[key] = s.value;
          item_band[key] = e.band;
        } else {
          model_scores.push_back(s.value);
          human.push_back(e.score);
          (e.band == Band::high ? high : low).push_back(s.value);
        }
      }
      if (options.aggregate_mean) {
        for (const auto& [key, cell] : per_item) {
          model_scores.push_back(item_model[key]);
          human.push_back(cell.first / cell.second);
          (item_band[key] == Band::high ? high : low).push_back(item_model[key]);
        }
      }
      auto mean = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      };
      rep.high_mean = mean(high);
      rep.low_mean = mean(low);
      rep.n = model_scores.size();
      rep.rho = spearman(model_scores, human);
    } catch (const Error& e) {
      rep.error = e.what();
    }
    reports.push_back(std::move(rep));
  }
  std::stable_sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) {
    if (a.rho.has_value() != b.rho.has_value()) return a.rho.has_value();
    return a.rho.has_value() && *a.rho > *b.rho;
  });
  return reports;
}

std::string report_json(std::span<const Report> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["rho"] = opt(r.rho);
    j["n"] = r.n;
    j["skipped"] = r.skipped;
    j["upper_bound"] = opt(r.upper_bound);
    j["high_mean"] = opt(r.high_mean);
    j["low_mean"] = opt(r.low_mean);
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["reports"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string report_table(std::span<const Report> reports) {
  std::ostringstream out;
  auto num = [](const std::optional<double>& v) { return v ? text::format_number(*v) : std::string("-"); };
  out << "model\trho\tn\tskipped\thigh_mean\tlow_mean\n";
  for (const auto& r : reports) {
    out << r.model << '\t' << num(r.rho) << '\t' << r.n << '\t' << r.skipped << '\t' << num(r.high_mean)
        << '\t' << num(r.low_mean);
    if (!r.error.empty()) out << "\t# " << r.error;
    out << '\n';
  }
  if (!reports.empty() && reports.front().upper_bound)
    out << "upper bound\t" << text::format_number(*reports.front().upper_bound) << '\n';
  return out.str();
}

}  // namespace dcc::eval
