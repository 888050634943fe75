// dcc: command-line front end for the compositional semantics library.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "dcc/cfg.hpp"
#include "dcc/distrib_space.hpp"
#include "dcc/eval_harness.hpp"
#include "dcc/logic.hpp"
#include "dcc/ngram.hpp"
#include "dcc/pregroup.hpp"
#include "dcc/regression.hpp"
#include "dcc/tensor.hpp"
#include "dcc/text_io.hpp"

namespace {

using namespace dcc;

void print_vector(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << text::format_number(v[i]);
  std::cout << '\n';
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : text::split(s, ',')) out.push_back(text::parse_number(text::trim(x)));
  return out;
}

int run_parse(const std::string& lexicon_path, const std::string& target, const std::string& sentence) {
  auto lex = Lexicon::load(lexicon_path);
  auto tokens = text::split_ws(sentence);
  auto result = is_grammatical(tokens, lex, parse_type(target));
  if (!result.grammatical) {
    std::cout << "FAIL\n";
    return 1;
  }
  std::cout << "OK\n";
  for (std::size_t i = 0; i < tokens.size(); ++i)
    std::cout << tokens[i] << '\t' << result.assignment[i].to_string() << '\n';
  for (const auto& step : result.trace->steps) std::cout << "contract\t" << step.position << '\t' << step.pair() << '\n';
  std::cout << "result\t" << result.trace->residual.to_string() << '\n';
  return 0;
}

int run_translate(const std::string& grammar, const std::string& mode, const std::string& out) {
  auto g = cfg::load_grammar(grammar);
  auto m = mode == "full" ? cfg::InferenceMode::full : cfg::InferenceMode::fast;
  if (mode != "full" && mode != "fast") throw Error("mode must be fast or full");
  auto dicts = cfg::translate(g, m);
  std::filesystem::create_directories(out);
  for (std::size_t i = 0; i < dicts.size(); ++i) {
    auto stem = std::filesystem::path(out) / ("dict" + std::to_string(i + 1));
    text::write_file(stem.string() + ".lexicon.tsv", dicts[i].term_types.to_tsv());
    std::string nts;
    for (const auto& [nt, type] : dicts[i].nonterminal_types) nts += nt + '\t' + type.to_string() + '\n';
    text::write_file(stem.string() + ".nonterminals.tsv", nts);
  }
  std::cout << dicts.size() << " dictionar" << (dicts.size() == 1 ? "y" : "ies") << " written to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Categorical compositional distributional semantics toolkit"};
  app.require_subcommand(1);

  std::string lexicon, target = "s", sentence;
  auto* parse = app.add_subcommand("parse", "Check a sentence against a pregroup lexicon");
  parse->add_option("--lexicon", lexicon, "word<TAB>type file")->required();
  parse->add_option("--target", target, "Target type");
  parse->add_option("sentence", sentence, "Whitespace-separated tokens")->required();

  std::string grammar, mode = "fast", out_dir;
  auto* translate = app.add_subcommand("translate-cfg", "Translate a CFG into pregroup dictionaries");
  translate->add_option("--grammar", grammar)->required();
  translate->add_option("--mode", mode)->check(CLI::IsMember({"fast", "full"}));
  translate->add_option("--out", out_dir)->required();

  std::string corpus, window = "5", weighting = "ratio", stoplist, out, targets;
  std::size_t basis_size = 2000;
  bool bounded = true;
  auto* build = app.add_subcommand("build-space", "Build word vectors from a corpus");
  build->add_option("--corpus", corpus)->required();
  build->add_option("--basis-size", basis_size);
  build->add_option("--window", window, "Words either side, or 'sentence'");
  build->add_flag("--bounded-by-sentence", bounded, "Windows stop at sentence ends (always on)");
  build->add_option("--weighting", weighting)->check(CLI::IsMember({"raw", "ratio", "tfidf", "ppmi"}));
  build->add_option("--stoplist", stoplist, "One word per line");
  build->add_option("--targets", targets, "Only build vectors for these words (one per line)");
  build->add_option("--out", out)->required();

  std::string relations, space_path, method = "sum", words;
  std::size_t arity = 2;
  auto* learn = app.add_subcommand("learn", "Learn relation tensors");
  learn->add_option("--relations", relations, "relation<TAB>arg... file");
  learn->add_option("--space", space_path)->required();
  learn->add_option("--arity", arity);
  learn->add_option("--method", method)->check(CLI::IsMember({"sum", "kronecker"}));
  learn->add_option("--words", words, "Comma-separated relation words (kronecker without --relations)");
  learn->add_option("--out", out)->required();

  std::string model = "categorical", tensors_path, phrase;
  double alpha = 0, beta = 0, gamma = 0;
  auto* compose = app.add_subcommand("compose", "Compose a phrase vector");
  compose->add_option("--model", model)
      ->check(CLI::IsMember({"categorical", "kronecker", "add", "multiply", "mixture", "verb", "tensor-product"}));
  compose->add_option("--space", space_path)->required();
  compose->add_option("--tensors", tensors_path);
  compose->add_option("--alpha", alpha);
  compose->add_option("--beta", beta);
  compose->add_option("--gamma", gamma);
  compose->add_option("phrase", phrase, "\"subject verb object\" or \"noun verb\"")->required();

  std::string train, grid = "0.01,0.1,1,10";
  bool no_normalize = false;
  auto* regress = app.add_subcommand("regress", "Estimate verb tensors by two-step ridge regression");
  regress->add_option("--train", train)->required();
  regress->add_option("--space", space_path)->required();
  regress->add_option("--lambda-grid", grid);
  regress->add_flag("--no-normalize", no_normalize, "Use raw vectors instead of unit-length ones");
  regress->add_option("--out", out)->required();

  std::string model_path, bool_space = "B2", formula;
  auto* logic_cmd = app.add_subcommand("logic", "Evaluate a formula in a finite model");
  logic_cmd->add_option("--model", model_path)->required();
  logic_cmd->add_option("--space", bool_space)->check(CLI::IsMember({"B1", "B2"}));
  logic_cmd->add_option("--eval", formula)->required();

  std::string dataset, kind = "transitive", models = "verb,add,multiply,categorical,kronecker", report,
                       aggregate = "pool", lm_corpus;
  auto* eval_cmd = app.add_subcommand("eval", "Correlate model similarities with human judgements");
  eval_cmd->add_option("--dataset", dataset)->required();
  eval_cmd->add_option("--kind", kind)->check(CLI::IsMember({"intransitive", "transitive", "adj-transitive"}));
  eval_cmd->add_option("--models", models);
  eval_cmd->add_option("--space", space_path);
  eval_cmd->add_option("--tensors", tensors_path);
  eval_cmd->add_option("--corpus", lm_corpus, "Training corpus for the bigram/trigram baselines");
  eval_cmd->add_option("--aggregate", aggregate)->check(CLI::IsMember({"pool", "mean"}));
  eval_cmd->add_option("--alpha", alpha);
  eval_cmd->add_option("--beta", beta);
  eval_cmd->add_option("--gamma", gamma);
  eval_cmd->add_option("--report", report, "JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) return run_parse(lexicon, target, sentence);
    if (*translate) return run_translate(grammar, mode, out_dir);

    if (*build) {
      SpaceOptions opt;
      opt.basis_size = basis_size;
      if (window == "sentence") {
        opt.window = Window::whole_sentence();
      } else {
        opt.window = Window::words(static_cast<std::size_t>(text::parse_number(window)));
      }
      opt.weighting = parse_weighting(weighting);
      if (!stoplist.empty())
        for (const auto& l : text::read_lines(stoplist))
          for (const auto& w : text::split_ws(l)) opt.stoplist.insert(w);
      if (!targets.empty()) {
        std::set<std::string> t;
        for (const auto& l : text::read_lines(targets))
          for (const auto& w : text::split_ws(l)) t.insert(w);
        opt.targets = std::move(t);
      }
      auto space = build_space(load_corpus(corpus), opt);
      for (const auto& w : space.meta().warnings) std::cerr << "warning: " << w << '\n';
      space.save(out);
      std::cout << space.vectors().size() << " vectors over " << space.dim() << " basis words\n";
      return 0;
    }

    if (*learn) {
      auto space = VectorSpace::load(space_path);
      TensorStore store;
      std::vector<RelationInstance> inst;
      std::set<std::string> names;
      if (!relations.empty()) {
        inst = load_relations(relations);
        for (const auto& i : inst) names.insert(i.relation);
      }
      for (const auto& w : text::split(words, ','))
        if (!text::trim(w).empty()) names.insert(std::string(text::trim(w)));
      if (names.empty()) throw Error("no relations given; use --relations or --words");
      for (const auto& name : names) {
        try {
          if (method == "sum") {
            LearnReport rep;
            store[name] = learn_relation_sum(name, inst, space, arity, &rep);
            if (rep.skipped) std::cerr << name << ": skipped " << rep.skipped << " instances with unknown words\n";
          } else {
            const Vec* lex = space.find(name);
            if (!lex) throw Error("no vector for '" + name + "'");
            store[name] = learn_relation_kronecker(name, *lex, arity);
          }
        } catch (const Error& e) {
          std::cerr << "skipping " << name << ": " << e.what() << '\n';
        }
      }
      save_tensors(out, store);
      std::cout << store.size() << " tensors written\n";
      return store.empty() ? 1 : 0;
    }

    if (*compose) {
      auto space = VectorSpace::load(space_path);
      auto toks = text::split_ws(phrase);
      if (toks.size() != 2 && toks.size() != 3) throw Error("phrase must be 'noun verb' or 'subject verb object'");
      std::vector<Vec> vecs;
      for (const auto& t : toks) {
        if (const Vec* v = space.find(t)) {
          vecs.push_back(*v);
        } else {
          std::cerr << "warning: no vector for '" << t << "', using zeros\n";
          vecs.emplace_back(space.dim(), 0.0);
        }
      }
      std::vector<Vec> args{vecs[0]};
      if (vecs.size() == 3) args.push_back(vecs[2]);
      if (model == "categorical") {
        if (tensors_path.empty()) throw Error("categorical composition needs --tensors");
        auto store = load_tensors(tensors_path);
        auto it = store.find(toks[1]);
        if (it == store.end()) throw Error("no tensor for '" + toks[1] + "'");
        print_vector(it->second.method() == Method::regression ? compose_regression(it->second, args)
                                                               : compose_reduced(it->second, args));
      } else if (model == "kronecker") {
        print_vector(compose_reduced(learn_relation_kronecker(toks[1], vecs[1], args.size()), args));
      } else {
        BaselineParams p;
        if (model == "mixture") p.alpha = alpha, p.beta = beta, p.gamma = gamma;
        print_vector(compose_baseline(parse_baseline(model), vecs, p));
      }
      return 0;
    }

    if (*regress) {
      auto space = VectorSpace::load(space_path);
      MultistepOptions opt;
      opt.lambda_grid = parse_list(grid);
      opt.normalize_inputs = opt.normalize_outputs = !no_normalize;
      MultistepReport rep;
      auto store = multistep_learn(load_training(train), space, opt, &rep);
      for (const auto& [verb, why] : rep.skipped) std::cerr << "skipped " << verb << ": " << why << '\n';
      if (rep.missing_vectors) std::cerr << rep.missing_vectors << " examples lacked vectors\n";
      save_tensors(out, store);
      std::cout << store.size() << " tensors written\n";
      return store.empty() ? 1 : 0;
    }

    if (*logic_cmd) {
      auto m = logic::load_model(model_path);
      auto s = logic::parse_bool_space(bool_space);
      auto v = logic::evaluate(m, formula, s);
      std::cout << (logic::truth_value(v, s) ? "TRUE" : "FALSE") << '\n';
      return 0;
    }

    if (*eval_cmd) {
      auto entries = eval::load_dataset(dataset, eval::parse_kind(kind));
      std::optional<VectorSpace> space;
      std::optional<TensorStore> store;
      std::optional<NgramModel> bigram, trigram;
      eval::Resources res;
      if (!space_path.empty()) res.space = &space.emplace(VectorSpace::load(space_path));
      if (!tensors_path.empty()) res.tensors = &store.emplace(load_tensors(tensors_path));
      if (!lm_corpus.empty()) {
        auto c = load_corpus(lm_corpus);
        bigram.emplace(2).train(c);
        trigram.emplace(3).train(c);
        res.bigram = &*bigram;
        res.trigram = &*trigram;
      }
      res.params.alpha = alpha;
      res.params.beta = beta;
      res.params.gamma = gamma;
      std::vector<std::string> ids;
      for (const auto& m : text::split(models, ','))
        if (!text::trim(m).empty()) ids.emplace_back(text::trim(m));
      eval::ExperimentOptions opt;
      opt.aggregate_mean = aggregate == "mean";
      auto reports = eval::run_experiment(entries, ids, res, opt);
      std::cout << eval::report_table(reports);
      if (!report.empty()) text::write_file(report, eval::report_json(reports));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
