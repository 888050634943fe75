#include <doctest.h>

#include <cmath>
#include <random>

#include "dcc/distrib_space.hpp"

using namespace dcc;

namespace {

// Independent window scan: for every occurrence of w, every other token of
// the same sentence within `radius` (or anywhere when radius < 0).
std::map<std::string, std::map<std::string, double>> scan(const Corpus& c, long radius) {
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& s : c)
    for (long i = 0; i < static_cast<long>(s.size()); ++i)
      for (long j = 0; j < static_cast<long>(s.size()); ++j)
        if (i != j && (radius < 0 || std::labs(i - j) <= radius)) out[s[i]][s[j]] += 1;
  return out;
}

}  // namespace

TEST_CASE("toy vectors from sentence co-occurrence") {
  auto corpus = parse_corpus(
      "the dog is a furry pet\n"
      "stroke the furry dog\n"
      "a pet dog\n"
      "the cat is a furry pet\n");
  SpaceOptions o;
  o.fixed_basis = std::vector<std::string>{"furry", "pet", "stroke"};
  o.window = Window::whole_sentence();
  o.weighting = Weighting::raw;
  auto sp = build_space(corpus, o);
  CHECK(sp.at("dog") == Vec{2, 2, 1});
  CHECK(sp.at("cat") == Vec{1, 1, 0});

  o.targets = std::set<std::string>{"dog", "unicorn"};
  auto t = build_space(corpus, o);
  CHECK(t.vectors().size() == 2);
  CHECK(t.at("unicorn") == Vec{0, 0, 0});
}

TEST_CASE("raw counts match a brute-force scan") {
  auto corpus = parse_corpus(
      "a b c a d\n"
      "b b e\n"
      "c a e d a b\n"
      "d\n"
      "e c b a c\n");
  auto basis = select_basis(corpus, 100, {});
  CHECK(basis.size() == 5);
  for (long radius : {-1L, 1L, 2L, 5L}) {
    Window w = radius < 0 ? Window::whole_sentence() : Window::words(static_cast<std::size_t>(radius));
    auto sp = count_cooccurrences(corpus, basis, w);
    auto expect = scan(corpus, radius);
    for (const auto& [word, v] : sp.vectors()) {
      double total = 0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(v[i] == expect[word][basis[i]]);
        total += v[i];
      }
      double slots = 0;
      for (const auto& [_, n] : expect[word]) slots += n;
      CHECK(total == slots);
    }
  }
}

TEST_CASE("windows never cross sentences") {
  auto corpus = parse_corpus("x y\nz x\n");
  auto sp = count_cooccurrences(corpus, {"x", "y", "z"}, Window::words(5));
  CHECK(sp.at("y") == Vec{1, 0, 0});
  CHECK(sp.at("z") == Vec{1, 0, 0});
  CHECK(sp.at("x") == Vec{0, 1, 1});
}

TEST_CASE("basis selection") {
  auto corpus = parse_corpus("b a c b a the the the\nd b\n");
  CHECK(select_basis(corpus, 3, {}) == std::vector<std::string>{"b", "the", "a"});
  CHECK(select_basis(corpus, 2, {"the"}) == std::vector<std::string>{"b", "a"});
  std::vector<std::string> warn;
  CHECK(select_basis(corpus, 50, {}, &warn).size() == 5);
  CHECK(warn.size() == 1);
}

TEST_CASE("ratio weighting") {
  CHECK(ratio_weight(2, 4, 10, 100) == doctest::Approx(5.0));
  CHECK(ratio_weight(0, 4, 10, 100) == 0.0);
  CHECK(ratio_weight(3, 0, 10, 100) == 0.0);

  // x and y occur with w and v in equal proportion
  auto corpus = parse_corpus("w x\nw y\nv x\nv y\n");
  SpaceOptions o;
  o.fixed_basis = std::vector<std::string>{"x", "y"};
  o.window = Window::whole_sentence();
  o.targets = std::set<std::string>{"w", "v"};
  auto sp = build_space(corpus, o);
  CHECK(sp.meta().basis_total == 4);
  for (const auto& [_, v] : sp.vectors())
    for (double x : v) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("ppmi and tfidf") {
  auto corpus = parse_corpus("w x\nw x\nv y\nv x\n");
  auto counts = count_cooccurrences(corpus, {"x", "y"}, Window::whole_sentence(),
                                    std::set<std::string>{"w", "v"});
  auto ratio = weight_ratio(counts);
  auto ppmi = weight_ppmi(counts);
  // w: f_w=2, f_wx=2, f_x=3, f_b*=4 -> 4/3
  CHECK(ratio.at("w")[0] == doctest::Approx(4.0 / 3.0));
  CHECK(ppmi.at("w")[0] == doctest::Approx(std::log(4.0 / 3.0)));
  // v,x: 1*4/(3*2) < 1 -> clamped
  CHECK(ppmi.at("v")[0] == 0.0);
  CHECK(ppmi.at("v")[1] == doctest::Approx(std::log(2.0)));

  auto tfidf = weight_tfidf(counts);
  // x appears in both vectors, y in one
  CHECK(tfidf.at("w")[0] == 0.0);
  CHECK(tfidf.at("v")[1] == doctest::Approx(std::log(2.0)));
  CHECK(parse_weighting("pmi") == Weighting::ppmi);
  CHECK_THROWS(parse_weighting("bm25"));
}

TEST_CASE("cosine") {
  Vec dog{2, 2, 1}, cat{3, 1, 0}, snake{0, 2, 2};
  CHECK(cosine(dog, cat).value == doctest::Approx(8.0 / (3.0 * std::sqrt(10.0))));
  CHECK(cosine(dog, snake).value == doctest::Approx(6.0 / (3.0 * std::sqrt(8.0))));
  CHECK(cosine(dog, dog).value == doctest::Approx(1.0));
  auto z = cosine(dog, Vec{0, 0, 0});
  CHECK(z.degenerate);
  CHECK(z.value == 0.0);
  CHECK_THROWS_AS(cosine(dog, Vec{1, 2}), ShapeError);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 100; ++t) {
    Vec a(6), b(6);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    Vec sa = a;
    for (auto& x : sa) x *= 2.5;
    CHECK(cosine(a, b).value == doctest::Approx(cosine(b, a).value).epsilon(1e-12));
    CHECK(cosine(sa, b).value == doctest::Approx(cosine(a, b).value).epsilon(1e-12));
  }
}

TEST_CASE("space files round trip and builds are deterministic") {
  auto corpus = parse_corpus("a b c a d e f\nb b e a c\nf e d c b a\n");
  SpaceOptions o;
  o.basis_size = 4;
  o.window = Window::words(2);
  auto s1 = build_space(corpus, o);
  auto s2 = build_space(corpus, o);
  CHECK(s1.to_tsv() == s2.to_tsv());
  auto back = VectorSpace::parse_tsv(s1.to_tsv());
  CHECK(back.basis() == s1.basis());
  REQUIRE(back.vectors().size() == s1.vectors().size());
  for (const auto& [w, v] : s1.vectors()) {
    const Vec* bv = back.find(w);
    REQUIRE(bv);
    REQUIRE(bv->size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK((*bv)[i] == doctest::Approx(v[i]).epsilon(1e-8));
  }

  CHECK_THROWS_AS(VectorSpace::parse_tsv("#basis\ta\tb\nw\t1\n"), ParseError);
  CHECK_THROWS_AS(VectorSpace::parse_tsv("w\t1\t2\n"), ParseError);
  CHECK_THROWS(build_space(Corpus{}, o));
  VectorSpace v({"a"});
  CHECK_THROWS_AS(v.set("x", {1, 2}), ShapeError);
}
