#include <doctest.h>

#include <functional>
#include <random>

#include "dcc/logic.hpp"

using namespace dcc;
using namespace dcc::logic;

namespace {

const Domain people({"john", "mary", "peter"});

const std::set<Tuple> loves{{"john", "john"}, {"mary", "mary"}, {"john", "mary"}, {"mary", "john"}, {"peter", "mary"}};

Vec e(const std::string& n) { return encode_element(people, n); }

}  // namespace

TEST_CASE("domain encoding") {
  CHECK(e("john") == Vec{1, 0, 0});
  CHECK(encode_set(people, {}) == Vec{0, 0, 0});
  CHECK(encode_set(people, {"john", "mary", "peter"}) == Vec{1, 1, 1});
  CHECK_THROWS(encode_set(people, {"zeus"}));
  CHECK_THROWS(Domain({"a", "a"}));
}

TEST_CASE("relations in both sentence spaces") {
  for (BoolSpace s : {BoolSpace::b1, BoolSpace::b2}) {
    auto t = relation_tensor(people, loves, 2, s);
    CHECK(t.shape() == std::vector<std::size_t>{dim(s), 3, 3});
    std::vector<Vec> jm{e("john"), e("mary")};
    CHECK(logic::apply(t, jm) == top(s));
    std::vector<Vec> pj{e("peter"), e("john")};
    CHECK(logic::apply(t, pj) == (s == BoolSpace::b1 ? Vec{0} : bottom(s)));
    CHECK_FALSE(truth_value(logic::apply(t, pj), s));
  }
  // hates nobody: Peter hates Mary is false
  std::vector<Vec> pm{e("peter"), e("mary")};
  CHECK(logic::apply(relation_tensor(people, {}, 2, BoolSpace::b1), pm) == Vec{0});
  CHECK(logic::apply(relation_tensor(people, {}, 2, BoolSpace::b2), pm) == bottom(BoolSpace::b2));
  CHECK_THROWS(truth_value(Vec{1, 1}, BoolSpace::b2));
}

TEST_CASE("ground atoms agree with set membership") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> names;
    std::size_t n = 1 + trial % 5;
    for (std::size_t i = 0; i < n; ++i) names.push_back("d" + std::to_string(i));
    Domain d(names);
    std::size_t arity = 1 + trial % 3;
    std::set<Tuple> members;
    std::vector<std::size_t> idx(arity, 0);
    std::vector<Tuple> all;
    std::function<void(std::size_t, Tuple&)> gen = [&](std::size_t k, Tuple& cur) {
      if (k == arity) {
        all.push_back(cur);
        return;
      }
      for (const auto& x : names) {
        cur.push_back(x);
        gen(k + 1, cur);
        cur.pop_back();
      }
    };
    Tuple cur;
    gen(0, cur);
    for (const auto& tup : all)
      if (rng() % 2) members.insert(tup);
    for (BoolSpace s : {BoolSpace::b1, BoolSpace::b2}) {
      auto t = relation_tensor(d, members, arity, s);
      for (const auto& tup : all) {
        std::vector<Vec> args;
        for (const auto& x : tup) args.push_back(encode_element(d, x));
        auto v = logic::apply(t, args);
        if (s == BoolSpace::b2) CHECK((v == top(s) || v == bottom(s)));
        CHECK(truth_value(v, s) == (members.count(tup) > 0));
      }
    }
  }
}

TEST_CASE("contraction is an index sum") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  Tensor t({2, 3, 4}, Method::plain);
  for (auto& x : t.data()) x = u(rng);
  Vec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng), u(rng)};
  std::vector<Vec> args{a, b};
  auto got = logic::apply(t, args);
  for (std::size_t s = 0; s < 2; ++s) {
    double expect = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 4; ++k) expect += t.at({s, i, k}) * a[i] * b[k];
    CHECK(got[s] == doctest::Approx(expect));
  }
  Tensor m({2, 2}, {1, 2, 3, 4});
  std::vector<Vec> one{{1, 1}};
  CHECK(logic::apply(m, one) == Vec{3, 7});
}

TEST_CASE("predicates") {
  Domain animals({"a", "b", "c"});
  auto brown = predicate_tensor(animals, {"b", "c"});
  std::vector<Vec> dogs{{1, 1, 0}};
  CHECK(logic::apply(brown, dogs) == Vec{0, 1, 0});
  std::vector<Vec> twice{logic::apply(brown, dogs)};
  CHECK(logic::apply(brown, twice) == logic::apply(brown, dogs));
  std::vector<Vec> x{{1, 0, 1}};
  CHECK(logic::apply(predicate_tensor(animals, {}), x) == Vec{0, 0, 0});
  CHECK(logic::apply(predicate_tensor(animals, {"a", "b", "c"}), x) == x[0]);
}

TEST_CASE("connectives reproduce truth tables") {
  const auto T = top(BoolSpace::b2), F = bottom(BoolSpace::b2);
  auto bv = [&](bool b) { return b ? T : F; };
  CHECK(negate(T) == F);
  CHECK(negate(F) == T);
  for (bool p : {true, false})
    for (bool q : {true, false}) {
      CHECK(combine(Connective::conjunction, bv(p), bv(q)) == bv(p && q));
      CHECK(combine(Connective::disjunction, bv(p), bv(q)) == bv(p || q));
      CHECK(combine(Connective::implication, bv(p), bv(q)) == bv(!p || q));
    }
  // T∧ × ⊤ is the identity, T∧ × ⊥ sends everything to ⊥
  auto conj = connective_tensor(Connective::conjunction);
  auto with_true = contract_last(conj, T), with_false = contract_last(conj, F);
  CHECK(with_true.data() == Vec{1, 0, 0, 1});
  CHECK(with_false.data() == Vec{0, 0, 1, 1});
  CHECK_THROWS_AS(connective_tensor(Connective::negation, BoolSpace::b1), UnsupportedMode);
  CHECK_THROWS_AS(connective_tensor(Connective::conjunction, BoolSpace::b1), UnsupportedMode);
}

TEST_CASE("nested connectives agree with a boolean evaluator") {
  std::mt19937 rng(99);
  const auto T = top(BoolSpace::b2), F = bottom(BoolSpace::b2);
  struct Node {
    int op;  // -1 leaf, 0 not, 1 and, 2 or, 3 implies
    std::size_t var;
    std::vector<Node> kids;
  };
  std::function<Node(int)> gen = [&](int depth) {
    Node n{depth == 0 ? -1 : static_cast<int>(rng() % 5) - 1, rng() % 3, {}};
    if (n.op == 0) n.kids.push_back(gen(depth - 1));
    if (n.op > 0) {
      n.kids.push_back(gen(depth - 1));
      n.kids.push_back(gen(depth - 1));
    }
    return n;
  };
  std::function<bool(const Node&, const std::vector<bool>&)> truth = [&](const Node& n, const auto& a) {
    switch (n.op) {
      case -1: return bool(a[n.var]);
      case 0: return !truth(n.kids[0], a);
      case 1: return truth(n.kids[0], a) && truth(n.kids[1], a);
      case 2: return truth(n.kids[0], a) || truth(n.kids[1], a);
      default: return !truth(n.kids[0], a) || truth(n.kids[1], a);
    }
  };
  std::function<Vec(const Node&, const std::vector<bool>&)> tensor = [&](const Node& n, const auto& a) -> Vec {
    static const Connective kinds[] = {Connective::conjunction, Connective::disjunction, Connective::implication};
    if (n.op == -1) return a[n.var] ? T : F;
    if (n.op == 0) {
      std::vector<Vec> x{tensor(n.kids[0], a)};
      return logic::apply(connective_tensor(Connective::negation), x);
    }
    // apply contracts the last argument first, which is the first operand
    std::vector<Vec> args{tensor(n.kids[1], a), tensor(n.kids[0], a)};
    return logic::apply(connective_tensor(kinds[n.op - 1]), args);
  };
  for (int t = 0; t < 50; ++t) {
    Node f = gen(3);
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<bool> a{bool(mask & 1), bool(mask & 2), bool(mask & 4)};
      CHECK(tensor(f, a) == (truth(f, a) ? T : F));
    }
  }
}

TEST_CASE("quantifiers") {
  const auto T = top(BoolSpace::b2), F = bottom(BoolSpace::b2);
  Vec brown{1, 0, 1}, dogs{1, 1, 0}, cats{0, 0, 1};
  CHECK(forall(brown, dogs) == F);
  auto bc = intersect(brown, cats);
  CHECK(bc == Vec{0, 0, 1});
  CHECK(exists(bc) == T);
  CHECK(forall(dogs, dogs) == T);
  CHECK_THROWS(forall(Vec{0.5, 0, 0}, dogs));

  // not multilinear: scaled empty sets leave the result unchanged
  Vec empty{0, 0, 0};
  Vec scaled = empty;
  for (auto& x : scaled) x *= 3.0;
  CHECK(forall(scaled, scaled) == forall(empty, empty));
  CHECK(forall(empty, empty) == T);
  Vec scaled_top{3.0 * 2.0 * T[0], 3.0 * 2.0 * T[1]};
  CHECK(forall(scaled, scaled) != scaled_top);
  CHECK(exists(empty) == F);
  CHECK(exists(scaled) != Vec{3.0 * F[0], 3.0 * F[1]});
  CHECK(exists(Vec{0, 1, 1}, BoolSpace::b1) == Vec{1});
}

TEST_CASE("model files and formulas") {
  auto m = parse_model(
      "element\tjohn\nelement\tmary\nelement\tpeter\n"
      "pred\tbrown\tjohn,peter\npred\tdog\tjohn,mary\npred\tcat\tpeter\n"
      "rel\tloves\tjohn,john;mary,mary;john,mary;mary,john;peter,mary\n"
      "rel\thates\t\n");
  auto B2 = BoolSpace::b2;
  auto truth = [&](const char* f, BoolSpace s = BoolSpace::b2) { return truth_value(evaluate(m, f, s), s); };
  CHECK(truth("loves(john,mary)"));
  CHECK(truth("loves(john,mary)", BoolSpace::b1));
  CHECK_FALSE(truth("loves(peter,john)"));
  CHECK_FALSE(truth("hates(peter,mary)"));
  CHECK(evaluate(m, "hates(peter,mary)", BoolSpace::b1) == Vec{0});
  CHECK(truth("brown(peter)"));
  CHECK(truth("not(cat(john))"));
  CHECK(truth("implies(cat(john),loves(peter,peter))"));
  CHECK(truth("or(cat(john),dog(john))"));
  CHECK_FALSE(truth("and(cat(john),dog(john))"));
  CHECK_FALSE(truth("forall(brown,dog)"));
  CHECK(truth("exists(min(brown,cat))"));
  CHECK(truth("forall({mary},dog)"));
  CHECK(truth("and(dog(john),brown(john))", BoolSpace::b1));
  CHECK_THROWS_AS(evaluate(m, "not(dog(john))", BoolSpace::b1), UnsupportedMode);
  CHECK_THROWS(evaluate(m, "loves(john)", B2));
  CHECK_THROWS(evaluate(m, "loves(john,zeus)", B2));
  CHECK_THROWS(parse_model("rel\tr\ta,b;c\nelement\ta\n"));
}
