#include "dcc/logic.hpp"

#include <cctype>
#include <cmath>
#include <memory>

#include "dcc/text_io.hpp"

namespace dcc::logic {

Domain::Domain(std::vector<std::string> elements) : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (!index_.emplace(elements_[i], i).second) throw Error("duplicate domain element '" + elements_[i] + "'");
}

std::size_t Domain::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("'" + name + "' is not a domain element");
  return it->second;
}

BoolSpace parse_bool_space(std::string_view name) {
  if (name == "B1" || name == "b1") return BoolSpace::b1;
  if (name == "B2" || name == "b2") return BoolSpace::b2;
  throw Error("unknown boolean space '" + std::string(name) + "'");
}

std::size_t dim(BoolSpace s) { return s == BoolSpace::b1 ? 1 : 2; }
Vec top(BoolSpace s) { return s == BoolSpace::b1 ? Vec{1} : Vec{1, 0}; }
Vec bottom(BoolSpace s) { return s == BoolSpace::b1 ? Vec{0} : Vec{0, 1}; }

bool truth_value(std::span<const double> v, BoolSpace s) {
  if (v.size() != dim(s)) throw ShapeError("truth vector has wrong length");
  if (s == BoolSpace::b1) return norm(v) >= 1e-12;
  if (v[0] == 1 && v[1] == 0) return true;
  if (v[0] == 0 && v[1] == 1) return false;
  throw Error("vector is neither true nor false");
}

Vec encode_element(const Domain& d, const std::string& name) {
  Vec v(d.dim(), 0.0);
  v[d.index(name)] = 1;
  return v;
}

Vec encode_set(const Domain& d, const std::set<std::string>& members) {
  Vec v(d.dim(), 0.0);
  for (const auto& m : members) v[d.index(m)] = 1;
  return v;
}

Tensor predicate_tensor(const Domain& d, const std::set<std::string>& members) {
  Tensor t({d.dim(), d.dim()});
  for (const auto& m : members) {
    auto i = d.index(m);
    t.at({i, i}) = 1;
  }
  return t;
}

Tensor relation_tensor(const Domain& d, const std::set<Tuple>& tuples, std::size_t arity, BoolSpace s) {
  std::vector<std::size_t> shape{dim(s)};
  shape.insert(shape.end(), arity, d.dim());
  Tensor t(shape);
  const std::size_t cells = shape_product(std::span(shape).subspan(1));
  if (s == BoolSpace::b2)
    for (std::size_t c = 0; c < cells; ++c) t.data()[cells + c] = 1;
  for (const auto& tup : tuples) {
    if (tup.size() != arity) throw Error("tuple arity differs from relation arity");
    std::size_t off = 0;
    for (const auto& a : tup) off = off * d.dim() + d.index(a);
    t.data()[off] = 1;
    if (s == BoolSpace::b2) t.data()[cells + off] = 0;
  }
  return t;
}

Vec apply(const Tensor& t, std::span<const Vec> args) {
  Tensor cur = t;
  for (std::size_t i = args.size(); i-- > 0;) cur = contract_last(cur, args[i]);
  return cur.data();
}

Connective parse_connective(std::string_view name) {
  if (name == "not") return Connective::negation;
  if (name == "and") return Connective::conjunction;
  if (name == "or") return Connective::disjunction;
  if (name == "implies") return Connective::implication;
  throw Error("unknown connective '" + std::string(name) + "'");
}

namespace {

// Binary connectives as 2×4 blocks [applied when first is ⊤ | when first is ⊥],
// each block mapping the second argument to the result.
constexpr double kOr[2][4] = {{1, 1, 1, 0}, {0, 0, 0, 1}};
constexpr double kAnd[2][4] = {{1, 0, 0, 0}, {0, 1, 1, 1}};
constexpr double kImplies[2][4] = {{1, 0, 1, 1}, {0, 1, 0, 0}};

Tensor from_block(const double (&block)[2][4]) {
  Tensor t({2, 2, 2});
  for (std::size_t out = 0; out < 2; ++out)
    for (std::size_t first = 0; first < 2; ++first)
      for (std::size_t second = 0; second < 2; ++second)
        t.at({out, second, first}) = block[out][first * 2 + second];
  return t;
}

void require_indicator(std::span<const double> v) {
  for (double x : v)
    if (x != 0 && x != 1) throw Error("quantifier argument is not a 0/1 indicator vector");
}

}  // namespace

Tensor connective_tensor(Connective c, BoolSpace s) {
  if (s == BoolSpace::b1)
    throw UnsupportedMode("connectives have no linear form over B1; use B2");
  switch (c) {
    case Connective::negation: return Tensor({2, 2}, {0, 1, 1, 0});
    case Connective::conjunction: return from_block(kAnd);
    case Connective::disjunction: return from_block(kOr);
    case Connective::implication: return from_block(kImplies);
  }
  throw Error("unknown connective");
}

Vec negate(std::span<const double> a) {
  return contract_last(connective_tensor(Connective::negation), a).data();
}

Vec combine(Connective c, std::span<const double> a, std::span<const double> b) {
  if (c == Connective::negation) throw Error("negation takes one argument");
  return contract_last(contract_last(connective_tensor(c), a), b).data();
}

Vec intersect(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("set vectors differ in length");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

Vec forall(std::span<const double> x, std::span<const double> y, BoolSpace s) {
  require_indicator(x);
  require_indicator(y);
  auto m = intersect(x, y);
  return std::equal(m.begin(), m.end(), x.begin()) ? top(s) : bottom(s);
}

Vec exists(std::span<const double> x, BoolSpace s) {
  require_indicator(x);
  return norm(x) > 0 ? top(s) : bottom(s);
}

Model parse_model(std::string_view text) {
  Model m;
  std::vector<std::string> elements;
  struct Pending {
    std::size_t line;
    std::vector<std::string> cols;
  };
  std::vector<Pending> pending;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    for (auto& c : cols) c = std::string(text::trim(c));
    if (cols[0] == "element") {
      if (cols.size() != 2) throw ParseError("element line needs one name", lineno);
      elements.push_back(cols[1]);
    } else if (cols[0] == "pred" || cols[0] == "rel") {
      if (cols.size() < 2 || cols.size() > 3) throw ParseError(cols[0] + " line needs a name and members", lineno);
      if (cols.size() == 2) cols.emplace_back();
      pending.push_back({lineno, cols});
    } else {
      throw ParseError("unknown model line kind '" + cols[0] + "'", lineno);
    }
  }
  try {
    m.domain = Domain(elements);
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
  for (const auto& [line, cols] : pending) {
    try {
      if (cols[0] == "pred") {
        auto& set = m.predicates[cols[1]];
        for (const auto& e : text::split(cols[2], ','))
          if (!text::trim(e).empty()) set.insert(std::string(text::trim(e)));
        encode_set(m.domain, set);
      } else {
        auto& rel = m.relations[cols[1]];
        for (const auto& tup : text::split(cols[2], ';')) {
          if (text::trim(tup).empty()) continue;
          Tuple t;
          for (const auto& e : text::split(tup, ',')) t.emplace_back(text::trim(e));
          for (const auto& e : t) m.domain.index(e);
          if (rel.arity == 0) rel.arity = t.size();
          if (t.size() != rel.arity) throw Error("tuples of '" + cols[1] + "' differ in arity");
          rel.tuples.insert(std::move(t));
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
  }
  return m;
}

Model load_model(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_model(all);
}

namespace {

struct Node {
  std::string name;
  std::vector<Node> args;
  bool call = false;        // name(...)
  bool set_literal = false; // {a,b}
  std::vector<std::string> members;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  Node parse() {
    Node n = node();
    skip();
    if (pos_ != s_.size()) fail("unexpected text");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what + " in formula", pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '\'') {
        ++pos_;
      } else {
        break;
      }
    }
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  Node node() {
    Node n;
    if (eat('{')) {
      n.set_literal = true;
      if (eat('}')) return n;
      do n.members.push_back(ident());
      while (eat(','));
      if (!eat('}')) fail("expected '}'");
      return n;
    }
    n.name = ident();
    if (eat('(')) {
      n.call = true;
      if (!eat(')')) {
        do n.args.push_back(node());
        while (eat(','));
        if (!eat(')')) fail("expected ')'");
      }
    }
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Evaluator {
 public:
  Evaluator(const Model& m, BoolSpace s) : m_(m), s_(s) {}

  Vec formula(const Node& n) {
    if (!n.call) throw Error("'" + n.name + "' is not a formula");
    const auto& a = n.args;
    if (n.name == "not") {
      arity(n, 1);
      return negate(bool_space_only(formula(a[0])));
    }
    if (n.name == "and" || n.name == "or" || n.name == "implies") {
      arity(n, 2);
      Vec x = formula(a[0]), y = formula(a[1]);
      if (s_ == BoolSpace::b1) {
        if (n.name != "and") throw UnsupportedMode("'" + n.name + "' has no linear form over B1; use B2");
        return {std::min(x[0], y[0])};
      }
      return combine(parse_connective(n.name), x, y);
    }
    if (n.name == "forall") {
      arity(n, 2);
      return forall(set(a[0]), set(a[1]), s_);
    }
    if (n.name == "exists") {
      arity(n, 1);
      return exists(set(a[0]), s_);
    }
    std::vector<Vec> args;
    for (const auto& arg : a) {
      if (arg.call || arg.set_literal) throw Error("arguments of '" + n.name + "' must be element names");
      args.push_back(encode_element(m_.domain, arg.name));
    }
    if (auto it = m_.relations.find(n.name); it != m_.relations.end()) {
      // A relation declared without tuples takes its arity from the call.
      const std::size_t k = it->second.arity == 0 ? args.size() : it->second.arity;
      arity(n, k);
      return logic::apply(relation_tensor(m_.domain, it->second.tuples, k, s_), args);
    }
    if (auto it = m_.predicates.find(n.name); it != m_.predicates.end()) {
      arity(n, 1);
      std::set<Tuple> tuples;
      for (const auto& e : it->second) tuples.insert({e});
      return logic::apply(relation_tensor(m_.domain, tuples, 1, s_), args);
    }
    throw Error("unknown predicate or relation '" + n.name + "'");
  }

 private:
  Vec set(const Node& n) {
    if (n.set_literal) return encode_set(m_.domain, {n.members.begin(), n.members.end()});
    if (n.call) {
      if (n.name != "min") throw Error("'" + n.name + "' does not denote a set");
      arity(n, 2);
      return intersect(set(n.args[0]), set(n.args[1]));
    }
    auto it = m_.predicates.find(n.name);
    if (it == m_.predicates.end()) throw Error("unknown set '" + n.name + "'");
    return encode_set(m_.domain, it->second);
  }

  const Vec& bool_space_only(const Vec& v) {
    if (s_ == BoolSpace::b1) throw UnsupportedMode("negation has no linear form over B1; use B2");
    return v;
  }

  static void arity(const Node& n, std::size_t k) {
    if (n.args.size() != k)
      throw Error("'" + n.name + "' takes " + std::to_string(k) + " argument(s), got " +
                  std::to_string(n.args.size()));
  }

  const Model& m_;
  BoolSpace s_;
};

}  // namespace

Vec evaluate(const Model& m, std::string_view formula, BoolSpace s) {
  Node root = FormulaParser(formula).parse();
  return Evaluator(m, s).formula(root);
}

}  // namespace dcc::logic
