#include "dcc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dcc/text_io.hpp"

namespace dcc {

Method parse_method(std::string_view name) {
  if (name == "sum") return Method::sum;
  if (name == "kronecker") return Method::kronecker;
  if (name == "full") return Method::full;
  if (name == "regression") return Method::regression;
  if (name == "plain") return Method::plain;
  throw Error("unknown tensor method '" + std::string(name) + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::sum: return "sum";
    case Method::kronecker: return "kronecker";
    case Method::full: return "full";
    case Method::regression: return "regression";
    case Method::plain: return "plain";
  }
  return "?";
}

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

namespace {

std::string shape_string(std::span<const std::size_t> shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(shape[i]);
  }
  return s;
}

// Advances a row-major multi-index; false once it wraps around.
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> shape) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, Method method, std::string label)
    : shape_(std::move(shape)), method_(method), label_(std::move(label)) {
  data_.assign(shape_product(shape_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data, Method method,
               std::string label)
    : shape_(std::move(shape)), data_(std::move(data)), method_(method), label_(std::move(label)) {
  if (data_.size() != shape_product(shape_))
    throw ShapeError("tensor '" + label_ + "': " + std::to_string(data_.size()) +
                     " weights for shape " + shape_string(shape_));
}

std::size_t Tensor::arity() const {
  switch (method_) {
    case Method::full: return order() / 2;
    case Method::regression: return order() == 0 ? 0 : order() - 1;
    default: return order();
  }
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) throw ShapeError("index has wrong order");
  std::size_t off = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= shape_[k]) throw ShapeError("index out of range");
    off = off * shape_[k] + index[k];
  }
  return off;
}

Vec kron(std::span<const Vec> vectors) {
  Vec out{1.0};
  for (const auto& v : vectors) out = kron(out, v);
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  return out;
}

Vec hadamard(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeError("component-wise product of lengths " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Tensor contract_last(const Tensor& t, std::span<const double> v) {
  if (t.order() == 0) throw ShapeError("cannot contract an order-0 tensor");
  const std::size_t k = t.shape().back();
  if (v.size() != k)
    throw ShapeError("contracting last mode of size " + std::to_string(k) + " with vector of length " +
                     std::to_string(v.size()));
  std::vector<std::size_t> shape(t.shape().begin(), t.shape().end() - 1);
  Tensor out(shape, Method::plain, t.label());
  const auto& in = t.data();
  for (std::size_t r = 0; r < out.size(); ++r) {
    double s = 0;
    for (std::size_t j = 0; j < k; ++j) s += in[r * k + j] * v[j];
    out.data()[r] = s;
  }
  return out;
}

Tensor contract_first(const Tensor& t, std::span<const double> v) {
  if (t.order() == 0) throw ShapeError("cannot contract an order-0 tensor");
  const std::size_t k = t.shape().front();
  if (v.size() != k)
    throw ShapeError("contracting first mode of size " + std::to_string(k) + " with vector of length " +
                     std::to_string(v.size()));
  std::vector<std::size_t> shape(t.shape().begin() + 1, t.shape().end());
  Tensor out(shape, Method::plain, t.label());
  const std::size_t stride = out.size();
  const auto& in = t.data();
  for (std::size_t i = 0; i < k; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t r = 0; r < stride; ++r) out.data()[r] += v[i] * in[i * stride + r];
  }
  return out;
}

std::vector<RelationInstance> parse_relations(std::string_view text) {
  std::vector<RelationInstance> out;
  std::map<std::string, std::size_t> arity;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() < 2) throw ParseError("relation line needs at least one argument", lineno);
    RelationInstance inst{cols[0], std::vector<std::string>(cols.begin() + 1, cols.end())};
    auto [it, fresh] = arity.emplace(inst.relation, inst.args.size());
    if (!fresh && it->second != inst.args.size())
      throw ParseError("relation '" + inst.relation + "' used with arity " +
                           std::to_string(inst.args.size()) + " and " + std::to_string(it->second),
                       lineno);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<RelationInstance> load_relations(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_relations(all);
}

Tensor learn_relation_sum(const std::string& relation, std::span<const RelationInstance> instances,
                          const VectorSpace& space, std::size_t arity, LearnReport* report) {
  if (arity == 0) throw Error("arity must be positive");
  Tensor t(std::vector<std::size_t>(arity, space.dim()), Method::sum, relation);
  LearnReport rep;
  std::vector<Vec> args;
  for (const auto& inst : instances) {
    if (inst.relation != relation) continue;
    if (inst.args.size() != arity)
      throw Error("instance of '" + relation + "' has " + std::to_string(inst.args.size()) +
                  " arguments, expected " + std::to_string(arity));
    args.clear();
    bool ok = true;
    for (const auto& a : inst.args) {
      const Vec* v = space.find(a);
      if (!v) {
        ok = false;
        break;
      }
      args.push_back(*v);
    }
    if (!ok) {
      ++rep.skipped;
      continue;
    }
    auto k = kron(args);
    for (std::size_t i = 0; i < k.size(); ++i) t.data()[i] += k[i];
    ++rep.used;
  }
  if (report) *report = rep;
  if (rep.used == 0) throw Error("no usable instances for relation '" + relation + "'");
  return t;
}

Tensor learn_relation_kronecker(const std::string& relation, std::span<const double> lex,
                                std::size_t arity) {
  if (arity == 0) throw Error("arity must be positive");
  bool nonzero = false;
  for (double x : lex) nonzero |= x != 0;
  if (!nonzero) throw Error("lexical vector for '" + relation + "' is zero");
  Vec v(lex.begin(), lex.end());
  std::vector<Vec> copies(arity, v);
  return Tensor(std::vector<std::size_t>(arity, v.size()), kron(copies), Method::kronecker, relation);
}

Vec compose_reduced(const Tensor& t, std::span<const Vec> args) {
  if (args.size() != t.order())
    throw ShapeError("tensor '" + t.label() + "' takes " + std::to_string(t.order()) + " arguments, got " +
                     std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i].size() != t.shape()[i])
      throw ShapeError("argument " + std::to_string(i + 1) + " has length " + std::to_string(args[i].size()) +
                       ", tensor mode has " + std::to_string(t.shape()[i]));
  return hadamard(t.data(), kron(args));
}

namespace {

std::vector<std::size_t> full_shape(std::span<const std::size_t> reduced) {
  const std::size_t m = reduced.size();
  if (m == 1) return {reduced[0], reduced[0]};
  if (m == 2) return {reduced[0], reduced[0], reduced[1], reduced[1]};
  std::vector<std::size_t> s(reduced.begin(), reduced.end());
  s.insert(s.end(), reduced.begin(), reduced.end());
  return s;
}

std::vector<std::size_t> full_index(const std::vector<std::size_t>& idx) {
  if (idx.size() == 1) return {idx[0], idx[0]};
  if (idx.size() == 2) return {idx[0], idx[0], idx[1], idx[1]};
  auto s = idx;
  s.insert(s.end(), idx.begin(), idx.end());
  return s;
}

std::vector<std::size_t> reduced_shape_of(const Tensor& full) {
  if (full.method() != Method::full || full.order() < 2 || full.order() % 2)
    throw ShapeError("tensor '" + full.label() + "' is not a full representation");
  const auto& s = full.shape();
  const std::size_t m = s.size() / 2;
  std::vector<std::size_t> r;
  if (m == 2) {
    r = {s[0], s[2]};
  } else {
    r.assign(s.begin(), s.begin() + m);
  }
  if (full_shape(r) != s) throw ShapeError("full tensor '" + full.label() + "' has inconsistent shape");
  return r;
}

}  // namespace

Tensor expand_reduced_to_full(const Tensor& t, std::size_t cell_cap) {
  if (t.order() == 0) throw ShapeError("cannot expand an order-0 tensor");
  auto fshape = full_shape(t.shape());
  double cells = 1;
  for (auto d : fshape) cells *= static_cast<double>(d);
  if (cells > static_cast<double>(cell_cap))
    throw Error("full tensor for '" + t.label() + "' would need " + text::format_number(cells) +
                " cells, cap is " + std::to_string(cell_cap));
  Tensor full(fshape, Method::full, t.label());
  if (t.size() == 0) return full;
  std::vector<std::size_t> idx(t.order(), 0);
  do {
    full.at(full_index(idx)) = t.at(idx);
  } while (next_index(idx, t.shape()));
  return full;
}

Tensor compress_full(const Tensor& full) {
  auto rshape = reduced_shape_of(full);
  Tensor t(rshape, Method::sum, full.label());
  if (t.size() == 0) return t;
  std::vector<std::size_t> idx(rshape.size(), 0);
  do {
    t.at(idx) = full.at(full_index(idx));
  } while (next_index(idx, rshape));
  return t;
}

Vec compose_full_epsilon(const Tensor& full, std::span<const Vec> args) {
  auto rshape = reduced_shape_of(full);
  const std::size_t m = rshape.size();
  if (args.size() != m)
    throw ShapeError("full tensor '" + full.label() + "' takes " + std::to_string(m) + " arguments, got " +
                     std::to_string(args.size()));
  for (std::size_t i = 0; i < m; ++i)
    if (args[i].size() != rshape[i])
      throw ShapeError("argument " + std::to_string(i + 1) + " has length " + std::to_string(args[i].size()) +
                       ", expected " + std::to_string(rshape[i]));
  Tensor cur = full;
  if (m == 2) {
    // N ⊗ S ⊗ N: the object meets the trailing index, the subject the leading one.
    cur = contract_last(cur, args[1]);
    cur = contract_first(cur, args[0]);
    return cur.data();
  }
  for (const auto& a : args) cur = contract_first(cur, a);
  return cur.data();
}

Vec compose_regression(const Tensor& t, std::span<const Vec> args) {
  if (t.order() != args.size() + 1)
    throw ShapeError("tensor '" + t.label() + "' of order " + std::to_string(t.order()) + " cannot take " +
                     std::to_string(args.size()) + " arguments");
  Tensor cur = t;
  for (std::size_t i = args.size(); i-- > 0;) cur = contract_last(cur, args[i]);
  return cur.data();
}

Baseline parse_baseline(std::string_view name) {
  if (name == "add") return Baseline::add;
  if (name == "weighted-add") return Baseline::weighted_add;
  if (name == "multiply") return Baseline::multiply;
  if (name == "mixture") return Baseline::mixture;
  if (name == "verb-only" || name == "verb") return Baseline::verb_only;
  if (name == "tensor-product") return Baseline::tensor_product;
  throw Error("unknown composition model '" + std::string(name) + "'");
}

Vec compose_baseline(Baseline model, std::span<const Vec> vectors, const BaselineParams& params) {
  if (vectors.empty()) throw Error("nothing to compose");
  const std::size_t d = vectors[0].size();
  if (model != Baseline::tensor_product)
    for (const auto& v : vectors)
      if (v.size() != d) throw ShapeError("vectors to compose differ in length");

  switch (model) {
    case Baseline::add: {
      Vec out(d, 0.0);
      for (const auto& v : vectors)
        for (std::size_t i = 0; i < d; ++i) out[i] += v[i];
      return out;
    }
    case Baseline::weighted_add: {
      if (!params.weights) throw Error("weighted-add needs weights");
      if (params.weights->size() != vectors.size())
        throw Error("weighted-add needs one weight per vector");
      Vec out(d, 0.0);
      for (std::size_t k = 0; k < vectors.size(); ++k)
        for (std::size_t i = 0; i < d; ++i) out[i] += (*params.weights)[k] * vectors[k][i];
      return out;
    }
    case Baseline::multiply: {
      Vec out(d, 1.0);
      for (const auto& v : vectors)
        for (std::size_t i = 0; i < d; ++i) out[i] *= v[i] + params.smoothing;
      return out;
    }
    case Baseline::mixture: {
      if (!params.alpha || !params.beta || !params.gamma) throw Error("mixture needs alpha, beta and gamma");
      Vec out = vectors[0];
      for (std::size_t k = 1; k < vectors.size(); ++k) {
        const auto& b = vectors[k];
        for (std::size_t i = 0; i < d; ++i)
          out[i] = *params.alpha * out[i] + *params.beta * b[i] + *params.gamma * out[i] * b[i];
      }
      return out;
    }
    case Baseline::verb_only: {
      std::size_t head = params.head.value_or(vectors.size() > 1 ? 1 : 0);
      if (head >= vectors.size()) throw Error("head index out of range");
      return vectors[head];
    }
    case Baseline::tensor_product:
      return kron(vectors);
  }
  throw Error("unknown composition model");
}

Similarity kronecker_similarity_factorized(std::span<const double> verb1, std::span<const double> verb2,
                                           std::span<const double> subject,
                                           std::span<const double> object) {
  auto s1 = hadamard(verb1, subject), s2 = hadamard(verb2, subject);
  auto o1 = hadamard(verb1, object), o2 = hadamard(verb2, object);
  const double denom = norm(s1) * norm(o1) * norm(s2) * norm(o2);
  if (denom == 0) return {0.0, true};
  double v = dot(s1, s2) * dot(o1, o2) / denom;
  return {std::clamp(v, -1.0, 1.0), false};
}

std::string format_tensors(const TensorStore& store) {
  std::ostringstream out;
  for (const auto& [label, t] : store) {
    out << label << '\t' << to_string(t.method()) << '\t' << shape_string(t.shape()) << '\t';
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << ' ';
      out << text::format_number(t.data()[i]);
    }
    out << '\n';
  }
  return out.str();
}

TensorStore parse_tensors(std::string_view text) {
  TensorStore store;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError("tensor line needs 4 tab-separated fields", lineno);
    std::vector<std::size_t> shape;
    for (const auto& d : text::split(cols[2], ',')) {
      double x = text::parse_number(d);
      if (x < 0 || x != std::floor(x)) throw ParseError("bad dimension '" + d + "'", lineno);
      shape.push_back(static_cast<std::size_t>(x));
    }
    std::vector<double> data;
    for (const auto& w : text::split_ws(cols[3])) data.push_back(text::parse_number(w));
    if (data.size() != shape_product(shape))
      throw ParseError("tensor '" + cols[0] + "' has " + std::to_string(data.size()) +
                           " weights for shape " + cols[2],
                       lineno);
    Method m;
    try {
      m = parse_method(cols[1]);
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
    store[cols[0]] = Tensor(std::move(shape), std::move(data), m, cols[0]);
  }
  return store;
}

TensorStore load_tensors(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_tensors(all);
}

void save_tensors(const std::string& path, const TensorStore& store) {
  text::write_file(path, format_tensors(store));
}

}  // namespace dcc
