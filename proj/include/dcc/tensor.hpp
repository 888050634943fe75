#pragma once

// Dense relation tensors: learning from argument instances, reduced and full
// representations, and the composition operators built on them.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcc/distrib_space.hpp"
#include "dcc/error.hpp"

namespace dcc {

/// How a tensor was produced. The method also fixes the index layout:
///   sum, kronecker  reduced, shape [d1..dm], one index per argument
///   full            m=1: (i, s); m=2: (i, s1, s2, k); m>=3: (i1..im, s1..sm)
///   regression      sentence index first, then arguments subject-first
///   plain           no interpretation (logic tensors, scratch values)
enum class Method { sum, kronecker, full, regression, plain };

Method parse_method(std::string_view name);
std::string to_string(Method m);

class Tensor {
 public:
  Tensor() = default;
  /// Zero-filled.
  Tensor(std::vector<std::size_t> shape, Method method = Method::plain, std::string label = {});
  /// Throws ShapeError when data.size() != product(shape).
  Tensor(std::vector<std::size_t> shape, std::vector<double> data, Method method = Method::plain,
         std::string label = {});

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }
  Method method() const { return method_; }
  void set_method(Method m) { method_ = m; }

  /// Number of arguments the tensor consumes under its layout.
  std::size_t arity() const;

  std::size_t offset(std::span<const std::size_t> index) const;
  double& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
  double at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  double& at(std::initializer_list<std::size_t> index) { return at(std::span(index.begin(), index.size())); }
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span(index.begin(), index.size()));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
  Method method_ = Method::plain;
  std::string label_;
};

std::size_t shape_product(std::span<const std::size_t> shape);

/// Flat row-major Kronecker product of the vectors, in order.
Vec kron(std::span<const Vec> vectors);
Vec kron(const Vec& a, const Vec& b);
/// Throws ShapeError on length mismatch.
Vec hadamard(std::span<const double> a, std::span<const double> b);

/// Sums over the last index: out[..] = sum_k t[.., k] v[k].
Tensor contract_last(const Tensor& t, std::span<const double> v);
/// Sums over the first index: out[..] = sum_i v[i] t[i, ..].
Tensor contract_first(const Tensor& t, std::span<const double> v);

struct RelationInstance {
  std::string relation;
  std::vector<std::string> args;
};

/// `relation<TAB>arg1<TAB>...` lines; '#' comments and blank lines skipped.
/// Throws ParseError when a relation appears with two different arities.
std::vector<RelationInstance> parse_relations(std::string_view text);
std::vector<RelationInstance> load_relations(const std::string& path);

struct LearnReport {
  std::size_t used = 0;
  std::size_t skipped = 0;  // instances with an argument missing from the space
};

/// Sum over the instances of `relation` of the Kronecker product of their
/// argument vectors. Other relations in the list are ignored.
Tensor learn_relation_sum(const std::string& relation, std::span<const RelationInstance> instances,
                          const VectorSpace& space, std::size_t arity, LearnReport* report = nullptr);

/// The arity-fold Kronecker power of the relation's own lexical vector.
Tensor learn_relation_kronecker(const std::string& relation, std::span<const double> lex,
                                std::size_t arity);

/// t ⊙ (args[0] ⊗ ... ⊗ args[m-1]), flattened row-major.
Vec compose_reduced(const Tensor& t, std::span<const Vec> args);

constexpr std::size_t kDefaultCellCap = 10'000'000;

/// Places the reduced entries on the Δ diagonal of the full tensor.
Tensor expand_reduced_to_full(const Tensor& t, std::size_t cell_cap = kDefaultCellCap);
/// Reads the Δ diagonal back out of a full tensor.
Tensor compress_full(const Tensor& full);

/// Contracts each argument with its N index of a full tensor and returns the
/// flattened sentence part.
Vec compose_full_epsilon(const Tensor& full, std::span<const Vec> args);

/// s = (V × object) × subject for a regression tensor; args are subject-first.
Vec compose_regression(const Tensor& t, std::span<const Vec> args);

enum class Baseline { add, weighted_add, multiply, mixture, verb_only, tensor_product };

Baseline parse_baseline(std::string_view name);

struct BaselineParams {
  std::optional<std::vector<double>> weights;  // weighted_add, one per vector
  std::optional<double> alpha, beta, gamma;    // mixture: αa + βb + γ(a⊙b)
  double smoothing = 0;                        // multiply: product of (v + s)
  /// verb_only: which vector is the head; defaults to 1 (vectors in sentence
  /// order, so index 1 is the verb) or 0 for a single vector.
  std::optional<std::size_t> head;
};

Vec compose_baseline(Baseline model, std::span<const Vec> vectors, const BaselineParams& params = {});

/// Cosine of the Kronecker-model sentences (v1⊙s)⊗(v1⊙o) and (v2⊙s)⊗(v2⊙o)
/// without building the dim² vectors.
Similarity kronecker_similarity_factorized(std::span<const double> verb1, std::span<const double> verb2,
                                           std::span<const double> subject,
                                           std::span<const double> object);

/// Tensors keyed by label, one per line:
/// `label<TAB>method<TAB>d1,d2,...<TAB>w w w ...`
using TensorStore = std::map<std::string, Tensor>;

std::string format_tensors(const TensorStore& store);
TensorStore parse_tensors(std::string_view text);
TensorStore load_tensors(const std::string& path);
void save_tensors(const std::string& path, const TensorStore& store);

}  // namespace dcc
