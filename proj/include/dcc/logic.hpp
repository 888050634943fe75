#pragma once

// Finite-domain predicate calculus simulated with tensors over boolean
// sentence spaces.

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dcc/distrib_space.hpp"
#include "dcc/tensor.hpp"

namespace dcc::logic {

class Domain {
 public:
  Domain() = default;
  /// Throws Error on duplicate names.
  explicit Domain(std::vector<std::string> elements);

  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t dim() const { return elements_.size(); }
  /// Throws Error for an unknown name.
  std::size_t index(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) > 0; }

 private:
  std::vector<std::string> elements_;
  std::map<std::string, std::size_t> index_;
};

/// B1: one dimension, ⊤ = [1], false = [0]. B2: ⊤ = [1,0], ⊥ = [0,1].
enum class BoolSpace { b1, b2 };

BoolSpace parse_bool_space(std::string_view name);
std::size_t dim(BoolSpace s);
Vec top(BoolSpace s);
Vec bottom(BoolSpace s);

/// B1: true iff the norm is at least 1e-12. B2: true for ⊤, false for ⊥,
/// Error for anything else.
bool truth_value(std::span<const double> v, BoolSpace s);

class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

Vec encode_element(const Domain& d, const std::string& name);
Vec encode_set(const Domain& d, const std::set<std::string>& members);

/// Diagonal 0/1 matrix; applied to a set vector it intersects with the members.
Tensor predicate_tensor(const Domain& d, const std::set<std::string>& members);

using Tuple = std::vector<std::string>;

/// Shape [dim(S), |D|, ..., |D|]: sentence index first, then arguments
/// subject-first. B2 also fills the ⊥ slice at every non-member tuple.
Tensor relation_tensor(const Domain& d, const std::set<Tuple>& tuples, std::size_t arity, BoolSpace s);

/// Contracts the arguments right to left: (T × last) × ... × first.
Vec apply(const Tensor& t, std::span<const Vec> args);

enum class Connective { negation, conjunction, disjunction, implication };

Connective parse_connective(std::string_view name);

/// B2 only. Binary tensors have shape [out, second, first] so that
/// contracting the first argument (last index) and then the second gives the
/// result. Throws UnsupportedMode for B1.
Tensor connective_tensor(Connective c, BoolSpace s = BoolSpace::b2);

Vec negate(std::span<const double> a);
Vec combine(Connective c, std::span<const double> a, std::span<const double> b);

/// Component-wise min; set intersection on indicator vectors.
Vec intersect(std::span<const double> x, std::span<const double> y);

// Quantifiers are not multilinear, so they are plain functions rather than
// tensors. Inputs must be 0/1 indicator vectors.
Vec forall(std::span<const double> x, std::span<const double> y, BoolSpace s = BoolSpace::b2);
Vec exists(std::span<const double> x, BoolSpace s = BoolSpace::b2);

struct Relation {
  std::size_t arity = 0;
  std::set<Tuple> tuples;
};

struct Model {
  Domain domain;
  std::map<std::string, std::set<std::string>> predicates;
  std::map<std::string, Relation> relations;
};

/// `element<TAB>name`, `pred<TAB>P<TAB>a,b`, `rel<TAB>R<TAB>a,b;c,d` lines.
Model parse_model(std::string_view text);
Model load_model(const std::string& path);

/// Evaluates a formula to a boolean-space vector. Formulas:
///   R(a,b)  P(a)  not(F)  and(F,G)  or(F,G)  implies(F,G)
///   forall(X,Y)  exists(X)
/// where sets X are predicate names, {a,b,...} literals, or min(X,Y).
Vec evaluate(const Model& m, std::string_view formula, BoolSpace s = BoolSpace::b2);

}  // namespace dcc::logic
