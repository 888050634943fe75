#pragma once

// Ridge regression for estimating relation tensors from example
// input/output vectors, with GCV λ selection and SVD dimensionality reduction.

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dcc/distrib_space.hpp"
#include "dcc/tensor.hpp"

namespace dcc {

using Matrix = Eigen::MatrixXd;

struct RegressionProblem {
  Matrix inputs;   // one example per row
  Matrix outputs;  // rows aligned with inputs
  double lambda = 0;
};

/// B = (XᵀX + λI)⁻¹ XᵀY. Throws Error on mismatched rows, negative λ, or a
/// singular system at λ = 0.
Matrix ridge_fit(const RegressionProblem& p);

/// ‖XB − Y‖² + λ‖B‖².
double ridge_objective(const RegressionProblem& p, const Matrix& b);

/// n·RSS / (n − tr H)², RSS summed over output columns. NaN when the
/// denominator vanishes.
double gcv_score(const Matrix& x, const Matrix& y, double lambda);

/// Grid value with the lowest GCV score; ties go to the smaller λ.
double gcv_lambda(const Matrix& x, const Matrix& y, std::span<const double> grid);

struct ReducedSpace {
  Matrix projection;  // dim(N) × k, the leading right singular vectors
  std::size_t k = 0;
  std::vector<double> singular_values;  // all of them, descending
};

struct SvdResult {
  ReducedSpace reduction;
  VectorSpace space;  // rows of U_k Σ_k, basis named sv1..svk
};

/// Throws Error when k is 0 or exceeds min(words, dim).
SvdResult svd_reduce(const VectorSpace& space, std::size_t k);

/// Stacks the space's vectors (map order) into a words × dim matrix.
Matrix space_matrix(const VectorSpace& space);

// ---- two-step estimation of order-3 verb tensors ----

struct SvoExample {
  std::string subject, verb, object, phrase;
};

/// `subject<TAB>verb<TAB>object<TAB>phrase-token` lines.
std::vector<SvoExample> parse_training(std::string_view text);
std::vector<SvoExample> load_training(const std::string& path);

/// One training triple for a single verb, already resolved to vectors.
struct SvoSample {
  std::string object;  // groups samples into step-1 problems
  Vec subject_vec, object_vec, sentence_vec;
};

struct MultistepOptions {
  std::vector<double> lambda_grid{0.01, 0.1, 1, 10};
  std::size_t min_examples = 3;  // per regression, in both steps
  bool normalize_inputs = true;
  bool normalize_outputs = true;
};

struct MultistepReport {
  std::map<std::string, std::string> skipped;  // verb -> reason
  std::map<std::string, std::size_t> step1_problems;
  std::size_t missing_vectors = 0;  // examples dropped for lack of a vector
};

/// Step 1 fits, per object, a matrix taking subject to sentence; step 2 fits
/// a map from object vector to that matrix (row-major unfolded). The result
/// has shape [dim(S), dim(subject), dim(object)] and composes as
/// (V × object) × subject. Throws Error with the reason if too few examples.
Tensor multistep_fit(const std::string& verb, std::span<const SvoSample> samples,
                     const MultistepOptions& options = {});

/// Runs multistep_fit for every verb, skipping (and reporting) verbs without
/// enough data.
TensorStore multistep_learn(std::span<const SvoExample> examples, const VectorSpace& space,
                            const MultistepOptions& options = {}, MultistepReport* report = nullptr);

}  // namespace dcc
