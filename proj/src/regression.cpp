#include "dcc/regression.hpp"

#include <cmath>
#include <limits>

#include "dcc/text_io.hpp"

namespace dcc {

namespace {

void check_problem(const Matrix& x, const Matrix& y, double lambda) {
  if (x.rows() != y.rows())
    throw Error("regression inputs have " + std::to_string(x.rows()) + " rows, outputs " +
                std::to_string(y.rows()));
  if (x.rows() == 0) throw Error("regression needs at least one example");
  if (!(lambda >= 0)) throw Error("lambda must be non-negative");
}

Vec normalized(const Vec& v) {
  double n = norm(v);
  if (n == 0) return v;
  Vec out(v);
  for (auto& x : out) x /= n;
  return out;
}

Matrix rows_to_matrix(const std::vector<Vec>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

}  // namespace

Matrix ridge_fit(const RegressionProblem& p) {
  check_problem(p.inputs, p.outputs, p.lambda);
  const Matrix& x = p.inputs;
  Matrix a = x.transpose() * x;
  a.diagonal().array() += p.lambda;
  Matrix rhs = x.transpose() * p.outputs;
  if (p.lambda > 0) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
  }
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible())
    throw Error("XᵀX + λI is singular at lambda = " + text::format_number(p.lambda) +
                "; use a positive lambda");
  return lu.solve(rhs);
}

double ridge_objective(const RegressionProblem& p, const Matrix& b) {
  return (p.inputs * b - p.outputs).squaredNorm() + p.lambda * b.squaredNorm();
}

double gcv_score(const Matrix& x, const Matrix& y, double lambda) {
  check_problem(x, y, lambda);
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double n = static_cast<double>(x.rows());
  const double tol = std::numeric_limits<double>::epsilon() * std::max(x.rows(), x.cols()) *
                     (s.size() ? s(0) : 0.0);

  // H = U diag(σ²/(σ²+λ)) Uᵀ over the numerically non-zero singular values.
  Eigen::VectorXd shrink(s.size());
  double trace = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double s2 = s(i) * s(i);
    shrink(i) = s(i) > tol ? s2 / (s2 + lambda) : 0.0;
    trace += shrink(i);
  }
  const Matrix& u = svd.matrixU();
  Matrix uty = u.transpose() * y;
  Matrix fitted = u * (shrink.asDiagonal() * uty);
  double rss = (y - fitted).squaredNorm();
  double denom = n - trace;
  if (denom <= 1e-12 * n) return std::numeric_limits<double>::quiet_NaN();
  return n * rss / (denom * denom);
}

double gcv_lambda(const Matrix& x, const Matrix& y, std::span<const double> grid) {
  if (grid.empty()) throw Error("lambda grid is empty");
  if (grid.size() == 1) return grid[0];
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_score = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    double score = gcv_score(x, y, lambda);
    if (std::isnan(score)) continue;
    // Scores within rounding of each other count as ties.
    if (std::isnan(best)) {
      best = lambda;
      best_score = score;
      continue;
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(best_score));
    if (score < best_score - slack || (std::abs(score - best_score) <= slack && lambda < best)) {
      best = lambda;
      best_score = score;
    }
  }
  if (std::isnan(best)) throw Error("GCV is undefined for every lambda in the grid");
  return best;
}

Matrix space_matrix(const VectorSpace& space) {
  Matrix m(space.vectors().size(), space.dim());
  Eigen::Index r = 0;
  for (const auto& [_, v] : space.vectors()) {
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[c];
    ++r;
  }
  return m;
}

SvdResult svd_reduce(const VectorSpace& space, std::size_t k) {
  const std::size_t limit = std::min(space.vectors().size(), space.dim());
  if (k == 0 || k > limit)
    throw Error("cannot reduce to " + std::to_string(k) + " dimensions; at most " + std::to_string(limit));
  Matrix x = space_matrix(space);
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);

  SvdResult out;
  out.reduction.k = k;
  out.reduction.projection = svd.matrixV().leftCols(kk);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    out.reduction.singular_values.push_back(svd.singularValues()(i));

  Matrix reduced = svd.matrixU().leftCols(kk) * svd.singularValues().head(kk).asDiagonal();
  std::vector<std::string> basis;
  for (std::size_t i = 1; i <= k; ++i) basis.push_back("sv" + std::to_string(i));
  out.space = VectorSpace(basis);
  Eigen::Index r = 0;
  for (const auto& [word, _] : space.vectors()) {
    Vec v(k);
    for (Eigen::Index c = 0; c < kk; ++c) v[c] = reduced(r, c);
    out.space.set(word, std::move(v));
    ++r;
  }
  return out;
}

std::vector<SvoExample> parse_training(std::string_view text) {
  std::vector<SvoExample> out;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError("training line needs subject, verb, object, phrase", lineno);
    out.push_back({cols[0], cols[1], cols[2], cols[3]});
  }
  return out;
}

std::vector<SvoExample> load_training(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_training(all);
}

Tensor multistep_fit(const std::string& verb, std::span<const SvoSample> samples,
                     const MultistepOptions& options) {
  if (samples.empty()) throw Error("no training examples");
  const std::size_t dn = samples[0].subject_vec.size();
  const std::size_t dobj = samples[0].object_vec.size();
  const std::size_t ds = samples[0].sentence_vec.size();
  for (const auto& s : samples)
    if (s.subject_vec.size() != dn || s.object_vec.size() != dobj || s.sentence_vec.size() != ds)
      throw ShapeError("training vectors for '" + verb + "' differ in length");

  auto in = [&](const Vec& v) { return options.normalize_inputs ? normalized(v) : v; };
  auto outv = [&](const Vec& v) { return options.normalize_outputs ? normalized(v) : v; };

  std::map<std::string, std::vector<const SvoSample*>> by_object;
  for (const auto& s : samples) by_object[s.object].push_back(&s);

  // Step 1: subject -> sentence, one problem per object.
  std::vector<Vec> objects, unfolded;
  for (const auto& [object, group] : by_object) {
    if (group.size() < options.min_examples) continue;
    std::vector<Vec> xs, ys;
    for (const auto* s : group) {
      xs.push_back(in(s->subject_vec));
      ys.push_back(outv(s->sentence_vec));
    }
    Matrix x = rows_to_matrix(xs), y = rows_to_matrix(ys);
    double lambda = gcv_lambda(x, y, options.lambda_grid);
    Matrix b = ridge_fit({x, y, lambda});  // dn × ds; the verb-object matrix is its transpose
    Vec flat(ds * dn);
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < dn; ++j) flat[i * dn + j] = b(j, i);
    objects.push_back(in(group.front()->object_vec));
    unfolded.push_back(std::move(flat));
  }
  if (objects.size() < options.min_examples)
    throw Error("only " + std::to_string(objects.size()) + " objects with at least " +
                std::to_string(options.min_examples) + " examples; need " +
                std::to_string(options.min_examples));

  // Step 2: object -> unfolded verb-object matrix.
  Matrix x = rows_to_matrix(objects), y = rows_to_matrix(unfolded);
  double lambda = gcv_lambda(x, y, options.lambda_grid);
  Matrix b2 = ridge_fit({x, y, lambda});  // dobj × (ds·dn)

  Tensor t({ds, dn, dobj}, Method::regression, verb);
  for (std::size_t i = 0; i < ds; ++i)
    for (std::size_t j = 0; j < dn; ++j)
      for (std::size_t k = 0; k < dobj; ++k) t.at({i, j, k}) = b2(k, i * dn + j);
  return t;
}

TensorStore multistep_learn(std::span<const SvoExample> examples, const VectorSpace& space,
                            const MultistepOptions& options, MultistepReport* report) {
  MultistepReport rep;
  std::map<std::string, std::vector<SvoSample>> by_verb;
  for (const auto& e : examples) {
    const Vec* s = space.find(e.subject);
    const Vec* o = space.find(e.object);
    const Vec* p = space.find(e.phrase);
    if (!s || !o || !p) {
      ++rep.missing_vectors;
      by_verb[e.verb];  // still reported if nothing survives
      continue;
    }
    by_verb[e.verb].push_back({e.object, *s, *o, *p});
  }
  TensorStore out;
  for (const auto& [verb, samples] : by_verb) {
    std::set<std::string> objs;
    for (const auto& s : samples) objs.insert(s.object);
    rep.step1_problems[verb] = objs.size();
    try {
      out[verb] = multistep_fit(verb, samples, options);
    } catch (const Error& e) {
      rep.skipped[verb] = e.what();
    }
  }
  if (report) *report = std::move(rep);
  return out;
}

}  // namespace dcc
