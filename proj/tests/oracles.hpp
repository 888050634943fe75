#pragma once

// Independent reference implementations used to check the library. These
// favour obviousness over speed and share no code with src/.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dcc/cfg.hpp"
#include "dcc/pregroup.hpp"

namespace oracle {

// ---- pregroup: exhaustive search over contraction orders ----

inline bool brute_reduces(const std::vector<dcc::Atom>& atoms, const std::vector<dcc::Atom>& target) {
  std::set<std::vector<dcc::Atom>> seen;
  std::vector<std::vector<dcc::Atom>> stack{atoms};
  while (!stack.empty()) {
    auto cur = std::move(stack.back());
    stack.pop_back();
    if (cur == target) return true;
    if (!seen.insert(cur).second) continue;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const auto &x = cur[i], &y = cur[i + 1];
      if (x.name == y.name && y.adjoint == x.adjoint + 1) {
        auto next = cur;
        next.erase(next.begin() + static_cast<long>(i), next.begin() + static_cast<long>(i) + 2);
        stack.push_back(std::move(next));
      }
    }
  }
  return false;
}

// ---- CFG recognition: CYK with unary closure over a grammar whose rules
// have one or two symbols on the right and no epsilons ----

inline bool cyk_accepts(const dcc::cfg::Cfg& g, const std::vector<std::string>& words) {
  const std::size_t n = words.size();
  if (n == 0) return false;
  // table[i][len] = non-terminals deriving words[i, i+len)
  std::vector<std::vector<std::set<std::string>>> table(n, std::vector<std::set<std::string>>(n + 1));
  auto close = [&](std::set<std::string>& cell) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& r : g.rules)
        if (r.rhs.size() == 1 && !r.rhs[0].terminal && cell.count(r.rhs[0].name) && !cell.count(r.lhs)) {
          cell.insert(r.lhs);
          grew = true;
        }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& r : g.rules)
      if (r.rhs.size() == 1 && r.rhs[0].terminal && r.rhs[0].name == words[i]) table[i][1].insert(r.lhs);
    close(table[i][1]);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      auto& cell = table[i][len];
      for (std::size_t split = 1; split < len; ++split)
        for (const auto& r : g.rules)
          if (r.rhs.size() == 2 && !r.rhs[0].terminal && !r.rhs[1].terminal &&
              table[i][split].count(r.rhs[0].name) && table[i + split][len - split].count(r.rhs[1].name))
            cell.insert(r.lhs);
      close(cell);
    }
  }
  return table[0][n].count(g.start) > 0;
}

/// Pregroup acceptance by trying every type assignment with the exhaustive
/// reducer.
inline bool pregroup_accepts(const dcc::Lexicon& lex, const std::vector<std::string>& words,
                             const dcc::PregroupType& target) {
  std::vector<const std::vector<dcc::PregroupType>*> options;
  for (const auto& w : words) {
    auto* o = lex.find(w);
    if (!o) return false;
    options.push_back(o);
  }
  std::vector<std::size_t> pick(words.size(), 0);
  while (true) {
    std::vector<dcc::Atom> atoms;
    for (std::size_t i = 0; i < words.size(); ++i)
      for (const auto& a : (*options[i])[pick[i]].atoms()) atoms.push_back(a);
    if (brute_reduces(atoms, target.atoms())) return true;
    std::size_t k = words.size();
    while (k > 0) {
      --k;
      if (++pick[k] < options[k]->size()) break;
      pick[k] = 0;
      if (k == 0) return false;
    }
    if (words.empty()) return false;
  }
}

/// All strings over `alphabet` of length 1..max_len.
inline void for_each_string(const std::vector<std::string>& alphabet, std::size_t max_len,
                            const std::function<void(const std::vector<std::string>&)>& f) {
  std::vector<std::string> cur;
  std::function<void()> rec = [&] {
    if (!cur.empty()) f(cur);
    if (cur.size() == max_len) return;
    for (const auto& a : alphabet) {
      cur.push_back(a);
      rec();
      cur.pop_back();
    }
  };
  rec();
}

/// A random grammar obeying the translation restrictions: complex symbols
/// only rewrite to one or two non-terminals, basic symbols only to single
/// terminals, every symbol is reachable, and there are no unit cycles.
/// Complex symbol i only refers to complex symbols after it, except for
/// optional left or right self-recursion in binary rules.
inline dcc::cfg::Cfg random_grammar(std::mt19937& rng, std::size_t n_complex, std::size_t n_basic,
                                    std::size_t n_words) {
  using dcc::cfg::Rule;
  using dcc::cfg::Symbol;
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::vector<std::string> cx, bs;
  for (std::size_t i = 0; i < n_complex; ++i) cx.push_back(i == 0 ? "S" : "C" + std::to_string(i));
  for (std::size_t i = 0; i < n_basic; ++i) bs.push_back("B" + std::to_string(i));

  dcc::cfg::Cfg g;
  g.start = "S";
  auto later = [&](std::size_t i) {
    // any basic symbol or a complex symbol after i
    std::size_t choices = n_basic + (n_complex - 1 - i);
    std::size_t c = pick(0, choices - 1);
    return c < n_basic ? bs[c] : cx[i + 1 + (c - n_basic)];
  };
  std::vector<std::vector<Rule>> own(n_complex);
  for (std::size_t i = 0; i < n_complex; ++i) {
    std::size_t nrules = pick(1, 2);
    for (std::size_t r = 0; r < nrules; ++r) {
      Rule rule{cx[i], {}};
      std::size_t shape = pick(0, 9);
      if (shape == 0) {
        rule.rhs = {Symbol{later(i), false}};
      } else if (shape == 1 && r > 0) {
        rule.rhs = {Symbol{cx[i], false}, Symbol{later(i), false}};
      } else if (shape == 2 && r > 0) {
        rule.rhs = {Symbol{later(i), false}, Symbol{cx[i], false}};
      } else {
        rule.rhs = {Symbol{later(i), false}, Symbol{later(i), false}};
      }
      own[i].push_back(rule);
    }
  }
  // Complex symbols only point forward, so visiting them in order and hanging
  // any unreached one under an earlier (already reached) symbol makes every
  // symbol reachable from S.
  std::set<std::string> reached{"S"};
  for (std::size_t i = 0; i < n_complex; ++i) {
    if (!reached.count(cx[i])) {
      std::size_t parent = pick(0, i - 1);
      const auto& b = bs[pick(0, n_basic - 1)];
      own[parent].push_back(Rule{cx[parent], {Symbol{cx[i], false}, Symbol{b, false}}});
      reached.insert(b);
    }
    for (const auto& r : own[i])
      for (const auto& sym : r.rhs) reached.insert(sym.name);
  }
  for (const auto& b : bs)
    if (!reached.count(b)) {
      std::size_t k = pick(0, n_complex - 1);
      own[k].push_back(Rule{cx[k], {Symbol{b, false}}});
    }
  for (std::size_t i = 0; i < n_complex; ++i)
    for (const auto& r : own[i]) g.rules.push_back(r);
  for (std::size_t b = 0; b < n_basic; ++b) {
    std::size_t nw = pick(1, 2);
    std::set<std::size_t> ws;
    for (std::size_t k = 0; k < nw; ++k) ws.insert(pick(0, n_words - 1));
    for (auto w : ws) g.rules.push_back(Rule{bs[b], {Symbol{"w" + std::to_string(w), true}}});
  }
  return g;
}

// ---- linear algebra ----

using Mat = std::vector<std::vector<double>>;

inline Mat transpose(const Mat& a) {
  Mat t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Solves A X = B by Gauss-Jordan elimination with partial pivoting.
inline Mat gauss_solve(Mat a, Mat b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    double d = a[col][col];
    for (auto& x : a[col]) x /= d;
    for (auto& x : b[col]) x /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[col][c];
      for (std::size_t c = 0; c < b[0].size(); ++c) b[r][c] -= f * b[col][c];
    }
  }
  return b;
}

/// Ridge solution from the normal equations (XᵀX + λI) B = XᵀY.
inline Mat ridge_normal_equations(const Mat& x, const Mat& y, double lambda) {
  auto xt = transpose(x);
  auto a = matmul(xt, x);
  for (std::size_t i = 0; i < a.size(); ++i) a[i][i] += lambda;
  return gauss_solve(a, matmul(xt, y));
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// ---- rank correlation by pair counting ----

/// Spearman's rho from average ranks computed by comparing every pair:
/// rank(i) = 1 + #{j : x_j < x_i} + (#{j != i : x_j == x_i}) / 2.
inline double spearman_pairwise(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto rank = [n](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      double less = 0, equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) less += 1;
        if (j != i && v[j] == v[i]) equal += 1;
      }
      r[i] = 1 + less + equal / 2;
    }
    return r;
  };
  auto rx = rank(x), ry = rank(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += rx[i] / n, my += ry[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// ---- tensors as explicit index loops ----

/// Σ_{i,k} a_i c[i][s1][s2][k] b_k over a flat row-major [d, d, e, e] array.
inline std::vector<double> full_transitive_loop(const std::vector<double>& c, std::size_t d, std::size_t e,
                                                const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(d * e, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t s1 = 0; s1 < d; ++s1)
      for (std::size_t s2 = 0; s2 < e; ++s2)
        for (std::size_t k = 0; k < e; ++k)
          out[s1 * e + s2] += a[i] * c[((i * d + s1) * e + s2) * e + k] * b[k];
  return out;
}

}  // namespace oracle
