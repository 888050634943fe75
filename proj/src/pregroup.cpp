#include "dcc/pregroup.hpp"

#include <algorithm>
#include <sstream>

#include "dcc/text_io.hpp"

namespace dcc {

std::string Atom::to_string() const {
  if (adjoint == 0) return name;
  std::string out = name + "^";
  out.append(static_cast<std::size_t>(std::abs(adjoint)), adjoint < 0 ? 'l' : 'r');
  return out;
}

bool contracts(const Atom& x, const Atom& y) {
  return x.name == y.name && y.adjoint == x.adjoint + 1;
}

bool PregroupType::mentions(std::string_view name) const {
  return std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return a.name == name; });
}

PregroupType PregroupType::operator*(const PregroupType& rhs) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), rhs.atoms_.begin(), rhs.atoms_.end());
  return PregroupType(std::move(atoms));
}

std::string PregroupType::to_string() const {
  if (atoms_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ' ';
    out += atoms_[i].to_string();
  }
  return out;
}

PregroupType parse_type(std::string_view text) {
  auto tokens = text::split_ws(text);
  if (tokens.empty()) throw ParseError("empty type", 0);
  if (tokens.size() == 1 && tokens[0] == "1") return {};
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok == "1") continue;  // unit inside a product
    auto caret = tok.find('^');
    std::string name = tok.substr(0, caret);
    if (name.empty()) throw ParseError("empty atom name in '" + tok + "'", i);
    int order = 0;
    if (caret != std::string::npos) {
      std::string_view suffix = std::string_view(tok).substr(caret + 1);
      if (suffix.empty()) throw ParseError("empty adjoint suffix in '" + tok + "'", i);
      char c = suffix.front();
      if (c != 'l' && c != 'r') throw ParseError("bad adjoint suffix in '" + tok + "'", i);
      if (suffix.find_first_not_of(c) != std::string_view::npos)
        throw ParseError("mixed or invalid adjoint suffix in '" + tok + "'", i);
      order = static_cast<int>(suffix.size()) * (c == 'r' ? 1 : -1);
    }
    atoms.push_back(Atom{std::move(name), order});
  }
  return PregroupType(std::move(atoms));
}

PregroupType adjoint(const PregroupType& t, Side side) {
  const int delta = side == Side::right ? 1 : -1;
  std::vector<Atom> out(t.atoms().rbegin(), t.atoms().rend());
  for (auto& a : out) a.adjoint += delta;
  return PregroupType(std::move(out));
}

PregroupType iterated_adjoint(const PregroupType& t, int k) {
  PregroupType out = t;
  for (int i = 0; i < std::abs(k); ++i) out = adjoint(out, k > 0 ? Side::right : Side::left);
  return out;
}

PregroupType substitute(const PregroupType& t, std::string_view name,
                        const PregroupType& replacement) {
  std::vector<Atom> out;
  for (const auto& a : t.atoms()) {
    if (a.name != name) {
      out.push_back(a);
      continue;
    }
    auto piece = iterated_adjoint(replacement, a.adjoint);
    out.insert(out.end(), piece.atoms().begin(), piece.atoms().end());
  }
  return PregroupType(std::move(out));
}

PregroupType concat(std::span<const PregroupType> seq) {
  std::vector<Atom> atoms;
  for (const auto& t : seq) atoms.insert(atoms.end(), t.atoms().begin(), t.atoms().end());
  return PregroupType(std::move(atoms));
}

std::string ContractionStep::pair() const { return left.to_string() + " " + right.to_string(); }

PregroupType replay(const PregroupType& input, std::span<const ContractionStep> steps) {
  std::vector<Atom> cur = input.atoms();
  for (const auto& st : steps) {
    if (st.position + 1 >= cur.size() || cur[st.position] != st.left ||
        cur[st.position + 1] != st.right || !contracts(st.left, st.right))
      throw Error("trace step at " + std::to_string(st.position) + " does not apply");
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(st.position),
              cur.begin() + static_cast<std::ptrdiff_t>(st.position) + 2);
  }
  return PregroupType(std::move(cur));
}

bool reduces_to(std::span<const Atom> atoms, std::span<const Atom> target) {
  const std::size_t n = atoms.size();
  const std::size_t m = target.size();
  if (m > n || (n - m) % 2 != 0) return false;

  // empty[i][j]: atoms[i, j) contract away entirely. A fully contracted span
  // is a non-crossing matching, so atoms[i] pairs with some atoms[k] whose
  // interior and remainder both vanish.
  const std::size_t w = n + 1;
  std::vector<char> empty(w * w, 0);
  for (std::size_t i = 0; i <= n; ++i) empty[i * w + i] = 1;
  for (std::size_t len = 2; len <= n; len += 2) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      bool ok = false;
      for (std::size_t k = i + 1; k < j && !ok; k += 2)
        ok = contracts(atoms[i], atoms[k]) && empty[(i + 1) * w + k] && empty[(k + 1) * w + j];
      empty[i * w + j] = ok;
    }
  }

  // Survivors form a subsequence equal to target; the gaps between them
  // vanish independently because no contraction can straddle a survivor.
  std::vector<char> prev(n + 1, 0), next(n + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) prev[i] = empty[i];  // prefix [0, i) vanishes
  for (std::size_t p = 0; p < m; ++p) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!prev[j] || atoms[j] != target[p]) continue;
      for (std::size_t i = j + 1; i <= n; ++i)
        if (empty[(j + 1) * w + i]) next[i] = 1;
    }
    std::swap(prev, next);
  }
  return prev[n];
}

std::optional<ReductionTrace> reduce(std::span<const PregroupType> seq, const PregroupType& target) {
  std::vector<Atom> cur = concat(seq).atoms();
  const auto& goal = target.atoms();
  if (!reduces_to(cur, goal)) return std::nullopt;

  ReductionTrace trace;
  while (cur != goal) {
    bool advanced = false;
    for (std::size_t pos = 0; pos + 1 < cur.size(); ++pos) {
      if (!contracts(cur[pos], cur[pos + 1])) continue;
      std::vector<Atom> candidate = cur;
      candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(pos),
                      candidate.begin() + static_cast<std::ptrdiff_t>(pos) + 2);
      if (!reduces_to(candidate, goal)) continue;
      trace.steps.push_back({pos, cur[pos], cur[pos + 1]});
      cur = std::move(candidate);
      advanced = true;
      break;
    }
    // Any reducible state has a first step that keeps it reducible.
    if (!advanced) throw Error("internal: reduction search stalled");
  }
  trace.residual = PregroupType(std::move(cur));
  return trace;
}

void Lexicon::add(const std::string& word, PregroupType type) {
  auto& types = entries_[word];
  if (std::find(types.begin(), types.end(), type) == types.end()) types.push_back(std::move(type));
}

const std::vector<PregroupType>* Lexicon::find(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse_tsv(std::string_view text) {
  Lexicon lex;
  auto lines = text::split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw ParseError("lexicon line needs word<TAB>type", i + 1);
    lex.add(std::string(text::trim(cols[0])), parse_type(cols[1]));
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::string all;
  for (auto& l : text::read_lines(path)) all += l + '\n';
  return parse_tsv(all);
}

std::string Lexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& [word, types] : entries_)
    for (const auto& t : types) out << word << '\t' << t.to_string() << '\n';
  return out.str();
}

GrammaticalityResult is_grammatical(std::span<const std::string> tokens, const Lexicon& lexicon,
                                    const PregroupType& target) {
  std::vector<const std::vector<PregroupType>*> options;
  options.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto* types = lexicon.find(tok);
    if (!types || types->empty()) throw LexiconMiss(tok);
    options.push_back(types);
  }

  GrammaticalityResult result;
  std::vector<std::size_t> choice(tokens.size(), 0);
  std::vector<PregroupType> assignment(tokens.size());
  while (true) {
    for (std::size_t i = 0; i < tokens.size(); ++i) assignment[i] = (*options[i])[choice[i]];
    if (reduces_to(concat(assignment).atoms(), target.atoms())) {
      result.grammatical = true;
      result.trace = reduce(assignment, target);
      result.assignment = assignment;
      return result;
    }
    // odometer, last token fastest
    std::size_t i = tokens.size();
    while (i > 0) {
      --i;
      if (++choice[i] < options[i]->size()) break;
      choice[i] = 0;
      if (i == 0) return result;
    }
    if (tokens.empty()) return result;
  }
}

}  // namespace dcc
