#pragma once

// Balanced presentations and stable Andrews-Curtis moves.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acfx/errors.hpp"
#include "acfx/word.hpp"

namespace acfx {

/// A finite presentation <x_1..x_n | r_1..r_m>. Relators are kept in order
/// because moves address them by position.
class Presentation {
 public:
  Presentation() = default;
  Presentation(int gen_count, std::vector<Word> relators)
      : gen_count_(gen_count), relators_(std::move(relators)) {
    if (gen_count_ < 0) throw InvalidArgument("negative generator count");
    for (const Word& r : relators_) {
      if (r.max_generator() > gen_count_) throw GeneratorOutOfRange(r.max_generator(), gen_count_);
    }
  }

  int generator_count() const noexcept { return gen_count_; }
  std::size_t relator_count() const noexcept { return relators_.size(); }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  /// 1-based, matching move indices.
  const Word& relator(int i) const { return relators_.at(static_cast<std::size_t>(i - 1)); }
  bool balanced() const noexcept { return relators_.size() == static_cast<std::size_t>(gen_count_); }

  std::size_t longest_relator() const noexcept {
    std::size_t m = 0;
    for (const Word& r : relators_) m = std::max(m, r.size());
    return m;
  }
  std::size_t total_length() const noexcept {
    std::size_t t = 0;
    for (const Word& r : relators_) t += r.size();
    return t;
  }

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  int gen_count_ = 0;
  std::vector<Word> relators_;
};

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind { concat, invert, conjugate, stabilize, destabilize };

/// One SAC move. Relator indices are 1-based.
struct Move {
  MoveKind kind = MoveKind::invert;
  int i = 0;
  int j = 0;
  Word g;

  static Move concat(int i, int j) { return {MoveKind::concat, i, j, {}}; }
  static Move invert(int i) { return {MoveKind::invert, i, 0, {}}; }
  static Move conjugate(int i, Word g) { return {MoveKind::conjugate, i, 0, std::move(g)}; }
  static Move stabilize(Word g = {}) { return {MoveKind::stabilize, 0, 0, std::move(g)}; }
  static Move destabilize(int i) { return {MoveKind::destabilize, i, 0, {}}; }

  friend bool operator==(const Move&, const Move&) = default;
};

inline const char* move_keyword(MoveKind kind) {
  switch (kind) {
    case MoveKind::concat:
      return "concat";
    case MoveKind::invert:
      return "invert";
    case MoveKind::conjugate:
      return "conjugate";
    case MoveKind::stabilize:
      return "stabilize";
    case MoveKind::destabilize:
      return "destabilize";
  }
  return "?";
}

/// "<kind> <params>" as used in certificate files.
inline std::string format_move(const Move& m) {
  std::string s = move_keyword(m.kind);
  switch (m.kind) {
    case MoveKind::concat:
      return s + " i=" + std::to_string(m.i) + " j=" + std::to_string(m.j);
    case MoveKind::invert:
    case MoveKind::destabilize:
      return s + " i=" + std::to_string(m.i);
    case MoveKind::conjugate:
      return s + " i=" + std::to_string(m.i) + " g=" + format_word(m.g);
    case MoveKind::stabilize:
      return s + " g=" + format_word(m.g);
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Move& m) { return os << format_move(m); }

namespace detail {

inline void check_relator_index(const Presentation& p, int i) {
  if (i < 1 || static_cast<std::size_t>(i) > p.relator_count()) {
    throw MoveError(MoveErrorKind::index_out_of_range,
                    "relator index " + std::to_string(i) + " not in 1.." +
                        std::to_string(p.relator_count()));
  }
}

struct DestabilizeSite {
  int generator = 0;  // generator eliminated
  Word rest;          // relator == x_k * rest up to rotation and inversion
};

// Highest generator occurring exactly once over all relators, with that
// occurrence in relator i.
inline std::optional<DestabilizeSite> find_destabilize_site(const Presentation& p, int i) {
  const int n = p.generator_count();
  std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
  for (const Word& r : p.relators()) {
    for (Letter l : r) ++count[static_cast<std::size_t>(l.generator())];
  }
  const Word& r = p.relator(i);
  int best = 0;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    int g = r[k].generator();
    if (count[static_cast<std::size_t>(g)] == 1 && g > best) {
      best = g;
      pos = k;
    }
  }
  if (best == 0) return std::nullopt;
  Word rotated = rotate_word(r, pos);  // rotation of a reduced word may not be reduced
  std::vector<Letter> rest(rotated.begin() + 1, rotated.end());
  Word tail = free_reduce(rest);
  if (r[pos].sign() < 0) tail = invert_word(tail);  // X_k h ~ x_k h^{-1}
  return DestabilizeSite{best, std::move(tail)};
}

// Renumbers generators above k down by one.
inline Word drop_generator(const Word& w, int k) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w) {
    int g = l.generator();
    out.emplace_back(g > k ? g - 1 : g, l.sign());
  }
  return Word::from_reduced(std::move(out));
}

}  // namespace detail

inline Presentation apply_move(const Presentation& p, const Move& m) {
  const int n = p.generator_count();
  std::vector<Word> rels = p.relators();
  switch (m.kind) {
    case MoveKind::concat: {
      detail::check_relator_index(p, m.i);
      detail::check_relator_index(p, m.j);
      if (m.i == m.j) throw MoveError(MoveErrorKind::concat_self, "concat requires i != j");
      auto& ri = rels[static_cast<std::size_t>(m.i - 1)];
      ri = concat_words(ri, rels[static_cast<std::size_t>(m.j - 1)]);
      return Presentation(n, std::move(rels));
    }
    case MoveKind::invert: {
      detail::check_relator_index(p, m.i);
      auto& ri = rels[static_cast<std::size_t>(m.i - 1)];
      ri = invert_word(ri);
      return Presentation(n, std::move(rels));
    }
    case MoveKind::conjugate: {
      detail::check_relator_index(p, m.i);
      if (m.g.max_generator() > n) {
        throw MoveError(MoveErrorKind::index_out_of_range,
                        "conjugator uses generator " + std::to_string(m.g.max_generator()));
      }
      auto& ri = rels[static_cast<std::size_t>(m.i - 1)];
      ri = conjugate_word(ri, m.g);
      return Presentation(n, std::move(rels));
    }
    case MoveKind::stabilize: {
      if (m.g.max_generator() > n) {
        throw MoveError(MoveErrorKind::stabilize_bad_conjugator,
                        "stabilizing word must avoid the new generator");
      }
      std::vector<Letter> raw{Letter(n + 1, 1)};
      raw.insert(raw.end(), m.g.begin(), m.g.end());
      rels.push_back(Word::from_reduced(std::move(raw)));
      return Presentation(n + 1, std::move(rels));
    }
    case MoveKind::destabilize: {
      detail::check_relator_index(p, m.i);
      auto site = detail::find_destabilize_site(p, m.i);
      if (!site) {
        throw MoveError(MoveErrorKind::destabilize_inapplicable,
                        "no generator occurs exactly once, in relator " + std::to_string(m.i));
      }
      rels.erase(rels.begin() + (m.i - 1));
      for (Word& r : rels) r = detail::drop_generator(r, site->generator);
      return Presentation(n - 1, std::move(rels));
    }
  }
  throw InvalidArgument("unknown move kind");
}

/// Moves undoing `m` on `p`. Concat needs three moves; the rest need one.
inline std::vector<Move> inverse_move(const Presentation& p, const Move& m) {
  apply_move(p, m);  // applicability
  switch (m.kind) {
    case MoveKind::concat:
      return {Move::invert(m.j), Move::concat(m.i, m.j), Move::invert(m.j)};
    case MoveKind::invert:
      return {Move::invert(m.i)};
    case MoveKind::conjugate:
      return {Move::conjugate(m.i, invert_word(m.g))};
    case MoveKind::stabilize:
      return {Move::destabilize(static_cast<int>(p.relator_count()) + 1)};
    case MoveKind::destabilize: {
      auto site = detail::find_destabilize_site(p, m.i);
      return {Move::stabilize(detail::drop_generator(site->rest, site->generator))};
    }
  }
  return {};
}

inline Presentation apply_moves(Presentation p, const std::vector<Move>& moves) {
  for (const Move& m : moves) p = apply_move(p, m);
  return p;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace detail {

/// Canonical data as letter ranks: sorted relator forms minimized over
/// generator relabelings.
struct CanonicalForms {
  int gen_count = 0;
  std::vector<std::vector<int>> relators;
};

inline bool forms_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline constexpr int exhaustive_relabel_limit = 6;

inline CanonicalForms canonical_forms(const Presentation& p) {
  const int n = p.generator_count();
  std::vector<std::vector<int>> cores;
  cores.reserve(p.relator_count());
  for (const Word& r : p.relators()) {
    Word core = cyclic_reduce(r).core;
    std::vector<int> ranks;
    ranks.reserve(core.size());
    for (Letter l : core) ranks.push_back(l.rank());
    cores.push_back(std::move(ranks));
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  const bool exhaustive = n <= exhaustive_relabel_limit;

  CanonicalForms best{n, {}};
  std::vector<std::vector<int>> cur(cores.size());
  std::vector<int> relabeled;
  bool have_best = false;
  do {
    for (std::size_t r = 0; r < cores.size(); ++r) {
      relabeled.clear();
      for (int rank : cores[r]) relabeled.push_back(2 * perm[static_cast<std::size_t>(rank / 2)] + (rank & 1));
      canonical_cyclic_ranks(relabeled, cur[r]);
    }
    std::sort(cur.begin(), cur.end(), forms_less);
    bool better = !have_best;
    if (have_best) {
      for (std::size_t r = 0; r < cur.size(); ++r) {
        if (forms_less(cur[r], best.relators[r])) {
          better = true;
          break;
        }
        if (forms_less(best.relators[r], cur[r])) break;
      }
    }
    if (better) {
      best.relators = cur;
      have_best = true;
    }
  } while (exhaustive && std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// Relators replaced by canonical cyclic forms, sorted, and minimized over
/// all generator relabelings (exhaustive for up to 6 generators, identity
/// relabeling beyond). Idempotent.
inline Presentation canonicalize(const Presentation& p) {
  auto forms = detail::canonical_forms(p);
  std::vector<Word> rels;
  rels.reserve(forms.relators.size());
  for (const auto& f : forms.relators) {
    std::vector<Letter> letters;
    letters.reserve(f.size());
    for (int r : f) letters.push_back(detail::letter_from_rank(r));
    rels.push_back(Word::from_reduced(std::move(letters)));
  }
  return Presentation(forms.gen_count, std::move(rels));
}

/// Flat encoding of canonicalize(p), suitable as a hash key.
using CanonicalKey = std::vector<std::int32_t>;

inline CanonicalKey canonical_key(const Presentation& p) {
  auto forms = detail::canonical_forms(p);
  CanonicalKey key;
  key.push_back(forms.gen_count);
  for (const auto& f : forms.relators) {
    key.push_back(static_cast<std::int32_t>(f.size()));
    key.insert(key.end(), f.begin(), f.end());
  }
  return key;
}

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int32_t v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Neighbors

struct Caps {
  std::size_t max_len = 24;
  int max_gens = 3;
};

/// Every single move with one-letter conjugators and empty stabilizing word
/// whose result fits the caps, in a fixed order: concat, invert, conjugate,
/// destabilize, stabilize.
inline std::vector<std::pair<Move, Presentation>> neighbors(const Presentation& p, const Caps& caps) {
  std::vector<std::pair<Move, Presentation>> out;
  const int m = static_cast<int>(p.relator_count());
  const int n = p.generator_count();
  auto fits = [&](const Presentation& q) {
    return q.longest_relator() <= caps.max_len && q.generator_count() <= caps.max_gens;
  };
  auto push = [&](Move mv) {
    Presentation q = apply_move(p, mv);
    if (fits(q)) out.emplace_back(std::move(mv), std::move(q));
  };
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      if (i != j) push(Move::concat(i, j));
    }
  }
  for (int i = 1; i <= m; ++i) push(Move::invert(i));
  for (int i = 1; i <= m; ++i) {
    for (int g = 1; g <= n; ++g) {
      push(Move::conjugate(i, Word{Letter(g, 1)}));
      push(Move::conjugate(i, Word{Letter(g, -1)}));
    }
  }
  for (int i = 1; i <= m; ++i) {
    if (detail::find_destabilize_site(p, i)) push(Move::destabilize(i));
  }
  if (n < caps.max_gens) push(Move::stabilize());
  return out;
}

// ---------------------------------------------------------------------------
// Abelianization

/// Row i holds the exponent sums of relator i.
using AbelMatrix = std::vector<std::vector<std::int64_t>>;

inline AbelMatrix abelianization(const Presentation& p) {
  AbelMatrix m;
  m.reserve(p.relator_count());
  for (const Word& r : p.relators()) m.push_back(exponent_sums(r, p.generator_count()));
  return m;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline std::int64_t integer_determinant(AbelMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  using Wide = __int128;
  std::vector<std::vector<Wide>> m(n, std::vector<Wide>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (a[r].size() != n) throw NotBalanced("determinant of a non-square matrix");
    for (std::size_t c = 0; c < n; ++c) m[r][c] = a[r][c];
  }
  int sign = 1;
  Wide prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c) {
        m[r][c] = (m[r][c] * m[k][k] - m[r][k] * m[k][c]) / prev;
      }
    }
    prev = m[k][k];
  }
  return static_cast<std::int64_t>(sign * m[n - 1][n - 1]);
}

inline std::int64_t abel_det(const Presentation& p) {
  if (!p.balanced()) throw NotBalanced("abel_det needs as many relators as generators");
  return integer_determinant(abelianization(p));
}

// ---------------------------------------------------------------------------
// Named presentations

/// {x_1..x_n | x_1, .., x_n}
inline Presentation gen_trivial(int n) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  std::vector<Word> rels;
  for (int g = 1; g <= n; ++g) rels.push_back(Word{Letter(g, 1)});
  return Presentation(n, std::move(rels));
}

namespace detail {
inline Word power_word(Letter l, int k) { return Word::from_reduced(std::vector<Letter>(static_cast<std::size_t>(k), l)); }
}  // namespace detail

/// {x,y | xyx = yxy, x^{n+1} = y^n} written as relators xyxYXY, x^{n+1}Y^n.
inline Presentation gen_gpn(int n) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  const Letter x(1, 1), y(2, 1);
  Word braid{x, y, x, y.inverse(), x.inverse(), y.inverse()};
  Word power = concat_words(detail::power_word(x, n + 1), detail::power_word(y.inverse(), n));
  return Presentation(2, {std::move(braid), std::move(power)});
}

/// Relators x^2 y x^-1 y x^-1 y^-1 and y^-2 x^-1 y x^-1 y x.
inline Presentation fig5_presentation() {
  const Letter x(1, 1), y(2, 1), X = x.inverse(), Y = y.inverse();
  return Presentation(2, {Word{x, x, y, X, y, X, Y}, Word{Y, Y, X, y, X, y, x}});
}

// ---------------------------------------------------------------------------
// Text format: "x,y | xyxYXY, xxxYY"

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Splits [begin, end) of text on commas; yields (offset, token) pairs.
inline std::vector<std::pair<std::size_t, std::string_view>> split_commas(std::string_view text,
                                                                          std::size_t begin,
                                                                          std::size_t end) {
  std::vector<std::pair<std::size_t, std::string_view>> parts;
  std::size_t start = begin;
  for (std::size_t k = begin; k <= end; ++k) {
    if (k == end || text[k] == ',') {
      parts.emplace_back(start, text.substr(start, k - start));
      start = k + 1;
    }
  }
  return parts;
}

inline bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return is_space(c); });
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  const std::size_t bar = text.find('|');
  if (bar == std::string_view::npos) throw SyntaxError(text.size(), "missing '|'");

  int n = 0;
  Alphabet alphabet = Alphabet::xyz;
  if (!detail::blank(text.substr(0, bar))) {
    auto gens = detail::split_commas(text, 0, bar);
    for (std::size_t idx = 0; idx < gens.size(); ++idx) {
      auto [off, tok] = gens[idx];
      std::size_t lead = 0;
      while (lead < tok.size() && detail::is_space(tok[lead])) ++lead;
      std::size_t trail = tok.size();
      while (trail > lead && detail::is_space(tok[trail - 1])) --trail;
      if (trail - lead != 1) throw SyntaxError(off + lead, "generator names are single letters");
      char c = tok[lead];
      if (idx == 0) {
        if (c == 'x') {
          alphabet = Alphabet::xyz;
        } else if (c == 'a') {
          alphabet = Alphabet::positional;
        } else {
          throw SyntaxError(off + lead, "generators must be a,b,c,.. or x,y,z");
        }
      }
      char expected = static_cast<char>((alphabet == Alphabet::xyz ? 'x' : 'a') + idx);
      if (c != expected || (alphabet == Alphabet::xyz && idx >= 3)) {
        throw SyntaxError(off + lead, std::string("expected generator '") + expected + "'");
      }
      ++n;
    }
  }

  std::vector<Word> rels;
  if (!detail::blank(text.substr(bar + 1))) {
    for (auto [off, tok] : detail::split_commas(text, bar + 1, text.size())) {
      rels.push_back(parse_word(tok, alphabet, n, off));
    }
  }
  return Presentation(n, std::move(rels));
}

inline std::string format_presentation(const Presentation& p) {
  const int n = p.generator_count();
  if (n > max_display_generators) throw TooManyGenerators("more than 26 generators");
  const Alphabet alphabet = alphabet_for(n);
  std::string gens;
  for (int g = 1; g <= n; ++g) {
    if (g > 1) gens += ",";
    gens += generator_char(g, alphabet);
  }
  std::string rels;
  for (std::size_t k = 0; k < p.relator_count(); ++k) {
    if (k > 0) rels += ", ";
    rels += format_word(p.relators()[k], alphabet);
  }
  std::string out = gens;
  if (!out.empty()) out += " ";
  out += "|";
  if (!rels.empty()) out += " " + rels;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Presentation& p) {
  return os << format_presentation(p);
}

}  // namespace acfx
