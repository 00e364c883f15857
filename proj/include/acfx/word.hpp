#pragma once

// Free-group words over generators x_1, x_2, ... and their text format.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acfx/errors.hpp"

namespace acfx {

/// A signed generator x_g or x_g^{-1}. Generators are 1-based.
///
/// Letters are totally ordered generator-major with the positive letter
/// first: x1 < X1 < x2 < X2 < ...
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, int sign) : value_(sign < 0 ? -generator : generator) {
    if (generator < 1) throw InvalidArgument("generator index must be >= 1");
  }

  static constexpr Letter from_signed(std::int32_t value) {
    Letter l;
    l.value_ = value;
    return l;
  }

  constexpr int generator() const noexcept { return value_ < 0 ? -value_ : value_; }
  constexpr int sign() const noexcept { return value_ < 0 ? -1 : 1; }
  constexpr std::int32_t signed_value() const noexcept { return value_; }
  constexpr Letter inverse() const noexcept { return from_signed(-value_); }

  /// Rank in the letter order: 2(g-1) for x_g, 2(g-1)+1 for its inverse.
  constexpr int rank() const noexcept { return 2 * (generator() - 1) + (value_ < 0 ? 1 : 0); }

  friend constexpr bool operator==(Letter a, Letter b) noexcept { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) noexcept {
    return a.rank() <=> b.rank();
  }

 private:
  std::int32_t value_ = 1;
};

class Word;
Word free_reduce(std::span<const Letter> raw);

/// A freely reduced word. Ordered length-first, then lexicographically by
/// the letter order.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters)
      : Word(free_reduce(std::span<const Letter>(letters.begin(), letters.size()))) {}

  /// Wraps letters already known to be freely reduced.
  static Word from_reduced(std::vector<Letter> letters) {
    Word w;
    w.letters_ = std::move(letters);
    return w;
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  int max_generator() const noexcept {
    int m = 0;
    for (Letter l : letters_) m = std::max(m, l.generator());
    return m;
  }

  friend bool operator==(const Word& a, const Word& b) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                  b.letters_.begin(), b.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

inline bool is_freely_reduced(std::span<const Letter> letters) {
  for (std::size_t k = 1; k < letters.size(); ++k) {
    if (letters[k] == letters[k - 1].inverse()) return false;
  }
  return true;
}

inline Word free_reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (!out.empty() && out.back() == l.inverse()) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word::from_reduced(std::move(out));
}

inline Word invert_word(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverse());
  return Word::from_reduced(std::move(out));
}

inline Word concat_words(const Word& u, const Word& v) {
  // Cancellation only happens at the seam.
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[u.size() - 1 - k] == v[k].inverse()) ++k;
  std::vector<Letter> out;
  out.reserve(u.size() + v.size() - 2 * k);
  out.insert(out.end(), u.begin(), u.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return Word::from_reduced(std::move(out));
}

/// g w g^{-1}, freely reduced.
inline Word conjugate_word(const Word& w, const Word& g) {
  if (w.empty()) return w;
  return concat_words(concat_words(g, w), invert_word(g));
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^{-1}
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  while (2 * k + 1 < w.size() && w[k] == w[w.size() - 1 - k].inverse()) ++k;
  auto first = w.letters().begin();
  return {Word::from_reduced({first + static_cast<std::ptrdiff_t>(k),
                              first + static_cast<std::ptrdiff_t>(w.size() - k)}),
          Word::from_reduced({first, first + static_cast<std::ptrdiff_t>(k)})};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != w.back().inverse();
}

/// w rotated left by `shift` letters. w must be cyclically reduced for the
/// result to stay reduced.
inline Word rotate_word(const Word& w, std::size_t shift) {
  if (w.empty()) return w;
  shift %= w.size();
  std::vector<Letter> out(w.begin(), w.end());
  std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(shift), out.end());
  return Word::from_reduced(std::move(out));
}

namespace detail {

// Start index of the lexicographically least rotation (two-pointer
// minimum-expression method, linear time).
template <typename Key>
std::size_t least_rotation(std::span<const Key> s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Key a = s[(i + k) % n];
    const Key b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

// Compares rotation `ra` of a with rotation `rb` of b (equal lengths).
template <typename Key>
int compare_rotations(std::span<const Key> a, std::size_t ra, std::span<const Key> b,
                      std::size_t rb) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Key x = a[(ra + k) % n];
    const Key y = b[(rb + k) % n];
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

// Canonical cyclic form of a cyclically reduced word given as letter ranks.
// Writes the minimum over rotations of the word and of its inverse to `out`.
inline void canonical_cyclic_ranks(std::span<const int> core, std::vector<int>& out) {
  const std::size_t n = core.size();
  out.clear();
  if (n == 0) return;
  std::vector<int> inv(n);
  for (std::size_t k = 0; k < n; ++k) inv[k] = core[n - 1 - k] ^ 1;
  const std::size_t ra = least_rotation<int>(core);
  const std::size_t rb = least_rotation<int>(inv);
  const bool use_inverse = compare_rotations<int>(inv, rb, core, ra) < 0;
  std::span<const int> src = use_inverse ? std::span<const int>(inv) : core;
  const std::size_t r = use_inverse ? rb : ra;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(src[(r + k) % n]);
}

inline Letter letter_from_rank(int rank) { return Letter(rank / 2 + 1, (rank & 1) ? -1 : 1); }

}  // namespace detail

/// Minimum, in the Word order, over all rotations of the cyclic core of w
/// and of its inverse. Constant on conjugacy-and-inversion classes.
inline Word canonical_cyclic_form(const Word& w) {
  Word core = cyclic_reduce(w).core;
  std::vector<int> ranks;
  ranks.reserve(core.size());
  for (Letter l : core) ranks.push_back(l.rank());
  std::vector<int> out;
  detail::canonical_cyclic_ranks(ranks, out);
  std::vector<Letter> letters;
  letters.reserve(out.size());
  for (int r : out) letters.push_back(detail::letter_from_rank(r));
  return Word::from_reduced(std::move(letters));
}

/// Exponent sum of each generator 1..gen_count.
inline std::vector<std::int64_t> exponent_sums(const Word& w, int gen_count) {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(std::max(gen_count, 0)), 0);
  for (Letter l : w) {
    if (l.generator() > gen_count) throw GeneratorOutOfRange(l.generator(), gen_count);
    sums[static_cast<std::size_t>(l.generator() - 1)] += l.sign();
  }
  return sums;
}

// ---------------------------------------------------------------------------
// Text format. Lowercase letters are generators, uppercase their inverses,
// "1" is the empty word. Two alphabets exist: x,y,z for presentations with
// at most three generators, and positional a..z otherwise.

enum class Alphabet { xyz, positional };

inline Alphabet alphabet_for(int gen_count) {
  return gen_count <= 3 ? Alphabet::xyz : Alphabet::positional;
}

inline constexpr int max_display_generators = 26;

inline char generator_char(int generator, Alphabet alphabet) {
  if (alphabet == Alphabet::xyz) {
    if (generator < 1 || generator > 3) throw TooManyGenerators("x,y,z alphabet holds 3 generators");
    return static_cast<char>('x' + generator - 1);
  }
  if (generator < 1 || generator > max_display_generators) {
    throw TooManyGenerators("generator " + std::to_string(generator) +
                            " cannot be displayed (limit 26)");
  }
  return static_cast<char>('a' + generator - 1);
}

/// Generator index for a lowercase letter, or 0 if the letter is outside
/// the alphabet.
inline int generator_from_char(char lower, Alphabet alphabet) {
  if (alphabet == Alphabet::xyz) return (lower >= 'x' && lower <= 'z') ? lower - 'x' + 1 : 0;
  return (lower >= 'a' && lower <= 'z') ? lower - 'a' + 1 : 0;
}

inline std::string format_word(const Word& w, Alphabet alphabet) {
  if (w.empty()) return "1";
  std::string out;
  out.reserve(w.size());
  for (Letter l : w) {
    char c = generator_char(l.generator(), alphabet);
    out.push_back(l.sign() < 0 ? static_cast<char>(c - 'a' + 'A') : c);
  }
  return out;
}

/// Context-free rendering: x,y,z when every generator is <= 3, positional
/// otherwise. Throws when the positional rendering would only use the
/// letters x,y,z, which would read back as generators 1..3.
inline std::string format_word(const Word& w) {
  if (w.max_generator() <= 3) return format_word(w, Alphabet::xyz);
  std::string s = format_word(w, Alphabet::positional);
  bool ambiguous = std::all_of(s.begin(), s.end(), [](char c) {
    char l = static_cast<char>(c | 0x20);
    return l >= 'x' && l <= 'z';
  });
  if (ambiguous) throw TooManyGenerators("word over generators 24..26 has no unambiguous rendering");
  return s;
}

/// Parses a word; `offset` shifts reported error positions. Whitespace is
/// ignored and non-reduced input is reduced.
inline Word parse_word(std::string_view text, Alphabet alphabet, int gen_count,
                       std::size_t offset = 0) {
  std::vector<Letter> raw;
  bool saw_one = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    char c = text[k];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    if (c == '1') {
      if (saw_one || !raw.empty()) throw SyntaxError(offset + k, "'1' must stand alone");
      saw_one = true;
      continue;
    }
    bool upper = c >= 'A' && c <= 'Z';
    bool lower = c >= 'a' && c <= 'z';
    int g = (upper || lower) ? generator_from_char(static_cast<char>(c | 0x20), alphabet) : 0;
    if (g == 0 || g > gen_count || saw_one) {
      throw SyntaxError(offset + k, std::string("unexpected character '") + c + "'");
    }
    raw.emplace_back(g, upper ? -1 : 1);
  }
  if (!saw_one && raw.empty()) throw SyntaxError(offset + text.size(), "empty word (use '1')");
  return free_reduce(raw);
}

/// Context-free parse: x,y,z when only those letters occur, positional
/// otherwise.
inline Alphabet detect_alphabet(std::string_view text) {
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      char l = static_cast<char>(c | 0x20);
      if (l < 'x') return Alphabet::positional;
    }
  }
  return Alphabet::xyz;
}

inline Word parse_word(std::string_view text, std::size_t offset = 0) {
  Alphabet a = detect_alphabet(text);
  return parse_word(text, a, a == Alphabet::xyz ? 3 : max_display_generators, offset);
}

inline std::ostream& operator<<(std::ostream& os, const Word& w) {
  return os << format_word(w, w.max_generator() <= 3 ? Alphabet::xyz : Alphabet::positional);
}

}  // namespace acfx
