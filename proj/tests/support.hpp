#pragma once

#include <random>
#include <string>
#include <vector>

#include "acfx/acfx.hpp"

namespace testing_support {

// Word in the x,y,z alphabet; "" and "1" are the empty word.
inline acfx::Word W(const std::string& s) {
  if (s.empty()) return {};
  return acfx::parse_word(s, acfx::Alphabet::xyz, 3);
}

inline std::vector<acfx::Letter> raw(const std::string& s) {
  std::vector<acfx::Letter> out;
  for (char c : s) {
    bool upper = c >= 'A' && c <= 'Z';
    out.emplace_back(acfx::generator_from_char(static_cast<char>(c | 0x20), acfx::Alphabet::xyz), upper ? -1 : 1);
  }
  return out;
}

inline std::string S(const acfx::Word& w) { return acfx::format_word(w, acfx::Alphabet::xyz); }

inline acfx::Presentation P(const std::string& s) { return acfx::parse_presentation(s); }

inline std::string F(const acfx::Presentation& p) { return acfx::format_presentation(p); }

// Unreduced random letter string over n generators.
inline std::vector<acfx::Letter> random_letters(std::mt19937_64& rng, int n, std::size_t len) {
  std::uniform_int_distribution<int> gen(1, n);
  std::bernoulli_distribution neg(0.5);
  std::vector<acfx::Letter> out;
  for (std::size_t k = 0; k < len; ++k) out.emplace_back(gen(rng), neg(rng) ? -1 : 1);
  return out;
}

inline acfx::Word random_reduced(std::mt19937_64& rng, int n, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  return acfx::free_reduce(random_letters(rng, n, len(rng)));
}

}  // namespace testing_support
