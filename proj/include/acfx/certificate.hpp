#pragma once

// Replayable witnesses.
//
// A SAC certificate is a start presentation, a move script and the claimed
// endpoint; it witnesses SAC equivalence of start and end. A consequence
// certificate writes a target word as a product of conjugated relators
// g_k r_{i_k}^{e_k} g_k^{-1}, witnessing that the target lies in the normal
// closure of the relators. Free reduction alone checks either kind.
//
// File format (UTF-8, one record per line, trailing whitespace ignored):
//
//   acfx v1 kind=sac                    acfx v1 kind=consequence
//   start: x,y | xy, y                  relators: xxyXyXY, YYXyXyx
//   move: destabilize i=1               target: xyxYXY
//   end: x | x                          term: g=xyy r=2 e=-1

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "acfx/errors.hpp"
#include "acfx/presentation.hpp"
#include "acfx/word.hpp"

namespace acfx {

struct Certificate {
  Presentation start;
  std::vector<Move> moves;
  Presentation claimed_end;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct ConsequenceTerm {
  Word conjugator;
  int relator_index = 1;  // 1-based
  int exponent = 1;       // +1 or -1

  friend bool operator==(const ConsequenceTerm&, const ConsequenceTerm&) = default;
};

struct ConsequenceCertificate {
  std::vector<Word> relators;
  Word target;
  std::vector<ConsequenceTerm> terms;

  friend bool operator==(const ConsequenceCertificate&, const ConsequenceCertificate&) = default;
};

/// Raised by replay at the first move that cannot be applied.
class ReplayError : public Error {
 public:
  ReplayError(std::size_t step, const std::string& reason)
      : Error("step " + std::to_string(step) + ": " + reason), step_(step), reason_(reason) {}
  /// 1-based index of the failing move.
  std::size_t step() const noexcept { return step_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t step_;
  std::string reason_;
};

inline Presentation replay(const Certificate& c) {
  Presentation p = c.start;
  for (std::size_t k = 0; k < c.moves.size(); ++k) {
    try {
      p = apply_move(p, c.moves[k]);
    } catch (const Error& e) {
      throw ReplayError(k + 1, e.what());
    }
  }
  return p;
}

struct CertificateVerdict {
  bool valid = false;
  /// First failing move (1-based); moves.size() + 1 when only the endpoint
  /// disagrees. 0 when valid.
  std::size_t step = 0;
  std::string reason;
};

inline CertificateVerdict verify_certificate(const Certificate& c) {
  Presentation end;
  try {
    end = replay(c);
  } catch (const ReplayError& e) {
    return {false, e.step(), e.reason()};
  }
  if (canonical_key(end) != canonical_key(c.claimed_end)) {
    return {false, c.moves.size() + 1, "endpoint mismatch: replay gives " + format_presentation(end)};
  }
  return {true, 0, {}};
}

struct ConsequenceVerdict {
  bool valid = false;
  Word residue;  // product * target^{-1}; empty iff valid
};

/// Free reduction of prod_k g_k r_{i_k}^{e_k} g_k^{-1} * target^{-1}.
inline ConsequenceVerdict verify_consequence(const ConsequenceCertificate& cc) {
  Word product;
  for (const ConsequenceTerm& t : cc.terms) {
    if (t.relator_index < 1 || static_cast<std::size_t>(t.relator_index) > cc.relators.size()) {
      throw MoveError(MoveErrorKind::index_out_of_range,
                      "term relator index " + std::to_string(t.relator_index));
    }
    if (t.exponent != 1 && t.exponent != -1) throw InvalidArgument("term exponent must be +1 or -1");
    Word r = cc.relators[static_cast<std::size_t>(t.relator_index - 1)];
    if (t.exponent < 0) r = invert_word(r);
    product = concat_words(product, conjugate_word(r, t.conjugator));
  }
  Word residue = concat_words(product, invert_word(cc.target));
  return {residue.empty(), residue};
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr std::string_view certificate_magic = "acfx v1";

namespace detail {

// Alphabet shared by all standalone words of one certificate file.
inline Alphabet alphabet_for_words(const std::vector<const Word*>& words) {
  int m = 0;
  bool low = false;  // some generator renders below 'x' positionally
  for (const Word* w : words) {
    m = std::max(m, w->max_generator());
    for (Letter l : *w) low = low || l.generator() < 24;
  }
  if (m > 3 && !low) throw TooManyGenerators("words over generators 24..26 only cannot be written");
  return alphabet_for(m);
}

inline std::string_view rstrip(std::string_view s) {
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(rstrip(text.substr(start, nl - start)));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::string_view expect_prefix(std::string_view line, std::string_view prefix, std::size_t lineno) {
  if (line.substr(0, prefix.size()) != prefix) {
    throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": expected '" + std::string(prefix) + "'");
  }
  return line.substr(prefix.size());
}

inline std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == ' ') {
      out.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  return out;
}

inline std::string_view param(std::string_view token, std::string_view key, std::size_t lineno) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=') {
    throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": expected parameter '" +
                                  std::string(key) + "='");
  }
  return token.substr(key.size() + 1);
}

inline int int_param(std::string_view token, std::string_view key, std::size_t lineno) {
  std::string_view v = param(token, key, lineno);
  int value = 0;
  for (char c : v) {
    if (c < '0' || c > '9' || value > 100'000'000) {
      throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": bad integer '" + std::string(v) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

inline Word word_param(std::string_view text, Alphabet a, std::size_t lineno) {
  try {
    return parse_word(text, a, a == Alphabet::xyz ? 3 : max_display_generators);
  } catch (const SyntaxError& e) {
    throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": " + e.what());
  }
}

inline Presentation presentation_line(std::string_view text, std::size_t lineno) {
  try {
    return parse_presentation(text);
  } catch (const SyntaxError& e) {
    throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": " + e.what());
  } catch (const Error& e) {
    throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": " + e.what());
  }
}

inline std::string_view header_kind(const std::vector<std::string_view>& lines) {
  if (lines.empty()) throw SyntaxError(1, "line 1: empty certificate");
  std::string_view h = lines[0];
  if (h.substr(0, 6) == "acfx v" && h.substr(0, certificate_magic.size() + 1) != "acfx v1 ") {
    throw VersionMismatch("unsupported certificate version: " + std::string(h));
  }
  return expect_prefix(h, "acfx v1 kind=", 1);
}

}  // namespace detail

inline std::string serialize(const Certificate& c) {
  std::vector<const Word*> words;
  for (const Move& m : c.moves) words.push_back(&m.g);
  const Alphabet a = detail::alphabet_for_words(words);
  std::string out = "acfx v1 kind=sac\n";
  out += "start: " + format_presentation(c.start) + "\n";
  for (const Move& m : c.moves) {
    out += "move: ";
    out += move_keyword(m.kind);
    switch (m.kind) {
      case MoveKind::concat:
        out += " i=" + std::to_string(m.i) + " j=" + std::to_string(m.j);
        break;
      case MoveKind::invert:
      case MoveKind::destabilize:
        out += " i=" + std::to_string(m.i);
        break;
      case MoveKind::conjugate:
        out += " i=" + std::to_string(m.i) + " g=" + format_word(m.g, a);
        break;
      case MoveKind::stabilize:
        out += " g=" + format_word(m.g, a);
        break;
    }
    out += "\n";
  }
  out += "end: " + format_presentation(c.claimed_end) + "\n";
  return out;
}

inline std::string serialize(const ConsequenceCertificate& cc) {
  std::vector<const Word*> words;
  for (const Word& r : cc.relators) words.push_back(&r);
  words.push_back(&cc.target);
  for (const auto& t : cc.terms) words.push_back(&t.conjugator);
  const Alphabet a = detail::alphabet_for_words(words);
  std::string out = "acfx v1 kind=consequence\nrelators:";
  for (std::size_t k = 0; k < cc.relators.size(); ++k) {
    out += (k == 0 ? " " : ", ") + format_word(cc.relators[k], a);
  }
  out += "\ntarget: " + format_word(cc.target, a) + "\n";
  for (const auto& t : cc.terms) {
    out += "term: g=" + format_word(t.conjugator, a) + " r=" + std::to_string(t.relator_index) +
           " e=" + (t.exponent > 0 ? "+1" : "-1") + "\n";
  }
  return out;
}

inline Certificate parse_sac_certificate(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (detail::header_kind(lines) != "sac") throw SyntaxError(1, "line 1: expected kind=sac");
  if (lines.size() < 3) throw SyntaxError(lines.size() + 1, "truncated certificate");

  Certificate c;
  c.start = detail::presentation_line(detail::expect_prefix(lines[1], "start: ", 2), 2);

  // Conjugator alphabet is shared by every move line.
  std::string all_words;
  for (std::size_t k = 2; k + 1 < lines.size(); ++k) {
    auto toks = detail::split_spaces(lines[k]);
    for (auto t : toks) {
      if (t.substr(0, 2) == "g=") all_words += std::string(t.substr(2));
    }
  }
  const Alphabet a = detect_alphabet(all_words);

  for (std::size_t k = 2; k + 1 < lines.size(); ++k) {
    const std::size_t lineno = k + 1;
    auto toks = detail::split_spaces(detail::expect_prefix(lines[k], "move: ", lineno));
    const std::string_view kw = toks[0];
    auto arity = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": wrong parameter count");
      }
    };
    if (kw == "concat") {
      arity(2);
      c.moves.push_back(Move::concat(detail::int_param(toks[1], "i", lineno),
                                     detail::int_param(toks[2], "j", lineno)));
    } else if (kw == "invert") {
      arity(1);
      c.moves.push_back(Move::invert(detail::int_param(toks[1], "i", lineno)));
    } else if (kw == "conjugate") {
      arity(2);
      int i = detail::int_param(toks[1], "i", lineno);
      c.moves.push_back(Move::conjugate(i, detail::word_param(detail::param(toks[2], "g", lineno), a, lineno)));
    } else if (kw == "stabilize") {
      arity(1);
      c.moves.push_back(Move::stabilize(detail::word_param(detail::param(toks[1], "g", lineno), a, lineno)));
    } else if (kw == "destabilize") {
      arity(1);
      c.moves.push_back(Move::destabilize(detail::int_param(toks[1], "i", lineno)));
    } else {
      throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": unknown move '" + std::string(kw) + "'");
    }
  }
  const std::size_t last = lines.size();
  c.claimed_end = detail::presentation_line(detail::expect_prefix(lines.back(), "end: ", last), last);
  return c;
}

inline ConsequenceCertificate parse_consequence_certificate(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (detail::header_kind(lines) != "consequence") {
    throw SyntaxError(1, "line 1: expected kind=consequence");
  }
  if (lines.size() < 3) throw SyntaxError(lines.size() + 1, "truncated certificate");

  std::string_view rel_text = detail::expect_prefix(lines[1], "relators:", 2);
  std::string_view target_text = detail::expect_prefix(lines[2], "target: ", 3);
  std::vector<std::string_view> term_words;
  for (std::size_t k = 3; k < lines.size(); ++k) {
    auto toks = detail::split_spaces(detail::expect_prefix(lines[k], "term: ", k + 1));
    if (toks.size() != 3) throw SyntaxError(k + 1, "line " + std::to_string(k + 1) + ": wrong parameter count");
    term_words.push_back(detail::param(toks[0], "g", k + 1));
  }
  std::string all_words = std::string(rel_text) + std::string(target_text);
  for (auto w : term_words) all_words += std::string(w);
  const Alphabet a = detect_alphabet(all_words);

  ConsequenceCertificate cc;
  if (!detail::blank(rel_text)) {
    if (rel_text.front() != ' ') throw SyntaxError(2, "line 2: expected 'relators: '");
    for (auto [off, tok] : detail::split_commas(rel_text, 0, rel_text.size())) {
      cc.relators.push_back(detail::word_param(tok, a, 2));
    }
  }
  cc.target = detail::word_param(target_text, a, 3);
  for (std::size_t k = 3; k < lines.size(); ++k) {
    const std::size_t lineno = k + 1;
    auto toks = detail::split_spaces(detail::expect_prefix(lines[k], "term: ", lineno));
    ConsequenceTerm t;
    t.conjugator = detail::word_param(term_words[k - 3], a, lineno);
    t.relator_index = detail::int_param(toks[1], "r", lineno);
    std::string_view e = detail::param(toks[2], "e", lineno);
    if (e == "+1") {
      t.exponent = 1;
    } else if (e == "-1") {
      t.exponent = -1;
    } else {
      throw SyntaxError(lineno, "line " + std::to_string(lineno) + ": exponent must be +1 or -1");
    }
    cc.terms.push_back(std::move(t));
  }
  return cc;
}

using AnyCertificate = std::variant<Certificate, ConsequenceCertificate>;

inline AnyCertificate parse_certificate(std::string_view text) {
  auto kind = detail::header_kind(detail::split_lines(text));
  if (kind == "sac") return parse_sac_certificate(text);
  if (kind == "consequence") return parse_consequence_certificate(text);
  throw SyntaxError(1, "line 1: unknown certificate kind '" + std::string(kind) + "'");
}

}  // namespace acfx
