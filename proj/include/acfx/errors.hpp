#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acfx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A letter names a generator beyond the presentation's generator count.
class GeneratorOutOfRange : public Error {
 public:
  GeneratorOutOfRange(int generator, int gen_count)
      : Error("generator " + std::to_string(generator) + " exceeds generator count " +
              std::to_string(gen_count)),
        generator_(generator) {}
  int generator() const noexcept { return generator_; }

 private:
  int generator_;
};

/// Text display is capped at 26 generators (letters a-z).
class TooManyGenerators : public Error {
 public:
  using Error::Error;
};

class NotBalanced : public Error {
 public:
  using Error::Error;
};

/// Parse failure. `position` is a 0-based byte offset for single-line
/// grammars and a 1-based line number for certificate files.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

enum class MoveErrorKind {
  index_out_of_range,
  concat_self,
  destabilize_inapplicable,
  stabilize_bad_conjugator,
};

inline const char* to_string(MoveErrorKind kind) {
  switch (kind) {
    case MoveErrorKind::index_out_of_range:
      return "IndexOutOfRange";
    case MoveErrorKind::concat_self:
      return "ConcatSelf";
    case MoveErrorKind::destabilize_inapplicable:
      return "DestabilizeInapplicable";
    case MoveErrorKind::stabilize_bad_conjugator:
      return "StabilizeBadConjugator";
  }
  return "Unknown";
}

class MoveError : public Error {
 public:
  MoveError(MoveErrorKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
  MoveErrorKind kind() const noexcept { return kind_; }

 private:
  MoveErrorKind kind_;
};

}  // namespace acfx
