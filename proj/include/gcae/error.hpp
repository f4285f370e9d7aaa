#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gcae {

enum class ErrorKind {
  UnbalancedDelimiters,
  InvalidShape,
  EmptyCorpus,
  UnterminatedLiteral,
  IllegalCharacter,
  UnknownLexeme,
  EmptySequence,
  IndexOutOfRange,
  MalformedStructure,
  DimensionMismatch,
  ShapeMismatch,
  InvalidConfig,
  NonFiniteLoss,
  NoMethodsFound,
  ChecksumMismatch,
  Io,
  Format,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as a gcae::Error carrying its kind
/// and, where one exists, a character or token position.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> position_;
};

}  // namespace gcae
