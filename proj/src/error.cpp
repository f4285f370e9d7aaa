#include "gcae/error.hpp"

namespace gcae {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnbalancedDelimiters: return "UnbalancedDelimiters";
    case ErrorKind::InvalidShape: return "InvalidShape";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::UnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorKind::IllegalCharacter: return "IllegalCharacter";
    case ErrorKind::UnknownLexeme: return "UnknownLexeme";
    case ErrorKind::EmptySequence: return "EmptySequence";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MalformedStructure: return "MalformedStructure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::NoMethodsFound: return "NoMethodsFound";
    case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message,
                    std::optional<std::size_t> position) {
  std::string out = to_string(kind);
  if (position) out += " at " + std::to_string(*position);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(compose(kind, message, position)),
      kind_(kind),
      position_(position) {}

}  // namespace gcae
