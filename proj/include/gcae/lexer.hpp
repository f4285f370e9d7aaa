#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gcae/matrix.hpp"

namespace gcae::lexer {

enum class TokenKind {
  Identifier,
  Keyword,
  IntLiteral,
  FloatLiteral,
  StringLiteral,
  CharLiteral,
  BoolLiteral,
  NullLiteral,
  Punct,
};

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct RawToken {
  TokenKind kind = TokenKind::Punct;
  std::string text;
  Span span;
};

/// Splits curly-brace source text into tokens. Comments and whitespace are
/// dropped. Multi-character operators are matched before single characters.
///
/// Throws UnterminatedLiteral or IllegalCharacter with the offending offset.
std::vector<RawToken> tokenize(std::string_view body);

/// Same scanner, but characters outside the supported subset (annotations,
/// preprocessor marks, non-ASCII) are skipped instead of rejected. Used by
/// method extraction over whole files.
std::vector<RawToken> tokenize_lenient(std::string_view source);

bool is_keyword(std::string_view word);

/// Closed, ordered set of lexemes. The line number of a lexeme in the
/// vocabulary file is its index.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> lexemes);

  /// The vocabulary shipped with the library (126 lexemes).
  static const Vocabulary& standard();

  static Vocabulary parse(std::string_view text);
  std::string serialize() const;

  std::size_t size() const noexcept { return lexemes_.size(); }
  const std::string& lexeme(std::size_t index) const { return lexemes_.at(index); }
  const std::vector<std::string>& lexemes() const noexcept { return lexemes_; }
  std::optional<std::size_t> index_of(std::string_view lexeme) const;
  bool contains(std::string_view lexeme) const { return index_of(lexeme).has_value(); }

  /// FNV-1a of the serialized form; stored in model files.
  std::uint64_t checksum() const noexcept { return checksum_; }

 private:
  std::vector<std::string> lexemes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t checksum_ = 0;
};

// Placeholder lexemes produced by anonymization.
inline constexpr std::string_view kIdToken = "id";
inline constexpr std::string_view kMethodToken = "method";
inline constexpr std::string_view kOtherMethodToken = "other_method";

/// Identifiers that survive anonymization unchanged.
const std::set<std::string, std::less<>>& kept_names();
/// Library type names that are part of the vocabulary and pass through.
const std::set<std::string, std::less<>>& kept_type_names();

/// Maps raw tokens onto vocabulary lexemes:
///   - the method's own name becomes `method`, other callees `other_method`
///   - kept names (i, j, n) and kept type names pass through
///   - every other identifier becomes `id`
///   - one-digit integers pass through, other literals become their class token
///   - keywords, punctuation and placeholder lexemes pass through
std::vector<std::string> anonymize(const std::vector<RawToken>& tokens,
                                   std::string_view method_name,
                                   const std::set<std::string, std::less<>>& known_methods = {});

/// Convenience overload: re-tokenizes each lexeme to recover its kind.
std::vector<std::string> anonymize(const std::vector<std::string>& lexemes,
                                   std::string_view method_name,
                                   const std::set<std::string, std::less<>>& known_methods = {});

/// For each token anonymized to `id`, the group number of the underlying
/// variable (0, 1, ... in order of first appearance). Not used for training.
std::vector<std::size_t> variable_groups(const std::vector<RawToken>& tokens,
                                         const std::vector<std::string>& anonymized);

struct TokenSequence {
  std::vector<std::size_t> indices;
  std::vector<std::string> lexemes;
  std::vector<Span> spans;

  std::size_t size() const noexcept { return indices.size(); }
};

/// Throws EmptySequence for [] and UnknownLexeme(position) for lexemes the
/// vocabulary does not contain. Spans are left empty; use the RawToken overload
/// to keep source offsets.
TokenSequence numericalize(const std::vector<std::string>& lexemes, const Vocabulary& vocab);
TokenSequence numericalize(const std::vector<std::string>& lexemes,
                           const std::vector<Span>& spans, const Vocabulary& vocab);

/// n x V matrix with a single 1 per row. Throws IndexOutOfRange.
nn::Matrix one_hot(const TokenSequence& seq, std::size_t vocab_size);
nn::Matrix one_hot(const std::vector<std::size_t>& indices, std::size_t vocab_size);

/// Result of running a method's text through the whole lexical pipeline.
struct PreparedMethod {
  std::vector<std::string> lexemes;
  std::vector<std::size_t> id_groups;
  TokenSequence sequence;
};

/// tokenize -> drop the signature prefix before the method name -> anonymize
/// -> numericalize. If the name is empty or does not occur as `name (`, the
/// whole token list is kept.
PreparedMethod prepare_method(std::string_view body, std::string_view method_name,
                              const Vocabulary& vocab,
                              const std::set<std::string, std::less<>>& known_methods = {});

/// Finds the declared name of a method in raw text: the first identifier
/// followed by a parenthesised list and then `{` or `throws`.
std::optional<std::string> declared_name(const std::vector<RawToken>& tokens);

std::string join(const std::vector<std::string>& lexemes, char sep = ' ');
std::vector<std::string> split_ws(std::string_view text);

}  // namespace gcae::lexer
