#include "gcae/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "gcae/error.hpp"
#include "gcae/random.hpp"

namespace gcae::lexer {

namespace {

constexpr std::array<std::string_view, 13> kMultiCharOps = {
    "==", "<=", ">=", "!=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "->"};

constexpr std::string_view kSingleCharPunct = "(){}[];,.=+-*/%<>!~?:&|^";

constexpr std::array<std::string_view, 44> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",       "case",
    "catch",    "char",       "class",     "const",     "continue",   "default",
    "double",   "enum",       "extends",   "final",     "finally",    "float",
    "goto",     "implements", "import",    "instanceof", "int",       "interface",
    "long",     "native",     "new",       "package",   "private",    "protected",
    "public",   "short",      "static",    "strictfp",  "super",      "switch",
    "synchronized", "this",   "throw",     "throws",    "transient",  "try",
    "void",     "volatile"};

constexpr std::array<std::string_view, 6> kControlKeywords = {"if",  "else",   "do",
                                                              "while", "for", "return"};

constexpr std::array<std::string_view, 17> kTypeNames = {
    "String",  "Object",        "Integer", "Long",      "Double",  "Boolean",
    "Character", "Math",        "System",  "StringBuilder", "List", "ArrayList",
    "Map",     "HashMap",       "Set",     "HashSet",   "Exception"};

constexpr std::array<std::string_view, 6> kLiteralClasses = {
    "int_lit", "float_lit", "str_lit", "char_lit", "bool_lit", "null_lit"};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_placeholder(std::string_view word) {
  if (word == kIdToken || word == kMethodToken || word == kOtherMethodToken) return true;
  return std::find(kLiteralClasses.begin(), kLiteralClasses.end(), word) != kLiteralClasses.end();
}

class Scanner {
 public:
  Scanner(std::string_view src, bool lenient) : src_(src), lenient_(lenient) {}

  std::vector<RawToken> run() {
    std::vector<RawToken> out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        const auto end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) {
          if (!lenient_) throw Error(ErrorKind::UnterminatedLiteral, "block comment", pos_);
          pos_ = src_.size();
        } else {
          pos_ = end + 2;
        }
      } else if (is_ident_start(c)) {
        out.push_back(word());
      } else if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
        out.push_back(number());
      } else if (c == '"') {
        out.push_back(string_literal());
      } else if (c == '\'') {
        out.push_back(char_literal());
      } else if (auto op = punct()) {
        out.push_back(*op);
      } else if (lenient_) {
        if (c == '@') out.push_back({TokenKind::Punct, "@", {pos_, pos_ + 1}});
        ++pos_;
      } else {
        throw Error(ErrorKind::IllegalCharacter,
                    std::string("'") + c + "'", pos_);
      }
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  RawToken make(TokenKind kind, std::size_t begin) const {
    return {kind, std::string(src_.substr(begin, pos_ - begin)), {begin, pos_}};
  }

  RawToken word() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string_view w = src_.substr(begin, pos_ - begin);
    TokenKind kind = TokenKind::Identifier;
    if (w == "true" || w == "false") {
      kind = TokenKind::BoolLiteral;
    } else if (w == "null") {
      kind = TokenKind::NullLiteral;
    } else if (is_keyword(w)) {
      kind = TokenKind::Keyword;
    }
    return make(kind, begin);
  }

  RawToken number() {
    const std::size_t begin = pos_;
    bool is_float = false;
    if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'b' || peek(1) == 'B')) {
      pos_ += 2;
      while (pos_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
    } else {
      auto digits = [&] {
        while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '_')) ++pos_;
      };
      digits();
      if (pos_ < src_.size() && src_[pos_] == '.' && is_digit(peek(1))) {
        is_float = true;
        ++pos_;
        digits();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        const std::size_t save = pos_;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        if (pos_ < src_.size() && is_digit(src_[pos_])) {
          is_float = true;
          digits();
        } else {
          pos_ = save;
        }
      }
    }
    if (pos_ < src_.size()) {
      const char s = src_[pos_];
      if (s == 'l' || s == 'L') {
        ++pos_;
      } else if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
        is_float = true;
        ++pos_;
      }
    }
    return make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral, begin);
  }

  RawToken string_literal() {
    const std::size_t begin = pos_;
    if (src_.substr(pos_, 3) == "\"\"\"") {
      const auto end = src_.find("\"\"\"", pos_ + 3);
      if (end == std::string_view::npos) {
        return unterminated(begin, TokenKind::StringLiteral);
      }
      pos_ = end + 3;
      return make(TokenKind::StringLiteral, begin);
    }
    return quoted('"', TokenKind::StringLiteral);
  }

  RawToken char_literal() { return quoted('\'', TokenKind::CharLiteral); }

  RawToken quoted(char quote, TokenKind kind) {
    const std::size_t begin = pos_;
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
      } else if (c == quote) {
        ++pos_;
        return make(kind, begin);
      } else if (c == '\n') {
        break;
      } else {
        ++pos_;
      }
    }
    pos_ = std::min(pos_, src_.size());
    return unterminated(begin, kind);
  }

  RawToken unterminated(std::size_t begin, TokenKind kind) {
    if (!lenient_) throw Error(ErrorKind::UnterminatedLiteral, "", begin);
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    return make(kind, begin);
  }

  std::optional<RawToken> punct() {
    const std::size_t begin = pos_;
    for (std::string_view op : kMultiCharOps) {
      if (src_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        return make(TokenKind::Punct, begin);
      }
    }
    if (kSingleCharPunct.find(src_[pos_]) != std::string_view::npos) {
      ++pos_;
      return make(TokenKind::Punct, begin);
    }
    return std::nullopt;
  }

  std::string_view src_;
  bool lenient_;
  std::size_t pos_ = 0;
};

std::vector<std::string> standard_lexemes() {
  std::vector<std::string> v;
  for (auto w : kControlKeywords) v.emplace_back(w);
  v.emplace_back(kMethodToken);
  v.emplace_back(kIdToken);
  v.emplace_back(kOtherMethodToken);
  for (auto w : {"i", "j", "n"}) v.emplace_back(w);
  for (char d = '0'; d <= '9'; ++d) v.emplace_back(1, d);
  for (auto w : kLiteralClasses) v.emplace_back(w);
  for (auto w : kKeywords) v.emplace_back(w);
  for (auto w : kTypeNames) v.emplace_back(w);
  for (char c : kSingleCharPunct) v.emplace_back(1, c);
  for (auto w : kMultiCharOps) v.emplace_back(w);
  return v;
}

// Index of the matching closer for each opener, computed over token texts.
std::vector<std::size_t> match_parens(const std::vector<RawToken>& tokens) {
  std::vector<std::size_t> match(tokens.size(), SIZE_MAX);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].kind != TokenKind::Punct) continue;
    if (tokens[k].text == "(") {
      stack.push_back(k);
    } else if (tokens[k].text == ")" && !stack.empty()) {
      match[stack.back()] = k;
      stack.pop_back();
    }
  }
  return match;
}

}  // namespace

std::vector<RawToken> tokenize(std::string_view body) { return Scanner(body, false).run(); }

std::vector<RawToken> tokenize_lenient(std::string_view source) {
  return Scanner(source, true).run();
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end() ||
         std::find(kControlKeywords.begin(), kControlKeywords.end(), word) !=
             kControlKeywords.end();
}

const std::set<std::string, std::less<>>& kept_names() {
  static const std::set<std::string, std::less<>> names = {"i", "j", "n"};
  return names;
}

const std::set<std::string, std::less<>>& kept_type_names() {
  static const std::set<std::string, std::less<>> names(kTypeNames.begin(), kTypeNames.end());
  return names;
}

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> lexemes) : lexemes_(std::move(lexemes)) {
  if (lexemes_.empty()) throw Error(ErrorKind::Format, "vocabulary is empty");
  for (std::size_t k = 0; k < lexemes_.size(); ++k) {
    if (lexemes_[k].empty()) throw Error(ErrorKind::Format, "empty lexeme", k);
    if (!index_.emplace(lexemes_[k], k).second) {
      throw Error(ErrorKind::Format, "duplicate lexeme '" + lexemes_[k] + "'", k);
    }
  }
  checksum_ = fnv1a64(serialize());
}

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab(standard_lexemes());
  return vocab;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::vector<std::string> lexemes;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lexemes.emplace_back(line);
    start = end + 1;
  }
  return Vocabulary(std::move(lexemes));
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto& l : lexemes_) {
    out += l;
    out += '\n';
  }
  return out;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view lexeme) const {
  auto it = index_.find(std::string(lexeme));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- anonymize

std::vector<std::string> anonymize(const std::vector<RawToken>& tokens,
                                   std::string_view method_name,
                                   const std::set<std::string, std::less<>>& known_methods) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const RawToken& t = tokens[k];
    switch (t.kind) {
      case TokenKind::Identifier: {
        const bool call = k + 1 < tokens.size() && tokens[k + 1].kind == TokenKind::Punct &&
                          tokens[k + 1].text == "(";
        if (!method_name.empty() && t.text == method_name) {
          out.emplace_back(kMethodToken);
        } else if (is_placeholder(t.text) || kept_type_names().contains(t.text)) {
          out.push_back(t.text);
        } else if (call || known_methods.contains(t.text)) {
          out.emplace_back(kOtherMethodToken);
        } else if (kept_names().contains(t.text)) {
          out.push_back(t.text);
        } else {
          out.emplace_back(kIdToken);
        }
        break;
      }
      case TokenKind::IntLiteral:
        out.push_back(t.text.size() == 1 ? t.text : std::string("int_lit"));
        break;
      case TokenKind::FloatLiteral: out.emplace_back("float_lit"); break;
      case TokenKind::StringLiteral: out.emplace_back("str_lit"); break;
      case TokenKind::CharLiteral: out.emplace_back("char_lit"); break;
      case TokenKind::BoolLiteral: out.emplace_back("bool_lit"); break;
      case TokenKind::NullLiteral: out.emplace_back("null_lit"); break;
      case TokenKind::Keyword:
      case TokenKind::Punct: out.push_back(t.text); break;
    }
  }
  return out;
}

std::vector<std::string> anonymize(const std::vector<std::string>& lexemes,
                                   std::string_view method_name,
                                   const std::set<std::string, std::less<>>& known_methods) {
  std::vector<RawToken> tokens;
  tokens.reserve(lexemes.size());
  for (std::size_t k = 0; k < lexemes.size(); ++k) {
    auto one = tokenize(lexemes[k]);
    if (one.size() != 1) {
      throw Error(ErrorKind::Format, "'" + lexemes[k] + "' is not a single lexeme", k);
    }
    tokens.push_back(std::move(one.front()));
  }
  return anonymize(tokens, method_name, known_methods);
}

std::vector<std::size_t> variable_groups(const std::vector<RawToken>& tokens,
                                         const std::vector<std::string>& anonymized) {
  std::map<std::string, std::size_t> group_of;
  std::vector<std::size_t> groups;
  for (std::size_t k = 0; k < tokens.size() && k < anonymized.size(); ++k) {
    if (anonymized[k] != kIdToken) continue;
    auto [it, inserted] = group_of.emplace(tokens[k].text, group_of.size());
    groups.push_back(it->second);
  }
  return groups;
}

// ---------------------------------------------------------------- numericalize

TokenSequence numericalize(const std::vector<std::string>& lexemes, const Vocabulary& vocab) {
  return numericalize(lexemes, {}, vocab);
}

TokenSequence numericalize(const std::vector<std::string>& lexemes,
                           const std::vector<Span>& spans, const Vocabulary& vocab) {
  if (lexemes.empty()) throw Error(ErrorKind::EmptySequence, "method has no tokens");
  TokenSequence seq;
  seq.indices.reserve(lexemes.size());
  for (std::size_t k = 0; k < lexemes.size(); ++k) {
    auto idx = vocab.index_of(lexemes[k]);
    if (!idx) throw Error(ErrorKind::UnknownLexeme, "'" + lexemes[k] + "'", k);
    seq.indices.push_back(*idx);
  }
  seq.lexemes = lexemes;
  seq.spans = spans;
  return seq;
}

nn::Matrix one_hot(const TokenSequence& seq, std::size_t vocab_size) {
  return one_hot(seq.indices, vocab_size);
}

nn::Matrix one_hot(const std::vector<std::size_t>& indices, std::size_t vocab_size) {
  nn::Matrix x(indices.size(), vocab_size);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= vocab_size) {
      throw Error(ErrorKind::IndexOutOfRange,
                  std::to_string(indices[k]) + " >= " + std::to_string(vocab_size), k);
    }
    x(k, indices[k]) = 1.0;
  }
  return x;
}

// ---------------------------------------------------------------- pipeline

std::optional<std::string> declared_name(const std::vector<RawToken>& tokens) {
  const auto match = match_parens(tokens);
  for (std::size_t k = 0; k + 1 < tokens.size(); ++k) {
    if (tokens[k].kind != TokenKind::Identifier || tokens[k + 1].text != "(") continue;
    if (k > 0 && (tokens[k - 1].text == "." || tokens[k - 1].text == "new")) continue;
    const std::size_t close = match[k + 1];
    if (close == SIZE_MAX || close + 1 >= tokens.size()) continue;
    const std::string& after = tokens[close + 1].text;
    if (after == "{" || after == "throws") return tokens[k].text;
  }
  return std::nullopt;
}

PreparedMethod prepare_method(std::string_view body, std::string_view method_name,
                              const Vocabulary& vocab,
                              const std::set<std::string, std::less<>>& known_methods) {
  std::vector<RawToken> tokens = tokenize(body);
  if (!method_name.empty()) {
    for (std::size_t k = 0; k + 1 < tokens.size(); ++k) {
      if (tokens[k].kind == TokenKind::Identifier && tokens[k].text == method_name &&
          tokens[k + 1].text == "(") {
        tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(k));
        break;
      }
    }
  }
  PreparedMethod out;
  out.lexemes = anonymize(tokens, method_name, known_methods);
  out.id_groups = variable_groups(tokens, out.lexemes);
  std::vector<Span> spans;
  spans.reserve(tokens.size());
  for (const auto& t : tokens) spans.push_back(t.span);
  out.sequence = numericalize(out.lexemes, spans, vocab);
  return out;
}

std::string join(const std::vector<std::string>& lexemes, char sep) {
  std::string out;
  for (std::size_t k = 0; k < lexemes.size(); ++k) {
    if (k) out += sep;
    out += lexemes[k];
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t k = 0;
  while (k < text.size()) {
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    const std::size_t start = k;
    while (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k > start) out.emplace_back(text.substr(start, k - start));
  }
  return out;
}

}  // namespace gcae::lexer
