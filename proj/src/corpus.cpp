#include "gcae/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gcae/error.hpp"
#include "gcae/flowgraph.hpp"
#include "gcae/random.hpp"

namespace gcae::corpus {

using lexer::RawToken;
using lexer::TokenKind;

// ---------------------------------------------------------------- extraction

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

bool is_text(const RawToken& t, std::string_view s) {
  return t.kind == TokenKind::Punct ? t.text == s : false;
}

bool opens(const RawToken& t) {
  return t.kind == TokenKind::Punct && (t.text == "(" || t.text == "{" || t.text == "[");
}
bool closes(const RawToken& t) {
  return t.kind == TokenKind::Punct && (t.text == ")" || t.text == "}" || t.text == "]");
}

char closer_of(const std::string& open) {
  return open == "(" ? ')' : open == "{" ? '}' : ']';
}

std::vector<std::size_t> match_all(const std::vector<RawToken>& tokens) {
  std::vector<std::size_t> match(tokens.size(), kNone);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (opens(tokens[k])) {
      stack.push_back(k);
    } else if (closes(tokens[k])) {
      if (stack.empty() || closer_of(tokens[stack.back()].text) != tokens[k].text[0]) {
        throw Error(ErrorKind::UnbalancedDelimiters, "unexpected '" + tokens[k].text + "'",
                    tokens[k].span.begin);
      }
      match[stack.back()] = k;
      match[k] = stack.back();
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    const RawToken& t = tokens[stack.back()];
    throw Error(ErrorKind::UnbalancedDelimiters, "unclosed '" + t.text + "'", t.span.begin);
  }
  return match;
}

bool is_type_keyword(const RawToken& t) {
  return t.kind == TokenKind::Keyword &&
         (t.text == "class" || t.text == "interface" || t.text == "enum");
}

// First token of the declaration ending at name_at, after any annotations.
std::size_t signature_start(const std::vector<RawToken>& tokens,
                            const std::vector<std::size_t>& match, std::size_t name_at) {
  std::size_t start = name_at;
  while (start > 0) {
    const RawToken& prev = tokens[start - 1];
    if (is_text(prev, ";") || is_text(prev, "{") || is_text(prev, "}")) break;
    --start;
  }
  while (start < name_at && is_text(tokens[start], "@")) {
    ++start;  // '@'
    // Annotation name: identifier ( . identifier )*
    if (start < name_at && tokens[start].kind != TokenKind::Punct) ++start;
    while (start + 1 < name_at && is_text(tokens[start], ".") &&
           tokens[start + 1].kind != TokenKind::Punct) {
      start += 2;
    }
    if (start < name_at && is_text(tokens[start], "(")) start = match[start] + 1;
  }
  return start;
}

struct Scope {
  bool is_class = false;
  std::string name;
};

}  // namespace

std::vector<MethodText> extract_methods(std::string_view source, std::string_view origin) {
  const std::vector<RawToken> tokens = lexer::tokenize_lenient(source);
  const std::vector<std::size_t> match = match_all(tokens);

  std::vector<MethodText> out;
  std::vector<Scope> scopes;
  std::string pending_class;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const RawToken& t = tokens[k];
    if (is_type_keyword(t) && k + 1 < tokens.size() &&
        tokens[k + 1].kind == TokenKind::Identifier && !(k > 0 && is_text(tokens[k - 1], "."))) {
      pending_class = tokens[k + 1].text;
      continue;
    }
    if (is_text(t, "{")) {
      // Only top-level classes are scanned; nested class bodies are skipped.
      scopes.push_back({!pending_class.empty() && scopes.empty(), pending_class});
      pending_class.clear();
      continue;
    }
    if (is_text(t, "}")) {
      scopes.pop_back();
      continue;
    }
    if (is_text(t, ";")) pending_class.clear();
    if (scopes.empty() || !scopes.back().is_class) continue;
    if (t.kind != TokenKind::Identifier || k + 1 >= tokens.size() || !is_text(tokens[k + 1], "(")) {
      continue;
    }
    if (k > 0 && (is_text(tokens[k - 1], ".") || tokens[k - 1].text == "new" ||
                  is_text(tokens[k - 1], "=") || is_text(tokens[k - 1], "@"))) {
      continue;
    }
    std::size_t j = match[k + 1] + 1;
    if (j < tokens.size() && tokens[j].text == "throws") {
      while (j < tokens.size() && !is_text(tokens[j], "{") && !is_text(tokens[j], ";")) ++j;
    }
    if (j >= tokens.size()) break;
    if (is_text(tokens[j], "{")) {
      const std::size_t body_close = match[j];
      if (t.text != scopes.back().name) {
        const std::size_t start = signature_start(tokens, match, k);
        const std::size_t begin = tokens[start].span.begin;
        const std::size_t end = tokens[body_close].span.end;
        out.push_back({t.text, std::string(source.substr(begin, end - begin)), std::string(origin)});
      }
      k = body_close;
    } else if (is_text(tokens[j], ";")) {
      k = j;  // abstract or interface method
    }
  }
  return out;
}

// ---------------------------------------------------------------- generator

namespace {

constexpr std::array<std::string_view, 12> kMethodStems = {
    "compute", "process", "count",  "find",    "sum",    "update",
    "check",   "build",   "scan",   "merge",   "select", "apply"};

constexpr std::array<std::string_view, 14> kLocalNames = {
    "total", "count", "result", "value", "idx",  "tmp",  "acc",
    "left",  "right", "step",   "limit", "prev", "next", "best"};

constexpr std::array<std::string_view, 6> kHelpers = {"helper", "validate", "log",
                                                      "transform", "lookup", "emit"};

constexpr std::array<std::string_view, 4> kLoopVars = {"i", "j", "k", "m"};

class Generator {
 public:
  Generator(std::uint64_t seed, std::size_t index, const GenerationShape& shape)
      : rng_(derive_seed(seed, "synthetic", index)), shape_(shape) {}

  MethodText method(std::uint64_t seed, std::size_t index) {
    name_ = std::string(kMethodStems[rng_.below(kMethodStems.size())]) + std::to_string(index);
    const bool returns_int = !rng_.chance(0.2);
    scopes_.assign(1, {"n"});
    reserved_.assign(1, {});
    std::string params = "int n";
    if (rng_.chance(0.6)) {
      params += ", int x";
      scopes_.back().push_back("x");
    }
    if (rng_.chance(0.2)) {
      params += ", int[] data";
      has_array_ = true;
    }
    returns_value_ = returns_int;
    out_ = std::string("public ") + (rng_.chance(0.5) ? "static " : "") +
           (returns_int ? "int " : "void ") + name_ + "(" + params + ") {\n";
    block_body(1, 0);
    if (returns_int) line(1, "return " + expr() + ";");
    out_ += "}\n";
    return {name_, out_, "synthetic:" + std::to_string(seed) + ":" + std::to_string(index)};
  }

 private:
  void line(std::size_t indent, const std::string& text) {
    out_.append(indent * 4, ' ');
    out_ += text;
    out_ += '\n';
  }

  void block_body(std::size_t indent, std::size_t depth) {
    const std::size_t count = 1 + rng_.below(shape_.max_statements);
    for (std::size_t s = 0; s < count; ++s) statement(indent, depth);
    if (depth > 0 && returns_value_ && rng_.chance(shape_.early_return_probability)) {
      line(indent, "return " + expr() + ";");
    }
  }

  void braced(std::size_t indent, std::size_t depth, const std::string& head) {
    line(indent, head + " {");
    nested_block(indent, depth);
  }

  void nested_block(std::size_t indent, std::size_t depth) {
    scopes_.emplace_back();
    reserved_.emplace_back();
    block_body(indent + 1, depth + 1);
    scopes_.pop_back();
    reserved_.pop_back();
  }

  void statement(std::size_t indent, std::size_t depth) {
    if (depth < shape_.max_depth && rng_.chance(shape_.control_probability)) {
      control(indent, depth);
    } else {
      simple(indent);
    }
  }

  void control(std::size_t indent, std::size_t depth) {
    const double pick = rng_.uniform01();
    if (pick < 0.40) {
      braced(indent, depth, "if (" + condition() + ")");
      line(indent, "}");
    } else if (pick < 0.55) {
      braced(indent, depth, "if (" + condition() + ")");
      braced(indent, depth, "} else");
      line(indent, "}");
    } else if (pick < 0.62) {
      braced(indent, depth, "if (" + condition() + ")");
      braced(indent, depth, "} else if (" + condition() + ")");
      braced(indent, depth, "} else");
      line(indent, "}");
    } else if (pick < 0.75) {
      braced(indent, depth, "while (" + condition() + ")");
      line(indent, "}");
    } else if (pick < 0.93) {
      const std::string v(kLoopVars[std::min(depth, kLoopVars.size() - 1)]);
      const std::string bound = rng_.chance(0.7) ? "n" : atom();
      braced(indent, depth, "for (int " + v + " = 0; " + v + " < " + bound + "; " + v + "++)");
      line(indent, "}");
    } else {
      line(indent, "do {");
      nested_block(indent, depth);
      line(indent, "} while (" + condition() + ");");
    }
  }

  void simple(std::size_t indent) {
    const double pick = rng_.uniform01();
    const auto fresh = fresh_local();
    if (pick < 0.28 && fresh) {
      declare(indent, *fresh);
    } else if (pick < 0.48) {
      line(indent, visible() + " = " + expr() + ";");
    } else if (pick < 0.60) {
      static constexpr std::array<std::string_view, 4> ops = {"+=", "-=", "*=", "/="};
      line(indent, visible() + " " + std::string(ops[rng_.below(ops.size())]) + " " + atom() + ";");
    } else if (pick < 0.70) {
      line(indent, visible() + (rng_.chance(0.7) ? "++;" : "--;"));
    } else if (pick < 0.84) {
      line(indent, call() + ";");
    } else if (pick < 0.94) {
      line(indent, "System.out.println(\"" + std::string(rng_.chance(0.5) ? "value: " : "n=") +
                       "\" + " + atom() + ");");
    } else if (fresh) {
      const double kind = rng_.uniform01();
      if (kind < 0.4) {
        line(indent, "boolean " + *fresh + " = " + (rng_.chance(0.5) ? "true" : "false") + ";");
      } else if (kind < 0.7) {
        line(indent, "double " + *fresh + " = " + atom() + " / 2.0;");
      } else if (kind < 0.85) {
        line(indent, "char " + *fresh + " = 'a';");
      } else {
        line(indent, "String " + *fresh + " = null;");
      }
      // Not an int: reserved, but kept out of arithmetic.
      reserved_.back().push_back(*fresh);
    } else {
      line(indent, visible() + " = " + expr() + ";");
    }
  }

  void declare(std::size_t indent, const std::string& name) {
    line(indent, "int " + name + " = " + expr() + ";");
    scopes_.back().push_back(name);
  }

  std::optional<std::string> fresh_local() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::string candidate(kLocalNames[rng_.below(kLocalNames.size())]);
      if (!is_visible(candidate)) return candidate;
    }
    return std::nullopt;
  }

  bool is_visible(const std::string& name) const {
    for (const auto* stack : {&scopes_, &reserved_})
      for (const auto& s : *stack)
        if (std::find(s.begin(), s.end(), name) != s.end()) return true;
    return false;
  }

  std::string visible() {
    std::vector<std::string> all;
    for (const auto& s : scopes_) all.insert(all.end(), s.begin(), s.end());
    return all[rng_.below(all.size())];
  }

  std::string atom() {
    const double pick = rng_.uniform01();
    if (pick < 0.55) return visible();
    if (pick < 0.85) return std::to_string(rng_.below(10));
    if (pick < 0.93 && has_array_) return "data[" + visible() + "]";
    return std::to_string(10 + rng_.below(990));
  }

  std::string call() {
    if (rng_.chance(shape_.recursion_probability * 2.0)) return name_ + "(n - 1)";
    const double pick = rng_.uniform01();
    if (pick < 0.2) return "Math.max(" + atom() + ", " + atom() + ")";
    if (pick < 0.3) return "Math.abs(" + atom() + ")";
    std::string c = std::string(kHelpers[rng_.below(kHelpers.size())]) + "(" + atom();
    if (rng_.chance(0.4)) c += ", " + atom();
    return c + ")";
  }

  std::string expr() {
    if (rng_.chance(shape_.recursion_probability)) {
      return rng_.chance(0.5) ? name_ + "(n - 1)" : atom() + " + " + name_ + "(n - " +
                                                         std::to_string(1 + rng_.below(2)) + ")";
    }
    const double pick = rng_.uniform01();
    if (pick < 0.4) return atom();
    if (pick < 0.8) {
      static constexpr std::array<std::string_view, 5> ops = {"+", "-", "*", "/", "%"};
      return atom() + " " + std::string(ops[rng_.below(ops.size())]) + " " + atom();
    }
    return call();
  }

  std::string condition() {
    static constexpr std::array<std::string_view, 6> cmp = {"<", "<=", ">", ">=", "==", "!="};
    const double pick = rng_.uniform01();
    std::string c = atom() + " " + std::string(cmp[rng_.below(cmp.size())]) + " " + atom();
    if (pick < 0.15) c += " && " + atom() + " < n";
    else if (pick < 0.25) c = atom() + " % 2 == 0";
    else if (pick < 0.30) c = "!" + call();
    return c;
  }

  Rng rng_;
  GenerationShape shape_;
  std::string name_;
  std::string out_;
  std::vector<std::vector<std::string>> scopes_;
  std::vector<std::vector<std::string>> reserved_;
  bool has_array_ = false;
  bool returns_value_ = true;
};

}  // namespace

std::vector<MethodText> generate_synthetic(std::uint64_t seed, std::size_t count,
                                           const GenerationShape& shape) {
  if (shape.max_statements == 0) {
    throw Error(ErrorKind::InvalidShape, "max_statements must be at least 1");
  }
  for (double p : {shape.control_probability, shape.recursion_probability,
                   shape.early_return_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidShape, "probability outside [0, 1]");
  }
  std::vector<MethodText> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(Generator(seed, k, shape).method(seed, k));
  return out;
}

// ---------------------------------------------------------------- split

std::string_view to_string(Split split) noexcept {
  return split == Split::Train ? "train" : "test";
}

std::vector<std::size_t> CorpusManifest::indices_of(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < split.size(); ++k)
    if (split[k] == which) out.push_back(k);
  return out;
}

CorpusManifest split_corpus(std::vector<MethodText> entries, std::uint64_t seed,
                            double test_fraction) {
  if (entries.empty()) throw Error(ErrorKind::EmptyCorpus, "nothing to split");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "test_fraction must lie in (0, 1)");
  }
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(std::span<MethodText>(entries));
  const auto test_count =
      static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(entries.size())));
  CorpusManifest m;
  m.seed = seed;
  m.test_fraction = test_fraction;
  m.split.assign(entries.size(), Split::Train);
  for (std::size_t k = 0; k < test_count; ++k) m.split[k] = Split::Test;
  m.entries = std::move(entries);
  return m;
}

// ---------------------------------------------------------------- manifest file

namespace {

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string write_manifest(const CorpusManifest& manifest, const lexer::Vocabulary& vocab) {
  std::map<std::string, std::set<std::string, std::less<>>> names_by_origin;
  for (const auto& m : manifest.entries) names_by_origin[m.origin].insert(m.name);

  std::ostringstream out;
  out << "# gcae-manifest 1\n";
  out << "# seed=" << manifest.seed << " test_fraction=" << manifest.test_fraction
      << " vocab=" << hex64(vocab.checksum()) << '\n';
  for (std::size_t k = 0; k < manifest.entries.size(); ++k) {
    const MethodText& m = manifest.entries[k];
    auto known = names_by_origin[m.origin];
    known.erase(m.name);
    const auto prepared = lexer::prepare_method(m.body, m.name, vocab, known);
    const auto& ids =
        manifest.id_groups.size() == manifest.entries.size() ? manifest.id_groups[k]
                                                             : prepared.id_groups;
    std::string groups;
    for (std::size_t g = 0; g < ids.size(); ++g) {
      if (g) groups += ' ';
      groups += std::to_string(ids[g]);
    }
    out << to_string(manifest.split[k]) << '\t' << sanitize(m.origin) << '\t' << m.name << '\t'
        << lexer::join(prepared.lexemes) << '\t' << groups << '\n';
  }
  return out.str();
}

CorpusManifest read_manifest(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CorpusManifest m;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      unsigned long long seed = 0;
      unsigned long long vocab = 0;
      double fraction = 0.0;
      if (std::sscanf(line.c_str(), "# seed=%llu test_fraction=%lf vocab=%llx", &seed, &fraction,
                      &vocab) == 3) {
        m.seed = seed;
        m.test_fraction = fraction;
        m.vocab_checksum = vocab;
      } else if (line.rfind("# gcae-manifest", 0) == 0) {
        seen_header = true;
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() < 4) throw Error(ErrorKind::Format, "manifest record needs 4 fields", lineno);
    Split split;
    if (fields[0] == "train") split = Split::Train;
    else if (fields[0] == "test") split = Split::Test;
    else throw Error(ErrorKind::Format, "bad split tag '" + fields[0] + "'", lineno);
    m.entries.push_back({fields[2], fields[3], fields[1]});
    m.split.push_back(split);
    std::vector<std::size_t> groups;
    if (fields.size() > 4) {
      for (const auto& g : lexer::split_ws(fields[4])) {
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(g.data(), g.data() + g.size(), value);
        if (ec != std::errc() || ptr != g.data() + g.size()) {
          throw Error(ErrorKind::Format, "bad id group '" + g + "'", lineno);
        }
        groups.push_back(value);
      }
    }
    m.id_groups.push_back(std::move(groups));
  }
  if (!seen_header) throw Error(ErrorKind::Format, "missing '# gcae-manifest' header");
  return m;
}

// ---------------------------------------------------------------- ingestion

std::string validate_method(const MethodText& method, const lexer::Vocabulary& vocab,
                            const std::set<std::string, std::less<>>& known_methods) {
  try {
    const auto prepared = lexer::prepare_method(method.body, method.name, vocab, known_methods);
    flow::build_flow_edges(prepared.sequence);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

IngestResult ingest_directory(const std::filesystem::path& root, const lexer::Vocabulary& vocab,
                              std::string_view extension) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorKind::Io, "not a directory: " + root.string());
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file(ec) && it->path().extension() == extension) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());

  IngestResult result;
  for (const auto& path : files) {
    ++result.files_scanned;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      result.skipped.push_back({path.string(), "unreadable file"});
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
      result.skipped.push_back({path.string(), "read error"});
      continue;
    }
    std::vector<MethodText> methods;
    try {
      methods = extract_methods(buf.str(), path.string());
    } catch (const Error& e) {
      result.skipped.push_back({path.string(), e.what()});
      continue;
    }
    std::set<std::string, std::less<>> known;
    for (const auto& m : methods) known.insert(m.name);
    for (auto& m : methods) {
      auto others = known;
      others.erase(m.name);
      const std::string problem = validate_method(m, vocab, others);
      if (problem.empty()) {
        result.methods.push_back(std::move(m));
      } else {
        result.skipped.push_back({m.origin + "#" + m.name, problem});
      }
    }
  }
  return result;
}

}  // namespace gcae::corpus
