#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gcae/lexer.hpp"

namespace gcae::corpus {

/// One method: declaration through the matching closing brace.
struct MethodText {
  std::string name;
  std::string body;
  std::string origin;  // file path, or "synthetic:<seed>:<index>"

  bool operator==(const MethodText&) const = default;
};

/// Every concrete method declared directly in a top-level class body, in
/// source order. Abstract methods, constructors, and anything inside nested
/// or anonymous classes are left out. Leading annotations are not part of
/// the returned body.
///
/// Throws UnbalancedDelimiters with the character offset of the first
/// unmatched bracket.
std::vector<MethodText> extract_methods(std::string_view source, std::string_view origin = {});

struct GenerationShape {
  std::size_t max_depth = 2;            // nesting of control blocks
  std::size_t max_statements = 4;       // per block, at least 1
  double control_probability = 0.25;    // a statement opens a control block
  double recursion_probability = 0.08;  // an expression is a self-call
  double early_return_probability = 0.15;
};

/// Deterministic generator of Java-style methods that lex into the standard
/// vocabulary. Throws InvalidShape when max_statements is 0 or a probability
/// lies outside [0, 1].
std::vector<MethodText> generate_synthetic(std::uint64_t seed, std::size_t count,
                                           const GenerationShape& shape = {});

enum class Split { Train, Test };
std::string_view to_string(Split split) noexcept;

struct CorpusManifest {
  std::vector<MethodText> entries;
  std::vector<Split> split;  // parallel to entries
  std::uint64_t seed = 0;
  double test_fraction = 0.1;
  std::uint64_t vocab_checksum = 0;  // set by read_manifest
  // Variable groups per entry as read from a manifest; empty when the
  // entries carry source text and groups are recomputed on write.
  std::vector<std::vector<std::size_t>> id_groups;

  std::vector<std::size_t> indices_of(Split which) const;
};

inline constexpr double kDefaultTestFraction = 0.1;

/// Seeded shuffle, then floor(test_fraction * N) entries tagged test and the
/// rest train. Entries keep their shuffled order. Throws EmptyCorpus when
/// entries is empty and InvalidConfig when test_fraction is outside (0, 1).
CorpusManifest split_corpus(std::vector<MethodText> entries, std::uint64_t seed,
                            double test_fraction = kDefaultTestFraction);

/// Line-oriented manifest text:
///
///   # gcae-manifest 1
///   # seed=<seed> test_fraction=<f> vocab=<checksum>
///   <split> TAB <origin> TAB <name> TAB <anonymized lexemes> TAB <id groups>
///
/// Throws whatever the lexical pipeline throws for a method that does not
/// prepare cleanly.
std::string write_manifest(const CorpusManifest& manifest, const lexer::Vocabulary& vocab);

/// Reads a manifest back. Each entry's body is its anonymized token line,
/// which the lexical pipeline maps onto itself.
CorpusManifest read_manifest(std::string_view text);

struct Skip {
  std::string origin;
  std::string reason;
};

struct IngestResult {
  std::vector<MethodText> methods;
  std::vector<Skip> skipped;
  std::size_t files_scanned = 0;
};

/// Checks that a method survives tokenize -> anonymize -> numericalize and
/// the control-flow rules; returns the failure message or an empty string.
std::string validate_method(const MethodText& method, const lexer::Vocabulary& vocab,
                            const std::set<std::string, std::less<>>& known_methods = {});

/// Recursively walks root (sorted paths), extracts methods from every file
/// with the given extension and keeps those that validate. Unreadable files
/// and rejected methods are recorded in skipped, never thrown.
/// Throws Io when root is not a directory.
IngestResult ingest_directory(const std::filesystem::path& root, const lexer::Vocabulary& vocab,
                              std::string_view extension = ".java");

}  // namespace gcae::corpus
