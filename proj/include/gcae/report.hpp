#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gcae/config.hpp"
#include "gcae/training.hpp"

namespace gcae::report {

inline constexpr int kReportFormatVersion = 1;

struct RegimeOutcome {
  flow::Regime regime = flow::Regime::Sequence;
  std::string error;  // non-empty when this regime failed
  train::FitResult fit;
  train::MetricsRecord test;
  std::vector<std::vector<std::string>> reconstructions;  // one per example

  bool ok() const noexcept { return error.empty(); }
};

struct ComparisonReport {
  std::vector<RegimeOutcome> outcomes;
  std::vector<train::Sample> examples;  // first reconstruct_k test methods
  std::uint64_t seed = 0;
  std::uint64_t config_checksum = 0;
  std::uint64_t vocab_checksum = 0;
};

/// Trains one model per configured regime on the same data, from the same
/// seed, and evaluates each on the same test methods in the same order. A
/// failing regime is recorded and the others still run.
ComparisonReport compare(const train::Dataset& data, const lexer::Vocabulary& vocab,
                         const RunConfig& cfg);

std::string provenance(std::uint64_t seed, std::uint64_t config_checksum,
                       std::uint64_t vocab_checksum);

/// regime, mean loss, sigma, mean accuracy, sigma (tab separated, full precision).
std::string metrics_table(const ComparisonReport& report);
/// Same numbers rounded for reading: loss to 5 places, accuracy in percent.
std::string metrics_table_pretty(const ComparisonReport& report);
/// Original token line followed by one line per regime, for each example.
std::string reconstruction_dump(const ComparisonReport& report);
/// lexeme, index, count, frequency over every method in the dataset.
std::string vocabulary_frequencies(const train::Dataset& data, const lexer::Vocabulary& vocab,
                                   const std::string& header);

/// Header `epoch,step,split,regime,loss,accuracy`; training-curve samples
/// followed by the test summary row when a test record is given.
std::string metrics_log(flow::Regime regime, const train::FitResult& fit,
                        const train::MetricsRecord* test);
/// Per-epoch training summary.
std::string epoch_curve(const train::FitResult& fit);

lexer::Vocabulary load_vocabulary(const RunConfig& cfg);
/// Reads cfg.manifest; Io error naming the path when missing, ChecksumMismatch
/// when the manifest was written against another vocabulary.
corpus::CorpusManifest load_manifest(const RunConfig& cfg, const lexer::Vocabulary& vocab);

/// Anonymized lexemes of a method (or statement) given as source text. The
/// declared name, if any, becomes `method`.
std::vector<std::string> lexemes_of(std::string_view text, const lexer::Vocabulary& vocab);

// Commands. Each writes into cfg.out and returns a short human summary.
std::string cmd_synth(const RunConfig& cfg);
std::string cmd_ingest(const RunConfig& cfg, std::ostream& log);
std::string cmd_inspect_cfg(std::string_view method_text, flow::Regime regime,
                            const lexer::Vocabulary& vocab);
std::string cmd_train(const RunConfig& cfg, std::ostream& log);
ComparisonReport cmd_compare(const RunConfig& cfg, std::ostream& log);
std::string cmd_reconstruct(const std::string& model_path, std::string_view method_text,
                            const lexer::Vocabulary& vocab);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace gcae::report
