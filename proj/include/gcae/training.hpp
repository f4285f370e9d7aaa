#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcae/corpus.hpp"
#include "gcae/flowgraph.hpp"
#include "gcae/lexer.hpp"
#include "gcae/model.hpp"

namespace gcae::train {

struct TrainConfig {
  std::size_t hidden = 32;
  std::size_t latent = 4;
  std::size_t depth = 0;
  double learning_rate = 1e-3;
  double l2_lambda = 1e-5;  // penalty l2_lambda * sum ||W||^2
  std::size_t epochs = 5;
  std::uint64_t seed = 1;
  flow::Regime regime = flow::Regime::Sequence;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  nn::FinalActivation final_activation = nn::FinalActivation::Relu;
  std::size_t curve_interval = 100;  // steps between training-curve samples

  /// Throws InvalidConfig on non-positive rates, zero sizes or epochs == 0.
  void validate() const;
  nn::Dims dims(std::size_t vocab_size) const { return {vocab_size, hidden, latent, depth}; }
};

/// One method ready for the network.
struct Sample {
  std::string origin;
  std::string name;
  std::vector<std::string> lexemes;
  std::vector<std::size_t> indices;
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Runs every manifest entry through the lexical pipeline. Split order is
/// preserved.
Dataset prepare_dataset(const corpus::CorpusManifest& manifest, const lexer::Vocabulary& vocab);

/// Mean over positions of -log softmax(R_k)[target_k], in nats.
double cross_entropy(const nn::Matrix& logits, std::span<const std::size_t> targets);

/// Fraction of rows whose argmax (lowest index on ties) equals the target.
double token_accuracy(const nn::Matrix& logits, std::span<const std::size_t> targets);

std::vector<std::size_t> argmax_rows(const nn::Matrix& logits);

struct AdamState {
  std::vector<nn::Matrix> m;
  std::vector<nn::Matrix> v;
  std::uint64_t t = 0;

  static AdamState zeros_like(const nn::GcaeParameters& params);
};

/// t += 1; m, v moment updates; theta -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(nn::GcaeParameters& params, const std::vector<nn::Matrix>& grads,
               AdamState& state, const TrainConfig& cfg);

/// Per-method metrics plus population mean / standard deviation.
struct MetricsRecord {
  std::size_t epoch = 0;
  std::string split;  // "train" or "test"
  std::vector<double> losses;
  std::vector<double> accuracies;
  double mean_loss = 0.0;
  double std_loss = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double wall_seconds = 0.0;

  void finalize();
};

struct CurvePoint {
  std::size_t epoch = 0;
  std::size_t step = 0;  // global optimizer step count
  double loss = 0.0;     // running mean since the start of the epoch
  double accuracy = 0.0;
};

struct FitResult {
  nn::GcaeParameters params;
  std::vector<MetricsRecord> epochs;
  std::vector<CurvePoint> curve;
  std::uint64_t steps = 0;
};

/// Propagation matrix of a sample under a regime.
nn::Matrix propagation_for(std::span<const std::string> lexemes, flow::Regime regime);

/// Batch size one: every epoch visits the training samples in a permutation
/// derived from (seed, epoch) and takes one Adam step per method. Initial
/// weights come from (seed) alone, so regimes started from the same seed
/// share their initialization. Throws NonFiniteLoss on a NaN/inf loss.
FitResult fit(const Dataset& data, std::size_t vocab_size, const TrainConfig& cfg);
FitResult fit(const corpus::CorpusManifest& manifest, const lexer::Vocabulary& vocab,
              const TrainConfig& cfg);

/// Forward-only pass over samples. Throws EmptyCorpus for an empty set.
MetricsRecord evaluate(const nn::GcaeParameters& params, std::span<const Sample> samples,
                       const TrainConfig& cfg);
MetricsRecord evaluate(const nn::GcaeParameters& params, const corpus::CorpusManifest& manifest,
                       const lexer::Vocabulary& vocab, const TrainConfig& cfg);

/// Argmax-decoded reconstruction of a lexeme sequence.
std::vector<std::string> reconstruct(const nn::GcaeParameters& params,
                                     std::span<const std::string> lexemes,
                                     const lexer::Vocabulary& vocab, flow::Regime regime,
                                     nn::FinalActivation final_activation);

}  // namespace gcae::train
