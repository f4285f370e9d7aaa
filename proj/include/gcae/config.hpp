#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gcae/corpus.hpp"
#include "gcae/flowgraph.hpp"
#include "gcae/training.hpp"

namespace gcae {

/// Everything a command needs. Loaded from a flat `key = value` file; command
/// line flags are applied afterwards and win.
///
/// Keys:
///   seed, regime, regimes (comma list), hidden, latent, depth, learning_rate,
///   l2_lambda, epochs, beta1, beta2, epsilon, final_activation, curve_interval,
///   count, test_fraction, max_depth, max_statements, control_probability,
///   recursion_probability, early_return_probability, source, extension,
///   manifest, vocab, out, reconstruct_k
///
/// `#` starts a comment. Unknown keys are an InvalidConfig error.
struct RunConfig {
  train::TrainConfig train;
  std::vector<flow::Regime> regimes = {flow::Regime::Sequence, flow::Regime::Linear,
                                       flow::Regime::Naive};

  std::size_t count = 500;
  double test_fraction = corpus::kDefaultTestFraction;
  corpus::GenerationShape shape;
  std::string source;
  std::string extension = ".java";

  std::string manifest;
  std::string vocab;  // empty: the built-in vocabulary
  std::string out = ".";
  std::size_t reconstruct_k = 5;

  void set(std::string_view key, std::string_view value);

  /// Sorted `key=value` lines of every setting that affects results. Paths
  /// are left out, so moving the output directory does not change it.
  std::string canonical() const;
  std::uint64_t checksum() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::vector<flow::Regime> parse_regime_list(std::string_view text);

}  // namespace gcae
