#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcae/flowgraph.hpp"
#include "gcae/matrix.hpp"

namespace gcae::nn {

/// Ahat * (X * W). No bias and no activation; callers apply those.
Matrix gc_forward(const Matrix& x, const Matrix& ahat, const Matrix& weights);

struct Dims {
  std::size_t vocab = 0;   // V
  std::size_t hidden = 32;
  std::size_t latent = 4;
  std::size_t depth = 0;   // extra hidden layers on each side

  std::size_t layer_count() const noexcept { return 2 * depth + 4; }
  bool operator==(const Dims&) const = default;
};

enum class FinalActivation { Relu, Identity };
std::string_view to_string(FinalActivation act) noexcept;
FinalActivation parse_final_activation(std::string_view tag);

/// Weight matrices of the graph-convolutional autoencoder, stored in the
/// fixed layer order
///
///   encoder_init (V x h), encoder_hidden[depth] (h x h), encoder_final (h x l),
///   decoder_init (l x h), decoder_hidden[depth] (h x h), decoder_final (h x V).
///
/// The same order is used for initialization draws, gradients, optimizer
/// state and the model file.
struct GcaeParameters {
  Dims dims;
  std::vector<Matrix> layers;

  std::size_t encoder_final_index() const noexcept { return dims.depth + 1; }
  std::size_t decoder_init_index() const noexcept { return dims.depth + 2; }

  const Matrix& encoder_init() const { return layers.front(); }
  const Matrix& encoder_final() const { return layers[encoder_final_index()]; }
  const Matrix& decoder_init() const { return layers[decoder_init_index()]; }
  const Matrix& decoder_final() const { return layers.back(); }

  /// Zero-filled parameters of the right shapes.
  static GcaeParameters zeros(const Dims& dims);
  static std::vector<std::pair<std::size_t, std::size_t>> layer_shapes(const Dims& dims);
  static std::string layer_name(const Dims& dims, std::size_t index);

  double squared_norm() const noexcept;
  bool operator==(const GcaeParameters&) const = default;
};

/// Uniform(-s, s) with s = 1 / sqrt(out_features), layer by layer in the
/// documented order, entries row-major. Throws InvalidShape for zero dims.
GcaeParameters init_parameters(const Dims& dims, std::uint64_t seed);

struct ForwardTrace {
  std::vector<Matrix> inputs;       // input to layer k (inputs[0] == X)
  std::vector<Matrix> pre;          // Ahat (inputs[k] W_k)
  Matrix latent;                    // Z, n x l, in (0, 1)
  Matrix logits;                    // R, n x V
  FinalActivation final_activation = FinalActivation::Relu;
};

ForwardTrace gcae_forward(const Matrix& x, const Matrix& ahat, const GcaeParameters& params,
                          FinalActivation final_activation = FinalActivation::Relu);

/// Mean over rows of -log softmax(R_k)[target_k], max-shifted.
double softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> targets);
/// d(mean cross-entropy)/dR.
Matrix softmax_cross_entropy_grad(const Matrix& logits, std::span<const std::size_t> targets);

/// Exact gradient of mean cross-entropy + l2_lambda * sum ||W||^2 with respect
/// to every weight matrix (the penalty contributes 2 * l2_lambda * W).
/// relu'(0) is taken as 0.
std::vector<Matrix> gcae_backward(const ForwardTrace& trace, const Matrix& ahat,
                                  const GcaeParameters& params,
                                  std::span<const std::size_t> targets, double l2_lambda);

/// Everything a trained model carries besides its weights.
struct ModelFile {
  static constexpr int kFormatVersion = 1;

  GcaeParameters params;
  std::uint64_t vocab_checksum = 0;
  std::uint64_t seed = 0;
  flow::Regime regime = flow::Regime::Naive;
  FinalActivation final_activation = FinalActivation::Relu;

  /// Decimal text; doubles in shortest round-trip form.
  std::string serialize() const;
  static ModelFile parse(std::string_view text);
};

}  // namespace gcae::nn
