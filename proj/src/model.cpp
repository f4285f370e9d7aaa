#include "gcae/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "gcae/error.hpp"
#include "gcae/random.hpp"

namespace gcae::nn {

Matrix gc_forward(const Matrix& x, const Matrix& ahat, const Matrix& weights) {
  if (ahat.rows() != ahat.cols() || ahat.cols() != x.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "propagation matrix " + std::to_string(ahat.rows()) + "x" +
                    std::to_string(ahat.cols()) + " for " + std::to_string(x.rows()) +
                    " nodes");
  }
  return matmul(ahat, matmul(x, weights));
}

std::string_view to_string(FinalActivation act) noexcept {
  return act == FinalActivation::Relu ? "relu" : "identity";
}

FinalActivation parse_final_activation(std::string_view tag) {
  if (tag == "relu") return FinalActivation::Relu;
  if (tag == "identity") return FinalActivation::Identity;
  throw Error(ErrorKind::InvalidConfig, "final_activation must be relu|identity, got '" +
                                            std::string(tag) + "'");
}

// ---------------------------------------------------------------- parameters

std::vector<std::pair<std::size_t, std::size_t>> GcaeParameters::layer_shapes(const Dims& d) {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  shapes.emplace_back(d.vocab, d.hidden);
  for (std::size_t k = 0; k < d.depth; ++k) shapes.emplace_back(d.hidden, d.hidden);
  shapes.emplace_back(d.hidden, d.latent);
  shapes.emplace_back(d.latent, d.hidden);
  for (std::size_t k = 0; k < d.depth; ++k) shapes.emplace_back(d.hidden, d.hidden);
  shapes.emplace_back(d.hidden, d.vocab);
  return shapes;
}

std::string GcaeParameters::layer_name(const Dims& d, std::size_t index) {
  if (index == 0) return "encoder_init";
  if (index <= d.depth) return "encoder_hidden_" + std::to_string(index - 1);
  if (index == d.depth + 1) return "encoder_final";
  if (index == d.depth + 2) return "decoder_init";
  if (index <= 2 * d.depth + 2) return "decoder_hidden_" + std::to_string(index - d.depth - 3);
  return "decoder_final";
}

GcaeParameters GcaeParameters::zeros(const Dims& dims) {
  if (dims.vocab == 0 || dims.hidden == 0 || dims.latent == 0) {
    throw Error(ErrorKind::InvalidShape, "vocab, hidden and latent sizes must be positive");
  }
  GcaeParameters p;
  p.dims = dims;
  for (auto [rows, cols] : layer_shapes(dims)) p.layers.emplace_back(rows, cols);
  return p;
}

double GcaeParameters::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& w : layers) s += w.squared_norm();
  return s;
}

GcaeParameters init_parameters(const Dims& dims, std::uint64_t seed) {
  GcaeParameters p = GcaeParameters::zeros(dims);
  Rng rng(seed);
  for (auto& w : p.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (double& v : w.values()) v = rng.uniform(-bound, bound);
  }
  return p;
}

// ---------------------------------------------------------------- forward

ForwardTrace gcae_forward(const Matrix& x, const Matrix& ahat, const GcaeParameters& params,
                          FinalActivation final_activation) {
  if (x.cols() != params.dims.vocab) {
    throw Error(ErrorKind::DimensionMismatch,
                "input has " + std::to_string(x.cols()) + " features, model expects " +
                    std::to_string(params.dims.vocab));
  }
  ForwardTrace t;
  t.final_activation = final_activation;
  const std::size_t count = params.layers.size();
  const std::size_t latent_layer = params.encoder_final_index();
  Matrix h = x;
  for (std::size_t k = 0; k < count; ++k) {
    Matrix pre = gc_forward(h, ahat, params.layers[k]);
    t.inputs.push_back(std::move(h));
    if (k == latent_layer) {
      h = sigmoid(pre);
      t.latent = h;
    } else if (k + 1 == count && final_activation == FinalActivation::Identity) {
      h = pre;
    } else {
      h = relu(pre);
    }
    t.pre.push_back(std::move(pre));
  }
  t.logits = std::move(h);
  return t;
}

// ---------------------------------------------------------------- loss

namespace {

void check_targets(const Matrix& logits, std::span<const std::size_t> targets) {
  if (targets.size() != logits.rows()) {
    throw Error(ErrorKind::ShapeMismatch, std::to_string(targets.size()) + " targets for " +
                                              std::to_string(logits.rows()) + " rows");
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] >= logits.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "target out of range", k);
    }
  }
}

}  // namespace

double softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> targets) {
  check_targets(logits, targets);
  if (logits.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < logits.rows(); ++k) {
    auto row = logits.row(k);
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : row) z += std::exp(v - mx);
    total += std::log(z) - (row[targets[k]] - mx);
  }
  return total / static_cast<double>(logits.rows());
}

Matrix softmax_cross_entropy_grad(const Matrix& logits, std::span<const std::size_t> targets) {
  check_targets(logits, targets);
  Matrix g(logits.rows(), logits.cols());
  const double scale = 1.0 / static_cast<double>(logits.rows());
  for (std::size_t k = 0; k < logits.rows(); ++k) {
    auto row = logits.row(k);
    auto out = g.row(k);
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      out[j] = std::exp(row[j] - mx);
      z += out[j];
    }
    for (double& v : out) v = v / z * scale;
    out[targets[k]] -= scale;
  }
  return g;
}

// ---------------------------------------------------------------- backward

std::vector<Matrix> gcae_backward(const ForwardTrace& trace, const Matrix& ahat,
                                  const GcaeParameters& params,
                                  std::span<const std::size_t> targets, double l2_lambda) {
  const std::size_t count = params.layers.size();
  if (trace.pre.size() != count || trace.inputs.size() != count) {
    throw Error(ErrorKind::ShapeMismatch, "trace does not belong to these parameters");
  }
  if (ahat.rows() != trace.logits.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "propagation matrix does not match trace");
  }
  std::vector<Matrix> grads(count);

  // Gradient with respect to the final pre-activation.
  Matrix delta = softmax_cross_entropy_grad(trace.logits, targets);
  if (trace.final_activation == FinalActivation::Relu) {
    const auto pre = trace.pre.back().values();
    auto d = delta.values();
    for (std::size_t k = 0; k < d.size(); ++k)
      if (pre[k] <= 0.0) d[k] = 0.0;
  }

  const std::size_t latent_layer = params.encoder_final_index();
  for (std::size_t layer = count; layer-- > 0;) {
    // pre = Ahat H W  =>  dW = H^T (Ahat^T delta),  dH = (Ahat^T delta) W^T
    Matrix propagated = matmul_tn(ahat, delta);
    grads[layer] = matmul_tn(trace.inputs[layer], propagated);
    add_scaled(grads[layer], params.layers[layer], 2.0 * l2_lambda);
    if (layer == 0) break;

    delta = matmul_nt(propagated, params.layers[layer]);
    const auto below = trace.pre[layer - 1].values();
    auto d = delta.values();
    if (layer - 1 == latent_layer) {
      const auto z = trace.latent.values();
      for (std::size_t k = 0; k < d.size(); ++k) d[k] *= z[k] * (1.0 - z[k]);
    } else {
      for (std::size_t k = 0; k < d.size(); ++k)
        if (below[k] <= 0.0) d[k] = 0.0;
    }
  }
  return grads;
}

// ---------------------------------------------------------------- model file

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

[[noreturn]] void bad_model(const std::string& what) {
  throw Error(ErrorKind::Format, "model file: " + what);
}

}  // namespace

std::string ModelFile::serialize() const {
  const Dims& d = params.dims;
  std::string out;
  out += "gcae-model " + std::to_string(kFormatVersion) + "\n";
  out += "vocab_size " + std::to_string(d.vocab) + "\n";
  out += "hidden " + std::to_string(d.hidden) + "\n";
  out += "latent " + std::to_string(d.latent) + "\n";
  out += "depth " + std::to_string(d.depth) + "\n";
  out += "vocab_checksum " + hex64(vocab_checksum) + "\n";
  out += "seed " + std::to_string(seed) + "\n";
  out += "regime " + std::string(flow::to_string(regime)) + "\n";
  out += "final_activation " + std::string(to_string(final_activation)) + "\n";
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const Matrix& w = params.layers[k];
    out += "layer " + GcaeParameters::layer_name(d, k) + " " + std::to_string(w.rows()) + " " +
           std::to_string(w.cols()) + "\n";
    for (std::size_t r = 0; r < w.rows(); ++r) {
      auto row = w.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ' ';
        append_double(out, row[c]);
      }
      out += '\n';
    }
  }
  out += "end\n";
  return out;
}

ModelFile ModelFile::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto field = [&](const char* key) {
    std::string name, value;
    if (!(in >> name >> value) || name != key) bad_model(std::string("expected '") + key + "'");
    return value;
  };
  auto number = [&](const char* key) -> std::uint64_t {
    const std::string v = field(key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_model(std::string("bad ") + key);
    return out;
  };

  ModelFile m;
  if (number("gcae-model") != static_cast<std::uint64_t>(kFormatVersion)) {
    bad_model("unsupported format version");
  }
  Dims d;
  d.vocab = number("vocab_size");
  d.hidden = number("hidden");
  d.latent = number("latent");
  d.depth = number("depth");
  {
    const std::string v = field("vocab_checksum");
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), m.vocab_checksum, 16);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_model("bad vocab_checksum");
  }
  m.seed = number("seed");
  m.regime = flow::parse_regime(field("regime"));
  m.final_activation = parse_final_activation(field("final_activation"));
  m.params = GcaeParameters::zeros(d);
  for (std::size_t k = 0; k < m.params.layers.size(); ++k) {
    Matrix& w = m.params.layers[k];
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != "layer" ||
        name != GcaeParameters::layer_name(d, k) || rows != w.rows() || cols != w.cols()) {
      bad_model("bad header for layer " + std::to_string(k));
    }
    for (double& v : w.values()) {
      std::string tok;
      if (!(in >> tok)) bad_model("truncated weights");
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        bad_model("bad weight '" + tok + "'");
      }
    }
  }
  std::string end;
  if (!(in >> end) || end != "end") bad_model("missing end marker");
  return m;
}

}  // namespace gcae::nn
