#include "gcae/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "gcae/error.hpp"
#include "gcae/random.hpp"

namespace gcae::train {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
  if (hidden == 0 || latent == 0) fail("hidden and latent must be positive");
  if (epochs == 0) fail("epochs must be at least 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(l2_lambda >= 0.0)) fail("l2_lambda must be non-negative");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (curve_interval == 0) fail("curve_interval must be positive");
}

Dataset prepare_dataset(const corpus::CorpusManifest& manifest, const lexer::Vocabulary& vocab) {
  Dataset data;
  for (std::size_t k = 0; k < manifest.entries.size(); ++k) {
    const auto& m = manifest.entries[k];
    auto prepared = lexer::prepare_method(m.body, m.name, vocab);
    Sample s{m.origin, m.name, std::move(prepared.lexemes), std::move(prepared.sequence.indices)};
    (manifest.split[k] == corpus::Split::Train ? data.train : data.test).push_back(std::move(s));
  }
  return data;
}

double cross_entropy(const nn::Matrix& logits, std::span<const std::size_t> targets) {
  return nn::softmax_cross_entropy(logits, targets);
}

std::vector<std::size_t> argmax_rows(const nn::Matrix& logits) {
  std::vector<std::size_t> out(logits.rows(), 0);
  for (std::size_t k = 0; k < logits.rows(); ++k) {
    auto row = logits.row(k);
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] > row[out[k]]) out[k] = j;
  }
  return out;
}

double token_accuracy(const nn::Matrix& logits, std::span<const std::size_t> targets) {
  if (targets.size() != logits.rows()) {
    throw Error(ErrorKind::ShapeMismatch, std::to_string(targets.size()) + " targets for " +
                                              std::to_string(logits.rows()) + " rows");
  }
  if (targets.empty()) return 0.0;
  const auto predicted = argmax_rows(logits);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) hits += predicted[k] == targets[k];
  return static_cast<double>(hits) / static_cast<double>(targets.size());
}

AdamState AdamState::zeros_like(const nn::GcaeParameters& params) {
  AdamState s;
  for (const auto& w : params.layers) {
    s.m.emplace_back(w.rows(), w.cols());
    s.v.emplace_back(w.rows(), w.cols());
  }
  return s;
}

void adam_step(nn::GcaeParameters& params, const std::vector<nn::Matrix>& grads,
               AdamState& state, const TrainConfig& cfg) {
  if (grads.size() != params.layers.size() || state.m.size() != params.layers.size() ||
      state.v.size() != params.layers.size()) {
    throw Error(ErrorKind::ShapeMismatch, "gradient / optimizer state layer count");
  }
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!grads[k].same_shape(params.layers[k]) || !state.m[k].same_shape(params.layers[k]) ||
        !state.v[k].same_shape(params.layers[k])) {
      throw Error(ErrorKind::ShapeMismatch, "layer " + std::to_string(k));
    }
  }
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < grads.size(); ++k) {
    auto w = params.layers[k].values();
    auto g = grads[k].values();
    auto m = state.m[k].values();
    auto v = state.v[k].values();
    for (std::size_t e = 0; e < w.size(); ++e) {
      m[e] = cfg.beta1 * m[e] + (1.0 - cfg.beta1) * g[e];
      v[e] = cfg.beta2 * v[e] + (1.0 - cfg.beta2) * g[e] * g[e];
      const double m_hat = m[e] / correction1;
      const double v_hat = v[e] / correction2;
      w[e] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

void MetricsRecord::finalize() {
  auto stats = [](const std::vector<double>& xs, double& mean, double& sd) {
    mean = sd = 0.0;
    if (xs.empty()) return;
    const double n = static_cast<double>(xs.size());
    mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / n);
  };
  stats(losses, mean_loss, std_loss);
  stats(accuracies, mean_accuracy, std_accuracy);
}

nn::Matrix propagation_for(std::span<const std::string> lexemes, flow::Regime regime) {
  return flow::normalize(flow::build_graph(lexemes, regime)).values;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

FitResult fit(const Dataset& data, std::size_t vocab_size, const TrainConfig& cfg) {
  cfg.validate();
  if (data.train.empty()) throw Error(ErrorKind::EmptyCorpus, "no training methods");

  FitResult result;
  result.params = nn::init_parameters(cfg.dims(vocab_size), derive_seed(cfg.seed, "init"));
  AdamState adam = AdamState::zeros_like(result.params);

  std::vector<std::size_t> order(data.train.size());
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = Clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.seed, "shuffle", epoch));
    rng.shuffle(std::span<std::size_t>(order));

    MetricsRecord record;
    record.epoch = epoch;
    record.split = "train";
    double loss_sum = 0.0;
    double acc_sum = 0.0;
    for (std::size_t visited = 0; visited < order.size(); ++visited) {
      const Sample& s = data.train[order[visited]];
      const nn::Matrix x = lexer::one_hot(s.indices, vocab_size);
      const nn::Matrix ahat = propagation_for(s.lexemes, cfg.regime);
      const auto trace = nn::gcae_forward(x, ahat, result.params, cfg.final_activation);
      const double loss = cross_entropy(trace.logits, s.indices);
      if (!std::isfinite(loss)) {
        throw Error(ErrorKind::NonFiniteLoss,
                    "epoch " + std::to_string(epoch) + ", method " + s.origin + " (" + s.name + ")");
      }
      const double acc = token_accuracy(trace.logits, s.indices);
      const auto grads =
          nn::gcae_backward(trace, ahat, result.params, s.indices, cfg.l2_lambda);
      adam_step(result.params, grads, adam, cfg);
      ++result.steps;

      record.losses.push_back(loss);
      record.accuracies.push_back(acc);
      loss_sum += loss;
      acc_sum += acc;
      if (result.steps % cfg.curve_interval == 0) {
        const double seen = static_cast<double>(visited + 1);
        result.curve.push_back({epoch, result.steps, loss_sum / seen, acc_sum / seen});
      }
    }
    record.finalize();
    record.wall_seconds = seconds_since(start);
    result.curve.push_back({epoch, result.steps, record.mean_loss, record.mean_accuracy});
    result.epochs.push_back(std::move(record));
  }
  return result;
}

FitResult fit(const corpus::CorpusManifest& manifest, const lexer::Vocabulary& vocab,
              const TrainConfig& cfg) {
  return fit(prepare_dataset(manifest, vocab), vocab.size(), cfg);
}

MetricsRecord evaluate(const nn::GcaeParameters& params, std::span<const Sample> samples,
                       const TrainConfig& cfg) {
  if (samples.empty()) throw Error(ErrorKind::EmptyCorpus, "nothing to evaluate");
  const auto start = Clock::now();
  MetricsRecord record;
  record.epoch = cfg.epochs;
  record.split = "test";
  for (const Sample& s : samples) {
    const nn::Matrix x = lexer::one_hot(s.indices, params.dims.vocab);
    const nn::Matrix ahat = propagation_for(s.lexemes, cfg.regime);
    const auto trace = nn::gcae_forward(x, ahat, params, cfg.final_activation);
    record.losses.push_back(cross_entropy(trace.logits, s.indices));
    record.accuracies.push_back(token_accuracy(trace.logits, s.indices));
  }
  record.finalize();
  record.wall_seconds = seconds_since(start);
  return record;
}

MetricsRecord evaluate(const nn::GcaeParameters& params, const corpus::CorpusManifest& manifest,
                       const lexer::Vocabulary& vocab, const TrainConfig& cfg) {
  const Dataset data = prepare_dataset(manifest, vocab);
  return evaluate(params, data.test, cfg);
}

std::vector<std::string> reconstruct(const nn::GcaeParameters& params,
                                     std::span<const std::string> lexemes,
                                     const lexer::Vocabulary& vocab, flow::Regime regime,
                                     nn::FinalActivation final_activation) {
  const auto seq = lexer::numericalize(std::vector<std::string>(lexemes.begin(), lexemes.end()), vocab);
  const nn::Matrix x = lexer::one_hot(seq, params.dims.vocab);
  const auto trace = nn::gcae_forward(x, propagation_for(lexemes, regime), params, final_activation);
  std::vector<std::string> out;
  for (std::size_t idx : argmax_rows(trace.logits)) out.push_back(vocab.lexeme(idx));
  return out;
}

}  // namespace gcae::train
