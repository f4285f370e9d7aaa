#include <cmath>

#include "doctest.h"
#include "gcae/corpus.hpp"
#include "gcae/random.hpp"
#include "gcae/training.hpp"
#include "helpers.hpp"
#include "overfit.hpp"

namespace tr = gcae::train;
namespace cp = gcae::corpus;
namespace lx = gcae::lexer;
namespace nn = gcae::nn;
using gcae::ErrorKind;
using nn::Matrix;

namespace {

const lx::Vocabulary& vocab() { return lx::Vocabulary::standard(); }

tr::Dataset synthetic_dataset(std::uint64_t seed, std::size_t count, double fraction = 0.2) {
  return tr::prepare_dataset(cp::split_corpus(cp::generate_synthetic(seed, count), seed, fraction),
                             vocab());
}

tr::TrainConfig small_config() {
  tr::TrainConfig cfg;
  cfg.hidden = 8;
  cfg.latent = 3;
  cfg.epochs = 2;
  cfg.seed = 3;
  cfg.regime = gcae::flow::Regime::Naive;
  return cfg;
}

}  // namespace

TEST_CASE("cross-entropy on uniform logits is ln V") {
  for (std::size_t v : {2u, 7u, 126u, 143u}) {
    CHECK(std::abs(tr::cross_entropy(Matrix(2, v, 3.0), std::vector<std::size_t>{0, v - 1}) -
                   std::log(static_cast<double>(v))) < 1e-12);
  }
  CHECK(std::abs(tr::cross_entropy(Matrix(1, 143), std::vector<std::size_t>{7}) - 4.96284) < 1e-5);
  gcae::Rng rng(1);
  Matrix r(5, 9);
  for (double& v : r.values()) v = rng.uniform(0, 5);
  CHECK(tr::cross_entropy(r, std::vector<std::size_t>{0, 1, 2, 3, 4}) > 0.0);
}

TEST_CASE("token accuracy") {
  const Matrix perfect{{0, 5, 0}, {9, 0, 0}};
  CHECK(tr::token_accuracy(perfect, std::vector<std::size_t>{1, 0}) == 1.0);
  CHECK(tr::token_accuracy(Matrix(3, 4), std::vector<std::size_t>{1, 2, 3}) == 0.0);
  CHECK(tr::token_accuracy(perfect, std::vector<std::size_t>{1, 2}) == 0.5);
  CHECK(tr::argmax_rows(Matrix{{1, 3, 3}}) == std::vector<std::size_t>{1});
  CHECK_GCAE_ERROR(tr::token_accuracy(perfect, std::vector<std::size_t>{1}), ErrorKind::ShapeMismatch);
}

TEST_CASE("first Adam step has the closed-form size") {
  nn::GcaeParameters p = nn::GcaeParameters::zeros({3, 2, 1, 0});
  std::vector<Matrix> grads;
  for (const auto& w : p.layers) grads.emplace_back(w.rows(), w.cols(), 0.5);
  tr::TrainConfig cfg;
  auto state = tr::AdamState::zeros_like(p);
  tr::adam_step(p, grads, state, cfg);
  const double expected = 1e-3 * 0.5 / (0.5 + 1e-8);
  for (const auto& w : p.layers)
    for (double v : w.values()) CHECK(std::abs(v + expected) < 1e-12);
  CHECK(state.t == 1);
}

TEST_CASE("zero gradients never move the parameters") {
  auto p = nn::init_parameters({5, 3, 2, 0}, 1);
  const auto before = p;
  std::vector<Matrix> grads;
  for (const auto& w : p.layers) grads.emplace_back(w.rows(), w.cols());
  auto state = tr::AdamState::zeros_like(p);
  for (int k = 0; k < 10; ++k) tr::adam_step(p, grads, state, tr::TrainConfig{});
  CHECK(p == before);
}

TEST_CASE("Adam replay determinism and shape checks") {
  gcae::Rng rng(4);
  std::vector<std::vector<Matrix>> seq;
  const auto start = nn::init_parameters({5, 3, 2, 0}, 1);
  for (int k = 0; k < 5; ++k) {
    std::vector<Matrix> g;
    for (const auto& w : start.layers) {
      Matrix m(w.rows(), w.cols());
      for (double& v : m.values()) v = rng.uniform(-1, 1);
      g.push_back(m);
    }
    seq.push_back(g);
  }
  auto run = [&] {
    auto p = start;
    auto s = tr::AdamState::zeros_like(p);
    for (const auto& g : seq) tr::adam_step(p, g, s, tr::TrainConfig{});
    return p;
  };
  CHECK(run() == run());
  auto p = start;
  auto s = tr::AdamState::zeros_like(p);
  CHECK_GCAE_ERROR(tr::adam_step(p, {}, s, tr::TrainConfig{}), ErrorKind::ShapeMismatch);
}

TEST_CASE("configuration validation") {
  tr::TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.epochs = 0;
  CHECK_GCAE_ERROR(cfg.validate(), ErrorKind::InvalidConfig);
  cfg = {};
  cfg.learning_rate = 0.0;
  CHECK_GCAE_ERROR(cfg.validate(), ErrorKind::InvalidConfig);
  cfg = {};
  cfg.l2_lambda = -1.0;
  CHECK_GCAE_ERROR(cfg.validate(), ErrorKind::InvalidConfig);
  cfg = {};
  cfg.beta2 = 1.0;
  CHECK_GCAE_ERROR(cfg.validate(), ErrorKind::InvalidConfig);
}

TEST_CASE("fit: one method, one epoch is one step") {
  auto data = synthetic_dataset(1, 5);
  data.train.resize(1);
  auto cfg = small_config();
  cfg.epochs = 1;
  const auto r = tr::fit(data, vocab().size(), cfg);
  CHECK(r.steps == 1);
  REQUIRE(r.epochs.size() == 1);
  CHECK(r.epochs[0].losses.size() == 1);
  CHECK(r.epochs[0].std_loss == 0.0);
}

TEST_CASE("fit is bitwise deterministic") {
  const auto data = synthetic_dataset(2, 30);
  const auto cfg = small_config();
  const auto a = tr::fit(data, vocab().size(), cfg);
  const auto b = tr::fit(data, vocab().size(), cfg);
  CHECK(a.params == b.params);
  CHECK(a.epochs.back().losses == b.epochs.back().losses);
  auto other = cfg;
  other.seed = 4;
  CHECK_FALSE(tr::fit(data, vocab().size(), other).params == a.params);
}

TEST_CASE("regimes share their initial weights") {
  const auto data = synthetic_dataset(2, 10);
  auto cfg = small_config();
  cfg.epochs = 1;
  cfg.learning_rate = 1e-300;  // steps too small to move any weight
  cfg.l2_lambda = 0.0;
  cfg.regime = gcae::flow::Regime::Sequence;
  const auto a = tr::fit(data, vocab().size(), cfg);
  cfg.regime = gcae::flow::Regime::Naive;
  const auto b = tr::fit(data, vocab().size(), cfg);
  CHECK(a.params == b.params);
}

TEST_CASE("training loss falls over five epochs on a small naive corpus") {
  const auto data = synthetic_dataset(5, 25, 0.2);
  REQUIRE(data.train.size() == 20);
  auto cfg = small_config();
  cfg.hidden = 32;
  cfg.latent = 4;
  cfg.epochs = 5;
  const auto r = tr::fit(data, vocab().size(), cfg);
  CHECK(r.epochs.back().mean_loss < r.epochs.front().mean_loss);
}

TEST_CASE("curve sampling and empty inputs") {
  const auto data = synthetic_dataset(2, 30);
  auto cfg = small_config();
  cfg.curve_interval = 7;
  const auto r = tr::fit(data, vocab().size(), cfg);
  CHECK(r.curve.size() == r.steps / 7 + cfg.epochs);
  for (const auto& p : r.curve) {
    const bool epoch_end = p.step == p.epoch * data.train.size();
    CHECK((p.step % 7 == 0 || epoch_end));
  }
  CHECK_GCAE_ERROR(tr::fit(tr::Dataset{}, vocab().size(), cfg), ErrorKind::EmptyCorpus);
  CHECK_GCAE_ERROR(tr::evaluate(r.params, std::span<const tr::Sample>{}, cfg), ErrorKind::EmptyCorpus);
}

TEST_CASE("evaluate does not mutate and a single-method test set has zero spread") {
  const auto data = synthetic_dataset(2, 30);
  const auto cfg = small_config();
  const auto r = tr::fit(data, vocab().size(), cfg);
  const auto before = r.params;
  const auto m = tr::evaluate(r.params, std::span<const tr::Sample>(data.test.data(), 1), cfg);
  CHECK(r.params == before);
  CHECK(m.std_loss == 0.0);
  CHECK(m.std_accuracy == 0.0);
  CHECK(m.split == "test");
  for (double a : m.accuracies) CHECK((a >= 0.0 && a <= 1.0));
}

TEST_CASE("a memorized method reconstructs exactly") {
  const auto data = overfit::dataset(vocab());
  const auto cfg = overfit::config();
  const auto r = tr::fit(data, vocab().size(), cfg);
  CHECK(tr::evaluate(r.params, data.train, cfg).mean_accuracy == 1.0);
  const auto& lexemes = data.train[0].lexemes;
  const auto out = tr::reconstruct(r.params, lexemes, vocab(), cfg.regime, cfg.final_activation);
  CHECK(out == lexemes);
}

TEST_CASE("non-finite losses abort training") {
  auto data = synthetic_dataset(1, 5);
  tr::TrainConfig cfg;
  cfg.epochs = 3;
  cfg.regime = gcae::flow::Regime::Naive;
  cfg.final_activation = nn::FinalActivation::Identity;
  cfg.learning_rate = 1e154;
  CHECK_GCAE_ERROR(tr::fit(data, vocab().size(), cfg), ErrorKind::NonFiniteLoss);
}

TEST_CASE("fit through a manifest matches fit through a dataset") {
  const auto manifest = cp::split_corpus(cp::generate_synthetic(3, 12), 3, 0.25);
  const auto cfg = small_config();
  CHECK(tr::fit(manifest, vocab(), cfg).params ==
        tr::fit(tr::prepare_dataset(manifest, vocab()), vocab().size(), cfg).params);
  const auto r = tr::fit(manifest, vocab(), cfg);
  CHECK(tr::evaluate(r.params, manifest, vocab(), cfg).losses.size() == 3);
}
