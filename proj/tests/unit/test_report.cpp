#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gcae/config.hpp"
#include "gcae/report.hpp"
#include "helpers.hpp"
#include "straight_corpus.hpp"

namespace rp = gcae::report;
namespace cp = gcae::corpus;
namespace lx = gcae::lexer;
namespace fs = std::filesystem;
using gcae::ErrorKind;
using gcae::RunConfig;
using gcae::flow::Regime;

namespace {

const lx::Vocabulary& vocab() { return lx::Vocabulary::standard(); }

RunConfig small_run(const std::string& out) {
  RunConfig cfg;
  cfg.out = out;
  cfg.count = 24;
  cfg.train.hidden = 8;
  cfg.train.latent = 3;
  cfg.train.epochs = 1;
  cfg.reconstruct_k = 2;
  return cfg;
}

std::string path_in(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

TEST_CASE("config parsing, comments and checksums") {
  const auto cfg = gcae::parse_config(
      "# comment\n"
      "seed = 7\n"
      "hidden = 16   # trailing comment\n"
      "regimes = naive, linear\n"
      "out = /tmp/somewhere\n");
  CHECK(cfg.train.seed == 7);
  CHECK(cfg.train.hidden == 16);
  CHECK(cfg.regimes == std::vector<Regime>{Regime::Naive, Regime::Linear});
  CHECK(cfg.out == "/tmp/somewhere");

  auto moved = cfg;
  moved.out = "/elsewhere";
  moved.manifest = "other.txt";
  CHECK(moved.checksum() == cfg.checksum());
  moved.train.learning_rate = 0.5;
  CHECK(moved.checksum() != cfg.checksum());

  CHECK_GCAE_ERROR(gcae::parse_config("colour = blue\n"), ErrorKind::InvalidConfig);
  CHECK_GCAE_ERROR(gcae::parse_config("seed\n"), ErrorKind::InvalidConfig);
  CHECK_GCAE_ERROR(gcae::parse_config("hidden = many\n"), ErrorKind::InvalidConfig);
  CHECK_GCAE_ERROR(gcae::parse_regime_list("sequence,tree"), ErrorKind::InvalidConfig);
}

TEST_CASE("synth writes a reproducible corpus") {
  const auto a = testutil::scratch_dir("synth_a");
  const auto b = testutil::scratch_dir("synth_b");
  rp::cmd_synth(small_run(a));
  rp::cmd_synth(small_run(b));
  CHECK(rp::read_file(path_in(a, "manifest.txt")) == rp::read_file(path_in(b, "manifest.txt")));
  CHECK(rp::read_file(path_in(a, "vocab.txt")) == vocab().serialize());

  auto cfg = small_run(a);
  cfg.manifest = path_in(a, "manifest.txt");
  const auto manifest = rp::load_manifest(cfg, vocab());
  CHECK(manifest.entries.size() == 24);

  auto empty = small_run(testutil::scratch_dir("synth_empty"));
  empty.count = 0;
  CHECK_GCAE_ERROR(rp::cmd_synth(empty), ErrorKind::EmptyCorpus);
}

TEST_CASE("ingest reads a source tree") {
  std::ostringstream log;
  auto cfg = small_run(testutil::scratch_dir("ingest_two"));
  cfg.source = testutil::fixture("ingest_two");
  rp::cmd_ingest(cfg, log);
  cfg.manifest = path_in(cfg.out, "manifest.txt");
  CHECK(rp::load_manifest(cfg, vocab()).entries.size() == 2);

  const auto empty_src = testutil::scratch_dir("ingest_empty_src");
  auto none = small_run(testutil::scratch_dir("ingest_empty"));
  none.source = empty_src;
  CHECK_GCAE_ERROR(rp::cmd_ingest(none, log), ErrorKind::NoMethodsFound);
}

TEST_CASE("inspect-cfg reports rules and edges") {
  const auto branch = rp::cmd_inspect_cfg("void f(int n) { if (n) { g(); } h(); }",
                                          Regime::Sequence, vocab());
  CHECK(branch.find("# rules: if=1 else=0 while=0") != std::string::npos);
  CHECK(branch.find("back_edges=0") != std::string::npos);

  const auto loop = rp::cmd_inspect_cfg("void f(int n) { while (n) { n--; } }", Regime::Sequence,
                                        vocab());
  CHECK(loop.find("while=1") != std::string::npos);
  CHECK(loop.find("back_edges=1") != std::string::npos);

  const auto flat = rp::cmd_inspect_cfg("void f(int n) { while (n) { n--; } }", Regime::Linear,
                                        vocab());
  CHECK(flat.find("back_edges=0") != std::string::npos);

  const auto edges = gcae::flow::parse_edges(loop);
  CHECK(edges.edges.size() > 0);
}

TEST_CASE("train writes model, log and curve deterministically") {
  const auto dir = testutil::scratch_dir("train");
  auto cfg = small_run(dir);
  rp::cmd_synth(cfg);
  cfg.manifest = path_in(dir, "manifest.txt");
  std::ostringstream log;
  rp::cmd_train(cfg, log);
  const auto model = rp::read_file(path_in(dir, "model.txt"));
  CHECK(rp::read_file(path_in(dir, "metrics.csv")).rfind("epoch,step,split,regime,loss,accuracy", 0) == 0);
  CHECK(rp::read_file(path_in(dir, "curve.csv")).rfind("epoch,", 0) == 0);
  rp::cmd_train(cfg, log);
  CHECK(rp::read_file(path_in(dir, "model.txt")) == model);

  auto missing = cfg;
  missing.manifest = path_in(dir, "nope.txt");
  CHECK_GCAE_ERROR(rp::cmd_train(missing, log), ErrorKind::Io);
}

TEST_CASE("compare writes every artifact and reconstruct checks the vocabulary") {
  const auto dir = testutil::scratch_dir("compare");
  auto cfg = small_run(dir);
  rp::cmd_synth(cfg);
  cfg.manifest = path_in(dir, "manifest.txt");
  std::ostringstream log;
  const auto report = rp::cmd_compare(cfg, log);
  REQUIRE(report.outcomes.size() == 3);
  for (const auto& o : report.outcomes) CHECK(o.ok());
  for (const char* name : {"model_sequence.txt", "model_linear.txt", "model_naive.txt",
                           "metrics.tsv", "metrics_table.txt", "reconstructions.txt",
                           "vocab_freq.tsv", "metrics.csv"}) {
    CHECK_MESSAGE(fs::exists(path_in(dir, name)), name);
  }
  const auto tsv = rp::read_file(path_in(dir, "metrics.tsv"));
  CHECK(tsv.rfind("# format=1 seed=1 ", 0) == 0);
  CHECK(report.examples.size() == 2);

  const std::string method = "int f(int n) { return n + 1; }";
  const auto out = rp::cmd_reconstruct(path_in(dir, "model_naive.txt"), method, vocab());
  CHECK(lx::split_ws(out).size() == rp::lexemes_of(method, vocab()).size());

  auto lexemes = vocab().lexemes();
  lexemes.push_back("extra");
  const lx::Vocabulary other(lexemes);
  CHECK_GCAE_ERROR(rp::cmd_reconstruct(path_in(dir, "model_naive.txt"), method, other),
                   ErrorKind::ChecksumMismatch);
}

TEST_CASE("straight-line corpus gives identical sequence and linear rows") {
  const auto dir = testutil::scratch_dir("compare_straight");
  auto cfg = small_run(dir);
  cfg.regimes = {Regime::Sequence, Regime::Linear};
  const auto manifest = cp::split_corpus(straight::methods(20), 1, 0.2);
  cfg.manifest = path_in(dir, "manifest.txt");
  fs::create_directories(dir);
  rp::write_file(cfg.manifest, cp::write_manifest(manifest, vocab()));
  std::ostringstream log;
  const auto report = rp::cmd_compare(cfg, log);
  REQUIRE(report.outcomes.size() == 2);
  CHECK(report.outcomes[0].test.losses == report.outcomes[1].test.losses);
  CHECK(report.outcomes[0].test.accuracies == report.outcomes[1].test.accuracies);
  CHECK(report.outcomes[0].fit.params == report.outcomes[1].fit.params);
}
