#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gcae/config.hpp"
#include "gcae/error.hpp"
#include "gcae/report.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string regime;
  std::string out;
  std::optional<std::size_t> count;
  std::optional<double> test_fraction;
  std::optional<std::size_t> epochs;
  std::string source;
  std::string extension;
  std::string manifest;
  std::string regimes;
  std::string vocab;
  std::vector<std::string> set;

  gcae::RunConfig resolve() const {
    gcae::RunConfig cfg = config.empty() ? gcae::RunConfig{} : gcae::load_config(config);
    for (const auto& kv : set) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw gcae::Error(gcae::ErrorKind::InvalidConfig, "--set expects key=value: " + kv);
      }
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.train.seed = *seed;
    if (!regime.empty()) cfg.train.regime = gcae::flow::parse_regime(regime);
    if (!out.empty()) cfg.out = out;
    if (count) cfg.count = *count;
    if (test_fraction) cfg.test_fraction = *test_fraction;
    if (epochs) cfg.train.epochs = *epochs;
    if (!source.empty()) cfg.source = source;
    if (!extension.empty()) cfg.extension = extension;
    if (!manifest.empty()) cfg.manifest = manifest;
    if (!regimes.empty()) cfg.regimes = gcae::parse_regime_list(regimes);
    if (!vocab.empty()) cfg.vocab = vocab;
    return cfg;
  }
};

std::string method_text(const std::string& file, const std::string& text) {
  if (!text.empty()) return text;
  if (!file.empty()) return gcae::report::read_file(file);
  throw gcae::Error(gcae::ErrorKind::InvalidConfig, "give --file or --text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-convolutional autoencoders over anonymized method token sequences"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--regime", o.regime, "sequence | linear | naive");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--vocab", o.vocab, "vocabulary file (default: built-in)");
  app.add_option("--set", o.set, "extra key=value configuration override");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus and split it");
  synth->add_option("--count", o.count, "number of methods");
  synth->add_option("--test-fraction", o.test_fraction, "fraction held out for testing");

  auto* ingest = app.add_subcommand("ingest", "extract methods from a source tree and split them");
  ingest->add_option("--source", o.source, "root directory")->required();
  ingest->add_option("--ext", o.extension, "file extension (default .java)");
  ingest->add_option("--test-fraction", o.test_fraction, "fraction held out for testing");

  std::string file;
  std::string text;
  auto* inspect = app.add_subcommand("inspect-cfg", "print the flow edges of one method");
  inspect->add_option("--file", file, "file holding the method");
  inspect->add_option("--text", text, "method source text");

  auto* trn = app.add_subcommand("train", "train one model");
  trn->add_option("--manifest", o.manifest, "corpus manifest")->required();
  trn->add_option("--epochs", o.epochs, "training epochs");

  auto* cmp = app.add_subcommand("compare", "train and evaluate every regime on one corpus");
  cmp->add_option("--manifest", o.manifest, "corpus manifest")->required();
  cmp->add_option("--regimes", o.regimes, "comma-separated regimes");
  cmp->add_option("--epochs", o.epochs, "training epochs");

  std::string model;
  auto* rec = app.add_subcommand("reconstruct", "decode a method through a trained model");
  rec->add_option("--model", model, "model file")->required()->check(CLI::ExistingFile);
  rec->add_option("--file", file, "file holding the method");
  rec->add_option("--text", text, "method source text");

  CLI11_PARSE(app, argc, argv);

  try {
    const gcae::RunConfig cfg = o.resolve();
    if (synth->parsed()) {
      std::cout << gcae::report::cmd_synth(cfg) << '\n';
    } else if (ingest->parsed()) {
      std::cout << gcae::report::cmd_ingest(cfg, std::cerr) << '\n';
    } else if (inspect->parsed()) {
      std::cout << gcae::report::cmd_inspect_cfg(method_text(file, text), cfg.train.regime,
                                                  gcae::report::load_vocabulary(cfg));
    } else if (trn->parsed()) {
      std::cout << gcae::report::cmd_train(cfg, std::cerr) << '\n';
    } else if (cmp->parsed()) {
      const auto report = gcae::report::cmd_compare(cfg, std::cerr);
      std::cout << gcae::report::metrics_table_pretty(report);
      for (const auto& outcome : report.outcomes) {
        if (!outcome.ok()) return 3;
      }
    } else if (rec->parsed()) {
      std::cout << gcae::report::cmd_reconstruct(model, method_text(file, text),
                                                  gcae::report::load_vocabulary(cfg))
                << '\n';
    }
  } catch (const gcae::Error& e) {
    std::cerr << "error [" << gcae::to_string(e.kind()) << "]: " << e.what();
    if (e.position()) std::cerr << " at " << *e.position();
    std::cerr << '\n';
    return 2;
  }
  return 0;
}
