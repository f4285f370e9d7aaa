#include "gcae/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gcae/error.hpp"
#include "gcae/random.hpp"

namespace gcae::report {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir + ": " + ec.message());
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

// ---------------------------------------------------------------- comparison

ComparisonReport compare(const train::Dataset& data, const lexer::Vocabulary& vocab,
                         const RunConfig& cfg) {
  ComparisonReport report;
  report.seed = cfg.train.seed;
  report.config_checksum = cfg.checksum();
  report.vocab_checksum = vocab.checksum();
  const std::size_t k = std::min(cfg.reconstruct_k, data.test.size());
  report.examples.assign(data.test.begin(), data.test.begin() + static_cast<std::ptrdiff_t>(k));

  for (flow::Regime regime : cfg.regimes) {
    RegimeOutcome outcome;
    outcome.regime = regime;
    train::TrainConfig tc = cfg.train;
    tc.regime = regime;
    try {
      outcome.fit = train::fit(data, vocab.size(), tc);
      outcome.test = train::evaluate(outcome.fit.params, data.test, tc);
      for (const auto& ex : report.examples) {
        outcome.reconstructions.push_back(
            train::reconstruct(outcome.fit.params, ex.lexemes, vocab, regime, tc.final_activation));
      }
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

std::string provenance(std::uint64_t seed, std::uint64_t config_checksum,
                       std::uint64_t vocab_checksum) {
  return "# format=" + std::to_string(kReportFormatVersion) + " seed=" + std::to_string(seed) +
         " config=" + hex64(config_checksum) + " vocab=" + hex64(vocab_checksum) + "\n";
}

namespace {

std::string header_of(const ComparisonReport& r) {
  return provenance(r.seed, r.config_checksum, r.vocab_checksum);
}

}  // namespace

std::string metrics_table(const ComparisonReport& report) {
  std::string out = header_of(report);
  out += "regime\tmean_loss\tstd_loss\tmean_accuracy\tstd_accuracy\n";
  for (const auto& o : report.outcomes) {
    out += std::string(flow::to_string(o.regime)) + '\t';
    if (!o.ok()) {
      out += "failed\t" + o.error + "\n";
      continue;
    }
    out += num(o.test.mean_loss) + '\t' + num(o.test.std_loss) + '\t' +
           num(o.test.mean_accuracy) + '\t' + num(o.test.std_accuracy) + '\n';
  }
  return out;
}

std::string metrics_table_pretty(const ComparisonReport& report) {
  std::string out = header_of(report);
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %10s %8s %14s %8s\n", "", "Mean Loss", "sigma",
                "Mean Accuracy", "sigma");
  out += line;
  for (const auto& o : report.outcomes) {
    if (!o.ok()) {
      std::snprintf(line, sizeof line, "%-10s failed\n",
                    std::string(flow::to_string(o.regime)).c_str());
      out += line;
      continue;
    }
    std::snprintf(line, sizeof line, "%-10s %10s %8s %13s%% %7s%%\n",
                  std::string(flow::to_string(o.regime)).c_str(),
                  fixed(o.test.mean_loss, 5).c_str(), fixed(o.test.std_loss, 3).c_str(),
                  fixed(100.0 * o.test.mean_accuracy, 1).c_str(),
                  fixed(100.0 * o.test.std_accuracy, 1).c_str());
    out += line;
  }
  return out;
}

std::string reconstruction_dump(const ComparisonReport& report) {
  std::string out = header_of(report);
  for (std::size_t e = 0; e < report.examples.size(); ++e) {
    const auto& ex = report.examples[e];
    out += "## " + ex.origin + " " + ex.name + "\n";
    out += "original\t" + lexer::join(ex.lexemes) + "\n";
    for (const auto& o : report.outcomes) {
      out += std::string(flow::to_string(o.regime)) + '\t';
      out += o.ok() ? lexer::join(o.reconstructions[e]) : "(failed)";
      out += '\n';
    }
  }
  return out;
}

std::string vocabulary_frequencies(const train::Dataset& data, const lexer::Vocabulary& vocab,
                                   const std::string& header) {
  std::vector<std::size_t> counts(vocab.size(), 0);
  std::size_t total = 0;
  for (const auto* split : {&data.train, &data.test}) {
    for (const auto& s : *split) {
      for (std::size_t idx : s.indices) ++counts[idx];
      total += s.indices.size();
    }
  }
  std::vector<std::size_t> order(vocab.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  std::string out = header;
  out += "lexeme\tindex\tcount\tfrequency\n";
  for (std::size_t idx : order) {
    const double freq = total ? static_cast<double>(counts[idx]) / static_cast<double>(total) : 0.0;
    out += vocab.lexeme(idx) + '\t' + std::to_string(idx) + '\t' + std::to_string(counts[idx]) +
           '\t' + num(freq) + '\n';
  }
  return out;
}

std::string metrics_log(flow::Regime regime, const train::FitResult& fit,
                        const train::MetricsRecord* test) {
  const std::string tag(flow::to_string(regime));
  std::string out = "epoch,step,split,regime,loss,accuracy\n";
  for (const auto& p : fit.curve) {
    out += std::to_string(p.epoch) + ',' + std::to_string(p.step) + ",train," + tag + ',' +
           num(p.loss) + ',' + num(p.accuracy) + '\n';
  }
  if (test) {
    out += std::to_string(test->epoch) + ',' + std::to_string(fit.steps) + ",test," + tag + ',' +
           num(test->mean_loss) + ',' + num(test->mean_accuracy) + '\n';
  }
  return out;
}

std::string epoch_curve(const train::FitResult& fit) {
  std::string out = "epoch,steps,mean_loss,std_loss,mean_accuracy,std_accuracy\n";
  std::size_t steps = 0;
  for (const auto& e : fit.epochs) {
    steps += e.losses.size();
    out += std::to_string(e.epoch) + ',' + std::to_string(steps) + ',' + num(e.mean_loss) + ',' +
           num(e.std_loss) + ',' + num(e.mean_accuracy) + ',' + num(e.std_accuracy) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------- loading

lexer::Vocabulary load_vocabulary(const RunConfig& cfg) {
  if (cfg.vocab.empty()) return lexer::Vocabulary::standard();
  return lexer::Vocabulary::parse(read_file(cfg.vocab));
}

corpus::CorpusManifest load_manifest(const RunConfig& cfg, const lexer::Vocabulary& vocab) {
  if (cfg.manifest.empty()) throw Error(ErrorKind::InvalidConfig, "no manifest given");
  if (!fs::exists(cfg.manifest)) throw Error(ErrorKind::Io, "manifest not found: " + cfg.manifest);
  auto manifest = corpus::read_manifest(read_file(cfg.manifest));
  if (manifest.vocab_checksum != 0 && manifest.vocab_checksum != vocab.checksum()) {
    throw Error(ErrorKind::ChecksumMismatch,
                "manifest vocabulary " + hex64(manifest.vocab_checksum) + " vs " +
                    hex64(vocab.checksum()));
  }
  return manifest;
}

std::vector<std::string> lexemes_of(std::string_view text, const lexer::Vocabulary& vocab) {
  const auto tokens = lexer::tokenize(text);
  const std::string name = lexer::declared_name(tokens).value_or("");
  return lexer::prepare_method(text, name, vocab).lexemes;
}

// ---------------------------------------------------------------- commands

namespace {

std::string write_corpus(const RunConfig& cfg, const corpus::CorpusManifest& manifest,
                         const lexer::Vocabulary& vocab) {
  ensure_dir(cfg.out);
  const std::string path = join_path(cfg.out, "manifest.txt");
  write_file(path, corpus::write_manifest(manifest, vocab));
  write_file(join_path(cfg.out, "vocab.txt"), vocab.serialize());
  return path;
}

std::string split_summary(const corpus::CorpusManifest& m, const std::string& path) {
  return "wrote " + path + ": " + std::to_string(m.indices_of(corpus::Split::Train).size()) +
         " train / " + std::to_string(m.indices_of(corpus::Split::Test).size()) + " test";
}

}  // namespace

std::string cmd_synth(const RunConfig& cfg) {
  const auto vocab = load_vocabulary(cfg);
  auto methods = corpus::generate_synthetic(cfg.train.seed, cfg.count, cfg.shape);
  const auto manifest = corpus::split_corpus(std::move(methods), cfg.train.seed, cfg.test_fraction);
  return split_summary(manifest, write_corpus(cfg, manifest, vocab));
}

std::string cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  const auto vocab = load_vocabulary(cfg);
  auto result = corpus::ingest_directory(cfg.source, vocab, cfg.extension);
  for (const auto& s : result.skipped) log << "skip " << s.origin << ": " << s.reason << '\n';
  if (result.methods.empty()) {
    throw Error(ErrorKind::NoMethodsFound, "no usable methods under " + cfg.source);
  }
  const std::size_t kept = result.methods.size();
  const auto manifest =
      corpus::split_corpus(std::move(result.methods), cfg.train.seed, cfg.test_fraction);
  return split_summary(manifest, write_corpus(cfg, manifest, vocab)) + " (" +
         std::to_string(kept) + " methods from " + std::to_string(result.files_scanned) +
         " files, " + std::to_string(result.skipped.size()) + " skipped)";
}

std::string cmd_inspect_cfg(std::string_view method_text, flow::Regime regime,
                            const lexer::Vocabulary& vocab) {
  const auto lexemes = lexemes_of(method_text, vocab);
  const auto graph = flow::build_graph(lexemes, regime);
  const auto& f = graph.fired;
  std::size_t back = 0;
  for (auto [i, j] : graph.edges) back += j <= i;
  std::string out = flow::export_edges(graph);
  out += "# tokens: " + lexer::join(lexemes) + "\n";
  out += "# rules: if=" + std::to_string(f.if_rule) + " else=" + std::to_string(f.else_rule) +
         " while=" + std::to_string(f.while_rule) + " for=" + std::to_string(f.for_rule) +
         " do=" + std::to_string(f.do_rule) + " return=" + std::to_string(f.return_rule) +
         " method=" + std::to_string(f.recursion_rule) + "\n";
  out += "# edges=" + std::to_string(graph.edges.size()) + " back_edges=" + std::to_string(back) +
         "\n";
  return out;
}

std::string cmd_train(const RunConfig& cfg, std::ostream& log) {
  const auto vocab = load_vocabulary(cfg);
  const auto manifest = load_manifest(cfg, vocab);
  const auto data = train::prepare_dataset(manifest, vocab);
  const auto fit = train::fit(data, vocab.size(), cfg.train);
  for (const auto& e : fit.epochs) {
    log << "epoch " << e.epoch << " loss " << e.mean_loss << " accuracy " << e.mean_accuracy
        << " (" << e.wall_seconds << " s)\n";
  }
  std::optional<train::MetricsRecord> test;
  if (!data.test.empty()) test = train::evaluate(fit.params, data.test, cfg.train);

  nn::ModelFile model{fit.params, vocab.checksum(), cfg.train.seed, cfg.train.regime,
                      cfg.train.final_activation};
  ensure_dir(cfg.out);
  write_file(join_path(cfg.out, "model.txt"), model.serialize());
  write_file(join_path(cfg.out, "metrics.csv"),
             metrics_log(cfg.train.regime, fit, test ? &*test : nullptr));
  write_file(join_path(cfg.out, "curve.csv"), epoch_curve(fit));

  std::string summary = "trained " + std::string(flow::to_string(cfg.train.regime)) + " on " +
                        std::to_string(data.train.size()) + " methods";
  if (test) {
    summary += "; test loss " + fixed(test->mean_loss, 5) + ", accuracy " +
               fixed(100.0 * test->mean_accuracy, 1) + "%";
  }
  return summary;
}

ComparisonReport cmd_compare(const RunConfig& cfg, std::ostream& log) {
  const auto vocab = load_vocabulary(cfg);
  const auto manifest = load_manifest(cfg, vocab);
  const auto data = train::prepare_dataset(manifest, vocab);
  if (data.test.empty()) throw Error(ErrorKind::EmptyCorpus, "manifest has no test methods");
  ComparisonReport report = compare(data, vocab, cfg);

  ensure_dir(cfg.out);
  std::string log_csv;
  for (const auto& o : report.outcomes) {
    const std::string tag(flow::to_string(o.regime));
    if (!o.ok()) {
      log << tag << " failed: " << o.error << '\n';
      continue;
    }
    log << tag << ": test accuracy " << fixed(100.0 * o.test.mean_accuracy, 1) << "% in "
        << fixed(o.test.wall_seconds, 2) << " s (eval)\n";
    train::TrainConfig tc = cfg.train;
    nn::ModelFile model{o.fit.params, vocab.checksum(), cfg.train.seed, o.regime,
                        tc.final_activation};
    write_file(join_path(cfg.out, "model_" + tag + ".txt"), model.serialize());
    std::string part = metrics_log(o.regime, o.fit, &o.test);
    if (!log_csv.empty()) part.erase(0, part.find('\n') + 1);
    log_csv += part;
  }
  const std::string header = header_of(report);
  write_file(join_path(cfg.out, "metrics.tsv"), metrics_table(report));
  write_file(join_path(cfg.out, "metrics_table.txt"), metrics_table_pretty(report));
  write_file(join_path(cfg.out, "reconstructions.txt"), reconstruction_dump(report));
  write_file(join_path(cfg.out, "vocab_freq.tsv"), vocabulary_frequencies(data, vocab, header));
  write_file(join_path(cfg.out, "metrics.csv"), log_csv);
  return report;
}

std::string cmd_reconstruct(const std::string& model_path, std::string_view method_text,
                            const lexer::Vocabulary& vocab) {
  const auto model = nn::ModelFile::parse(read_file(model_path));
  if (model.vocab_checksum != vocab.checksum()) {
    throw Error(ErrorKind::ChecksumMismatch, "model vocabulary " + hex64(model.vocab_checksum) +
                                                 " vs " + hex64(vocab.checksum()));
  }
  if (model.params.dims.vocab != vocab.size()) {
    throw Error(ErrorKind::ChecksumMismatch, "model vocabulary size differs");
  }
  const auto lexemes = lexemes_of(method_text, vocab);
  return lexer::join(train::reconstruct(model.params, lexemes, vocab, model.regime,
                                        model.final_activation));
}

}  // namespace gcae::report
