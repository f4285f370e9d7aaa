#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gcae/config.hpp"
#include "gcae/corpus.hpp"
#include "gcae/error.hpp"
#include "gcae/flowgraph.hpp"
#include "gcae/lexer.hpp"
#include "gcae/model.hpp"
#include "gcae/report.hpp"
#include "gcae/training.hpp"

namespace py = pybind11;
using namespace gcae;

namespace {

using Rows = std::vector<std::vector<double>>;
using NameSet = std::set<std::string, std::less<>>;

Rows to_rows(const nn::Matrix& m) {
  Rows out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    out[i].assign(row.begin(), row.end());
  }
  return out;
}

const char* kind_name(lexer::TokenKind kind) {
  switch (kind) {
    case lexer::TokenKind::Identifier: return "identifier";
    case lexer::TokenKind::Keyword: return "keyword";
    case lexer::TokenKind::IntLiteral: return "int";
    case lexer::TokenKind::FloatLiteral: return "float";
    case lexer::TokenKind::StringLiteral: return "string";
    case lexer::TokenKind::CharLiteral: return "char";
    case lexer::TokenKind::BoolLiteral: return "bool";
    case lexer::TokenKind::NullLiteral: return "null";
    case lexer::TokenKind::Punct: return "punct";
  }
  return "?";
}

py::dict method_dict(const corpus::MethodText& m) {
  py::dict d;
  d["name"] = m.name;
  d["body"] = m.body;
  d["origin"] = m.origin;
  return d;
}

std::vector<corpus::MethodText> methods_from(const std::vector<py::dict>& items) {
  std::vector<corpus::MethodText> out;
  for (const auto& d : items) {
    out.push_back({d["name"].cast<std::string>(), d["body"].cast<std::string>(),
                   d.contains("origin") ? d["origin"].cast<std::string>() : std::string()});
  }
  return out;
}

RunConfig config_from(const py::dict& options) {
  RunConfig cfg;
  for (auto [key, value] : options) {
    cfg.set(py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
  }
  return cfg;
}

py::dict metrics_dict(const train::MetricsRecord& r) {
  py::dict d;
  d["epoch"] = r.epoch;
  d["split"] = r.split;
  d["mean_loss"] = r.mean_loss;
  d["std_loss"] = r.std_loss;
  d["mean_accuracy"] = r.mean_accuracy;
  d["std_accuracy"] = r.std_accuracy;
  d["losses"] = r.losses;
  d["accuracies"] = r.accuracies;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph-convolutional autoencoders over anonymized method token sequences";

  py::register_exception<Error>(m, "GcaeError");

  m.def("vocabulary", [] { return lexer::Vocabulary::standard().lexemes(); },
        "Lexemes of the built-in vocabulary, in index order.");
  m.def("vocabulary_checksum", [] { return lexer::Vocabulary::standard().checksum(); });

  m.def(
      "tokenize",
      [](std::string_view text) {
        std::vector<py::tuple> out;
        for (const auto& t : lexer::tokenize(text)) {
          out.push_back(py::make_tuple(kind_name(t.kind), t.text, t.span.begin, t.span.end));
        }
        return out;
      },
      py::arg("text"), "(kind, text, begin, end) for every token.");

  m.def(
      "anonymize",
      [](const std::vector<std::string>& lexemes, std::string_view method_name,
         const NameSet& known) { return lexer::anonymize(lexemes, method_name, known); },
      py::arg("lexemes"), py::arg("method_name") = "", py::arg("known_methods") = NameSet{});

  m.def(
      "prepare",
      [](std::string_view text) {
        return report::lexemes_of(text, lexer::Vocabulary::standard());
      },
      py::arg("text"), "Anonymized lexemes of a method's source text.");

  m.def(
      "numericalize",
      [](const std::vector<std::string>& lexemes) {
        return lexer::numericalize(lexemes, lexer::Vocabulary::standard()).indices;
      },
      py::arg("lexemes"));

  m.def(
      "flow_edges",
      [](const std::vector<std::string>& lexemes, std::string_view regime) {
        const auto g = flow::build_graph(lexemes, flow::parse_regime(regime));
        return std::vector<flow::Edge>(g.edges.begin(), g.edges.end());
      },
      py::arg("lexemes"), py::arg("regime") = "sequence");

  m.def(
      "normalize",
      [](std::size_t n, const std::vector<flow::Edge>& edges) {
        nn::Matrix a(n, n);
        for (auto [i, j] : edges) {
          if (i >= n || j >= n) throw Error(ErrorKind::IndexOutOfRange, "edge outside graph");
          a(i, j) = 1.0;
        }
        return to_rows(flow::normalize_adjacency(a));
      },
      py::arg("n"), py::arg("edges"), "D^-1/2 (A + I) D^-1/2 as nested lists.");

  m.def("inspect_cfg",
        [](std::string_view text, std::string_view regime) {
          return report::cmd_inspect_cfg(text, flow::parse_regime(regime),
                                         lexer::Vocabulary::standard());
        },
        py::arg("text"), py::arg("regime") = "sequence");

  m.def(
      "generate_synthetic",
      [](std::uint64_t seed, std::size_t count) {
        std::vector<py::dict> out;
        for (const auto& mt : corpus::generate_synthetic(seed, count)) out.push_back(method_dict(mt));
        return out;
      },
      py::arg("seed"), py::arg("count"));

  m.def(
      "extract_methods",
      [](std::string_view source, std::string_view origin) {
        std::vector<py::dict> out;
        for (const auto& mt : corpus::extract_methods(source, origin)) out.push_back(method_dict(mt));
        return out;
      },
      py::arg("source"), py::arg("origin") = "");

  m.def(
      "make_manifest",
      [](const std::vector<py::dict>& methods, std::uint64_t seed, double test_fraction) {
        const auto manifest = corpus::split_corpus(methods_from(methods), seed, test_fraction);
        return corpus::write_manifest(manifest, lexer::Vocabulary::standard());
      },
      py::arg("methods"), py::arg("seed") = 1,
      py::arg("test_fraction") = corpus::kDefaultTestFraction,
      "Seeded train/test split written as manifest text.");

  m.def(
      "train",
      [](std::string_view manifest_text, const py::dict& options) {
        const auto& vocab = lexer::Vocabulary::standard();
        const RunConfig cfg = config_from(options);
        const auto data = train::prepare_dataset(corpus::read_manifest(manifest_text), vocab);
        auto fit = train::fit(data, vocab.size(), cfg.train);
        py::dict out;
        std::vector<py::dict> epochs;
        for (const auto& e : fit.epochs) epochs.push_back(metrics_dict(e));
        out["epochs"] = epochs;
        if (!data.test.empty()) out["test"] = metrics_dict(train::evaluate(fit.params, data.test, cfg.train));
        nn::ModelFile model{fit.params, vocab.checksum(), cfg.train.seed, cfg.train.regime,
                            cfg.train.final_activation};
        out["model"] = model.serialize();
        return out;
      },
      py::arg("manifest"), py::arg("options") = py::dict(),
      "Trains one model; options are configuration keys (seed, regime, epochs, ...).");

  m.def(
      "compare",
      [](std::string_view manifest_text, const py::dict& options) {
        const auto& vocab = lexer::Vocabulary::standard();
        const RunConfig cfg = config_from(options);
        const auto data = train::prepare_dataset(corpus::read_manifest(manifest_text), vocab);
        const auto report = report::compare(data, vocab, cfg);
        py::dict out;
        for (const auto& o : report.outcomes) {
          const std::string tag(flow::to_string(o.regime));
          if (o.ok()) {
            out[tag.c_str()] = metrics_dict(o.test);
          } else {
            out[tag.c_str()] = o.error;
          }
        }
        return out;
      },
      py::arg("manifest"), py::arg("options") = py::dict(),
      "Test metrics per regime, trained from the same seed on the same split.");

  m.def(
      "reconstruct",
      [](std::string_view model_text, std::string_view text) {
        const auto& vocab = lexer::Vocabulary::standard();
        const auto model = nn::ModelFile::parse(model_text);
        if (model.vocab_checksum != vocab.checksum()) {
          throw Error(ErrorKind::ChecksumMismatch, "model was trained on another vocabulary");
        }
        return train::reconstruct(model.params, report::lexemes_of(text, vocab), vocab,
                                  model.regime, model.final_activation);
      },
      py::arg("model"), py::arg("text"));
}
