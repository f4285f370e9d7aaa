#include "gcae/flowgraph.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gcae/error.hpp"

namespace gcae::flow {

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Sequence: return "sequence";
    case Regime::Linear: return "linear";
    case Regime::Naive: return "naive";
  }
  return "?";
}

Regime parse_regime(std::string_view tag) {
  for (Regime r : kAllRegimes) {
    if (to_string(r) == tag) return r;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown regime '" + std::string(tag) + "'");
}

nn::Matrix FlowGraph::adjacency() const {
  nn::Matrix a(n, n);
  for (auto [i, j] : edges) a(i, j) = 1.0;
  return a;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

bool is_open(std::string_view s) { return s == "(" || s == "{" || s == "["; }
bool is_close(std::string_view s) { return s == ")" || s == "}" || s == "]"; }

std::string_view closer_for(std::string_view open) {
  if (open == "(") return ")";
  if (open == "{") return "}";
  return "]";
}

std::vector<std::size_t> match_delimiters(std::span<const std::string> lx) {
  std::vector<std::size_t> match(lx.size(), kNone);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    if (is_open(lx[k])) {
      stack.push_back(k);
    } else if (is_close(lx[k])) {
      if (stack.empty() || closer_for(lx[stack.back()]) != lx[k]) {
        throw Error(ErrorKind::MalformedStructure, "unmatched '" + lx[k] + "'", k);
      }
      match[stack.back()] = k;
      match[k] = stack.back();
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    throw Error(ErrorKind::MalformedStructure, "unclosed '" + lx[stack.back()] + "'",
                stack.back());
  }
  return match;
}

class RuleBuilder {
 public:
  explicit RuleBuilder(std::span<const std::string> lx)
      : lx_(lx), n_(lx.size()), match_(match_delimiters(lx)) {}

  FlowGraph run() {
    for (std::size_t k = 0; k < n_; ++k) {
      const std::string& t = lx_[k];
      if (t == "if") {
        apply_if(k);
      } else if (t == "else") {
        apply_else(k);
      } else if (t == "while" || t == "for") {
        if (!do_conditions_.contains(k)) apply_loop(k);
      } else if (t == "do") {
        apply_do(k);
      } else if (t == lexer::kMethodToken) {
        apply_recursion(k);
      } else if (t == "return") {
        apply_return(k);
      }
    }
    FlowGraph g;
    g.n = n_;
    g.regime = Regime::Sequence;
    g.fired = fired_;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (!return_cuts_.contains(k)) g.edges.emplace(k, k + 1);
    }
    g.edges.insert(extra_.begin(), extra_.end());
    return g;
  }

 private:
  std::size_t expect(std::size_t at, std::string_view what, std::size_t owner) const {
    if (at >= n_ || lx_[at] != what) {
      throw Error(ErrorKind::MalformedStructure,
                  "'" + lx_[owner] + "' expects '" + std::string(what) + "'", owner);
    }
    return at;
  }

  // `(` at open -> its `)`; then the braced block after it.
  std::size_t close_paren(std::size_t owner) const {
    return match_[expect(owner + 1, "(", owner)];
  }

  void apply_if(std::size_t k) {
    const std::size_t b = expect(close_paren(k) + 1, "{", k);
    extra_.emplace(b, match_[b]);
    ++fired_.if_rule;
  }

  void apply_else(std::size_t k) {
    if (k + 1 < n_ && lx_[k + 1] == "if") return;  // the `if` carries the rule
    const std::size_t b = expect(k + 1, "{", k);
    extra_.emplace(b, match_[b]);
    ++fired_.else_rule;
  }

  void apply_loop(std::size_t w) {
    const std::size_t p = close_paren(w);
    const std::size_t b = expect(p + 1, "{", w);
    const std::size_t c = match_[b];
    if (c + 1 < n_) extra_.emplace(p, c + 1);
    extra_.emplace(c, w);
    if (lx_[w] == "while") {
      ++fired_.while_rule;
    } else {
      ++fired_.for_rule;
    }
  }

  void apply_do(std::size_t w) {
    const std::size_t b = expect(w + 1, "{", w);
    const std::size_t c = match_[b];
    const std::size_t cond = expect(c + 1, "while", w);
    const std::size_t q = close_paren(cond);
    extra_.emplace(q, w);
    do_conditions_.insert(cond);
    ++fired_.do_rule;
  }

  void apply_recursion(std::size_t k) {
    if (k == 0 || k + 1 >= n_ || lx_[k + 1] != "(") return;
    extra_.emplace(match_[k + 1], 0);
    ++fired_.recursion_rule;
  }

  void apply_return(std::size_t t) {
    std::size_t depth = 0;
    std::size_t s = kNone;
    for (std::size_t k = t + 1; k < n_; ++k) {
      if (is_open(lx_[k])) {
        ++depth;
      } else if (is_close(lx_[k])) {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && lx_[k] == ";") {
        s = k;
        break;
      }
    }
    if (s == kNone) {
      throw Error(ErrorKind::MalformedStructure, "'return' without terminating ';'", t);
    }
    ++fired_.return_rule;
    // A return whose jump target is its own successor is just the linear edge.
    if (s + 2 >= n_) return;
    return_cuts_.insert(s);
    extra_.emplace(s, n_ - 1);
  }

  std::span<const std::string> lx_;
  std::size_t n_;
  std::vector<std::size_t> match_;
  std::set<Edge> extra_;
  std::set<std::size_t> return_cuts_;
  std::set<std::size_t> do_conditions_;
  RuleCounts fired_;
};

void require_positive(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidShape, "graph needs at least one node");
}

}  // namespace

FlowGraph build_flow_edges(std::span<const std::string> lexemes) {
  require_positive(lexemes.size());
  return RuleBuilder(lexemes).run();
}

FlowGraph build_flow_edges(const lexer::TokenSequence& seq) {
  return build_flow_edges(std::span<const std::string>(seq.lexemes));
}

FlowGraph linear_edges(std::size_t n) {
  require_positive(n);
  FlowGraph g;
  g.n = n;
  g.regime = Regime::Linear;
  for (std::size_t k = 0; k + 1 < n; ++k) g.edges.emplace(k, k + 1);
  return g;
}

FlowGraph naive_edges(std::size_t n) {
  require_positive(n);
  FlowGraph g;
  g.n = n;
  g.regime = Regime::Naive;
  return g;
}

FlowGraph build_graph(std::span<const std::string> lexemes, Regime regime) {
  switch (regime) {
    case Regime::Sequence: return build_flow_edges(lexemes);
    case Regime::Linear: return linear_edges(lexemes.size());
    case Regime::Naive: return naive_edges(lexemes.size());
  }
  throw Error(ErrorKind::InvalidConfig, "bad regime");
}

nn::Matrix normalize_adjacency(const nn::Matrix& adjacency) {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "adjacency must be square");
  }
  nn::Matrix a_tilde = adjacency;
  for (std::size_t k = 0; k < n; ++k) a_tilde(k, k) += 1.0;
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (double v : a_tilde.row(i)) d += v;
    inv_sqrt_degree[i] = 1.0 / std::sqrt(d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a_tilde(i, j) != 0.0) {
        a_tilde(i, j) *= inv_sqrt_degree[i] * inv_sqrt_degree[j];
      }
    }
  }
  return a_tilde;
}

PropagationMatrix normalize(const FlowGraph& graph) {
  return {normalize_adjacency(graph.adjacency()), graph.regime};
}

std::string export_edges(const FlowGraph& graph) {
  std::ostringstream out;
  out << "n=" << graph.n << " regime=" << to_string(graph.regime) << '\n';
  for (auto [i, j] : graph.edges) out << i << ' ' << j << '\n';
  return out.str();
}

FlowGraph parse_edges(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "empty edge list");
  FlowGraph g;
  char tag[32] = {};
  unsigned long long n = 0;
  if (std::sscanf(line.c_str(), "n=%llu regime=%31s", &n, tag) != 2) {
    throw Error(ErrorKind::Format, "bad edge-list header '" + line + "'");
  }
  g.n = n;
  g.regime = parse_regime(tag);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::size_t i = 0, j = 0;
    if (!(fields >> i >> j) || i >= g.n || j >= g.n) {
      throw Error(ErrorKind::Format, "bad edge '" + line + "'", lineno);
    }
    g.edges.emplace(i, j);
  }
  return g;
}

}  // namespace gcae::flow
