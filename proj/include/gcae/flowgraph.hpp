#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcae/lexer.hpp"
#include "gcae/matrix.hpp"

namespace gcae::flow {

/// Which adjacency the graph-convolution stack sees.
enum class Regime { Sequence, Linear, Naive };

std::string_view to_string(Regime regime) noexcept;
/// Throws InvalidConfig for unknown tags.
Regime parse_regime(std::string_view tag);
inline constexpr Regime kAllRegimes[] = {Regime::Sequence, Regime::Linear, Regime::Naive};

using Edge = std::pair<std::size_t, std::size_t>;

/// How many times each control-flow rule fired while building a graph.
struct RuleCounts {
  std::size_t if_rule = 0;  // includes `else if`
  std::size_t else_rule = 0;
  std::size_t while_rule = 0;
  std::size_t for_rule = 0;
  std::size_t do_rule = 0;
  std::size_t return_rule = 0;
  std::size_t recursion_rule = 0;

  std::size_t total() const noexcept {
    return if_rule + else_rule + while_rule + for_rule + do_rule + return_rule + recursion_rule;
  }
  bool operator==(const RuleCounts&) const = default;
};

struct FlowGraph {
  std::size_t n = 0;
  std::set<Edge> edges;
  Regime regime = Regime::Linear;
  RuleCounts fired;

  /// Directed 0/1 adjacency matrix A.
  nn::Matrix adjacency() const;
};

/// Token-level control-flow graph over an anonymized method.
///
/// Starts from the linear chain and applies, per occurrence:
///   if / else if  `{` b .. `}` c             : skip edge b -> c
///   else          `{` b .. `}` c             : skip edge b -> c
///   while / for   w `(`..`)` p `{` b .. `}` c : p -> c+1 (if in range), c -> w
///   do            w `{`..`}` while `(`..`)` q : q -> w
///   method (call) `(` .. `)` r               : r -> 0
///   return        t .. `;` s                 : s -> n-1 replaces s -> s+1
///
/// Every control body must be braced; anything else is MalformedStructure.
FlowGraph build_flow_edges(std::span<const std::string> lexemes);
FlowGraph build_flow_edges(const lexer::TokenSequence& seq);

/// {(k, k+1)}. Throws InvalidShape for n == 0.
FlowGraph linear_edges(std::size_t n);
/// Empty edge set. Throws InvalidShape for n == 0.
FlowGraph naive_edges(std::size_t n);

FlowGraph build_graph(std::span<const std::string> lexemes, Regime regime);

/// Dense n x n matrix D^-1/2 (A + I) D^-1/2 with D the row sums of A + I.
struct PropagationMatrix {
  nn::Matrix values;
  Regime regime = Regime::Linear;

  std::size_t n() const noexcept { return values.rows(); }
};

PropagationMatrix normalize(const FlowGraph& graph);
/// Same formula on an arbitrary 0/1 (or weighted) square adjacency.
nn::Matrix normalize_adjacency(const nn::Matrix& adjacency);

/// Text form: header `n=<int> regime=<tag>`, then one `i j` pair per line.
std::string export_edges(const FlowGraph& graph);
FlowGraph parse_edges(std::string_view text);

}  // namespace gcae::flow
