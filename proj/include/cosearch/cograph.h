#ifndef COSEARCH_COGRAPH_H_
#define COSEARCH_COGRAPH_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "cosearch/interpret.h"
#include "cosearch/types.h"

namespace cosearch {

// Unordered concept pair stored as (smaller id, larger id).
using EdgeKey = std::pair<ConceptId, ConceptId>;

// Throws ParameterError on a self-loop.
EdgeKey MakeEdge(const ConceptId &a, const ConceptId &b);

// Per-session evidence graph. Node evidence is the best (least ambiguous)
// factor a concept has received so far; edge evidence is the running
// maximum of per-query co-occurrence evidence, so repeating a query never
// adds anything.
class LocalGraph {
 public:
  // Processes the next query of the session:
  //  1. every referenced concept c: ev(c) = max(ev(c), 1/|group|);
  //  2. every referenced a and every other node b with ev(b) > 0:
  //     edge(a, b) = max(edge(a, b), min(ev(a), ev(b))).
  void AddQuery(const QueryInterpretation &query);

  const std::map<ConceptId, Rational> &node_evidence() const { return nodes_; }
  const std::map<EdgeKey, Rational> &edge_evidence() const { return edges_; }

  // Zero when the edge is absent.
  Rational Evidence(const ConceptId &a, const ConceptId &b) const;

  bool empty() const { return nodes_.empty(); }

 private:
  std::map<ConceptId, Rational> nodes_;
  std::map<EdgeKey, Rational> edges_;
};

LocalGraph BuildLocalGraph(std::span<const QueryInterpretation> session);

// Global co-occurrence graph: edge weight = sum over sessions of the local
// edge evidence. `Weight` is double for production runs and Rational for
// exact accumulation in tests.
template <typename Weight>
class BasicCoGraph {
 public:
  void AddNode(const ConceptId &id) { nodes_.insert(id); }

  // Adds `w` to the edge weight; both endpoints become nodes.
  void AddWeight(const ConceptId &a, const ConceptId &b, const Weight &w) {
    nodes_.insert(a);
    nodes_.insert(b);
    edges_[MakeEdge(a, b)] += w;
  }

  // Sets the weight; w must be > 0.
  void SetWeight(const ConceptId &a, const ConceptId &b, const Weight &w) {
    nodes_.insert(a);
    nodes_.insert(b);
    edges_[MakeEdge(a, b)] = w;
  }

  Weight WeightOf(const ConceptId &a, const ConceptId &b) const {
    if (a == b) return Weight(0);
    auto it = edges_.find(MakeEdge(a, b));
    return it == edges_.end() ? Weight(0) : it->second;
  }

  void Merge(const LocalGraph &local) {
    for (const auto &[id, ev] : local.node_evidence()) nodes_.insert(id);
    for (const auto &[key, ev] : local.edge_evidence()) {
      edges_[key] += Convert(ev);
    }
  }

  // Monoid combine: node union, edge-weight sum.
  void Merge(const BasicCoGraph &other) {
    nodes_.insert(other.nodes_.begin(), other.nodes_.end());
    for (const auto &[key, w] : other.edges_) edges_[key] += w;
  }

  const ConceptSet &nodes() const { return nodes_; }
  const std::map<EdgeKey, Weight> &edges() const { return edges_; }
  std::map<EdgeKey, Weight> &mutable_edges() { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  bool operator==(const BasicCoGraph &) const = default;

 private:
  static Weight Convert(const Rational &r) {
    if constexpr (std::is_same_v<Weight, Rational>) {
      return r;
    } else {
      return static_cast<Weight>(ToDouble(r));
    }
  }

  ConceptSet nodes_;
  std::map<EdgeKey, Weight> edges_;
};

using CoGraph = BasicCoGraph<double>;
using ExactCoGraph = BasicCoGraph<Rational>;

template <typename Weight>
BasicCoGraph<Weight> MergeIntoGlobal(BasicCoGraph<Weight> global,
                                     const LocalGraph &local) {
  global.Merge(local);
  return global;
}

CoGraph ToFloat(const ExactCoGraph &exact);

// Builds the global graph from interpreted sessions (each session is its
// queries' interpretations in order).
CoGraph BuildCoGraph(
    std::span<const std::vector<QueryInterpretation>> sessions);
ExactCoGraph BuildExactCoGraph(
    std::span<const std::vector<QueryInterpretation>> sessions);

// Log2-spaced bucket [lower, upper).
struct HistogramBucket {
  double lower = 0;
  double upper = 0;
  std::size_t count = 0;

  bool operator==(const HistogramBucket &) const = default;
};

struct WeightDistribution {
  std::vector<double> sorted_weights;  // ascending, one entry per edge
  std::vector<HistogramBucket> histogram;
};

WeightDistribution ComputeWeightDistribution(const CoGraph &graph);

struct PruneReport {
  double threshold = 0;
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  ConceptSet isolated_nodes;  // no edges left after pruning
  std::vector<HistogramBucket> weight_histogram;  // of the input graph
};

// Removes every edge with weight < threshold. Nodes are kept even when
// they end up isolated. Throws ParameterError for a negative threshold.
std::pair<CoGraph, PruneReport> Prune(const CoGraph &graph, double threshold);

void WritePruneReport(const PruneReport &report, std::ostream &out);

// Graph file: a "#nodes:" line with every node id, optional "#threshold:"
// line, then one concept_a<TAB>concept_b<TAB>weight line per edge with six
// decimals.
struct GraphFile {
  CoGraph graph;
  std::optional<double> threshold;  // set once the graph has been pruned
};

void WriteGraph(const CoGraph &graph, std::ostream &out,
                std::optional<double> threshold = std::nullopt);
GraphFile ReadGraph(std::istream &in);
void SaveGraph(const CoGraph &graph, const std::filesystem::path &path,
               std::optional<double> threshold = std::nullopt);
GraphFile LoadGraph(const std::filesystem::path &path);

}  // namespace cosearch

#endif  // COSEARCH_COGRAPH_H_
