#ifndef COSEARCH_COMMUNITIES_H_
#define COSEARCH_COMMUNITIES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "cosearch/cograph.h"
#include "cosearch/types.h"

namespace cosearch {

struct CopraParams {
  std::size_t v = 2;  // max labels per vertex; labels below 1/v are dropped
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
};

// Overlapping clusters of concept ids. Each cluster is sorted; clusters are
// ordered by size, then lexicographically.
struct ClusterSet {
  std::vector<std::vector<ConceptId>> clusters;
  CopraParams params;
  std::optional<double> threshold;  // pruning threshold of the input graph
  std::size_t iterations = 0;

  std::size_t size() const { return clusters.size(); }
};

// Called after every propagation round with the per-vertex label maps
// (label vertex index -> belonging coefficient). Test hook.
using LabelObserver =
    std::function<void(std::size_t iteration,
                       const std::vector<std::map<std::size_t, double>> &)>;

// COPRA-style overlapping label propagation on a weighted graph.
//
// Every vertex starts with its own label. Each round, every vertex computes
// the edge-weighted average of its neighbours' belonging maps from the
// previous round's state; labels below 1/v are dropped and the rest
// renormalized. When none survive, the strongest label is kept (a label the
// vertex already holds wins ties, other ties go to a per-(seed, round,
// vertex) generator). A vertex whose label set would change adopts the
// update with probability 1/2, which breaks the label swapping of fully
// synchronous rounds while keeping results independent of evaluation
// order. Rounds stop once no vertex would change its label set, or after
// max_iters.
//
// Each label's vertex set becomes a community, split into connected
// components; communities contained in another are dropped and every
// isolated vertex is reported as a singleton.
ClusterSet DetectCommunities(const CoGraph &graph, const CopraParams &params,
                             std::optional<double> threshold = std::nullopt,
                             const LabelObserver &observer = {});

// Sorts members and clusters into canonical order, drops duplicates and
// clusters strictly contained in another.
std::vector<std::vector<ConceptId>> CanonicalClusters(
    std::vector<std::vector<ConceptId>> clusters);

struct ClusterStats {
  std::size_t count = 0;
  std::size_t min_size = 0;
  double mean_size = 0;
  std::size_t max_size = 0;
  std::map<ConceptId, std::size_t> overlap;  // concept -> #clusters holding it
};

ClusterStats ComputeClusterStats(
    const std::vector<std::vector<ConceptId>> &clusters);

// Clusters file: JSON document with "params", "seed" and "clusters".
void WriteClusters(const ClusterSet &clusters, std::ostream &out);
ClusterSet ReadClusters(std::istream &in);
void SaveClusters(const ClusterSet &clusters, const std::filesystem::path &path);
ClusterSet LoadClusters(const std::filesystem::path &path);

}  // namespace cosearch

#endif  // COSEARCH_COMMUNITIES_H_
