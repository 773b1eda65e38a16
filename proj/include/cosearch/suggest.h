#ifndef COSEARCH_SUGGEST_H_
#define COSEARCH_SUGGEST_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosearch/interpret.h"
#include "cosearch/types.h"

namespace cosearch {

enum class Strategy { kSlack, kSlackSelective, kStrict };

std::string_view StrategyName(Strategy s);
// "slack", "slack-selective" or "strict"; throws ParameterError otherwise.
Strategy ParseStrategy(std::string_view name);

using Cluster = std::vector<ConceptId>;  // sorted

struct Suggestion {
  ConceptSet concepts;                        // Sugg@i
  std::vector<std::size_t> selected_clusters; // indices into the cluster list
  Strategy strategy = Strategy::kSlack;
  std::size_t n_best = 0;                     // SLACK-selective only
};

// Overlap between a cluster and C@i: 1 per shared unambiguous concept,
// 1/|AMB| per shared concept of ambiguity set AMB (smallest set when a
// concept sits in several).
Rational DegreeOfMatching(const Cluster &cluster, const SessionConceptSet &c_at_i);

// Clusters sharing at least one concept with C@i.
Suggestion SuggestSlack(const std::vector<Cluster> &clusters,
                        const SessionConceptSet &c_at_i);

// The n_best clusters with the highest positive degree of matching; ties go
// to the smaller cluster, then the lexicographically smaller one.
Suggestion SuggestSlackSelective(const std::vector<Cluster> &clusters,
                                 const SessionConceptSet &c_at_i,
                                 std::size_t n_best = 1);

// Clusters containing every concept of C@i, ambiguous ones included.
Suggestion SuggestStrict(const std::vector<Cluster> &clusters,
                         const SessionConceptSet &c_at_i);

Suggestion Suggest(Strategy strategy, const std::vector<Cluster> &clusters,
                   const SessionConceptSet &c_at_i, std::size_t n_best = 1);

}  // namespace cosearch

#endif  // COSEARCH_SUGGEST_H_
