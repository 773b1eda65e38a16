#include "cosearch/suggest.h"

#include <algorithm>

#include "cosearch/errors.h"

namespace cosearch {

namespace {

Suggestion Assemble(Strategy strategy, const std::vector<Cluster> &clusters,
                    std::vector<std::size_t> selected,
                    const SessionConceptSet &c_at_i, std::size_t n_best = 0) {
  Suggestion out;
  out.strategy = strategy;
  out.n_best = n_best;
  const ConceptSet seen = c_at_i.Flatten();
  for (auto idx : selected) {
    for (const auto &id : clusters[idx]) {
      if (!seen.count(id)) out.concepts.insert(id);
    }
  }
  std::sort(selected.begin(), selected.end());
  out.selected_clusters = std::move(selected);
  return out;
}

bool SharesAny(const Cluster &cluster, const ConceptSet &concepts) {
  return std::any_of(cluster.begin(), cluster.end(),
                     [&](const ConceptId &id) { return concepts.count(id) > 0; });
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kSlack:
      return "slack";
    case Strategy::kSlackSelective:
      return "slack-selective";
    case Strategy::kStrict:
      return "strict";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "slack") return Strategy::kSlack;
  if (name == "slack-selective") return Strategy::kSlackSelective;
  if (name == "strict") return Strategy::kStrict;
  throw ParameterError("unknown strategy '" + std::string(name) +
                       "' (expected slack, slack-selective or strict)");
}

Rational DegreeOfMatching(const Cluster &cluster, const SessionConceptSet &c_at_i) {
  Rational degree(0);
  for (const auto &id : cluster) {
    if (c_at_i.unambiguous().count(id)) {
      degree += 1;
      continue;
    }
    Rational best(0);
    for (const auto &amb : c_at_i.ambiguity_sets()) {
      if (amb.count(id)) {
        best = std::max(best, Rational(1, static_cast<std::int64_t>(amb.size())));
      }
    }
    degree += best;
  }
  return degree;
}

Suggestion SuggestSlack(const std::vector<Cluster> &clusters,
                        const SessionConceptSet &c_at_i) {
  const ConceptSet seen = c_at_i.Flatten();
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (SharesAny(clusters[i], seen)) selected.push_back(i);
  }
  return Assemble(Strategy::kSlack, clusters, std::move(selected), c_at_i);
}

Suggestion SuggestSlackSelective(const std::vector<Cluster> &clusters,
                                 const SessionConceptSet &c_at_i,
                                 std::size_t n_best) {
  if (n_best == 0) throw ParameterError("n_best must be >= 1");
  struct Ranked {
    Rational degree;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    Rational d = DegreeOfMatching(clusters[i], c_at_i);
    if (d > 0) ranked.push_back({d, i});
  }
  // Ordering depends only on cluster content, never on input position.
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked &a, const Ranked &b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    const Cluster &ca = clusters[a.index], &cb = clusters[b.index];
    if (ca.size() != cb.size()) return ca.size() < cb.size();
    if (ca != cb) return ca < cb;
    return a.index < b.index;
  });
  std::vector<std::size_t> selected;
  for (std::size_t k = 0; k < ranked.size() && k < n_best; ++k) {
    selected.push_back(ranked[k].index);
  }
  return Assemble(Strategy::kSlackSelective, clusters, std::move(selected),
                  c_at_i, n_best);
}

Suggestion SuggestStrict(const std::vector<Cluster> &clusters,
                         const SessionConceptSet &c_at_i) {
  const ConceptSet seen = c_at_i.Flatten();
  std::vector<std::size_t> selected;
  if (!seen.empty()) {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      const Cluster &c = clusters[i];
      bool covers = std::all_of(seen.begin(), seen.end(), [&](const ConceptId &id) {
        return std::find(c.begin(), c.end(), id) != c.end();
      });
      if (covers) selected.push_back(i);
    }
  }
  return Assemble(Strategy::kStrict, clusters, std::move(selected), c_at_i);
}

Suggestion Suggest(Strategy strategy, const std::vector<Cluster> &clusters,
                   const SessionConceptSet &c_at_i, std::size_t n_best) {
  switch (strategy) {
    case Strategy::kSlack:
      return SuggestSlack(clusters, c_at_i);
    case Strategy::kSlackSelective:
      return SuggestSlackSelective(clusters, c_at_i, n_best);
    case Strategy::kStrict:
      return SuggestStrict(clusters, c_at_i);
  }
  throw ParameterError("unknown strategy");
}

}  // namespace cosearch
