// Randomized checks of algebraic properties, driven by seeded generators.

#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "cosearch/cograph.h"
#include "cosearch/eval.h"
#include "cosearch/logs.h"
#include "cosearch/suggest.h"
#include "oracles.h"
#include "test_util.h"

namespace cosearch {
namespace {

using testing::Id;
using testing::RandomClusters;
using testing::RandomSession;

constexpr int kTrials = 500;

TEST(LocalGraphProperty, MatchesDirectOracle) {
  Rng rng(1);
  for (int t = 0; t < kTrials; ++t) {
    const auto session = RandomSession(rng, 6, 8, 3, 3);
    ASSERT_EQ(BuildLocalGraph(session).edge_evidence(), testing::OracleEdges(session));
  }
}

TEST(LocalGraphProperty, EdgeBoundedByNodeEvidenceAndMonotone) {
  Rng rng(2);
  for (int t = 0; t < kTrials; ++t) {
    const auto session = RandomSession(rng, 5, 6, 3, 2);
    LocalGraph g;
    for (const auto &q : session) {
      const auto before = g.edge_evidence();
      g.AddQuery(q);
      for (const auto &[key, ev] : before) EXPECT_GE(g.Evidence(key.first, key.second), ev);
      for (const auto &[key, ev] : g.edge_evidence()) {
        EXPECT_LE(ev, std::min(g.node_evidence().at(key.first),
                               g.node_evidence().at(key.second)));
      }
    }
  }
}

TEST(LocalGraphProperty, UnambiguousOrderDoesNotMatter) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    auto session = RandomSession(rng, 5, 6, 1, 2);
    const auto expected = BuildLocalGraph(session).edge_evidence();
    rng.Shuffle(&session);
    EXPECT_EQ(BuildLocalGraph(session).edge_evidence(), expected);
    for (const auto &[key, ev] : expected) EXPECT_EQ(ev, Rational(1));
  }
}

TEST(GlobalGraphProperty, MergeIsCommutativeAndAssociative) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<ExactCoGraph> parts(3);
    std::vector<CoGraph> float_parts(3);
    for (int p = 0; p < 3; ++p) {
      for (int s = 0; s < 5; ++s) {
        const LocalGraph local = BuildLocalGraph(RandomSession(rng, 4, 7, 3, 2));
        parts[p].Merge(local);
        float_parts[p].Merge(local);
      }
    }
    ExactCoGraph left = parts[0];
    left.Merge(parts[1]);
    left.Merge(parts[2]);
    ExactCoGraph right = parts[2];
    ExactCoGraph bc = parts[1];
    bc.Merge(parts[0]);
    right.Merge(bc);
    EXPECT_EQ(left, right);

    CoGraph fl = float_parts[0];
    fl.Merge(float_parts[1]);
    fl.Merge(float_parts[2]);
    CoGraph fr = float_parts[2];
    fr.Merge(float_parts[0]);
    fr.Merge(float_parts[1]);
    ASSERT_EQ(fl.num_edges(), fr.num_edges());
    for (const auto &[key, w] : fl.edges()) {
      EXPECT_NEAR(fr.edges().at(key), w, 1e-9 * w);
    }
  }
}

TEST(GlobalGraphProperty, WeightsBoundedBySessionCount) {
  Rng rng(5);
  std::vector<std::vector<QueryInterpretation>> sessions;
  for (int s = 0; s < 200; ++s) sessions.push_back(RandomSession(rng, 4, 6, 3, 2));
  const ExactCoGraph g = BuildExactCoGraph(sessions);
  for (const auto &[key, w] : g.edges()) {
    EXPECT_GT(w, Rational(0));
    EXPECT_LE(w, Rational(static_cast<std::int64_t>(sessions.size())));
  }
  const CoGraph exact = ToFloat(g), summed = BuildCoGraph(sessions);
  ASSERT_EQ(exact.nodes(), summed.nodes());
  ASSERT_EQ(exact.num_edges(), summed.num_edges());
  for (const auto &[key, w] : exact.edges()) {
    EXPECT_NEAR(summed.edges().at(key), w, 1e-9 * w);
  }
}

SessionConceptSet RandomSessionSet(Rng &rng, int concepts) {
  SessionConceptSet set;
  const int queries = 1 + static_cast<int>(rng.Uniform(3));
  for (int k = 0; k < queries; ++k) set.Extend(testing::RandomQuery(rng, concepts, 3, 2));
  return set;
}

TEST(SuggestProperty, StrictInsideSlackAndNothingObservedSuggested) {
  Rng rng(6);
  for (int t = 0; t < kTrials; ++t) {
    const auto clusters = RandomClusters(rng, 10, 1 + static_cast<int>(rng.Uniform(6)), 5);
    const auto c_at_i = RandomSessionSet(rng, 10);
    const Suggestion slack = SuggestSlack(clusters, c_at_i);
    const Suggestion strict = SuggestStrict(clusters, c_at_i);
    EXPECT_TRUE(std::includes(slack.concepts.begin(), slack.concepts.end(),
                              strict.concepts.begin(), strict.concepts.end()));
    EXPECT_TRUE(std::includes(slack.selected_clusters.begin(), slack.selected_clusters.end(),
                              strict.selected_clusters.begin(),
                              strict.selected_clusters.end()));
    const ConceptSet observed = c_at_i.Flatten();
    for (const Suggestion *s : {&slack, &strict}) {
      for (const auto &id : s->concepts) EXPECT_FALSE(observed.count(id));
    }
    const Suggestion saturated = SuggestSlackSelective(clusters, c_at_i, clusters.size());
    EXPECT_EQ(saturated.selected_clusters, slack.selected_clusters);
    EXPECT_EQ(saturated.concepts, slack.concepts);
  }
}

TEST(SuggestProperty, DegreeBoundedByOverlap) {
  Rng rng(7);
  for (int t = 0; t < kTrials; ++t) {
    const Cluster cluster = RandomClusters(rng, 8, 1, 6)[0];
    const auto c_at_i = RandomSessionSet(rng, 8);
    const ConceptSet flat = c_at_i.Flatten();
    std::int64_t overlap = 0;
    bool all_unambiguous = true;
    for (const auto &id : cluster) {
      if (flat.count(id)) {
        ++overlap;
        all_unambiguous = all_unambiguous && c_at_i.unambiguous().count(id);
      }
    }
    const Rational degree = DegreeOfMatching(cluster, c_at_i);
    EXPECT_LE(degree, Rational(overlap));
    EXPECT_EQ(degree == Rational(overlap), all_unambiguous);
  }
}

TEST(SuggestProperty, ClusterOrderDoesNotChangeSuggestions) {
  Rng rng(8);
  for (int t = 0; t < kTrials; ++t) {
    auto clusters = RandomClusters(rng, 9, 5, 4);
    const auto c_at_i = RandomSessionSet(rng, 9);
    const std::size_t n_best = 1 + rng.Uniform(3);
    std::vector<ConceptSet> before;
    for (Strategy s : {Strategy::kSlack, Strategy::kSlackSelective, Strategy::kStrict}) {
      before.push_back(Suggest(s, clusters, c_at_i, n_best).concepts);
    }
    rng.Shuffle(&clusters);
    std::size_t k = 0;
    for (Strategy s : {Strategy::kSlack, Strategy::kSlackSelective, Strategy::kStrict}) {
      EXPECT_EQ(Suggest(s, clusters, c_at_i, n_best).concepts, before[k++]);
    }
  }
}

TEST(SessionSetProperty, InvariantsAndSingletonOrder) {
  Rng rng(9);
  for (int t = 0; t < kTrials; ++t) {
    const auto set = RandomSessionSet(rng, 7);
    ConceptSet flat = set.unambiguous();
    for (const auto &amb : set.ambiguity_sets()) {
      EXPECT_GE(amb.size(), 2u);
      for (const auto &id : amb) {
        EXPECT_FALSE(set.unambiguous().count(id));
        flat.insert(id);
      }
    }
    EXPECT_EQ(flat, set.Flatten());

    auto singles = RandomSession(rng, 5, 7, 1, 2);
    SessionConceptSet a, b;
    for (const auto &q : singles) a.Extend(q);
    rng.Shuffle(&singles);
    for (const auto &q : singles) b.Extend(q);
    EXPECT_EQ(a, b);
  }
}

TEST(EvalProperty, PrfInvariantUnderRelabeling) {
  Rng rng(10);
  for (int t = 0; t < kTrials; ++t) {
    ConceptSet predicted, truth, p2, t2;
    for (int k = 0; k < 8; ++k) {
      if (rng.Bernoulli(0.5)) predicted.insert(Id(k)), p2.insert("x" + Id(7 - k));
      if (rng.Bernoulli(0.5)) truth.insert(Id(k)), t2.insert("x" + Id(7 - k));
    }
    const auto a = ComputePrf(predicted, truth);
    const auto b = ComputePrf(p2, t2);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_DOUBLE_EQ(a->f1, b->f1);
      EXPECT_DOUBLE_EQ(a->precision, b->precision);
    }
  }
}

std::vector<InterpretedSession> RandomInterpreted(Rng &rng, int n, int concepts) {
  std::vector<InterpretedSession> out;
  for (int s = 0; s < n; ++s) out.push_back({RandomSession(rng, 5, concepts, 3, 2)});
  return out;
}

TEST(EvalProperty, Eval1AtLeastEval2) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto sessions = RandomInterpreted(rng, 20, 10);
    const auto clusters = RandomClusters(rng, 10, 4, 5);
    const FoldResult e1 = ScoreClusters(sessions, clusters, ClusterEvalMode::kEval1);
    const FoldResult e2 = ScoreClusters(sessions, clusters, ClusterEvalMode::kEval2);
    EXPECT_EQ(e1.evaluated, e2.evaluated);
    EXPECT_GE(e1.prf.f1 + 1e-12, e2.prf.f1);
  }
}

TEST(EvalProperty, SlackSucceedsAtLeastAsOftenAsStrict) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto sessions = RandomInterpreted(rng, 20, 10);
    const auto clusters = RandomClusters(rng, 10, 4, 6);
    for (std::size_t i = 1; i <= 3; ++i) {
      StrategyParams slack, strict;
      slack.i = strict.i = i;
      strict.strategy = Strategy::kStrict;
      const FoldResult a = ScoreStrategy(sessions, clusters, slack);
      const FoldResult b = ScoreStrategy(sessions, clusters, strict);
      EXPECT_EQ(a.evaluated, b.evaluated);
      EXPECT_GE(a.success_rate, b.success_rate);
    }
  }
}

TEST(EvalProperty, FoldsPartitionSessions) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 10 + rng.Uniform(200), k = 2 + rng.Uniform(9);
    const auto folds = AssignFolds(n, k, t);
    EXPECT_EQ(folds.size(), n);
    for (auto f : folds) EXPECT_LT(f, k);
    EXPECT_EQ(folds, AssignFolds(n, k, t));
  }
}

std::vector<LogRecord> RandomLog(Rng &rng, int users, int records, int first_user) {
  std::vector<LogRecord> out;
  for (int r = 0; r < records; ++r) {
    LogRecord rec;
    rec.anon_id = std::to_string(first_user + static_cast<int>(rng.Uniform(users)));
    rec.query = "q" + std::to_string(rng.Uniform(4));
    rec.query_time = 1141171200 + static_cast<Timestamp>(rng.Uniform(6 * 3600));
    out.push_back(rec);
  }
  return out;
}

TEST(LogsProperty, NoSessionSpansALongGap) {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    for (const auto &s : Sessionize(RandomLog(rng, 5, 60, 1))) {
      ASSERT_FALSE(s.queries.empty());
      for (std::size_t k = 1; k < s.queries.size(); ++k) {
        const Timestamp gap = s.queries[k].time - s.queries[k - 1].time;
        EXPECT_GE(gap, 0);
        EXPECT_LE(gap, kSessionGapSeconds);
        EXPECT_FALSE(s.queries[k] == s.queries[k - 1]);
      }
    }
  }
}

TEST(LogsProperty, DisjointUsersConcatenate) {
  Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    auto a = RandomLog(rng, 4, 40, 1);
    auto b = RandomLog(rng, 4, 40, 100);
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    auto expected = Sessionize(a);
    const auto sb = Sessionize(b);
    expected.insert(expected.end(), sb.begin(), sb.end());
    EXPECT_EQ(Sessionize(both), expected);
  }
}

TEST(LogsProperty, CollapsingDuplicatesKeepsSessionCount) {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const auto log = RandomLog(rng, 3, 40, 1);
    std::vector<LogRecord> doubled;
    for (const auto &r : log) {
      doubled.push_back(r);
      doubled.push_back(r);
    }
    EXPECT_EQ(Sessionize(doubled), Sessionize(log));
  }
}

TEST(OntologyProperty, LookupReturnsExactlyTheListingConcepts) {
  Rng rng(17);
  const std::vector<std::string> words = {"park", "school", "bus", "child", "art",
                                          "museum", "pool", "library"};
  for (int t = 0; t < 100; ++t) {
    std::vector<Concept> concepts;
    for (int c = 0; c < 5; ++c) {
      std::vector<std::string> keywords;
      for (const auto &w : words) {
        if (rng.Bernoulli(0.3)) keywords.push_back(w);
      }
      concepts.push_back(testing::MakeConcept(Id(c), "lemma" + std::to_string(c), {}, keywords));
    }
    const Ontology onto(concepts);
    for (const auto &w : words) {
      ConceptSet expected;
      for (const auto &c : concepts) {
        if (std::find(c.keywords.begin(), c.keywords.end(), w) != c.keywords.end()) {
          expected.insert(c.id);
        }
      }
      EXPECT_EQ(onto.Lookup(w), expected);
    }
  }
}

}  // namespace
}  // namespace cosearch
