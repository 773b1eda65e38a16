#include "cosearch/eval.h"

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cosearch/errors.h"
#include "cosearch/synth.h"
#include "test_util.h"

namespace cosearch {
namespace {

using testing::Query;

InterpretedSession SessionOf(std::vector<std::vector<std::vector<std::string>>> queries) {
  InterpretedSession s;
  for (auto &q : queries) s.queries.push_back(Query(std::move(q)));
  return s;
}

// Each concept in its own query.
InterpretedSession Walk(std::vector<std::string> ids) {
  InterpretedSession s;
  for (auto &id : ids) s.queries.push_back(Query({{id}}));
  return s;
}

TEST(PrfTest, Examples) {
  const PRF same = *ComputePrf({"a", "b"}, {"a", "b"});
  EXPECT_DOUBLE_EQ(same.precision, 1);
  EXPECT_DOUBLE_EQ(same.recall, 1);
  EXPECT_DOUBLE_EQ(same.f1, 1);
  const PRF wide = *ComputePrf({"a", "b", "c", "d"}, {"a", "b"});
  EXPECT_DOUBLE_EQ(wide.precision, 0.5);
  EXPECT_DOUBLE_EQ(wide.recall, 1);
  EXPECT_NEAR(wide.f1, 2.0 / 3, 1e-12);
  const PRF none = *ComputePrf({}, {"a"});
  EXPECT_EQ(none.precision + none.recall + none.f1, 0);
  EXPECT_FALSE(ComputePrf({"a"}, {}));
}

TEST(ScoreClustersTest, SessionEqualToCluster) {
  const std::vector<InterpretedSession> sessions = {Walk({"a", "b", "c"})};
  for (auto mode : {ClusterEvalMode::kEval1, ClusterEvalMode::kEval2}) {
    const FoldResult r = ScoreClusters(sessions, {{"a", "b", "c"}, {"x", "y"}}, mode);
    EXPECT_EQ(r.evaluated, 1u);
    EXPECT_DOUBLE_EQ(r.prf.f1, 1.0);
  }
}

TEST(ScoreClustersTest, Eval1TakesBestEval2Averages) {
  const std::vector<InterpretedSession> sessions = {Walk({"a", "b"})};
  const std::vector<Cluster> clusters = {{"a", "b", "c"}, {"b", "z"}, {"q"}};
  const FoldResult e1 = ScoreClusters(sessions, clusters, ClusterEvalMode::kEval1);
  const FoldResult e2 = ScoreClusters(sessions, clusters, ClusterEvalMode::kEval2);
  EXPECT_NEAR(e1.prf.f1, 0.8, 1e-12);
  EXPECT_NEAR(e2.prf.precision, (2.0 / 3 + 0.5) / 2, 1e-12);
  EXPECT_NEAR(e2.prf.recall, 0.75, 1e-12);
  EXPECT_NEAR(e2.prf.f1, (0.8 + 0.5) / 2, 1e-12);
}

TEST(ScoreClustersTest, SkipsSessionsWithoutOverlapOrConcepts) {
  const std::vector<InterpretedSession> sessions = {Walk({"m"}), InterpretedSession{}};
  const FoldResult r = ScoreClusters(sessions, {{"a"}}, ClusterEvalMode::kEval1);
  EXPECT_EQ(r.evaluated, 0u);
  EXPECT_EQ(r.skipped_no_overlap, 1u);
  EXPECT_EQ(r.skipped_empty_truth, 1u);
}

TEST(ScoreClustersTest, AmbiguousConceptsCountAsTruth) {
  const std::vector<InterpretedSession> sessions = {SessionOf({{{"a", "b"}}})};
  const FoldResult r = ScoreClusters(sessions, {{"a", "b"}}, ClusterEvalMode::kEval1);
  EXPECT_DOUBLE_EQ(r.prf.f1, 1.0);
}

TEST(FoldsTest, PartitionAndReproducible) {
  const auto folds = AssignFolds(103, 10, 5);
  EXPECT_EQ(folds, AssignFolds(103, 10, 5));
  EXPECT_NE(folds, AssignFolds(103, 10, 6));
  std::vector<std::size_t> sizes(10);
  for (auto f : folds) ++sizes.at(f);
  for (auto n : sizes) EXPECT_TRUE(n == 10 || n == 11);
}

TEST(ValidateClustersTest, ParameterErrors) {
  const std::vector<InterpretedSession> sessions(5, Walk({"a", "b"}));
  EXPECT_THROW(ValidateClusters(sessions, {}, ClusterEvalMode::kEval1, 10, 0), ParameterError);
  EXPECT_THROW(ValidateClusters(sessions, {}, ClusterEvalMode::kEval1, 1, 0), ParameterError);
}

std::vector<InterpretedSession> SynthSessions(const SynthParams &params) {
  const SynthData data = GenerateSyntheticLog(params);
  return InterpretSessions(Sessionize(data.log), data.ontology);
}

TEST(ValidateClustersTest, PlantedClustersWithoutNoise) {
  SynthParams params;
  params.cluster_sizes = {4, 5, 6};
  params.seed = 7;
  const auto sessions = SynthSessions(params);
  const EvalReport report =
      ValidateClusters(sessions, {}, ClusterEvalMode::kEval1, 10, 0);
  EXPECT_GE(report.aggregate.f1, 0.95);
  EXPECT_EQ(report.folds.size(), 10u);
  EXPECT_EQ(report.evaluated, sessions.size());
  const EvalReport eval2 =
      ValidateClusters(sessions, {}, ClusterEvalMode::kEval2, 10, 0);
  EXPECT_LE(eval2.aggregate.f1, report.aggregate.f1 + 1e-12);
}

TEST(SelectThresholdTest, SingleCandidate) {
  const std::vector<InterpretedSession> sessions(4, Walk({"a", "b"}));
  const std::vector<double> candidates = {0};
  const auto selection = SelectThreshold(sessions, candidates, {}, 2, 0);
  EXPECT_EQ(selection.threshold, 0);
  ASSERT_EQ(selection.f1_by_threshold.size(), 1u);
  EXPECT_DOUBLE_EQ(selection.f1_by_threshold[0].second, 1.0);
}

TEST(SelectThresholdTest, PruningWeakNoiseWins) {
  std::vector<InterpretedSession> sessions;
  for (int k = 0; k < 30; ++k) {
    sessions.push_back(Walk({"a1", "a2", "a3", "a4"}));
    sessions.push_back(Walk({"b1", "b2", "b3", "b4"}));
  }
  // "x" only ever co-occurs once per session with a1 or b1.
  for (int k = 0; k < 3; ++k) {
    sessions.push_back(Walk({"a1", "x"}));
    sessions.push_back(Walk({"b1", "x"}));
  }
  const std::vector<double> candidates = {0, 5};
  const auto selection = SelectThreshold(sessions, candidates, {}, 5, 1);
  const double f1_at_0 =
      ValidateClusters(sessions, {0, {}}, ClusterEvalMode::kEval1, 5, 1).aggregate.f1;
  const double f1_at_5 =
      ValidateClusters(sessions, {5, {}}, ClusterEvalMode::kEval1, 5, 1).aggregate.f1;
  EXPECT_GT(f1_at_5, f1_at_0);
  EXPECT_EQ(selection.threshold, 5);
  EXPECT_EQ(selection.f1_by_threshold[1].second, f1_at_5);
}

TEST(SelectThresholdTest, TiesGoToSmallerThreshold) {
  const std::vector<InterpretedSession> sessions(6, Walk({"a", "b"}));
  const std::vector<double> candidates = {0.5, 0.25};
  EXPECT_EQ(SelectThreshold(sessions, candidates, {}, 3, 0).threshold, 0.25);
}

TEST(EvalStrategiesTest, SlackCoversRemainder) {
  const std::vector<InterpretedSession> sessions = {Walk({"a", "b", "c"})};
  StrategyParams params;
  const EvalReport report = EvalStrategies(sessions, {{"a", "b", "c", "d"}}, params);
  EXPECT_EQ(report.evaluated, 1u);
  EXPECT_DOUBLE_EQ(report.aggregate.recall, 1.0);
  EXPECT_DOUBLE_EQ(report.aggregate.precision, 2.0 / 3);
  EXPECT_DOUBLE_EQ(report.success_rate, 1.0);
  EXPECT_EQ(report.suggested_concepts.max, 3u);
}

TEST(EvalStrategiesTest, SkipsShortAndEmptyTruth) {
  const std::vector<InterpretedSession> sessions = {Walk({"a"}), Walk({"a", "a"}),
                                                    Walk({"a", "z"})};
  const FoldResult r = ScoreStrategy(sessions, {{"a", "b"}}, StrategyParams{});
  EXPECT_EQ(r.skipped_short, 1u);
  EXPECT_EQ(r.skipped_empty_truth, 1u);
  EXPECT_EQ(r.evaluated, 1u);
  EXPECT_DOUBLE_EQ(r.prf.f1, 0.0);
  EXPECT_DOUBLE_EQ(r.success_rate, 0.0);
}

TEST(EvalStrategiesTest, TruthModes) {
  const InterpretedSession s = Walk({"a", "b", "a"});
  StrategyParams params;
  params.i = 2;
  EXPECT_FALSE(EvaluateSession(s, {{"a", "b", "c"}}, params));
  params.truth_mode = TruthMode::kIncludeObserved;
  const auto outcome = EvaluateSession(s, {{"a", "b", "c"}}, params);
  ASSERT_TRUE(outcome);
  EXPECT_EQ(outcome->truth, ConceptSet{"a"});
  EXPECT_EQ(outcome->suggestion.concepts, ConceptSet{"c"});
  EXPECT_FALSE(outcome->success);
}

TEST(EvalStrategiesTest, ZeroIRejected) {
  StrategyParams params;
  params.i = 0;
  EXPECT_THROW(ScoreStrategy({}, {}, params), ParameterError);
}

TEST(TrendTest, SingleStepEqualsEvalStrategies) {
  std::vector<InterpretedSession> sessions = {Walk({"a", "b", "c"}), Walk({"b", "d"}),
                                              Walk({"c", "a", "d", "b"})};
  const std::vector<Cluster> clusters = {{"a", "b", "c"}, {"b", "d"}};
  const auto rows = Trend(sessions, clusters, Strategy::kSlack, 1);
  ASSERT_EQ(rows.size(), 1u);
  const EvalReport report = EvalStrategies(sessions, clusters, StrategyParams{});
  EXPECT_DOUBLE_EQ(rows[0].prf.f1, report.aggregate.f1);
  EXPECT_DOUBLE_EQ(rows[0].success_rate, report.success_rate);
  EXPECT_TRUE(Trend({}, clusters, Strategy::kSlack).empty());
  EXPECT_EQ(Trend(sessions, clusters, Strategy::kSlack, 5).size(), 3u);
}

TEST(ReportTest, CsvAndJsonShapes) {
  const std::vector<InterpretedSession> sessions = {Walk({"a", "b", "c"})};
  StrategyParams params;
  params.strategy = Strategy::kSlackSelective;
  params.n_best = 2;
  const EvalReport report = EvalStrategies(sessions, {{"a", "b", "c", "d"}}, params);
  std::ostringstream csv;
  WriteReportCsv(report, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "fold,metric,value");
  EXPECT_NE(csv.str().find("all,recall,1.0\n"), std::string::npos) << csv.str();
  std::ostringstream json;
  WriteReportJson(report, json);
  EXPECT_NE(json.str().find("\"strategy\": \"slack-selective\""), std::string::npos);
  EXPECT_NE(json.str().find("\"n_best\": 2"), std::string::npos);
  std::ostringstream trend;
  WriteTrendCsv(Trend(sessions, {{"a", "b", "c", "d"}}, Strategy::kSlack), trend);
  EXPECT_EQ(trend.str().substr(0, trend.str().find('\n')),
            "i,strategy,precision,recall,f1,success_rate");
}

TEST(CoverF1Test, Basics) {
  EXPECT_DOUBLE_EQ(CoverF1({{"a", "b"}, {"c"}}, {{"c"}, {"a", "b"}}), 1.0);
  EXPECT_DOUBLE_EQ(CoverF1({}, {{"a"}}), 0.0);
  EXPECT_NEAR(CoverF1({{"a", "b", "c", "d"}}, {{"a", "b"}, {"c", "d"}}),
              (2.0 / 3 + 2.0 / 3) / 2, 1e-12);
}

}  // namespace
}  // namespace cosearch
