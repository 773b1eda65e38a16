#ifndef COSEARCH_EVAL_H_
#define COSEARCH_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cosearch/communities.h"
#include "cosearch/interpret.h"
#include "cosearch/logs.h"
#include "cosearch/suggest.h"

namespace cosearch {

struct PRF {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// f1 = 2PR/(P+R), or 0 when P+R = 0.
PRF MakePrf(double precision, double recall);

// nullopt when `truth` is empty (nothing to score). An empty prediction
// against a non-empty truth scores zero.
std::optional<PRF> ComputePrf(const ConceptSet &predicted, const ConceptSet &truth);

// A session's queries after interpretation, in order.
struct InterpretedSession {
  std::vector<QueryInterpretation> queries;

  // Every concept referenced anywhere in the session.
  ConceptSet Concepts() const;
};

std::vector<InterpretedSession> InterpretSessions(
    std::span<const Session> sessions, const Ontology &ontology,
    const Lemmatizer &lemmatizer = {});

std::vector<std::vector<QueryInterpretation>> QueryLists(
    std::span<const InterpretedSession> sessions);

// graph -> prune -> communities.
struct PipelineParams {
  double threshold = 0;
  CopraParams copra;
};

ClusterSet TrainClusters(std::span<const InterpretedSession> sessions,
                         const PipelineParams &params);

// Seeded fold of each session index; fold k holds every index whose
// shuffled position is congruent to k modulo `folds`.
std::vector<std::size_t> AssignFolds(std::size_t n, std::size_t folds,
                                     std::uint64_t seed);

enum class ClusterEvalMode {
  kEval1,  // the best cluster per session (max F1, then recall, then size)
  kEval2,  // mean over every cluster sharing a concept with the session
};

std::string_view ClusterEvalModeName(ClusterEvalMode mode);
ClusterEvalMode ParseClusterEvalMode(std::string_view name);

// Whether concepts already observed in C@i stay in the ground truth.
enum class TruthMode { kExcludeObserved, kIncludeObserved };

std::string_view TruthModeName(TruthMode mode);
TruthMode ParseTruthMode(std::string_view name);

struct SizeSummary {
  std::size_t min = 0;
  double mean = 0;
  std::size_t max = 0;
};

struct FoldResult {
  std::size_t fold = 0;
  PRF prf;                  // mean over evaluated sessions
  double success_rate = 0;  // strategy evaluation only
  std::size_t evaluated = 0;
  std::size_t skipped_short = 0;        // no query after position i
  std::size_t skipped_empty_truth = 0;  // nothing left to predict
  std::size_t skipped_no_overlap = 0;   // cluster validation only
  std::size_t clusters = 0;             // size of the cluster set used
  SizeSummary selected_clusters;
  SizeSummary suggested_concepts;
};

struct EvalConfig {
  std::string kind;  // "validate-clusters" or "eval-strategies"
  std::optional<std::string> mode;
  std::optional<double> threshold;
  std::optional<std::size_t> v;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy;
  std::optional<std::size_t> i;
  std::optional<std::size_t> n_best;
  std::optional<std::size_t> folds;
  std::optional<std::string> truth_mode;
};

struct EvalReport {
  EvalConfig config;
  std::vector<FoldResult> folds;
  // Mean of the fold means, over folds that evaluated at least one session.
  PRF aggregate;
  double success_rate = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  SizeSummary selected_clusters;
  SizeSummary suggested_concepts;
};

// Scores a fixed cluster list against each session's full concept set.
FoldResult ScoreClusters(std::span<const InterpretedSession> sessions,
                         const std::vector<Cluster> &clusters,
                         ClusterEvalMode mode);

// k-fold cluster validation: clusters are retrained on each learning split
// and scored on the held-out sessions. Throws ParameterError when
// folds < 2 or there are fewer sessions than folds.
EvalReport ValidateClusters(std::span<const InterpretedSession> sessions,
                            const PipelineParams &params, ClusterEvalMode mode,
                            std::size_t folds, std::uint64_t seed);

struct ThresholdSelection {
  double threshold = 0;
  std::vector<std::pair<double, double>> f1_by_threshold;  // input order
};

// Picks the candidate with the best Eval1 F1; ties go to the smaller
// threshold.
ThresholdSelection SelectThreshold(std::span<const InterpretedSession> sessions,
                                   std::span<const double> candidates,
                                   const CopraParams &copra, std::size_t folds,
                                   std::uint64_t seed);

struct StrategyParams {
  Strategy strategy = Strategy::kSlack;
  std::size_t i = 1;  // observed queries
  std::size_t n_best = 1;
  TruthMode truth_mode = TruthMode::kExcludeObserved;
  ResidualMode residual = ResidualMode::kPromote;
};

// Per-session outcome of one strategy run, exposed for property tests.
struct SessionOutcome {
  SessionConceptSet observed;  // C@i
  ConceptSet truth;
  Suggestion suggestion;
  PRF prf;
  bool success = false;
};

// nullopt when the session is too short or its truth is empty.
std::optional<SessionOutcome> EvaluateSession(const InterpretedSession &session,
                                              const std::vector<Cluster> &clusters,
                                              const StrategyParams &params);

FoldResult ScoreStrategy(std::span<const InterpretedSession> sessions,
                         const std::vector<Cluster> &clusters,
                         const StrategyParams &params);

// One pass over every session with a fixed cluster set.
EvalReport EvalStrategies(std::span<const InterpretedSession> sessions,
                          const std::vector<Cluster> &clusters,
                          const StrategyParams &params);

// k-fold variant: one cluster set per fold, trained on the learning split.
EvalReport CrossValidateStrategies(std::span<const InterpretedSession> sessions,
                                   const PipelineParams &pipeline,
                                   const StrategyParams &params,
                                   std::size_t folds, std::uint64_t seed);

struct TrendRow {
  std::size_t i = 0;
  Strategy strategy = Strategy::kSlack;
  PRF prf;
  double success_rate = 0;
  std::size_t evaluated = 0;
};

// EvalStrategies for i = 1..max_i (sessions exhausted early give no row).
std::vector<TrendRow> Trend(std::span<const InterpretedSession> sessions,
                            const std::vector<Cluster> &clusters,
                            Strategy strategy, std::size_t max_i = 5,
                            std::size_t n_best = 1);

void WriteReportJson(const EvalReport &report, std::ostream &out);
// fold,metric,value rows; fold "all" carries the aggregate.
void WriteReportCsv(const EvalReport &report, std::ostream &out);
// i,strategy,precision,recall,f1,success_rate
void WriteTrendCsv(const std::vector<TrendRow> &rows, std::ostream &out,
                   bool header = true);

// Overlapping-cover similarity: mean of (average best-match F1 of each
// reference set) and (average best-match F1 of each detected set).
double CoverF1(const std::vector<Cluster> &detected,
               const std::vector<Cluster> &reference);

}  // namespace cosearch

#endif  // COSEARCH_EVAL_H_
