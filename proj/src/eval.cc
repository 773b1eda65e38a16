#include "cosearch/eval.h"

#include <algorithm>
#include <limits>

#include "cosearch/cograph.h"
#include "cosearch/errors.h"
#include "cosearch/rng.h"
#include "json.hpp"

namespace cosearch {

namespace {

std::size_t OverlapCount(const Cluster &cluster, const ConceptSet &concepts) {
  std::size_t n = 0;
  for (const auto &id : cluster) n += concepts.count(id);
  return n;
}

// Running mean/min/max of integer sizes.
class SizeAccumulator {
 public:
  void Add(std::size_t v) {
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
    sum_ += static_cast<double>(v);
    ++n_;
  }
  SizeSummary Summary() const {
    if (n_ == 0) return {};
    return {min_, sum_ / static_cast<double>(n_), max_};
  }

 private:
  std::size_t min_ = std::numeric_limits<std::size_t>::max();
  std::size_t max_ = 0;
  double sum_ = 0;
  std::size_t n_ = 0;
};

class PrfAccumulator {
 public:
  void Add(const PRF &prf) {
    p_ += prf.precision;
    r_ += prf.recall;
    f_ += prf.f1;
    ++n_;
  }
  std::size_t count() const { return n_; }
  PRF Mean() const {
    if (n_ == 0) return {};
    const double n = static_cast<double>(n_);
    return {p_ / n, r_ / n, f_ / n};
  }

 private:
  double p_ = 0, r_ = 0, f_ = 0;
  std::size_t n_ = 0;
};

enum class Skip { kNone, kShort, kEmptyTruth };

Skip Evaluate(const InterpretedSession &session,
              const std::vector<Cluster> &clusters, const StrategyParams &params,
              SessionOutcome *outcome) {
  if (session.queries.size() <= params.i) return Skip::kShort;
  SessionConceptSet observed;
  for (std::size_t k = 0; k < params.i; ++k) {
    observed.Extend(session.queries[k], params.residual);
  }
  ConceptSet truth;
  for (std::size_t k = params.i; k < session.queries.size(); ++k) {
    for (const auto &g : session.queries[k].groups) {
      truth.insert(g.concepts.begin(), g.concepts.end());
    }
  }
  if (params.truth_mode == TruthMode::kExcludeObserved) {
    for (const auto &id : observed.Flatten()) truth.erase(id);
  }
  if (truth.empty()) return Skip::kEmptyTruth;

  outcome->suggestion = Suggest(params.strategy, clusters, observed, params.n_best);
  outcome->prf = *ComputePrf(outcome->suggestion.concepts, truth);
  outcome->success = std::any_of(
      outcome->suggestion.concepts.begin(), outcome->suggestion.concepts.end(),
      [&](const ConceptId &id) { return truth.count(id) > 0; });
  outcome->observed = std::move(observed);
  outcome->truth = std::move(truth);
  return Skip::kNone;
}

EvalReport Aggregate(EvalConfig config, std::vector<FoldResult> folds) {
  EvalReport report;
  report.config = std::move(config);
  PrfAccumulator prf;
  double success = 0;
  double selected_mean = 0, suggested_mean = 0;
  std::size_t used = 0;
  SizeSummary selected{std::numeric_limits<std::size_t>::max(), 0, 0};
  SizeSummary suggested = selected;
  for (const auto &f : folds) {
    report.skipped += f.skipped_short + f.skipped_empty_truth + f.skipped_no_overlap;
    report.evaluated += f.evaluated;
    if (f.evaluated == 0) continue;
    ++used;
    prf.Add(f.prf);
    success += f.success_rate;
    selected_mean += f.selected_clusters.mean;
    suggested_mean += f.suggested_concepts.mean;
    selected.min = std::min(selected.min, f.selected_clusters.min);
    selected.max = std::max(selected.max, f.selected_clusters.max);
    suggested.min = std::min(suggested.min, f.suggested_concepts.min);
    suggested.max = std::max(suggested.max, f.suggested_concepts.max);
  }
  if (used > 0) {
    const double n = static_cast<double>(used);
    report.aggregate = prf.Mean();
    report.success_rate = success / n;
    selected.mean = selected_mean / n;
    suggested.mean = suggested_mean / n;
    report.selected_clusters = selected;
    report.suggested_concepts = suggested;
  }
  report.folds = std::move(folds);
  return report;
}

void CheckFolds(std::size_t sessions, std::size_t folds) {
  if (folds < 2) throw ParameterError("folds must be >= 2");
  if (sessions < folds) {
    throw ParameterError("need at least as many sessions as folds (" +
                         std::to_string(sessions) + " < " +
                         std::to_string(folds) + ")");
  }
}

template <typename Fn>
std::vector<FoldResult> RunFolds(std::span<const InterpretedSession> sessions,
                                 std::size_t folds, std::uint64_t seed,
                                 Fn &&score_fold) {
  const auto assignment = AssignFolds(sessions.size(), folds, seed);
  std::vector<FoldResult> results;
  for (std::size_t k = 0; k < folds; ++k) {
    std::vector<InterpretedSession> learn, test;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
      (assignment[s] == k ? test : learn).push_back(sessions[s]);
    }
    FoldResult result = score_fold(learn, test);
    result.fold = k;
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace

PRF MakePrf(double precision, double recall) {
  const double sum = precision + recall;
  return {precision, recall, sum > 0 ? 2 * precision * recall / sum : 0.0};
}

std::optional<PRF> ComputePrf(const ConceptSet &predicted, const ConceptSet &truth) {
  if (truth.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (const auto &id : predicted) hits += truth.count(id);
  const double precision =
      predicted.empty() ? 0.0
                        : static_cast<double>(hits) / static_cast<double>(predicted.size());
  const double recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  return MakePrf(precision, recall);
}

ConceptSet InterpretedSession::Concepts() const {
  ConceptSet out;
  for (const auto &q : queries) {
    for (const auto &g : q.groups) out.insert(g.concepts.begin(), g.concepts.end());
  }
  return out;
}

std::vector<InterpretedSession> InterpretSessions(std::span<const Session> sessions,
                                                  const Ontology &ontology,
                                                  const Lemmatizer &lemmatizer) {
  std::vector<InterpretedSession> out;
  out.reserve(sessions.size());
  for (const auto &s : sessions) {
    InterpretedSession interpreted;
    interpreted.queries.reserve(s.queries.size());
    for (const auto &q : s.queries) {
      interpreted.queries.push_back(InterpretQuery(ontology, q.text, lemmatizer));
    }
    out.push_back(std::move(interpreted));
  }
  return out;
}

std::vector<std::vector<QueryInterpretation>> QueryLists(
    std::span<const InterpretedSession> sessions) {
  std::vector<std::vector<QueryInterpretation>> out;
  out.reserve(sessions.size());
  for (const auto &s : sessions) out.push_back(s.queries);
  return out;
}

ClusterSet TrainClusters(std::span<const InterpretedSession> sessions,
                         const PipelineParams &params) {
  CoGraph graph;
  for (const auto &s : sessions) graph.Merge(BuildLocalGraph(s.queries));
  auto [pruned, report] = Prune(graph, params.threshold);
  return DetectCommunities(pruned, params.copra, params.threshold);
}

std::vector<std::size_t> AssignFolds(std::size_t n, std::size_t folds,
                                     std::uint64_t seed) {
  if (folds == 0) throw ParameterError("folds must be >= 1");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(&order);
  std::vector<std::size_t> fold(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % folds;
  return fold;
}

std::string_view ClusterEvalModeName(ClusterEvalMode mode) {
  return mode == ClusterEvalMode::kEval1 ? "eval1" : "eval2";
}

ClusterEvalMode ParseClusterEvalMode(std::string_view name) {
  if (name == "eval1") return ClusterEvalMode::kEval1;
  if (name == "eval2") return ClusterEvalMode::kEval2;
  throw ParameterError("unknown cluster evaluation mode '" + std::string(name) + "'");
}

std::string_view TruthModeName(TruthMode mode) {
  return mode == TruthMode::kExcludeObserved ? "exclude-observed" : "include-observed";
}

TruthMode ParseTruthMode(std::string_view name) {
  if (name == "exclude-observed") return TruthMode::kExcludeObserved;
  if (name == "include-observed") return TruthMode::kIncludeObserved;
  throw ParameterError("unknown truth mode '" + std::string(name) + "'");
}

FoldResult ScoreClusters(std::span<const InterpretedSession> sessions,
                         const std::vector<Cluster> &clusters,
                         ClusterEvalMode mode) {
  FoldResult result;
  result.clusters = clusters.size();
  PrfAccumulator mean;
  for (const auto &session : sessions) {
    const ConceptSet truth = session.Concepts();
    if (truth.empty()) {
      ++result.skipped_empty_truth;
      continue;
    }
    std::optional<PRF> best;
    std::size_t best_size = 0;
    PrfAccumulator overlapping;
    for (const auto &cluster : clusters) {
      if (OverlapCount(cluster, truth) == 0) continue;
      const ConceptSet predicted(cluster.begin(), cluster.end());
      const PRF prf = *ComputePrf(predicted, truth);
      overlapping.Add(prf);
      const bool better =
          !best || prf.f1 > best->f1 ||
          (prf.f1 == best->f1 &&
           (prf.recall > best->recall ||
            (prf.recall == best->recall && cluster.size() < best_size)));
      if (better) {
        best = prf;
        best_size = cluster.size();
      }
    }
    if (!best) {
      ++result.skipped_no_overlap;
      continue;
    }
    mean.Add(mode == ClusterEvalMode::kEval1 ? *best : overlapping.Mean());
  }
  result.evaluated = mean.count();
  result.prf = mean.Mean();
  return result;
}

EvalReport ValidateClusters(std::span<const InterpretedSession> sessions,
                            const PipelineParams &params, ClusterEvalMode mode,
                            std::size_t folds, std::uint64_t seed) {
  CheckFolds(sessions.size(), folds);
  auto results = RunFolds(sessions, folds, seed, [&](const auto &learn, const auto &test) {
    const ClusterSet clusters = TrainClusters(learn, params);
    return ScoreClusters(test, clusters.clusters, mode);
  });
  EvalConfig config;
  config.kind = "validate-clusters";
  config.mode = std::string(ClusterEvalModeName(mode));
  config.threshold = params.threshold;
  config.v = params.copra.v;
  config.seed = seed;
  config.folds = folds;
  return Aggregate(std::move(config), std::move(results));
}

ThresholdSelection SelectThreshold(std::span<const InterpretedSession> sessions,
                                   std::span<const double> candidates,
                                   const CopraParams &copra, std::size_t folds,
                                   std::uint64_t seed) {
  if (candidates.empty()) throw ParameterError("no candidate thresholds");
  ThresholdSelection selection;
  double best_f1 = -1;
  for (double t : candidates) {
    PipelineParams params{t, copra};
    const double f1 =
        ValidateClusters(sessions, params, ClusterEvalMode::kEval1, folds, seed)
            .aggregate.f1;
    selection.f1_by_threshold.emplace_back(t, f1);
    if (f1 > best_f1 || (f1 == best_f1 && t < selection.threshold)) {
      best_f1 = f1;
      selection.threshold = t;
    }
  }
  return selection;
}

std::optional<SessionOutcome> EvaluateSession(const InterpretedSession &session,
                                              const std::vector<Cluster> &clusters,
                                              const StrategyParams &params) {
  SessionOutcome outcome;
  if (Evaluate(session, clusters, params, &outcome) != Skip::kNone) return std::nullopt;
  return outcome;
}

FoldResult ScoreStrategy(std::span<const InterpretedSession> sessions,
                         const std::vector<Cluster> &clusters,
                         const StrategyParams &params) {
  if (params.i == 0) throw ParameterError("i must be >= 1");
  if (params.n_best == 0) throw ParameterError("n_best must be >= 1");
  FoldResult result;
  result.clusters = clusters.size();
  PrfAccumulator mean;
  SizeAccumulator selected, suggested;
  std::size_t successes = 0;
  for (const auto &session : sessions) {
    SessionOutcome outcome;
    switch (Evaluate(session, clusters, params, &outcome)) {
      case Skip::kShort:
        ++result.skipped_short;
        continue;
      case Skip::kEmptyTruth:
        ++result.skipped_empty_truth;
        continue;
      case Skip::kNone:
        break;
    }
    mean.Add(outcome.prf);
    successes += outcome.success ? 1 : 0;
    selected.Add(outcome.suggestion.selected_clusters.size());
    suggested.Add(outcome.suggestion.concepts.size());
  }
  result.evaluated = mean.count();
  result.prf = mean.Mean();
  result.success_rate =
      result.evaluated ? static_cast<double>(successes) / static_cast<double>(result.evaluated)
                       : 0.0;
  result.selected_clusters = selected.Summary();
  result.suggested_concepts = suggested.Summary();
  return result;
}

namespace {

EvalConfig StrategyConfig(const StrategyParams &params) {
  EvalConfig config;
  config.kind = "eval-strategies";
  config.strategy = std::string(StrategyName(params.strategy));
  config.i = params.i;
  if (params.strategy == Strategy::kSlackSelective) config.n_best = params.n_best;
  config.truth_mode = std::string(TruthModeName(params.truth_mode));
  return config;
}

}  // namespace

EvalReport EvalStrategies(std::span<const InterpretedSession> sessions,
                          const std::vector<Cluster> &clusters,
                          const StrategyParams &params) {
  std::vector<FoldResult> folds{ScoreStrategy(sessions, clusters, params)};
  return Aggregate(StrategyConfig(params), std::move(folds));
}

EvalReport CrossValidateStrategies(std::span<const InterpretedSession> sessions,
                                   const PipelineParams &pipeline,
                                   const StrategyParams &params,
                                   std::size_t folds, std::uint64_t seed) {
  CheckFolds(sessions.size(), folds);
  auto results = RunFolds(sessions, folds, seed, [&](const auto &learn, const auto &test) {
    const ClusterSet clusters = TrainClusters(learn, pipeline);
    return ScoreStrategy(test, clusters.clusters, params);
  });
  EvalConfig config = StrategyConfig(params);
  config.threshold = pipeline.threshold;
  config.v = pipeline.copra.v;
  config.seed = seed;
  config.folds = folds;
  return Aggregate(std::move(config), std::move(results));
}

std::vector<TrendRow> Trend(std::span<const InterpretedSession> sessions,
                            const std::vector<Cluster> &clusters, Strategy strategy,
                            std::size_t max_i, std::size_t n_best) {
  std::vector<TrendRow> rows;
  for (std::size_t i = 1; i <= max_i; ++i) {
    StrategyParams params;
    params.strategy = strategy;
    params.i = i;
    params.n_best = n_best;
    const FoldResult r = ScoreStrategy(sessions, clusters, params);
    if (r.evaluated == 0) continue;
    rows.push_back(TrendRow{i, strategy, r.prf, r.success_rate, r.evaluated});
  }
  return rows;
}

namespace {

nlohmann::ordered_json SizeJson(const SizeSummary &s) {
  return {{"min", s.min}, {"mean", s.mean}, {"max", s.max}};
}

nlohmann::ordered_json PrfJson(const PRF &p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

void WriteReportJson(const EvalReport &report, std::ostream &out) {
  using ojson = nlohmann::ordered_json;
  const EvalConfig &c = report.config;
  ojson config;
  config["kind"] = c.kind;
  if (c.mode) config["mode"] = *c.mode;
  if (c.strategy) config["strategy"] = *c.strategy;
  if (c.i) config["i"] = *c.i;
  if (c.n_best) config["n_best"] = *c.n_best;
  if (c.truth_mode) config["truth_mode"] = *c.truth_mode;
  if (c.threshold) config["threshold"] = *c.threshold;
  if (c.v) config["v"] = *c.v;
  if (c.seed) config["seed"] = *c.seed;
  if (c.folds) config["folds"] = *c.folds;

  const bool strategies = c.kind == "eval-strategies";
  ojson doc;
  doc["config"] = std::move(config);
  ojson aggregate = PrfJson(report.aggregate);
  if (strategies) {
    aggregate["success_rate"] = report.success_rate;
    aggregate["selected_clusters"] = SizeJson(report.selected_clusters);
    aggregate["suggested_concepts"] = SizeJson(report.suggested_concepts);
  }
  aggregate["sessions_evaluated"] = report.evaluated;
  aggregate["sessions_skipped"] = report.skipped;
  doc["aggregate"] = std::move(aggregate);
  ojson folds = ojson::array();
  for (const auto &f : report.folds) {
    ojson fold = {{"fold", f.fold}};
    fold.update(PrfJson(f.prf));
    if (strategies) {
      fold["success_rate"] = f.success_rate;
      fold["selected_clusters"] = SizeJson(f.selected_clusters);
      fold["suggested_concepts"] = SizeJson(f.suggested_concepts);
    }
    fold["clusters"] = f.clusters;
    fold["evaluated"] = f.evaluated;
    fold["skipped_short"] = f.skipped_short;
    fold["skipped_empty_truth"] = f.skipped_empty_truth;
    fold["skipped_no_overlap"] = f.skipped_no_overlap;
    folds.push_back(std::move(fold));
  }
  doc["folds"] = std::move(folds);
  out << doc.dump(2) << '\n';
}

void WriteReportCsv(const EvalReport &report, std::ostream &out) {
  const bool strategies = report.config.kind == "eval-strategies";
  out << "fold,metric,value\n";
  auto row = [&out](const std::string &fold, const char *metric, double value) {
    out << fold << ',' << metric << ',' << nlohmann::json(value).dump() << '\n';
  };
  auto rows = [&](const std::string &fold, const PRF &prf, double success,
                  std::size_t evaluated) {
    row(fold, "precision", prf.precision);
    row(fold, "recall", prf.recall);
    row(fold, "f1", prf.f1);
    if (strategies) row(fold, "success_rate", success);
    row(fold, "evaluated", static_cast<double>(evaluated));
  };
  for (const auto &f : report.folds) {
    rows(std::to_string(f.fold), f.prf, f.success_rate, f.evaluated);
  }
  rows("all", report.aggregate, report.success_rate, report.evaluated);
}

void WriteTrendCsv(const std::vector<TrendRow> &rows, std::ostream &out, bool header) {
  if (header) out << "i,strategy,precision,recall,f1,success_rate\n";
  for (const auto &r : rows) {
    out << r.i << ',' << StrategyName(r.strategy) << ','
        << nlohmann::json(r.prf.precision).dump() << ','
        << nlohmann::json(r.prf.recall).dump() << ','
        << nlohmann::json(r.prf.f1).dump() << ','
        << nlohmann::json(r.success_rate).dump() << '\n';
  }
}

double CoverF1(const std::vector<Cluster> &detected,
               const std::vector<Cluster> &reference) {
  if (detected.empty() || reference.empty()) return 0.0;
  auto set_f1 = [](const Cluster &a, const Cluster &b) {
    const ConceptSet sa(a.begin(), a.end());
    std::size_t common = 0;
    for (const auto &id : ConceptSet(b.begin(), b.end())) common += sa.count(id);
    const double denom = static_cast<double>(sa.size() + ConceptSet(b.begin(), b.end()).size());
    return denom > 0 ? 2.0 * static_cast<double>(common) / denom : 0.0;
  };
  auto directed = [&](const std::vector<Cluster> &from, const std::vector<Cluster> &to) {
    double sum = 0;
    for (const auto &a : from) {
      double best = 0;
      for (const auto &b : to) best = std::max(best, set_f1(a, b));
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(reference, detected) + directed(detected, reference));
}

}  // namespace cosearch
