#include "cosearch/commands.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "cosearch/cograph.h"
#include "cosearch/communities.h"
#include "cosearch/errors.h"
#include "cosearch/logs.h"
#include "cosearch/stats.h"
#include "json.hpp"

namespace cosearch::commands {

namespace {

std::ofstream OpenOutput(const Path &path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void Close(std::ofstream &out, const Path &path) {
  out.close();
  if (!out) throw IoError("error writing " + path.string());
}

Lemmatizer LoadLemmas(const std::optional<Path> &path) {
  return path ? Lemmatizer::FromFile(*path) : Lemmatizer{};
}

std::vector<InterpretedSession> LoadInterpreted(const Path &sessions, const Path &ontology,
                                                const std::optional<Path> &lemmas) {
  const Ontology onto = LoadOntology(ontology);
  const Lemmatizer lemmatizer = LoadLemmas(lemmas);
  const auto raw = LoadSessions(sessions);
  return InterpretSessions(raw, onto, lemmatizer);
}

void WriteReports(const EvalReport &report, const Path &out,
                  const std::optional<Path> &csv) {
  auto json = OpenOutput(out);
  WriteReportJson(report, json);
  Close(json, out);
  if (csv) {
    auto file = OpenOutput(*csv);
    WriteReportCsv(report, file);
    Close(file, *csv);
  }
}

}  // namespace

void Sessionize(const SessionizeArgs &args, std::ostream &log) {
  if (args.lemmas && !args.ontology) throw ParameterError("--lemmas needs --ontology");
  std::optional<Ontology> ontology;
  if (args.ontology) ontology.emplace(LoadOntology(*args.ontology));
  const Lemmatizer lemmatizer = LoadLemmas(args.lemmas);
  SessionizeOptions options;
  options.ontology = ontology ? &*ontology : nullptr;
  if (ontology) options.lemmatizer = &lemmatizer;
  options.exclude_bots = args.exclude_bots;
  options.temp_dir = args.temp_dir;
  const SessionizeStats stats = SessionizeFile(args.log, args.out, options);

  log << "lines " << stats.lines << ", records " << stats.records << ", parse errors "
      << stats.parse_errors << ", users " << stats.users << ", sessions "
      << stats.sessions << ", kept " << stats.sessions_kept << '\n';
  for (const auto &e : stats.error_samples) log << "  " << e << '\n';
  if (args.report) {
    nlohmann::ordered_json doc = {
        {"lines", stats.lines},
        {"records", stats.records},
        {"parse_errors", stats.parse_errors},
        {"error_samples", stats.error_samples},
        {"users", stats.users},
        {"sessions", stats.sessions},
        {"sessions_kept", stats.sessions_kept},
        {"queries_kept", stats.queries_kept},
        {"flagged_users", stats.flagged_users},
        {"exclude_bots", args.exclude_bots},
    };
    auto out = OpenOutput(*args.report);
    out << doc.dump(2) << '\n';
    Close(out, *args.report);
  }
}

void BuildGraph(const BuildGraphArgs &args, std::ostream &log) {
  const auto sessions = LoadInterpreted(args.sessions, args.ontology, args.lemmas);
  const CoGraph graph = BuildCoGraph(QueryLists(sessions));
  SaveGraph(graph, args.out);
  log << "sessions " << sessions.size() << ", nodes " << graph.nodes().size()
      << ", edges " << graph.num_edges() << '\n';
}

void PruneGraph(const PruneArgs &args, std::ostream &log) {
  const GraphFile input = LoadGraph(args.graph);
  auto [pruned, report] = Prune(input.graph, args.threshold);
  SaveGraph(pruned, args.out, args.threshold);
  const Path report_path = args.report ? *args.report : Path(args.out.string() + ".report.json");
  auto out = OpenOutput(report_path);
  WritePruneReport(report, out);
  Close(out, report_path);
  log << "edges " << report.edges_before << " -> " << report.edges_after
      << ", isolated nodes " << report.isolated_nodes.size() << '\n';
}

void Detect(const DetectArgs &args, std::ostream &log) {
  const GraphFile input = LoadGraph(args.graph);
  const ClusterSet clusters = DetectCommunities(input.graph, args.copra, input.threshold);
  SaveClusters(clusters, args.out);
  const ClusterStats stats = ComputeClusterStats(clusters.clusters);
  log << "clusters " << stats.count << " (sizes " << stats.min_size << ".."
      << stats.max_size << "), iterations " << clusters.iterations << '\n';
}

void Validate(const ValidateArgs &args, std::ostream &log) {
  const auto sessions = LoadInterpreted(args.sessions, args.ontology, args.lemmas);
  PipelineParams pipeline = args.pipeline;
  if (!args.candidates.empty()) {
    const ThresholdSelection selection = SelectThreshold(
        sessions, args.candidates, pipeline.copra, args.folds, args.seed);
    pipeline.threshold = selection.threshold;
    if (args.selection) {
      auto out = OpenOutput(*args.selection);
      out << "threshold,f1\n";
      for (const auto &[t, f1] : selection.f1_by_threshold) {
        out << nlohmann::json(t).dump() << ',' << nlohmann::json(f1).dump() << '\n';
      }
      Close(out, *args.selection);
    }
    log << "selected threshold " << selection.threshold << '\n';
  }
  const EvalReport report =
      ValidateClusters(sessions, pipeline, args.mode, args.folds, args.seed);
  WriteReports(report, args.out, args.csv);
  log << ClusterEvalModeName(args.mode) << " P " << report.aggregate.precision << " R "
      << report.aggregate.recall << " F1 " << report.aggregate.f1 << " over "
      << report.evaluated << " sessions\n";
}

void Eval(const EvalArgs &args, std::ostream &log) {
  if (args.trend && !args.clusters) {
    throw ParameterError("--trend needs a fixed --clusters file");
  }
  const auto sessions = LoadInterpreted(args.sessions, args.ontology, args.lemmas);
  EvalReport report;
  std::optional<ClusterSet> clusters;
  if (args.clusters) {
    clusters = LoadClusters(*args.clusters);
    report = EvalStrategies(sessions, clusters->clusters, args.strategy);
  } else {
    report = CrossValidateStrategies(sessions, args.pipeline, args.strategy, args.folds,
                                     args.seed);
  }
  WriteReports(report, args.out, args.csv);
  log << StrategyName(args.strategy.strategy) << " S@" << args.strategy.i << " P "
      << report.aggregate.precision << " R " << report.aggregate.recall << " F1 "
      << report.aggregate.f1 << " success " << report.success_rate << " over "
      << report.evaluated << " sessions\n";

  if (args.trend) {
    auto out = OpenOutput(*args.trend);
    bool header = true;
    for (Strategy s : {Strategy::kSlack, Strategy::kSlackSelective, Strategy::kStrict}) {
      WriteTrendCsv(Trend(sessions, clusters->clusters, s, args.max_i, args.strategy.n_best),
                    out, header);
      header = false;
    }
    Close(out, *args.trend);
  }
}

void Stats(const StatsArgs &args, std::ostream &log) {
  const auto sessions = LoadSessions(args.sessions);
  const std::pair<const char *, DistributionSummary> outputs[] = {
      {"queries_per_user.csv", QueriesPerUser(sessions)},
      {"session_lengths.csv", SessionLengths(sessions)},
      {"sessions_per_user.csv", SessionsPerUser(sessions)},
  };
  for (const auto &[name, summary] : outputs) {
    const Path path = args.out_dir / name;
    auto out = OpenOutput(path);
    WriteDistributionCsv(summary, out);
    Close(out, path);
    log << name << ": n " << summary.count << ", mean " << summary.mean << ", median "
        << summary.median << ", max " << summary.max << '\n';
  }
}

void Synth(const SynthArgs &args, std::ostream &log) {
  std::filesystem::create_directories(args.out_dir);
  const Path log_path = args.out_dir / "log.tsv";
  if (args.scale_lines > 0) {
    auto out = OpenOutput(log_path);
    WriteScaleLog(out, args.scale_lines, args.params.seed);
    Close(out, log_path);
    log << "wrote " << args.scale_lines << " lines\n";
    return;
  }
  const SynthData data = GenerateSyntheticLog(args.params);
  SaveOntology(data.ontology, args.out_dir / "ontology.json");
  {
    auto out = OpenOutput(log_path);
    WriteLog(data.log, out);
    Close(out, log_path);
  }
  ClusterSet planted;
  planted.clusters = data.planted;
  planted.params.seed = args.params.seed;
  SaveClusters(planted, args.out_dir / "planted.json");
  log << "concepts " << data.ontology.size() << ", log records " << data.log.size()
      << ", planted clusters " << data.planted.size() << '\n';
}

void SuggestLoop(const SuggestArgs &args, std::istream &in, std::ostream &out) {
  const Ontology ontology = LoadOntology(args.ontology);
  const Lemmatizer lemmatizer = LoadLemmas(args.lemmas);
  const ClusterSet clusters = LoadClusters(args.clusters);

  SessionConceptSet session;
  std::size_t i = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == ":quit") break;
    if (line == ":reset") {
      session = {};
      i = 0;
      out << "session reset\n";
      continue;
    }
    if (line.empty()) continue;
    session.Extend(InterpretQuery(ontology, line, lemmatizer), args.residual);
    ++i;
    const Suggestion s = Suggest(args.strategy, clusters.clusters, session, args.n_best);
    out << "C@" << i << ": " << (session.empty() ? "(none)" : FormatSessionSet(session))
        << '\n';
    out << "clusters:";
    if (s.selected_clusters.empty()) out << " (none)";
    for (std::size_t k : s.selected_clusters) {
      out << " [" << k << ']';
      for (const auto &id : clusters.clusters[k]) out << ' ' << id;
    }
    out << "\nsuggestion:";
    if (s.concepts.empty()) out << " (none)";
    for (const auto &id : s.concepts) out << ' ' << id;
    out << '\n' << std::flush;
  }
}

}  // namespace cosearch::commands
