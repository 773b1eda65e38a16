#ifndef COSEARCH_COMMANDS_H_
#define COSEARCH_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cosearch/eval.h"
#include "cosearch/interpret.h"
#include "cosearch/suggest.h"
#include "cosearch/synth.h"

// Subcommand bodies behind the cosearch executable. Each reads and writes
// files, reports progress counters on `log` and throws cosearch::Error on
// failure.
namespace cosearch::commands {

inline constexpr std::uint64_t kDefaultSeed = 0;

using Path = std::filesystem::path;

struct SessionizeArgs {
  Path log;
  Path out;
  std::optional<Path> ontology;  // drop sessions with no concept match
  std::optional<Path> lemmas;
  bool exclude_bots = false;
  std::optional<Path> report;  // JSON counters
  Path temp_dir;
};
void Sessionize(const SessionizeArgs &args, std::ostream &log);

struct BuildGraphArgs {
  Path sessions;
  Path ontology;
  std::optional<Path> lemmas;
  Path out;
};
void BuildGraph(const BuildGraphArgs &args, std::ostream &log);

struct PruneArgs {
  Path graph;
  double threshold = 0;
  Path out;
  std::optional<Path> report;  // default: <out>.report.json
};
void PruneGraph(const PruneArgs &args, std::ostream &log);

struct DetectArgs {
  Path graph;
  CopraParams copra;
  Path out;
};
void Detect(const DetectArgs &args, std::ostream &log);

struct ValidateArgs {
  Path sessions;
  Path ontology;
  std::optional<Path> lemmas;
  PipelineParams pipeline;
  ClusterEvalMode mode = ClusterEvalMode::kEval1;
  std::size_t folds = 10;
  std::uint64_t seed = kDefaultSeed;
  // When set, the threshold is chosen among these first and the table is
  // written to `selection` as threshold,f1 rows.
  std::vector<double> candidates;
  std::optional<Path> selection;
  Path out;
  std::optional<Path> csv;
};
void Validate(const ValidateArgs &args, std::ostream &log);

struct EvalArgs {
  Path sessions;
  Path ontology;
  std::optional<Path> lemmas;
  // Fixed clusters; without them clusters are retrained per fold.
  std::optional<Path> clusters;
  PipelineParams pipeline;
  StrategyParams strategy;
  std::size_t folds = 10;
  std::uint64_t seed = kDefaultSeed;
  Path out;
  std::optional<Path> csv;
  // i = 1..max_i for every strategy; needs `clusters`.
  std::optional<Path> trend;
  std::size_t max_i = 5;
};
void Eval(const EvalArgs &args, std::ostream &log);

struct StatsArgs {
  Path sessions;
  Path out_dir;
};
void Stats(const StatsArgs &args, std::ostream &log);

struct SynthArgs {
  SynthParams params;
  Path out_dir;
  std::size_t scale_lines = 0;  // nonzero: only write a scale log
};
void Synth(const SynthArgs &args, std::ostream &log);

struct SuggestArgs {
  Path ontology;
  std::optional<Path> lemmas;
  Path clusters;
  Strategy strategy = Strategy::kSlack;
  std::size_t n_best = 1;
  ResidualMode residual = ResidualMode::kPromote;
};
// Line-oriented loop: each input line is a query of the current session;
// ":reset" starts a new session and ":quit" ends the loop.
void SuggestLoop(const SuggestArgs &args, std::istream &in, std::ostream &out);

}  // namespace cosearch::commands

#endif  // COSEARCH_COMMANDS_H_
