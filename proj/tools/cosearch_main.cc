// cosearch: query-log concept co-occurrence pipeline.
//
//   cosearch synth --out-dir data --clusters 4,5,6 --seed 7
//   cosearch sessionize --log data/log.tsv --ontology data/ontology.json --out s.tsv
//   cosearch build-graph --sessions s.tsv --ontology data/ontology.json --out g.tsv
//   cosearch prune --graph g.tsv --threshold 0 --out p.tsv
//   cosearch detect --graph p.tsv --v 2 --out clusters.json
//   cosearch suggest --ontology data/ontology.json --clusters clusters.json
//
// Failures print "error<TAB>kind<TAB>message" on stderr and exit nonzero.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cosearch/commands.h"
#include "cosearch/errors.h"

namespace {

namespace cmd = cosearch::commands;

int Fail(const std::string &kind, const std::string &message, int code) {
  std::cerr << "error\t" << kind << '\t' << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Concept co-occurrence clustering and suggestion over query logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cosearch 1.0");

  std::string strategy = "slack", mode = "eval1", truth = "exclude-observed";
  std::string residual = "promote";

  cmd::SessionizeArgs sessionize;
  auto *s = app.add_subcommand("sessionize", "Split an AOL-format log into sessions");
  s->add_option("--log", sessionize.log, "Query log")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sessionize.out, "Session file")->required();
  s->add_option("--ontology", sessionize.ontology, "Keep only sessions matching it")
      ->check(CLI::ExistingFile);
  s->add_option("--lemmas", sessionize.lemmas, "Lemma dictionary")->check(CLI::ExistingFile);
  s->add_flag("--exclude-bots", sessionize.exclude_bots, "Drop users flagged as bots");
  s->add_option("--report", sessionize.report, "JSON counters");
  s->add_option("--temp-dir", sessionize.temp_dir, "Spill directory");

  cmd::BuildGraphArgs build;
  auto *b = app.add_subcommand("build-graph", "Build the concept co-occurrence graph");
  b->add_option("--sessions", build.sessions)->required()->check(CLI::ExistingFile);
  b->add_option("--ontology", build.ontology)->required()->check(CLI::ExistingFile);
  b->add_option("--lemmas", build.lemmas)->check(CLI::ExistingFile);
  b->add_option("--out", build.out)->required();

  cmd::PruneArgs prune;
  auto *p = app.add_subcommand("prune", "Drop edges lighter than a threshold");
  p->add_option("--graph", prune.graph)->required()->check(CLI::ExistingFile);
  p->add_option("--threshold", prune.threshold)->required();
  p->add_option("--out", prune.out)->required();
  p->add_option("--report", prune.report, "Default: <out>.report.json");

  cmd::DetectArgs detect;
  auto *d = app.add_subcommand("detect", "Find overlapping concept clusters");
  d->add_option("--graph", detect.graph)->required()->check(CLI::ExistingFile);
  d->add_option("--v", detect.copra.v, "Max labels per vertex")->capture_default_str();
  d->add_option("--seed", detect.copra.seed)->capture_default_str();
  d->add_option("--max-iters", detect.copra.max_iters)->capture_default_str();
  d->add_option("--out", detect.out)->required();

  cmd::ValidateArgs validate;
  auto *v = app.add_subcommand("validate-clusters", "Cross-validate the clustering");
  v->add_option("--sessions", validate.sessions)->required()->check(CLI::ExistingFile);
  v->add_option("--ontology", validate.ontology)->required()->check(CLI::ExistingFile);
  v->add_option("--lemmas", validate.lemmas)->check(CLI::ExistingFile);
  v->add_option("--threshold", validate.pipeline.threshold)->capture_default_str();
  v->add_option("--v", validate.pipeline.copra.v)->capture_default_str();
  v->add_option("--max-iters", validate.pipeline.copra.max_iters)->capture_default_str();
  v->add_option("--seed", validate.seed)->capture_default_str();
  v->add_option("--folds", validate.folds)->capture_default_str();
  v->add_option("--mode", mode, "eval1 or eval2")->capture_default_str();
  v->add_option("--candidates", validate.candidates, "Thresholds to choose from")
      ->delimiter(',');
  v->add_option("--selection", validate.selection, "threshold,f1 table");
  v->add_option("--out", validate.out, "JSON report")->required();
  v->add_option("--csv", validate.csv, "fold,metric,value report");

  cmd::EvalArgs eval;
  auto *e = app.add_subcommand("eval-strategies", "Score cluster-selection strategies");
  e->add_option("--sessions", eval.sessions)->required()->check(CLI::ExistingFile);
  e->add_option("--ontology", eval.ontology)->required()->check(CLI::ExistingFile);
  e->add_option("--lemmas", eval.lemmas)->check(CLI::ExistingFile);
  e->add_option("--clusters", eval.clusters, "Fixed clusters (else per-fold training)")
      ->check(CLI::ExistingFile);
  e->add_option("--strategy", strategy, "slack, slack-selective or strict")
      ->capture_default_str();
  e->add_option("--i", eval.strategy.i, "Observed queries")->capture_default_str();
  e->add_option("--n-best", eval.strategy.n_best)->capture_default_str();
  e->add_option("--truth-mode", truth, "exclude-observed or include-observed")
      ->capture_default_str();
  e->add_option("--residual", residual, "promote or keep")->capture_default_str();
  e->add_option("--threshold", eval.pipeline.threshold)->capture_default_str();
  e->add_option("--v", eval.pipeline.copra.v)->capture_default_str();
  e->add_option("--seed", eval.seed)->capture_default_str();
  e->add_option("--folds", eval.folds)->capture_default_str();
  e->add_option("--out", eval.out, "JSON report")->required();
  e->add_option("--csv", eval.csv, "fold,metric,value report");
  e->add_option("--trend", eval.trend, "Trend CSV over i = 1..max-i");
  e->add_option("--max-i", eval.max_i)->capture_default_str();

  cmd::StatsArgs stats;
  auto *st = app.add_subcommand("stats", "Session and user distributions");
  st->add_option("--sessions", stats.sessions)->required()->check(CLI::ExistingFile);
  st->add_option("--out-dir", stats.out_dir)->required();

  cmd::SynthArgs synth;
  auto *sy = app.add_subcommand("synth", "Generate a planted-cluster ontology and log");
  sy->add_option("--out-dir", synth.out_dir)->required();
  sy->add_option("--clusters", synth.params.cluster_sizes, "Planted cluster sizes")
      ->delimiter(',');
  sy->add_option("--sessions-per-cluster", synth.params.sessions_per_cluster)
      ->capture_default_str();
  sy->add_option("--queries-per-session", synth.params.queries_per_session,
                 "0: cluster size")
      ->capture_default_str();
  sy->add_option("--min-queries", synth.params.min_queries_per_session)
      ->capture_default_str();
  sy->add_option("--ambiguity", synth.params.ambiguity_rate)->capture_default_str();
  sy->add_option("--ambiguity-width", synth.params.ambiguity_width)->capture_default_str();
  sy->add_option("--noise", synth.params.noise_rate)->capture_default_str();
  sy->add_option("--click-rate", synth.params.click_rate)->capture_default_str();
  sy->add_option("--seed", synth.params.seed)->capture_default_str();
  sy->add_option("--scale-lines", synth.scale_lines, "Write only a large filler log");

  cmd::SuggestArgs suggest;
  auto *sg = app.add_subcommand("suggest", "Interactive suggestions, one query per line");
  sg->add_option("--ontology", suggest.ontology)->required()->check(CLI::ExistingFile);
  sg->add_option("--lemmas", suggest.lemmas)->check(CLI::ExistingFile);
  sg->add_option("--clusters", suggest.clusters)->required()->check(CLI::ExistingFile);
  sg->add_option("--strategy", strategy)->capture_default_str();
  sg->add_option("--n-best", suggest.n_best)->capture_default_str();
  sg->add_option("--residual", residual)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion &ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError &ex) {
    return Fail("usage", ex.what(), 2);
  }

  try {
    auto residual_mode = [&residual] {
      if (residual == "promote") return cosearch::ResidualMode::kPromote;
      if (residual == "keep") return cosearch::ResidualMode::kKeep;
      throw cosearch::ParameterError("unknown residual mode '" + residual + "'");
    };
    if (*s) {
      cmd::Sessionize(sessionize, std::cerr);
    } else if (*b) {
      cmd::BuildGraph(build, std::cerr);
    } else if (*p) {
      cmd::PruneGraph(prune, std::cerr);
    } else if (*d) {
      cmd::Detect(detect, std::cerr);
    } else if (*v) {
      validate.pipeline.copra.seed = validate.seed;
      validate.mode = cosearch::ParseClusterEvalMode(mode);
      cmd::Validate(validate, std::cerr);
    } else if (*e) {
      eval.pipeline.copra.seed = eval.seed;
      eval.strategy.strategy = cosearch::ParseStrategy(strategy);
      eval.strategy.truth_mode = cosearch::ParseTruthMode(truth);
      eval.strategy.residual = residual_mode();
      cmd::Eval(eval, std::cerr);
    } else if (*st) {
      cmd::Stats(stats, std::cerr);
    } else if (*sy) {
      cmd::Synth(synth, std::cerr);
    } else if (*sg) {
      suggest.strategy = cosearch::ParseStrategy(strategy);
      suggest.residual = residual_mode();
      cmd::SuggestLoop(suggest, std::cin, std::cout);
    }
  } catch (const cosearch::Error &ex) {
    return Fail(ex.kind(), ex.what(), 1);
  } catch (const std::filesystem::filesystem_error &ex) {
    return Fail("io", ex.what(), 1);
  } catch (const std::exception &ex) {
    return Fail("internal", ex.what(), 1);
  }
  return 0;
}
