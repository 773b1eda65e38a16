#ifndef COSEARCH_SYNTH_H_
#define COSEARCH_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "cosearch/logs.h"
#include "cosearch/ontology.h"
#include "cosearch/suggest.h"

namespace cosearch {

// Planted-cluster log generator used as a test oracle.
struct SynthParams {
  std::vector<std::size_t> cluster_sizes{4, 4};
  std::size_t sessions_per_cluster = 200;
  // Queries per session; 0 means the size of the session's cluster. When
  // min_queries_per_session is set, lengths are drawn uniformly from
  // [min_queries_per_session, queries_per_session].
  std::size_t queries_per_session = 0;
  std::size_t min_queries_per_session = 0;
  // Probability that a query names its concept through a keyword shared by
  // ambiguity_width concepts instead of the concept's own lemma.
  double ambiguity_rate = 0;
  std::size_t ambiguity_width = 3;
  // Probability that a query names a uniformly drawn concept instead.
  double noise_rate = 0;
  // Probability of each extra click-through row repeating a query.
  double click_rate = 0.3;
  std::size_t sessions_per_user = 3;
  std::uint64_t seed = 0;
};

struct SynthData {
  Ontology ontology;
  std::vector<LogRecord> log;    // ordered by user, then time
  std::vector<Cluster> planted;  // canonical order
};

// Throws ParameterError on empty or zero-sized clusters, rates outside
// [0, 1] or a zero session count.
SynthData GenerateSyntheticLog(const SynthParams &params);

// AOL layout with header; item rank and click URL are left empty when
// absent.
void WriteLog(const std::vector<LogRecord> &records, std::ostream &out);

// Large log of meaningless queries for throughput and memory tests:
// `lines` data lines after the header, users contiguous, times ascending.
void WriteScaleLog(std::ostream &out, std::size_t lines, std::uint64_t seed);

}  // namespace cosearch

#endif  // COSEARCH_SYNTH_H_
