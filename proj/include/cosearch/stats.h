#ifndef COSEARCH_STATS_H_
#define COSEARCH_STATS_H_

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "cosearch/logs.h"

namespace cosearch {

struct DistributionSummary {
  std::size_t count = 0;  // population size
  double min = 0;
  double max = 0;
  double mean = 0;
  double median = 0;  // mean of the two middle values for even counts
  double stddev = 0;  // population standard deviation
  std::vector<std::pair<std::size_t, std::size_t>> histogram;  // (value, count), ascending
};

DistributionSummary Summarize(const std::vector<std::size_t> &values);

// Recomputes the scalar fields from `histogram` alone.
DistributionSummary SummarizeHistogram(
    const std::vector<std::pair<std::size_t, std::size_t>> &histogram);

// Queries (after click-through collapsing) per user.
DistributionSummary QueriesPerUser(const std::vector<Session> &sessions);
DistributionSummary SessionLengths(const std::vector<Session> &sessions);
DistributionSummary SessionsPerUser(const std::vector<Session> &sessions);

// "x,count" rows, a blank line, then a "statistic,value" block.
void WriteDistributionCsv(const DistributionSummary &summary, std::ostream &out);

}  // namespace cosearch

#endif  // COSEARCH_STATS_H_
