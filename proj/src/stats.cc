#include "cosearch/stats.h"

#include <cmath>
#include <map>
#include <string>

#include "json.hpp"

namespace cosearch {

DistributionSummary SummarizeHistogram(
    const std::vector<std::pair<std::size_t, std::size_t>> &histogram) {
  DistributionSummary s;
  s.histogram = histogram;
  double sum = 0;
  for (const auto &[value, n] : histogram) {
    s.count += n;
    sum += static_cast<double>(value) * static_cast<double>(n);
  }
  if (s.count == 0) return s;
  s.min = static_cast<double>(histogram.front().first);
  s.max = static_cast<double>(histogram.back().first);
  s.mean = sum / static_cast<double>(s.count);
  double squares = 0;
  for (const auto &[value, n] : histogram) {
    const double d = static_cast<double>(value) - s.mean;
    squares += d * d * static_cast<double>(n);
  }
  s.stddev = std::sqrt(squares / static_cast<double>(s.count));

  // k-th smallest value, 0-based.
  auto nth = [&histogram](std::size_t k) {
    for (const auto &[value, n] : histogram) {
      if (k < n) return static_cast<double>(value);
      k -= n;
    }
    return static_cast<double>(histogram.back().first);
  };
  s.median = s.count % 2 ? nth(s.count / 2)
                         : (nth(s.count / 2 - 1) + nth(s.count / 2)) / 2;
  return s;
}

DistributionSummary Summarize(const std::vector<std::size_t> &values) {
  std::map<std::size_t, std::size_t> counts;
  for (auto v : values) ++counts[v];
  return SummarizeHistogram({counts.begin(), counts.end()});
}

namespace {

template <typename Fn>
DistributionSummary PerUser(const std::vector<Session> &sessions, Fn &&amount) {
  std::map<std::string, std::size_t> totals;
  for (const auto &s : sessions) totals[s.user] += amount(s);
  std::vector<std::size_t> values;
  values.reserve(totals.size());
  for (const auto &[user, n] : totals) values.push_back(n);
  return Summarize(values);
}

}  // namespace

DistributionSummary QueriesPerUser(const std::vector<Session> &sessions) {
  return PerUser(sessions, [](const Session &s) { return s.queries.size(); });
}

DistributionSummary SessionLengths(const std::vector<Session> &sessions) {
  std::vector<std::size_t> values;
  values.reserve(sessions.size());
  for (const auto &s : sessions) values.push_back(s.queries.size());
  return Summarize(values);
}

DistributionSummary SessionsPerUser(const std::vector<Session> &sessions) {
  return PerUser(sessions, [](const Session &) { return std::size_t{1}; });
}

void WriteDistributionCsv(const DistributionSummary &s, std::ostream &out) {
  out << "x,count\n";
  for (const auto &[value, n] : s.histogram) out << value << ',' << n << '\n';
  auto num = [](double v) { return nlohmann::json(v).dump(); };
  out << "\nstatistic,value\n"
      << "count," << s.count << '\n'
      << "min," << num(s.min) << '\n'
      << "max," << num(s.max) << '\n'
      << "mean," << num(s.mean) << '\n'
      << "median," << num(s.median) << '\n'
      << "stddev," << num(s.stddev) << '\n'
      << "stddev_kind,population\n";
}

}  // namespace cosearch
