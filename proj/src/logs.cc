#include "cosearch/logs.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <queue>
#include <sstream>
#include <unistd.h>

#include "cosearch/errors.h"

namespace cosearch {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool IsHeader(std::string_view line) {
  return line.rfind("AnonID\t", 0) == 0;
}

struct UserIdCompare {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    return UserIdLess(a, b);
  }
};

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Scratch directory removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(std::filesystem::path parent) {
    static std::atomic<unsigned> counter{0};
    if (parent.empty()) parent = std::filesystem::temp_directory_path();
    path_ = parent / ("cosearch-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct UserLog {
  std::vector<Query> queries;  // file order
  Timestamp first = 0;
  Timestamp last = 0;
};

void SortStable(std::vector<Query> *queries) {
  std::stable_sort(queries->begin(), queries->end(),
                   [](const Query &a, const Query &b) { return a.time < b.time; });
}

}  // namespace

bool UserIdLess(std::string_view a, std::string_view b) {
  auto numeric = [](std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  const bool na = numeric(a), nb = numeric(b);
  if (na != nb) return na;  // numeric ids first
  if (na) {
    auto strip = [](std::string_view s) {
      auto nz = s.find_first_not_of('0');
      return nz == std::string_view::npos ? std::string_view("0") : s.substr(nz);
    };
    auto sa = strip(a), sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

std::optional<LogRecord> ParseLogLine(std::string_view line, std::string *error) {
  auto fail = [error](std::string why) -> std::optional<LogRecord> {
    if (error) *error = std::move(why);
    return std::nullopt;
  };
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto fields = SplitTabs(line);
  if (fields.size() != 5) {
    return fail("expected 5 tab-separated fields, found " +
                std::to_string(fields.size()));
  }
  LogRecord record;
  if (fields[0].empty()) return fail("empty AnonID");
  record.anon_id = std::string(fields[0]);
  record.query = std::string(fields[1]);
  auto time = ParseTimestamp(fields[2]);
  if (!time) return fail("bad QueryTime '" + std::string(fields[2]) + "'");
  record.query_time = *time;
  if (!fields[3].empty()) {
    double rank = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(),
                                     fields[3].data() + fields[3].size(), rank);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() ||
        !(rank > 0)) {
      return fail("bad ItemRank '" + std::string(fields[3]) + "'");
    }
    record.item_rank = rank;
  }
  if (!fields[4].empty()) record.click_url = std::string(fields[4]);
  return record;
}

LogReader::LogReader(std::istream &in) : in_(in) {}

void LogReader::Reject(const std::string &why) {
  ++error_count_;
  if (errors_.size() < kMaxErrorSamples) {
    errors_.push_back("line " + std::to_string(line_no_) + ": " + why);
  }
}

bool LogReader::Next(LogRecord *record) {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (line_.empty() || (line_.size() == 1 && line_[0] == '\r')) continue;
    if (line_no_ == 1 && IsHeader(line_)) continue;
    std::string error;
    if (auto parsed = ParseLogLine(line_, &error)) {
      *record = std::move(*parsed);
      return true;
    }
    Reject(error);
  }
  return false;
}

std::vector<LogRecord> ParseLog(std::istream &in, std::size_t *errors) {
  LogReader reader(in);
  std::vector<LogRecord> records;
  LogRecord record;
  while (reader.Next(&record)) records.push_back(std::move(record));
  if (errors) *errors = reader.error_count();
  return records;
}

std::vector<Session> SessionizeUser(const std::string &user,
                                    std::vector<Query> queries) {
  std::vector<Session> sessions;
  const Query *previous = nullptr;
  for (auto &q : queries) {
    if (previous && q.time == previous->time && q.text == previous->text) {
      continue;  // click-through repeat of the same query row
    }
    if (!previous || q.time - previous->time > kSessionGapSeconds) {
      sessions.push_back(Session{user, sessions.size(), {}});
    }
    sessions.back().queries.push_back(std::move(q));
    previous = &sessions.back().queries.back();
  }
  return sessions;
}

std::vector<Session> Sessionize(const std::vector<LogRecord> &records) {
  std::map<std::string, std::vector<Query>, UserIdCompare> by_user;
  for (const auto &r : records) {
    by_user[r.anon_id].push_back(Query{r.query, r.query_time});
  }
  std::vector<Session> sessions;
  for (auto &[user, queries] : by_user) {
    SortStable(&queries);
    for (auto &s : SessionizeUser(user, std::move(queries))) {
      sessions.push_back(std::move(s));
    }
  }
  return sessions;
}

bool IsRelevant(const Session &session, const Ontology &ontology,
                const Lemmatizer &lemmatizer) {
  return std::any_of(session.queries.begin(), session.queries.end(),
                     [&](const Query &q) {
                       return !InterpretQuery(ontology, q.text, lemmatizer).empty();
                     });
}

std::vector<Session> FilterRelevant(std::vector<Session> sessions,
                                    const Ontology &ontology,
                                    const Lemmatizer &lemmatizer) {
  std::vector<Session> kept;
  for (auto &s : sessions) {
    if (IsRelevant(s, ontology, lemmatizer)) kept.push_back(std::move(s));
  }
  return kept;
}

bool FlagBot(const std::vector<Timestamp> &user_times,
             const BotHeuristic &heuristic) {
  if (user_times.empty()) return false;
  auto [lo, hi] = std::minmax_element(user_times.begin(), user_times.end());
  return heuristic.IsBot(user_times.size(), *lo, *hi);
}

void WriteSession(const Session &session, std::ostream &out) {
  for (const auto &q : session.queries) {
    out << session.user << '\t' << session.ordinal << '\t'
        << FormatTimestamp(q.time) << '\t' << q.text << '\n';
  }
}

void WriteSessions(const std::vector<Session> &sessions, std::ostream &out) {
  for (const auto &s : sessions) WriteSession(s, out);
}

std::vector<Session> ReadSessions(std::istream &in) {
  std::vector<Session> sessions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    const std::string where = "session file line " + std::to_string(line_no);
    if (fields.size() < 4) throw FormatError(where + ": expected 4 fields");
    std::size_t ordinal = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(), ordinal);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw FormatError(where + ": bad session ordinal");
    }
    auto time = ParseTimestamp(fields[2]);
    if (!time) throw FormatError(where + ": bad query time");
    // The query is everything after the third tab.
    std::size_t text_start = fields[0].size() + fields[1].size() +
                             fields[2].size() + 3;
    std::string text = line.substr(text_start);
    if (sessions.empty() || sessions.back().user != fields[0] ||
        sessions.back().ordinal != ordinal) {
      sessions.push_back(Session{std::string(fields[0]), ordinal, {}});
    }
    sessions.back().queries.push_back(Query{std::move(text), *time});
  }
  return sessions;
}

std::vector<Session> LoadSessions(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open session file " + path.string());
  return ReadSessions(in);
}

void SaveSessions(const std::vector<Session> &sessions,
                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write session file " + path.string());
  WriteSessions(sessions, out);
}

SessionizeStats SessionizeStream(std::istream &log, std::ostream &out,
                                 const SessionizeOptions &options) {
  if (options.partitions == 0) throw ParameterError("partitions must be >= 1");
  if (options.ontology == nullptr && options.lemmatizer != nullptr) {
    throw ParameterError("lemmatizer given without an ontology");
  }
  const Lemmatizer default_lemmatizer;
  const Lemmatizer &lemmatizer =
      options.lemmatizer ? *options.lemmatizer : default_lemmatizer;

  SessionizeStats stats;
  ScratchDir scratch(options.temp_dir);
  const std::size_t n = options.partitions;
  auto spill_path = [&](std::size_t p) {
    return scratch.path() / ("records-" + std::to_string(p) + ".tsv");
  };
  auto sorted_path = [&](std::size_t p) {
    return scratch.path() / ("sessions-" + std::to_string(p) + ".tsv");
  };

  // Pass 1: spill records, partitioned by user.
  {
    std::vector<std::ofstream> spills;
    spills.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
      spills.emplace_back(spill_path(p), std::ios::binary);
      if (!spills.back()) throw IoError("cannot create " + spill_path(p).string());
    }
    LogReader reader(log);
    LogRecord r;
    while (reader.Next(&r)) {
      ++stats.records;
      auto &spill = spills[Fnv1a(r.anon_id) % n];
      spill << r.anon_id << '\t' << r.query_time << '\t' << r.query << '\n';
    }
    stats.lines = reader.lines_read();
    stats.parse_errors = reader.error_count();
    stats.error_samples = reader.error_samples();
  }

  // Pass 2: sessionize each partition in memory, users in output order.
  for (std::size_t p = 0; p < n; ++p) {
    std::map<std::string, UserLog, UserIdCompare> users;
    {
      std::ifstream in(spill_path(p), std::ios::binary);
      std::string line;
      while (std::getline(in, line)) {
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        std::string user = line.substr(0, t1);
        Timestamp time = std::stoll(line.substr(t1 + 1, t2 - t1 - 1));
        auto &u = users[user];
        if (u.queries.empty()) {
          u.first = u.last = time;
        } else {
          u.first = std::min(u.first, time);
          u.last = std::max(u.last, time);
        }
        u.queries.push_back(Query{line.substr(t2 + 1), time});
      }
    }
    std::filesystem::remove(spill_path(p));
    std::ofstream sorted(sorted_path(p), std::ios::binary);
    for (auto &[user, log] : users) {
      ++stats.users;
      const bool bot = options.bots.IsBot(log.queries.size(), log.first, log.last);
      if (bot) stats.flagged_users.push_back(user);
      SortStable(&log.queries);
      auto sessions = SessionizeUser(user, std::move(log.queries));
      stats.sessions += sessions.size();
      if (bot && options.exclude_bots) continue;
      for (const auto &s : sessions) {
        if (options.ontology && !IsRelevant(s, *options.ontology, lemmatizer)) {
          continue;
        }
        ++stats.sessions_kept;
        stats.queries_kept += s.queries.size();
        WriteSession(s, sorted);
      }
    }
  }
  std::sort(stats.flagged_users.begin(), stats.flagged_users.end(),
            [](const std::string &a, const std::string &b) { return UserIdLess(a, b); });

  // Pass 3: k-way merge of the per-partition outputs by user id.
  struct Head {
    std::string user;
    std::string line;
    std::size_t partition;
  };
  auto later = [](const Head &a, const Head &b) {
    return UserIdLess(b.user, a.user);
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
  std::vector<std::unique_ptr<std::ifstream>> readers;
  auto advance = [&](std::size_t p) {
    std::string line;
    if (std::getline(*readers[p], line)) {
      std::string user = line.substr(0, line.find('\t'));
      heap.push(Head{std::move(user), std::move(line), p});
    }
  };
  for (std::size_t p = 0; p < n; ++p) {
    readers.push_back(std::make_unique<std::ifstream>(sorted_path(p), std::ios::binary));
    advance(p);
  }
  while (!heap.empty()) {
    Head head = heap.top();
    heap.pop();
    // Users are disjoint across partitions, so line-wise merging keeps each
    // user's lines contiguous.
    out << head.line << '\n';
    advance(head.partition);
  }
  if (!out) throw IoError("failed writing session output");
  return stats;
}

SessionizeStats SessionizeFile(const std::filesystem::path &log_path,
                               const std::filesystem::path &out_path,
                               const SessionizeOptions &options) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw IoError("cannot open log file " + log_path.string());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write session file " + out_path.string());
  return SessionizeStream(in, out, options);
}

}  // namespace cosearch
