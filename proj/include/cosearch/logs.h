#ifndef COSEARCH_LOGS_H_
#define COSEARCH_LOGS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cosearch/interpret.h"
#include "cosearch/lemmatizer.h"
#include "cosearch/ontology.h"
#include "cosearch/timestamp.h"

namespace cosearch {

// Queries further apart than this start a new session.
inline constexpr Timestamp kSessionGapSeconds = 1800;

// One line of an AOL-format query log.
struct LogRecord {
  std::string anon_id;
  std::string query;
  Timestamp query_time = 0;
  std::optional<double> item_rank;
  std::optional<std::string> click_url;
};

// Streams records out of a tab-separated log with the header
// "AnonID Query QueryTime ItemRank ClickURL". Malformed lines are counted
// and skipped; the first few are kept for reporting.
class LogReader {
 public:
  explicit LogReader(std::istream &in);

  // False at end of input.
  bool Next(LogRecord *record);

  std::size_t lines_read() const { return line_no_; }
  std::size_t error_count() const { return error_count_; }
  const std::vector<std::string> &error_samples() const { return errors_; }

  static constexpr std::size_t kMaxErrorSamples = 20;

 private:
  void Reject(const std::string &why);

  std::istream &in_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t error_count_ = 0;
  std::vector<std::string> errors_;
};

// Parses one data line (no trailing newline). nullopt with `error` filled
// when the line is malformed.
std::optional<LogRecord> ParseLogLine(std::string_view line,
                                      std::string *error = nullptr);

std::vector<LogRecord> ParseLog(std::istream &in, std::size_t *errors = nullptr);

struct Query {
  std::string text;
  Timestamp time = 0;

  bool operator==(const Query &) const = default;
};

struct Session {
  std::string user;
  std::size_t ordinal = 0;  // position among the user's sessions, from 0
  std::vector<Query> queries;

  bool operator==(const Session &) const = default;
};

// Numeric ids sort first and compare numerically; other ids compare
// lexicographically.
bool UserIdLess(std::string_view a, std::string_view b);

// Splits one user's time-ordered queries into sessions. Consecutive
// identical (text, time) pairs collapse to one query.
std::vector<Session> SessionizeUser(const std::string &user,
                                    std::vector<Query> queries);

// Groups records by user (stable time sort; ties keep input order) and
// sessionizes each user. Output is ordered by UserIdLess, then ordinal.
std::vector<Session> Sessionize(const std::vector<LogRecord> &records);

bool IsRelevant(const Session &session, const Ontology &ontology,
                const Lemmatizer &lemmatizer = {});

// Keeps whole sessions with at least one query that matches a concept.
std::vector<Session> FilterRelevant(std::vector<Session> sessions,
                                    const Ontology &ontology,
                                    const Lemmatizer &lemmatizer = {});

// Bot screening over one user's records inside one log window (one input
// file). Counts raw records, click-through repeats included.
struct BotHeuristic {
  std::size_t max_queries = 20000;
  Timestamp max_duration = 6 * 24 * 3600;

  bool IsBot(std::size_t record_count, Timestamp first, Timestamp last) const {
    return record_count > max_queries || last - first > max_duration;
  }
};

// `user_times` are the user's record timestamps in any order.
bool FlagBot(const std::vector<Timestamp> &user_times,
             const BotHeuristic &heuristic = {});

// Session file: one line per query,
// user_id<TAB>session_ordinal<TAB>query_time<TAB>raw_query.
void WriteSessions(const std::vector<Session> &sessions, std::ostream &out);
void WriteSession(const Session &session, std::ostream &out);
std::vector<Session> ReadSessions(std::istream &in);
std::vector<Session> LoadSessions(const std::filesystem::path &path);
void SaveSessions(const std::vector<Session> &sessions,
                  const std::filesystem::path &path);

struct SessionizeOptions {
  // Drop sessions without an ontology match; requires `ontology`.
  const Ontology *ontology = nullptr;
  const Lemmatizer *lemmatizer = nullptr;
  bool exclude_bots = false;
  BotHeuristic bots;
  // Users are hash-partitioned into this many spill files so memory stays
  // bounded by the largest partition rather than the whole log.
  std::size_t partitions = 64;
  std::filesystem::path temp_dir;  // empty: system temp directory
};

struct SessionizeStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t parse_errors = 0;
  std::vector<std::string> error_samples;
  std::size_t users = 0;
  std::size_t sessions = 0;
  std::size_t sessions_kept = 0;
  std::size_t queries_kept = 0;
  std::vector<std::string> flagged_users;
};

// Streaming log -> session file. Output is byte-identical to
// WriteSessions(Sessionize(...)) followed by the same filtering.
SessionizeStats SessionizeStream(std::istream &log, std::ostream &out,
                                 const SessionizeOptions &options = {});
SessionizeStats SessionizeFile(const std::filesystem::path &log_path,
                               const std::filesystem::path &out_path,
                               const SessionizeOptions &options = {});

}  // namespace cosearch

#endif  // COSEARCH_LOGS_H_
