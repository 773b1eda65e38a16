#include "cosearch/logs.h"

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace cosearch {
namespace {

using testing::CityOntology;

const char kTable1[] =
    "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n"
    "67910\tlas vegas sports teams\t2006-04-30 18:14:57\t1.0\thttp://www.vegas.com\n"
    "67910\tlas vegas transportation\t2006-04-30 18:19:59\t1.0\thttp://www.vegas.com\n"
    "67910\tmccarran international airport\t2006-04-30 18:22:30\t3.0\thttp://en.wikipedia.org\n"
    "67910\tmccarran international airport\t2006-04-30 18:22:30\t1.0\thttp://www.mccarran.com\n"
    "67910\thub airports in the united states\t2006-04-30 18:25:28\t9.0\thttp://www.airportcodes.us\n"
    "67910\thub airports in the united states\t2006-04-30 18:25:28\t9.0\thttp://www.airportcodes.us\n"
    "67910\tblack las vegas itineraries\t2006-04-30 18:30:03\t\t\n"
    "67910\teducational facilities in las vegas\t2006-04-30 18:30:53\t\t\n"
    "67910\tmedical facilities in las vegas nv\t2006-04-30 18:31:44\t1.0\thttp://lasvegas.citysearch.com\n"
    "67910\tmedical facilities in las vegas nv\t2006-04-30 18:31:44\t3.0\thttp://www.lasvegasnevada.gov\n"
    "67910\tmedical facilities in las vegas nv\t2006-04-30 18:31:44\t9.0\thttp://www.lasvegasrelocating.com\n"
    "67910\tunique architecture in las vegas nv\t2006-04-30 18:35:02\t10.0\thttp://www.guggenheim.org\n"
    "67910\tunique architecture in las vegas nv\t2006-04-30 18:35:02\t2.0\thttp://travel.yahoo.com\n"
    "67910\tarchitecture in las vegas nv\t2006-04-30 18:40:28\t4.0\thttp://lasvegas.citysearch.com\n"
    "67910\tarchitecture in las vegas nv\t2006-04-30 18:40:28\t2.0\thttp://www.library.unlv.edu\n"
    "67910\tarchitecture in las vegas nv\t2006-04-30 18:40:28\t3.0\thttp://local.yahoo.com\n"
    "67910\treligious sites in lasvegas\t2006-04-30 18:50:35\t1.0\thttp://www.lasvegas.worldweb.com\n"
    "67910\treligious sites in lasvegas\t2006-04-30 18:50:35\t2.0\thttp://www.lasvegas.worldweb.com\n"
    "67910\treligious sites in lasvegas\t2006-04-30 18:56:09\t12.0\thttp://travel2.nytimes.com\n"
    "67910\treligious sites in lasvegas\t2006-04-30 18:56:09\t12.0\thttp://travel2.nytimes.com\n";

Timestamp At(const char *text) { return *ParseTimestamp(text); }

std::vector<LogRecord> Records(
    std::initializer_list<std::tuple<const char *, const char *, const char *>> rows) {
  std::vector<LogRecord> out;
  for (const auto &[user, query, time] : rows) {
    LogRecord r;
    r.anon_id = user;
    r.query = query;
    r.query_time = At(time);
    out.push_back(r);
  }
  return out;
}

TEST(TimestampTest, ParsesAndFormats) {
  EXPECT_EQ(At("1970-01-01 00:00:00"), 0);
  EXPECT_EQ(At("2006-03-01 00:00:00"), 1141171200);
  EXPECT_EQ(FormatTimestamp(At("2006-04-30 18:19:59")), "2006-04-30 18:19:59");
  EXPECT_FALSE(ParseTimestamp("2006-02-30 00:00:00"));
  EXPECT_FALSE(ParseTimestamp("2006-04-30 24:00:00"));
  EXPECT_FALSE(ParseTimestamp("2006-04-30T18:19:59"));
  EXPECT_FALSE(ParseTimestamp("2006-4-30 18:19:59"));
}

TEST(ParseLogTest, FullRecord) {
  const auto r = ParseLogLine(
      "67910\tlas vegas transportation\t2006-04-30 18:19:59\t1.0\thttp://www.vegas.com");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->anon_id, "67910");
  EXPECT_EQ(r->query, "las vegas transportation");
  EXPECT_EQ(r->query_time, At("2006-04-30 18:19:59"));
  EXPECT_EQ(r->item_rank, 1.0);
  EXPECT_EQ(r->click_url, "http://www.vegas.com");
}

TEST(ParseLogTest, EmptyTrailingFieldsAreAbsent) {
  const auto r = ParseLogLine("67910\tblack las vegas itineraries\t2006-04-30 18:30:03\t\t");
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->item_rank);
  EXPECT_FALSE(r->click_url);
}

TEST(ParseLogTest, MalformedLinesAreCountedAndSkipped) {
  std::istringstream in(
      "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n"
      "1\tthree columns\t2006-04-30 18:30:03\n"
      "1\tbad time\t2006-04-31 18:30:03\t\t\n"
      "\tno user\t2006-04-30 18:30:03\t\t\n"
      "1\tbad rank\t2006-04-30 18:30:03\tx\t\n"
      "1\tgood\t2006-04-30 18:30:03\t\t\n");
  LogReader reader(in);
  LogRecord r;
  std::vector<std::string> queries;
  while (reader.Next(&r)) queries.push_back(r.query);
  EXPECT_EQ(queries, std::vector<std::string>{"good"});
  EXPECT_EQ(reader.error_count(), 4u);
  ASSERT_EQ(reader.error_samples().size(), 4u);
  EXPECT_NE(reader.error_samples()[0].find("line 2"), std::string::npos)
      << reader.error_samples()[0];
}

TEST(SessionizeTest, Table1IsOneSession) {
  std::istringstream in(kTable1);
  std::size_t errors = 0;
  const auto records = ParseLog(in, &errors);
  EXPECT_EQ(errors, 0u);
  EXPECT_EQ(records.size(), 20u);
  const auto sessions = Sessionize(records);
  ASSERT_EQ(sessions.size(), 1u);
  // Click-through rows collapse on (text, time); the last query was issued
  // twice, at 18:50:35 and 18:56:09.
  EXPECT_EQ(sessions[0].queries.size(), 11u);
  std::set<std::string> texts;
  for (const auto &q : sessions[0].queries) texts.insert(q.text);
  EXPECT_EQ(texts.size(), 10u);
}

TEST(SessionizeTest, GapBoundary) {
  auto split = Sessionize(Records({{"1", "a", "2006-04-30 10:00:00"},
                                   {"1", "b", "2006-04-30 10:30:01"}}));
  EXPECT_EQ(split.size(), 2u);
  EXPECT_EQ(split[1].ordinal, 1u);
  auto same = Sessionize(Records({{"1", "a", "2006-04-30 10:00:00"},
                                  {"1", "b", "2006-04-30 10:30:00"}}));
  EXPECT_EQ(same.size(), 1u);
}

TEST(SessionizeTest, InterleavedUsersAreGrouped) {
  const auto sessions = Sessionize(Records({{"20", "x", "2006-04-30 10:05:00"},
                                            {"3", "a", "2006-04-30 10:00:00"},
                                            {"20", "y", "2006-04-30 10:01:00"},
                                            {"3", "b", "2006-04-30 10:02:00"}}));
  ASSERT_EQ(sessions.size(), 2u);
  EXPECT_EQ(sessions[0].user, "3");
  EXPECT_EQ(sessions[1].user, "20");
  EXPECT_EQ(sessions[1].queries[0].text, "y");
}

TEST(SessionizeTest, TiesKeepFileOrder) {
  const auto sessions = Sessionize(Records({{"1", "second", "2006-04-30 10:00:00"},
                                            {"1", "first", "2006-04-30 09:00:00"},
                                            {"1", "third", "2006-04-30 10:00:00"}}));
  ASSERT_EQ(sessions.size(), 2u);
  ASSERT_EQ(sessions[1].queries.size(), 2u);
  EXPECT_EQ(sessions[1].queries[0].text, "second");
  EXPECT_EQ(sessions[1].queries[1].text, "third");
}

TEST(UserIdTest, NumericBeforeText) {
  EXPECT_TRUE(UserIdLess("9", "10"));
  EXPECT_TRUE(UserIdLess("10", "abc"));
  EXPECT_FALSE(UserIdLess("abc", "10"));
  EXPECT_TRUE(UserIdLess("7", "007") != UserIdLess("007", "7"));
}

TEST(FilterTest, KeepsSessionsWithAMatch) {
  const Ontology onto = CityOntology();
  auto make = [](std::vector<std::string> texts) {
    Session s{"1", 0, {}};
    for (auto &t : texts) s.queries.push_back({t, 0});
    return s;
  };
  const auto kept = FilterRelevant({make({"public school and transportation"}), make({"qwerty"}),
                                    make({"qwerty", "missouri child support"})},
                                   onto);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].queries.size(), 1u);
  EXPECT_EQ(kept[1].queries.size(), 2u);
}

TEST(BotTest, Heuristic) {
  const BotHeuristic bots;
  EXPECT_TRUE(bots.IsBot(25000, 0, 3600));
  EXPECT_FALSE(bots.IsBot(3, 0, 600));
  std::vector<Timestamp> week;
  for (int i = 0; i < 10; ++i) week.push_back(i * 7 * 86400 / 9);
  EXPECT_TRUE(FlagBot(week));
  EXPECT_FALSE(FlagBot({0, 60, 120}));
}

TEST(SessionFileTest, WriteAndRead) {
  std::istringstream in(kTable1);
  const auto sessions = Sessionize(ParseLog(in));
  std::ostringstream out;
  WriteSessions(sessions, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "67910\t0\t2006-04-30 18:14:57\tlas vegas sports teams");
  std::istringstream back(out.str());
  EXPECT_EQ(ReadSessions(back), sessions);
}

TEST(SessionizeStreamTest, MatchesInMemorySessionize) {
  std::string log = "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n";
  // Users interleaved and out of time order, several sessions each.
  for (int k = 0; k < 400; ++k) {
    const int user = (k * 37) % 23;
    const int minute = (k * 53) % 900;
    log += std::to_string(user) + "\tquery " + std::to_string(k % 7) + "\t2006-04-30 " +
           (minute / 60 < 10 ? "0" : "") + std::to_string(minute / 60) + ":" +
           (minute % 60 < 10 ? "0" : "") + std::to_string(minute % 60) + ":00\t\t\n";
  }
  log += "bad line\n";
  std::istringstream a(log);
  std::ostringstream expected;
  WriteSessions(Sessionize(ParseLog(a)), expected);

  testing::TempDir dir;
  SessionizeOptions options;
  options.partitions = 5;
  options.temp_dir = dir.path();
  std::istringstream b(log);
  std::ostringstream streamed;
  const auto stats = SessionizeStream(b, streamed, options);
  EXPECT_EQ(streamed.str(), expected.str());
  EXPECT_EQ(stats.records, 400u);
  EXPECT_EQ(stats.parse_errors, 1u);
  EXPECT_EQ(stats.users, 23u);
}

TEST(SessionizeStreamTest, ExcludesBotsAndIrrelevantSessions) {
  const Ontology onto = CityOntology();
  std::string log = "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n";
  log += "1\tlibrary hours\t2006-03-01 10:00:00\t\t\n";
  log += "1\tqwerty\t2006-03-01 12:00:00\t\t\n";
  log += "2\tlibrary\t2006-03-01 10:00:00\t\t\n";
  log += "2\tlibrary\t2006-03-09 10:00:00\t\t\n";
  SessionizeOptions options;
  options.ontology = &onto;
  options.exclude_bots = true;
  std::istringstream in(log);
  std::ostringstream out;
  const auto stats = SessionizeStream(in, out, options);
  EXPECT_EQ(out.str(), "1\t0\t2006-03-01 10:00:00\tlibrary hours\n");
  EXPECT_EQ(stats.flagged_users, std::vector<std::string>{"2"});
  EXPECT_EQ(stats.sessions, 4u);
  EXPECT_EQ(stats.sessions_kept, 1u);
}

}  // namespace
}  // namespace cosearch
