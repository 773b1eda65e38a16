#include "cosearch/synth.h"

#include <algorithm>
#include <string>

#include "cosearch/communities.h"
#include "cosearch/errors.h"
#include "cosearch/rng.h"
#include "cosearch/timestamp.h"

namespace cosearch {

namespace {

constexpr Timestamp kLogStart = 1141171200;  // 2006-03-01 00:00:00

const char *const kFillers[] = {"best", "local", "near me", "info", "cheap", "guide to"};

std::string ConceptIdOf(std::size_t cluster, std::size_t member) {
  return "k" + std::to_string(cluster) + "_" + std::to_string(member);
}

std::string LemmaOf(std::size_t cluster, std::size_t member) {
  return "c" + std::to_string(cluster) + "m" + std::to_string(member);
}

void Validate(const SynthParams &p) {
  if (p.cluster_sizes.empty()) throw ParameterError("no planted clusters");
  for (auto size : p.cluster_sizes) {
    if (size == 0) throw ParameterError("planted cluster of size 0");
  }
  if (p.sessions_per_cluster == 0) throw ParameterError("sessions_per_cluster must be > 0");
  if (p.sessions_per_user == 0) throw ParameterError("sessions_per_user must be > 0");
  if (p.ambiguity_width < 2) throw ParameterError("ambiguity_width must be >= 2");
  for (double rate : {p.ambiguity_rate, p.noise_rate, p.click_rate}) {
    if (!(rate >= 0 && rate <= 1)) throw ParameterError("rates must lie in [0, 1]");
  }
  if (p.min_queries_per_session > 0 && p.queries_per_session > 0 &&
      p.min_queries_per_session > p.queries_per_session) {
    throw ParameterError("min_queries_per_session exceeds queries_per_session");
  }
}

struct PlannedSession {
  std::size_t cluster;
  std::vector<std::string> queries;
};

}  // namespace

SynthData GenerateSyntheticLog(const SynthParams &params) {
  Validate(params);
  Rng rng(params.seed);

  // Concepts, cluster by cluster.
  struct Member {
    std::size_t cluster, index;
  };
  std::vector<Member> members;
  std::vector<Cluster> planted;
  for (std::size_t c = 0; c < params.cluster_sizes.size(); ++c) {
    Cluster cluster;
    for (std::size_t m = 0; m < params.cluster_sizes[c]; ++m) {
      members.push_back({c, m});
      cluster.push_back(ConceptIdOf(c, m));
    }
    planted.push_back(std::move(cluster));
  }

  // Shared keywords: a seeded shuffle of all concepts cut into groups of
  // ambiguity_width; a leftover single concept joins the last group.
  std::vector<std::size_t> order(members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(&order);
  std::vector<std::size_t> group_of(members.size(), SIZE_MAX);
  std::size_t groups = 0;
  if (members.size() >= 2) {
    for (std::size_t pos = 0; pos < order.size(); pos += params.ambiguity_width) {
      const std::size_t left = order.size() - pos;
      const std::size_t g = (left == 1) ? groups - 1 : groups++;
      for (std::size_t k = pos; k < std::min(order.size(), pos + params.ambiguity_width); ++k) {
        group_of[order[k]] = g;
      }
    }
  }

  std::vector<Concept> concepts;
  std::vector<std::size_t> first_member(params.cluster_sizes.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto [c, m] = members[i];
    if (m == 0) first_member[c] = i;
    Concept concept_entry;
    concept_entry.id = ConceptIdOf(c, m);
    concept_entry.label = "Topic " + std::to_string(c) + " item " + std::to_string(m);
    concept_entry.lemma = LemmaOf(c, m);
    if (group_of[i] != SIZE_MAX) {
      concept_entry.keywords.push_back("amb" + std::to_string(group_of[i]));
    }
    concepts.push_back(std::move(concept_entry));
  }

  auto phrase = [&](std::size_t concept_index) {
    std::string text;
    if (rng.Bernoulli(0.5)) {
      text = std::string(kFillers[rng.Uniform(std::size(kFillers))]) + " ";
    }
    if (group_of[concept_index] != SIZE_MAX && rng.Bernoulli(params.ambiguity_rate)) {
      text += "amb" + std::to_string(group_of[concept_index]);
    } else {
      text += concepts[concept_index].lemma;
    }
    return text;
  };

  // Sessions walk a random permutation of their cluster, wrapping around.
  std::vector<PlannedSession> sessions;
  for (std::size_t c = 0; c < params.cluster_sizes.size(); ++c) {
    const std::size_t size = params.cluster_sizes[c];
    for (std::size_t s = 0; s < params.sessions_per_cluster; ++s) {
      std::size_t length = params.queries_per_session ? params.queries_per_session : size;
      if (params.min_queries_per_session > 0 && params.min_queries_per_session < length) {
        length = params.min_queries_per_session +
                 rng.Uniform(length - params.min_queries_per_session + 1);
      }
      std::vector<std::size_t> walk(size);
      for (std::size_t m = 0; m < size; ++m) walk[m] = first_member[c] + m;
      rng.Shuffle(&walk);
      PlannedSession session{c, {}};
      for (std::size_t q = 0; q < length; ++q) {
        std::size_t target = walk[q % size];
        if (rng.Bernoulli(params.noise_rate)) target = rng.Uniform(members.size());
        session.queries.push_back(phrase(target));
      }
      sessions.push_back(std::move(session));
    }
  }
  std::vector<std::size_t> session_order(sessions.size());
  for (std::size_t i = 0; i < sessions.size(); ++i) session_order[i] = i;
  rng.Shuffle(&session_order);

  // Users own consecutive runs of the shuffled sessions.
  std::vector<LogRecord> log;
  const std::size_t users =
      (sessions.size() + params.sessions_per_user - 1) / params.sessions_per_user;
  for (std::size_t u = 0; u < users; ++u) {
    const std::string user = std::to_string(1000 + u);
    Timestamp t = kLogStart + static_cast<Timestamp>(rng.Uniform(30 * 86400));
    const std::size_t end = std::min(sessions.size(), (u + 1) * params.sessions_per_user);
    for (std::size_t k = u * params.sessions_per_user; k < end; ++k) {
      if (k > u * params.sessions_per_user) {
        t += 2 * 3600 + static_cast<Timestamp>(rng.Uniform(10 * 3600));
      }
      const auto &session = sessions[session_order[k]];
      for (std::size_t q = 0; q < session.queries.size(); ++q) {
        if (q > 0) t += 5 + static_cast<Timestamp>(rng.Uniform(596));
        LogRecord record;
        record.anon_id = user;
        record.query = session.queries[q];
        record.query_time = t;
        log.push_back(record);
        while (rng.Bernoulli(params.click_rate)) {
          record.item_rank = static_cast<double>(1 + rng.Uniform(10));
          record.click_url = "http://www.site" + std::to_string(rng.Uniform(500)) + ".com";
          log.push_back(record);
        }
      }
    }
  }

  return SynthData{Ontology(std::move(concepts)), std::move(log),
                   CanonicalClusters(std::move(planted))};
}

void WriteLog(const std::vector<LogRecord> &records, std::ostream &out) {
  out << "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n";
  for (const auto &r : records) {
    out << r.anon_id << '\t' << r.query << '\t' << FormatTimestamp(r.query_time) << '\t';
    if (r.item_rank) out << static_cast<long long>(*r.item_rank);
    out << '\t';
    if (r.click_url) out << *r.click_url;
    out << '\n';
  }
}

void WriteScaleLog(std::ostream &out, std::size_t lines, std::uint64_t seed) {
  Rng rng(seed);
  out << "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n";
  std::string buffer;
  std::size_t written = 0;
  for (std::size_t user = 1; written < lines; ++user) {
    const std::size_t records = std::min<std::size_t>(lines - written, 1 + rng.Uniform(60));
    Timestamp t = kLogStart + static_cast<Timestamp>(rng.Uniform(60 * 86400));
    const std::string id = std::to_string(user);
    for (std::size_t r = 0; r < records; ++r) {
      t += 5 + static_cast<Timestamp>(rng.Uniform(3600));
      buffer += id;
      buffer += "\tw";
      buffer += std::to_string(rng.Uniform(50000));
      buffer += " w";
      buffer += std::to_string(rng.Uniform(50000));
      buffer += '\t';
      buffer += FormatTimestamp(t);
      buffer += "\t\t\n";
    }
    written += records;
    if (buffer.size() > (1u << 20)) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

}  // namespace cosearch
