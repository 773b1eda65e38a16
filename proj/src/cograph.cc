#include "cosearch/cograph.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cosearch/errors.h"
#include "json.hpp"

namespace cosearch {

EdgeKey MakeEdge(const ConceptId &a, const ConceptId &b) {
  if (a == b) throw ParameterError("self-loop on concept '" + a + "'");
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

void LocalGraph::AddQuery(const QueryInterpretation &query) {
  // A concept listed in several groups keeps its best factor.
  std::map<ConceptId, Rational> factors;
  for (const auto &g : query.groups) {
    const Rational f = g.factor();
    for (const auto &c : g.concepts) {
      auto [it, inserted] = factors.emplace(c, f);
      if (!inserted) it->second = std::max(it->second, f);
    }
  }
  for (const auto &[c, f] : factors) {
    auto [it, inserted] = nodes_.emplace(c, f);
    if (!inserted) it->second = std::max(it->second, f);
  }
  for (const auto &[a, unused] : factors) {
    const Rational ev_a = nodes_.at(a);
    for (const auto &[b, ev_b] : nodes_) {
      if (b == a) continue;
      const Rational contribution = std::min(ev_a, ev_b);
      auto [it, inserted] = edges_.emplace(MakeEdge(a, b), contribution);
      if (!inserted) it->second = std::max(it->second, contribution);
    }
  }
}

Rational LocalGraph::Evidence(const ConceptId &a, const ConceptId &b) const {
  if (a == b) return Rational(0);
  auto it = edges_.find(MakeEdge(a, b));
  return it == edges_.end() ? Rational(0) : it->second;
}

LocalGraph BuildLocalGraph(std::span<const QueryInterpretation> session) {
  LocalGraph local;
  for (const auto &q : session) local.AddQuery(q);
  return local;
}

CoGraph ToFloat(const ExactCoGraph &exact) {
  CoGraph out;
  for (const auto &id : exact.nodes()) out.AddNode(id);
  for (const auto &[key, w] : exact.edges()) {
    out.SetWeight(key.first, key.second, ToDouble(w));
  }
  return out;
}

CoGraph BuildCoGraph(std::span<const std::vector<QueryInterpretation>> sessions) {
  CoGraph graph;
  for (const auto &s : sessions) graph.Merge(BuildLocalGraph(s));
  return graph;
}

ExactCoGraph BuildExactCoGraph(
    std::span<const std::vector<QueryInterpretation>> sessions) {
  ExactCoGraph graph;
  for (const auto &s : sessions) graph.Merge(BuildLocalGraph(s));
  return graph;
}

WeightDistribution ComputeWeightDistribution(const CoGraph &graph) {
  WeightDistribution dist;
  dist.sorted_weights.reserve(graph.num_edges());
  std::map<int, std::size_t> buckets;
  for (const auto &[key, w] : graph.edges()) {
    dist.sorted_weights.push_back(w);
    if (w > 0) ++buckets[std::ilogb(w)];
  }
  std::sort(dist.sorted_weights.begin(), dist.sorted_weights.end());
  for (const auto &[exponent, count] : buckets) {
    dist.histogram.push_back(HistogramBucket{std::ldexp(1.0, exponent),
                                             std::ldexp(1.0, exponent + 1),
                                             count});
  }
  return dist;
}

std::pair<CoGraph, PruneReport> Prune(const CoGraph &graph, double threshold) {
  if (!(threshold >= 0)) {
    throw ParameterError("prune threshold must be >= 0");
  }
  PruneReport report;
  report.threshold = threshold;
  report.edges_before = graph.num_edges();
  report.weight_histogram = ComputeWeightDistribution(graph).histogram;

  CoGraph pruned;
  for (const auto &id : graph.nodes()) pruned.AddNode(id);
  ConceptSet connected;
  for (const auto &[key, w] : graph.edges()) {
    if (w < threshold) continue;
    pruned.SetWeight(key.first, key.second, w);
    connected.insert(key.first);
    connected.insert(key.second);
  }
  report.edges_after = pruned.num_edges();
  for (const auto &id : graph.nodes()) {
    if (!connected.count(id)) report.isolated_nodes.insert(id);
  }
  return {std::move(pruned), std::move(report)};
}

void WritePruneReport(const PruneReport &report, std::ostream &out) {
  nlohmann::ordered_json doc;
  doc["threshold"] = report.threshold;
  doc["edges_before"] = report.edges_before;
  doc["edges_after"] = report.edges_after;
  doc["isolated_nodes"] = report.isolated_nodes;
  auto histogram = nlohmann::ordered_json::array();
  for (const auto &b : report.weight_histogram) {
    histogram.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
  }
  doc["weight_histogram"] = std::move(histogram);
  out << doc.dump(2) << '\n';
}

void WriteGraph(const CoGraph &graph, std::ostream &out,
                std::optional<double> threshold) {
  out << "#nodes:";
  for (const auto &id : graph.nodes()) out << '\t' << id;
  out << '\n';
  char buf[64];
  if (threshold) {
    std::snprintf(buf, sizeof buf, "%.6f", *threshold);
    out << "#threshold:\t" << buf << '\n';
  }
  for (const auto &[key, w] : graph.edges()) {
    std::snprintf(buf, sizeof buf, "%.6f", w);
    out << key.first << '\t' << key.second << '\t' << buf << '\n';
  }
}

GraphFile ReadGraph(std::istream &in) {
  GraphFile file;
  std::string line;
  std::size_t line_no = 0;
  bool saw_nodes = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "graph file line " + std::to_string(line_no);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (line.rfind("#nodes:", 0) == 0) {
      saw_nodes = true;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        if (!fields[i].empty()) file.graph.AddNode(fields[i]);
      }
      continue;
    }
    if (line.rfind("#threshold:", 0) == 0) {
      if (fields.size() != 2) throw FormatError(where + ": bad threshold line");
      file.threshold = std::stod(fields[1]);
      continue;
    }
    if (line[0] == '#') continue;
    if (fields.size() != 3) {
      throw FormatError(where + ": expected concept_a<TAB>concept_b<TAB>weight");
    }
    double w = 0;
    try {
      std::size_t used = 0;
      w = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw FormatError(where + ": bad weight '" + fields[2] + "'");
    }
    if (!(w > 0)) throw FormatError(where + ": weight must be > 0");
    if (fields[0] == fields[1]) throw FormatError(where + ": self-loop");
    file.graph.SetWeight(fields[0], fields[1], w);
  }
  if (!saw_nodes) throw FormatError("graph file: missing #nodes: header");
  return file;
}

void SaveGraph(const CoGraph &graph, const std::filesystem::path &path,
               std::optional<double> threshold) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file " + path.string());
  WriteGraph(graph, out, threshold);
}

GraphFile LoadGraph(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return ReadGraph(in);
}

}  // namespace cosearch
