#include "cosearch/communities.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "cosearch/errors.h"
#include "cosearch/rng.h"
#include "json.hpp"

namespace cosearch {

namespace {

using LabelMap = std::map<std::size_t, double>;

// Guards the 1/v comparison against rounding in the weighted average.
constexpr double kEps = 1e-12;

struct Adjacency {
  std::vector<ConceptId> ids;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbours;
};

Adjacency BuildAdjacency(const CoGraph &graph) {
  Adjacency adj;
  adj.ids.assign(graph.nodes().begin(), graph.nodes().end());
  std::map<ConceptId, std::size_t> index;
  for (std::size_t i = 0; i < adj.ids.size(); ++i) index[adj.ids[i]] = i;
  adj.neighbours.resize(adj.ids.size());
  for (const auto &[key, w] : graph.edges()) {
    if (!(w > 0)) throw ParameterError("community detection needs weights > 0");
    const std::size_t a = index.at(key.first), b = index.at(key.second);
    adj.neighbours[a].emplace_back(b, w);
    adj.neighbours[b].emplace_back(a, w);
  }
  return adj;
}

LabelMap Propagate(const Adjacency &adj, const std::vector<LabelMap> &previous,
                   std::size_t x, const CopraParams &params, Rng &rng) {
  const auto &nbrs = adj.neighbours[x];
  if (nbrs.empty()) return previous[x];

  LabelMap sum;
  double total = 0;
  for (const auto &[y, w] : nbrs) {
    total += w;
    for (const auto &[label, b] : previous[y]) sum[label] += w * b;
  }
  for (auto &[label, b] : sum) b /= total;

  const double cutoff = 1.0 / static_cast<double>(params.v) - kEps;
  std::vector<std::pair<std::size_t, double>> kept;
  for (const auto &[label, b] : sum) {
    if (b >= cutoff) kept.emplace_back(label, b);
  }
  if (kept.empty()) {
    double best = 0;
    for (const auto &[label, b] : sum) best = std::max(best, b);
    std::vector<std::size_t> tied;
    for (const auto &[label, b] : sum) {
      if (b >= best - kEps) tied.push_back(label);
    }
    // A label the vertex already holds wins the tie.
    auto held = std::find_if(tied.begin(), tied.end(),
                             [&](std::size_t l) { return previous[x].count(l) > 0; });
    kept.emplace_back(held != tied.end() ? *held : tied[rng.Uniform(tied.size())], 1.0);
  }
  if (kept.size() > params.v) {
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
    kept.resize(params.v);
  }
  double norm = 0;
  for (const auto &[label, b] : kept) norm += b;
  LabelMap out;
  for (const auto &[label, b] : kept) out[label] = b / norm;
  return out;
}

bool SameLabels(const LabelMap &a, const LabelMap &b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(),
                    [](const auto &p, const auto &q) { return p.first == q.first; });
}

// Connected components of `members` in the subgraph they induce.
std::vector<std::vector<std::size_t>> Components(
    const Adjacency &adj, const std::vector<std::size_t> &members) {
  std::map<std::size_t, bool> seen;
  for (auto m : members) seen[m] = false;
  std::vector<std::vector<std::size_t>> out;
  for (auto start : members) {
    if (seen[start]) continue;
    std::vector<std::size_t> component, stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (const auto &[u, w] : adj.neighbours[v]) {
        auto it = seen.find(u);
        if (it != seen.end() && !it->second) {
          it->second = true;
          stack.push_back(u);
        }
      }
    }
    out.push_back(std::move(component));
  }
  return out;
}

bool ClusterLess(const std::vector<ConceptId> &a, const std::vector<ConceptId> &b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::vector<std::vector<ConceptId>> CanonicalClusters(
    std::vector<std::vector<ConceptId>> clusters) {
  for (auto &c : clusters) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::erase_if(clusters, [](const auto &c) { return c.empty(); });
  std::sort(clusters.begin(), clusters.end(), ClusterLess);
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
  std::vector<std::vector<ConceptId>> kept;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    bool contained = false;
    for (std::size_t j = i + 1; j < clusters.size() && !contained; ++j) {
      contained = clusters[j].size() > clusters[i].size() &&
                  std::includes(clusters[j].begin(), clusters[j].end(),
                                clusters[i].begin(), clusters[i].end());
    }
    if (!contained) kept.push_back(clusters[i]);
  }
  return kept;
}

ClusterSet DetectCommunities(const CoGraph &graph, const CopraParams &params,
                             std::optional<double> threshold,
                             const LabelObserver &observer) {
  if (params.v == 0) throw ParameterError("v must be >= 1");
  const Adjacency adj = BuildAdjacency(graph);
  const std::size_t n = adj.ids.size();

  std::vector<LabelMap> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x][x] = 1.0;

  std::size_t rounds = 0;
  while (rounds < params.max_iters) {
    ++rounds;
    // Every vertex reads the previous round's frozen state, then a seeded
    // half of them adopt their update. Updating everyone at once lets
    // bipartite pieces swap labels forever.
    std::vector<LabelMap> next(n);
    bool stable = true;
    for (std::size_t x = 0; x < n; ++x) {
      Rng rng(MixSeed(MixSeed(params.seed, rounds), x));
      next[x] = Propagate(adj, labels, x, params, rng);
      if (!SameLabels(labels[x], next[x])) {
        stable = false;
        if (rng.Bernoulli(0.5)) next[x] = labels[x];
      }
    }
    labels = std::move(next);
    if (observer) observer(rounds, labels);
    if (stable) break;
  }

  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto &[label, b] : labels[x]) by_label[label].push_back(x);
  }
  std::vector<std::vector<ConceptId>> communities;
  for (const auto &[label, members] : by_label) {
    for (const auto &component : Components(adj, members)) {
      std::vector<ConceptId> ids;
      for (auto v : component) ids.push_back(adj.ids[v]);
      communities.push_back(std::move(ids));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (adj.neighbours[x].empty()) communities.push_back({adj.ids[x]});
  }

  ClusterSet result;
  result.clusters = CanonicalClusters(std::move(communities));
  result.params = params;
  result.threshold = threshold;
  result.iterations = rounds;
  return result;
}

ClusterStats ComputeClusterStats(
    const std::vector<std::vector<ConceptId>> &clusters) {
  ClusterStats stats;
  stats.count = clusters.size();
  if (clusters.empty()) return stats;
  stats.min_size = clusters.front().size();
  std::size_t total = 0;
  for (const auto &c : clusters) {
    stats.min_size = std::min(stats.min_size, c.size());
    stats.max_size = std::max(stats.max_size, c.size());
    total += c.size();
    for (const auto &id : c) ++stats.overlap[id];
  }
  stats.mean_size = static_cast<double>(total) / static_cast<double>(clusters.size());
  return stats;
}

void WriteClusters(const ClusterSet &clusters, std::ostream &out) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"v", clusters.params.v},
                   {"seed", clusters.params.seed},
                   {"max_iters", clusters.params.max_iters},
                   {"iterations", clusters.iterations},
                   {"threshold", clusters.threshold
                                     ? nlohmann::ordered_json(*clusters.threshold)
                                     : nlohmann::ordered_json(nullptr)}};
  doc["seed"] = clusters.params.seed;
  doc["clusters"] = clusters.clusters;
  out << doc.dump(2) << '\n';
}

ClusterSet ReadClusters(std::istream &in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(std::string("clusters file: ") + e.what());
  }
  ClusterSet set;
  try {
    const auto &clusters = doc.at("clusters");
    if (!clusters.is_array()) throw FormatError("clusters file: 'clusters' must be an array");
    for (const auto &c : clusters) {
      set.clusters.push_back(c.get<std::vector<ConceptId>>());
    }
    if (auto p = doc.find("params"); p != doc.end() && p->is_object()) {
      set.params.v = p->value("v", set.params.v);
      set.params.seed = p->value("seed", set.params.seed);
      set.params.max_iters = p->value("max_iters", set.params.max_iters);
      set.iterations = p->value("iterations", std::size_t{0});
      if (auto t = p->find("threshold"); t != p->end() && t->is_number()) {
        set.threshold = t->get<double>();
      }
    }
    if (auto s = doc.find("seed"); s != doc.end() && s->is_number_unsigned()) {
      set.params.seed = s->get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("clusters file: ") + e.what());
  }
  set.clusters = CanonicalClusters(std::move(set.clusters));
  return set;
}

void SaveClusters(const ClusterSet &clusters, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write clusters file " + path.string());
  WriteClusters(clusters, out);
}

ClusterSet LoadClusters(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open clusters file " + path.string());
  return ReadClusters(in);
}

}  // namespace cosearch
