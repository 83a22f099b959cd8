#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gedmine/errors.hpp"
#include "gedmine/graph.hpp"

namespace gedmine {

// gamma-dense communities over a graph: disjoint, jointly covering, non-empty.
struct CommunityAssignment {
  std::map<NodeId, int> assignment;             // node id -> community id
  std::vector<std::vector<NodeId>> communities;  // sorted members per community
  double gamma = 1.0;
};

struct CommunityOptions {
  double gamma = 1.0;
  std::uint64_t seed = 1;
  int max_iterations = 100;  // outer move/refine/aggregate loops
  // Audit hook: called with the CPM delta of every accepted move; all
  // accepted moves strictly increase the quality.
  std::function<void(double)> on_accepted_move;
};

namespace detail {

// Undirected simple projection: distinct neighbor sets, no self-loops.
// Community quality is direction-agnostic.
inline std::vector<std::vector<int>> undirected_projection(const PropertyGraph& g) {
  std::vector<std::vector<int>> adj(g.node_count());
  for (int u = 0; u < static_cast<int>(g.node_count()); ++u)
    for (const PropertyGraph::Arc& a : g.out(u)) {
      if (a.node == u) continue;
      adj[u].push_back(a.node);
      adj[a.node].push_back(u);
    }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

}  // namespace detail

/// Constant Potts Model quality: sum over communities of
/// e_c - gamma * C(n_c, 2), with e_c counted on the undirected projection.
inline double cpm_quality(const PropertyGraph& g, const CommunityAssignment& a) {
  if (a.assignment.size() != g.node_count())
    throw DataError("community assignment does not cover the graph");
  std::vector<int> comm(g.node_count(), -1);
  for (const auto& [id, c] : a.assignment) {
    int idx = g.index_of(id);
    if (idx < 0) throw DataError("assignment references unknown node id: " + id);
    comm[idx] = c;
  }
  auto adj = detail::undirected_projection(g);
  std::unordered_map<int, long long> edges, sizes;
  for (int u = 0; u < static_cast<int>(adj.size()); ++u) {
    ++sizes[comm[u]];
    for (int v : adj[u])
      if (u < v && comm[u] == comm[v]) ++edges[comm[u]];
  }
  double q = 0.0;
  for (const auto& [c, n] : sizes) {
    double e = 0.0;
    if (auto it = edges.find(c); it != edges.end()) e = static_cast<double>(it->second);
    q += e - a.gamma * (static_cast<double>(n) * (n - 1) / 2.0);
  }
  return q;
}

namespace detail {

struct LevelGraph {
  // weighted undirected simple graph; self-loops dropped (constant offset
  // under node moves)
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> node_size;  // original node counts
  std::size_t size() const { return adj.size(); }
};

struct MoveResult {
  bool moved = false;
};

constexpr double kEps = 1e-12;

inline double community_size(const std::vector<double>& node_size, const std::vector<int>& members_size_acc,
                             int c) {
  (void)node_size;
  return static_cast<double>(members_size_acc[c]);
}

// Greedy CPM local moving: processes a seeded-shuffle queue of nodes, moving
// each to the strictly-best neighboring (or fresh) community while any move
// improves quality.
inline bool local_move(const LevelGraph& g, std::vector<int>& comm, double gamma, std::mt19937_64& rng,
                       const std::function<void(double)>& audit) {
  const int n = static_cast<int>(g.size());
  std::vector<double> comm_size;
  {
    int maxc = 0;
    for (int c : comm) maxc = std::max(maxc, c + 1);
    comm_size.assign(maxc, 0.0);
    for (int u = 0; u < n; ++u) comm_size[comm[u]] += g.node_size[u];
  }
  std::vector<int> queue(n);
  std::iota(queue.begin(), queue.end(), 0);
  std::shuffle(queue.begin(), queue.end(), rng);
  std::vector<char> queued(n, 1);
  std::size_t head = 0;
  bool any = false;

  std::unordered_map<int, double> links;
  while (head < queue.size()) {
    int u = queue[head++];
    queued[u] = 0;
    int c_old = comm[u];
    links.clear();
    for (const auto& [v, w] : g.adj[u]) links[comm[v]] += w;

    double link_old = 0.0;
    if (auto it = links.find(c_old); it != links.end()) link_old = it->second;
    double su = g.node_size[u];
    double stay_term = link_old - gamma * su * (comm_size[c_old] - su);

    int best_c = c_old;
    double best_delta = 0.0;
    for (const auto& [c, w] : links) {
      if (c == c_old) continue;
      double delta = (w - gamma * su * comm_size[c]) - stay_term;
      if (delta > best_delta + kEps) {
        best_delta = delta;
        best_c = c;
      }
    }
    // fresh singleton community
    {
      double delta = (0.0 - 0.0) - stay_term;
      if (delta > best_delta + kEps) {
        best_delta = delta;
        best_c = -1;
      }
    }
    if (best_c == c_old || best_delta <= kEps) continue;

    if (best_c == -1) {
      best_c = static_cast<int>(comm_size.size());
      comm_size.push_back(0.0);
    }
    comm_size[c_old] -= su;
    comm_size[best_c] += su;
    comm[u] = best_c;
    any = true;
    if (audit) audit(best_delta);
    for (const auto& [v, w] : g.adj[u]) {
      (void)w;
      if (comm[v] != best_c && !queued[v]) {
        queued[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return any;
}

// Leiden refinement: inside every community, rebuild from singletons by
// randomly merging well-connected nodes into well-connected sub-communities
// with a strictly positive quality delta.
inline std::vector<int> refine(const LevelGraph& g, const std::vector<int>& comm, double gamma,
                               std::mt19937_64& rng, const std::function<void(double)>& audit) {
  const int n = static_cast<int>(g.size());
  std::vector<int> refined(n);
  std::iota(refined.begin(), refined.end(), 0);
  std::vector<double> rsize = g.node_size;
  std::vector<double> subset_size;
  {
    int maxc = 0;
    for (int c : comm) maxc = std::max(maxc, c + 1);
    subset_size.assign(maxc, 0.0);
    for (int u = 0; u < n; ++u) subset_size[comm[u]] += g.node_size[u];
  }

  auto links_to_subset_rest = [&](int u) {
    double w = 0.0;
    for (const auto& [v, wt] : g.adj[u])
      if (comm[v] == comm[u]) w += wt;
    return w;
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::unordered_map<int, double> cand_links;
  for (int u : order) {
    if (rsize[refined[u]] != g.node_size[u] || refined[u] != u) continue;  // already merged away
    double su = g.node_size[u];
    double ssz = subset_size[comm[u]];
    if (links_to_subset_rest(u) < gamma * su * (ssz - su) - kEps) continue;  // not well connected

    cand_links.clear();
    for (const auto& [v, w] : g.adj[u])
      if (comm[v] == comm[u] && refined[v] != refined[u]) cand_links[refined[v]] += w;

    std::vector<std::pair<int, double>> options;  // (refined community, delta)
    for (const auto& [rc, w] : cand_links) {
      // candidate sub-community must itself be well connected inside the subset
      double rc_sz = rsize[rc];
      double rc_out = 0.0;
      for (int v = 0; v < n; ++v) {
        if (refined[v] != rc) continue;
        for (const auto& [t, wt] : g.adj[v])
          if (comm[t] == comm[v] && refined[t] != rc) rc_out += wt;
      }
      if (rc_out < gamma * rc_sz * (ssz - rc_sz) - kEps) continue;
      double delta = w - gamma * su * rc_sz;
      if (delta > kEps) options.emplace_back(rc, delta);
    }
    if (options.empty()) continue;

    std::vector<double> weights;
    weights.reserve(options.size());
    constexpr double theta = 1e-2;
    for (const auto& [rc, d] : options) {
      (void)rc;
      weights.push_back(std::exp(std::min(d / theta, 50.0)));
    }
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    auto [rc, delta] = options[pick(rng)];
    rsize[rc] += su;
    rsize[refined[u]] -= su;
    refined[u] = rc;
    if (audit) audit(delta);
  }
  return refined;
}

inline void compact_labels(std::vector<int>& labels) {
  std::unordered_map<int, int> remap;
  for (int& l : labels) {
    auto [it, fresh] = remap.emplace(l, static_cast<int>(remap.size()));
    (void)fresh;
    l = it->second;
  }
}

}  // namespace detail

/// Leiden-style community detection optimizing the CPM quality function:
/// local moving, refinement, and aggregation repeated until no local move
/// improves quality (or max_iterations). Deterministic under a fixed seed.
inline CommunityAssignment detect_communities(const PropertyGraph& g, const CommunityOptions& opts) {
  if (opts.gamma <= 0.0) throw ConfigError("gamma must be positive");
  CommunityAssignment result;
  result.gamma = opts.gamma;
  const int n0 = static_cast<int>(g.node_count());
  if (n0 == 0) return result;

  std::mt19937_64 rng(opts.seed);
  detail::LevelGraph level;
  {
    auto proj = detail::undirected_projection(g);
    level.adj.resize(n0);
    level.node_size.assign(n0, 1.0);
    for (int u = 0; u < n0; ++u)
      for (int v : proj[u]) level.adj[u].emplace_back(v, 1.0);
  }
  std::vector<int> to_level(n0);  // original node -> current level node
  std::iota(to_level.begin(), to_level.end(), 0);
  std::vector<int> comm(n0);
  std::iota(comm.begin(), comm.end(), 0);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    bool moved = detail::local_move(level, comm, opts.gamma, rng, opts.on_accepted_move);
    detail::compact_labels(comm);
    std::size_t n_comms = *std::max_element(comm.begin(), comm.end()) + 1;
    if (!moved || n_comms == level.size()) break;

    std::vector<int> refined = detail::refine(level, comm, opts.gamma, rng, opts.on_accepted_move);
    detail::compact_labels(refined);
    std::size_t n_ref = *std::max_element(refined.begin(), refined.end()) + 1;

    // aggregate by the refined partition, keep the outer partition
    detail::LevelGraph next;
    next.adj.resize(n_ref);
    next.node_size.assign(n_ref, 0.0);
    std::vector<int> next_comm(n_ref, -1);
    for (std::size_t u = 0; u < level.size(); ++u) {
      next.node_size[refined[u]] += level.node_size[u];
      next_comm[refined[u]] = comm[u];
    }
    std::map<std::pair<int, int>, double> agg_edges;
    for (std::size_t u = 0; u < level.size(); ++u)
      for (const auto& [v, w] : level.adj[u]) {
        int ru = refined[u], rv = refined[v];
        if (ru < rv) agg_edges[{ru, rv}] += w;
      }
    for (const auto& [uv, w] : agg_edges) {
      next.adj[uv.first].emplace_back(uv.second, w);
      next.adj[uv.second].emplace_back(uv.first, w);
    }
    for (int i = 0; i < n0; ++i) to_level[i] = refined[to_level[i]];
    level = std::move(next);
    comm = std::move(next_comm);
  }

  // flatten and renumber deterministically by smallest member index
  std::vector<int> final_comm(n0);
  for (int i = 0; i < n0; ++i) final_comm[i] = comm[to_level[i]];
  std::vector<int> first_member(*std::max_element(final_comm.begin(), final_comm.end()) + 1, -1);
  std::vector<int> ids;
  for (int i = 0; i < n0; ++i)
    if (first_member[final_comm[i]] < 0) {
      first_member[final_comm[i]] = static_cast<int>(ids.size());
      ids.push_back(final_comm[i]);
    }
  result.communities.resize(ids.size());
  for (int i = 0; i < n0; ++i) {
    int c = first_member[final_comm[i]];
    result.assignment[g.node(i).id] = c;
    result.communities[c].push_back(g.node(i).id);
  }
  for (auto& members : result.communities) std::sort(members.begin(), members.end());
  return result;
}

}  // namespace gedmine
