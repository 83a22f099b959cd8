#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string_view>
#include <vector>

#include "gedmine/graph.hpp"

namespace gedmine {

// Injective mappings of a pattern into a target plus the per-variable image
// sets M(v).
struct IsomorphismSet {
  std::vector<std::vector<int>> mappings;  // mapping[var index] -> target node index
  std::vector<std::vector<int>> images;    // M(v): sorted distinct targets per variable

  std::size_t count() const { return mappings.size(); }
};

namespace detail {

// Uniform view over "things a pattern can be matched against": a property
// graph or another pattern.
struct GraphTargetView {
  const PropertyGraph* g;
  std::size_t size() const { return g->node_count(); }
  std::string_view label(int i) const { return g->node(i).label; }
  bool edge(int u, std::string_view l, int v) const { return g->has_edge(u, l, v); }
  bool any_edge(int u, int v) const { return g->has_any_edge(u, v); }
};

struct PatternTargetView {
  const GraphPattern* q;
  std::size_t size() const { return q->size_nodes(); }
  std::string_view label(int i) const { return q->label(i); }
  bool edge(int u, std::string_view l, int v) const { return q->has_edge(u, l, v); }
  bool any_edge(int u, int v) const { return q->has_any_edge(u, v); }
};

// Order query variables so each one (after the first) is adjacent to an
// earlier one; keeps partial assignments constrained.
inline std::vector<int> connectivity_order(const GraphPattern& q) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  order.reserve(n);
  auto adjacent_to_placed = [&](int v) {
    for (const PatternEdge& e : q.edges()) {
      if (e.from == v && placed[e.to]) return true;
      if (e.to == v && placed[e.from]) return true;
    }
    return false;
  };
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (step == 0 || adjacent_to_placed(v)) {
        pick = v;
        break;
      }
    }
    if (pick < 0)  // disconnected pattern guard; construction forbids it
      for (int v = 0; v < n && pick < 0; ++v)
        if (!placed[v]) pick = v;
    placed[pick] = 1;
    order.push_back(pick);
  }
  return order;
}

template <class View, class Emit>
void enumerate_injective(const GraphPattern& q, const View& t, bool induced, Emit&& emit) {
  const int n = static_cast<int>(q.size_nodes());
  const int tn = static_cast<int>(t.size());
  std::vector<int> order = connectivity_order(q);
  std::vector<int> map(n, -1);
  std::vector<char> used(tn, 0);

  auto consistent = [&](int v, int u) {
    if (!labels_match(q.label(v), t.label(u))) return false;
    for (const PatternEdge& e : q.edges()) {
      if (e.from == v && map[e.to] >= 0 && !t.edge(u, e.label, map[e.to])) return false;
      if (e.to == v && map[e.from] >= 0 && !t.edge(map[e.from], e.label, u)) return false;
    }
    if (induced) {
      // classic semantics: a non-edge in the query must stay a non-edge
      for (int w = 0; w < n; ++w) {
        if (map[w] < 0 || w == v) continue;
        if (!q.has_any_edge(v, w) && t.any_edge(u, map[w])) return false;
        if (!q.has_any_edge(w, v) && t.any_edge(map[w], u)) return false;
      }
    }
    return true;
  };

  std::function<void(int)> dfs = [&](int depth) {
    if (depth == n) {
      emit(map);
      return;
    }
    int v = order[depth];
    for (int u = 0; u < tn; ++u) {
      if (used[u] || !consistent(v, u)) continue;
      map[v] = u;
      used[u] = 1;
      dfs(depth + 1);
      used[u] = 0;
      map[v] = -1;
    }
  };
  dfs(0);
}

template <class View>
IsomorphismSet collect_isomorphisms(const GraphPattern& q, const View& t, bool induced) {
  IsomorphismSet out;
  out.images.resize(q.size_nodes());
  enumerate_injective(q, t, induced, [&](const std::vector<int>& m) { out.mappings.push_back(m); });
  for (std::size_t v = 0; v < q.size_nodes(); ++v) {
    auto& img = out.images[v];
    img.reserve(out.mappings.size());
    for (const auto& m : out.mappings) img.push_back(m[v]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
  }
  return out;
}

}  // namespace detail

/// All injective, label-compatible, edge-preserving maps of `query` into a
/// graph. With `induced` true, non-edges of the query must map to non-edges
/// (classic VF2 semantics); otherwise only query edges constrain the map.
inline IsomorphismSet subgraph_isomorphisms(const GraphPattern& query, const PropertyGraph& target,
                                            bool induced) {
  return detail::collect_isomorphisms(query, detail::GraphTargetView{&target}, induced);
}

/// Non-induced injective embeddings of one pattern into another (the VF2U
/// relaxation used for pattern subsumption).
inline IsomorphismSet pattern_embeddings(const GraphPattern& query, const GraphPattern& target) {
  return detail::collect_isomorphisms(query, detail::PatternTargetView{&target}, false);
}

/// Automorphisms of a pattern under *exact* label equality (wildcards are
/// treated as a distinct label, not a match-anything). Identity included.
inline std::vector<std::vector<int>> pattern_automorphisms(const GraphPattern& q) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<std::vector<int>> autos;
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);

  auto edge_exact = [&](int u, std::string_view l, int v) {
    for (const PatternEdge& e : q.edges())
      if (e.from == u && e.to == v && e.label == l) return true;
    return false;
  };
  auto ok = [&](int v, int u) {
    if (q.label(v) != q.label(u)) return false;
    for (const PatternEdge& e : q.edges()) {
      if (e.from == v && map[e.to] >= 0 && !edge_exact(u, e.label, map[e.to])) return false;
      if (e.to == v && map[e.from] >= 0 && !edge_exact(map[e.from], e.label, u)) return false;
    }
    return true;
  };

  std::function<void(int)> dfs = [&](int v) {
    if (v == n) {
      // forward edge preservation on a bijection of an equal-sized edge set is
      // already onto, so `map` is a genuine automorphism here
      autos.push_back(map);
      return;
    }
    for (int u = 0; u < n; ++u) {
      if (used[u] || !ok(v, u)) continue;
      map[v] = u;
      used[u] = 1;
      dfs(v + 1);
      used[u] = 0;
      map[v] = -1;
    }
  };
  dfs(0);
  return autos;
}

namespace detail {

// Does an injective embedding exist with variable `fix_var` pinned to
// `fix_node`? Domains come pre-filtered by label.
inline bool exists_embedding_with(const GraphPattern& q, const PropertyGraph& g, int fix_var,
                                  int fix_node, const std::vector<std::vector<int>>& domains) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<int> map(n, -1);
  std::set<int> used;
  map[fix_var] = fix_node;
  used.insert(fix_node);

  // fix_var first, then expand along pattern adjacency
  std::vector<int> order{fix_var};
  {
    std::vector<char> placed(n, 0);
    placed[fix_var] = 1;
    while (static_cast<int>(order.size()) < n) {
      int pick = -1;
      for (int v = 0; v < n && pick < 0; ++v) {
        if (placed[v]) continue;
        for (const PatternEdge& e : q.edges()) {
          if ((e.from == v && placed[e.to]) || (e.to == v && placed[e.from])) {
            pick = v;
            break;
          }
        }
      }
      if (pick < 0)
        for (int v = 0; v < n && pick < 0; ++v)
          if (!placed[v]) pick = v;
      placed[pick] = 1;
      order.push_back(pick);
    }
  }

  auto consistent = [&](int v, int u) {
    for (const PatternEdge& e : q.edges()) {
      if (e.from == v && map[e.to] >= 0 && !g.has_edge(u, e.label, map[e.to])) return false;
      if (e.to == v && map[e.from] >= 0 && !g.has_edge(map[e.from], e.label, u)) return false;
    }
    return true;
  };

  std::function<bool(int)> dfs = [&](int depth) -> bool {
    if (depth == n) return true;
    int v = order[depth];
    for (int u : domains[v]) {
      if (used.count(u) || !consistent(v, u)) continue;
      map[v] = u;
      used.insert(u);
      if (dfs(depth + 1)) return true;
      used.erase(u);
      map[v] = -1;
    }
    return false;
  };
  // depth 0 is the pinned variable
  if (!consistent(fix_var, fix_node)) return false;
  return dfs(1);
}

}  // namespace detail

/// Minimum image based support: min over pattern variables of the number of
/// distinct target nodes that variable maps to across all (non-induced)
/// isomorphisms. 0 when no isomorphism exists.
inline int mni_support(const GraphPattern& q, const PropertyGraph& g) {
  const int n = static_cast<int>(q.size_nodes());
  if (n == 0) return 0;
  std::vector<std::vector<int>> domains(n);
  for (int v = 0; v < n; ++v) {
    domains[v] = g.nodes_matching_label(q.label(v));
    if (domains[v].empty()) return 0;
  }
  int support = std::numeric_limits<int>::max();
  for (int v = 0; v < n; ++v) {
    int cnt = 0;
    for (int u : domains[v])
      if (detail::exists_embedding_with(q, g, v, u, domains)) ++cnt;
    support = std::min(support, cnt);
    if (support == 0) return 0;
  }
  return support;
}

}  // namespace gedmine
