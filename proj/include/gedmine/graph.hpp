#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gedmine/errors.hpp"

namespace gedmine {

inline constexpr std::string_view kWildcard = "*";

/// Label matching with wildcard semantics: l and l' match iff they are equal
/// or either one is "*". Symmetric by construction.
inline bool labels_match(std::string_view l, std::string_view l_prime) {
  return l == l_prime || l == kWildcard || l_prime == kWildcard;
}

using NodeId = std::string;

struct NodeRecord {
  NodeId id;
  std::string label;
  // Ordered (attribute, value) pairs; names are distinct within one node.
  std::vector<std::pair<std::string, std::string>> attributes;

  std::optional<std::string_view> attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes)
      if (k == name) return std::string_view(v);
    return std::nullopt;
  }
};

struct EdgeRecord {
  NodeId src;
  std::string label;
  NodeId dst;
};

// Directed labeled multigraph with per-node attribute lists. Immutable after
// construction; indices are dense ints in node insertion order.
class PropertyGraph {
 public:
  struct Arc {
    int label;  // interned edge-label id
    int node;   // neighbor index
    friend bool operator<(const Arc& a, const Arc& b) {
      return std::tie(a.label, a.node) < std::tie(b.label, b.node);
    }
    friend bool operator==(const Arc& a, const Arc& b) {
      return a.label == b.label && a.node == b.node;
    }
  };

  PropertyGraph() = default;

  static PropertyGraph build(std::vector<NodeRecord> nodes,
                             const std::vector<EdgeRecord>& edges) {
    PropertyGraph g;
    g.nodes_ = std::move(nodes);
    g.index_.reserve(g.nodes_.size());
    for (int i = 0; i < static_cast<int>(g.nodes_.size()); ++i) {
      const NodeRecord& n = g.nodes_[i];
      if (!g.index_.emplace(n.id, i).second)
        throw DataError("duplicate node id: " + n.id);
      std::unordered_set<std::string_view> seen;
      for (const auto& [k, v] : n.attributes) {
        (void)v;
        if (k == "id") throw DataError("node " + n.id + ": attribute name 'id' is reserved");
        if (!seen.insert(k).second)
          throw DataError("node " + n.id + ": duplicate attribute '" + k + "'");
      }
      g.label_index_[n.label].push_back(i);
    }
    g.out_.assign(g.nodes_.size(), {});
    g.in_.assign(g.nodes_.size(), {});
    for (const EdgeRecord& e : edges) {
      auto s = g.index_.find(e.src);
      if (s == g.index_.end())
        throw DataError("edge references missing node id: " + e.src);
      auto d = g.index_.find(e.dst);
      if (d == g.index_.end())
        throw DataError("edge references missing node id: " + e.dst);
      int lab = g.intern_edge_label(e.label);
      g.out_[s->second].push_back({lab, d->second});
      g.in_[d->second].push_back({lab, s->second});
    }
    // E is a set: collapse duplicate (src, label, dst) triples.
    for (auto& arcs : g.out_) dedup(arcs);
    for (auto& arcs : g.in_) dedup(arcs);
    g.edge_count_ = 0;
    for (const auto& arcs : g.out_) g.edge_count_ += arcs.size();
    return g;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const NodeRecord& node(int idx) const { return nodes_[idx]; }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }

  int index_of(const NodeId& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }

  const std::vector<Arc>& out(int idx) const { return out_[idx]; }
  const std::vector<Arc>& in(int idx) const { return in_[idx]; }

  int edge_label_id(std::string_view label) const {
    auto it = edge_label_ids_.find(std::string(label));
    return it == edge_label_ids_.end() ? -1 : it->second;
  }
  const std::string& edge_label(int id) const { return edge_labels_[id]; }
  const std::vector<std::string>& edge_labels() const { return edge_labels_; }

  const std::vector<int>& nodes_with_label(const std::string& label) const {
    static const std::vector<int> kEmpty;
    auto it = label_index_.find(label);
    return it == label_index_.end() ? kEmpty : it->second;
  }

  // Node indices whose label matches `pattern_label` under labels_match.
  std::vector<int> nodes_matching_label(std::string_view pattern_label) const {
    std::vector<int> out;
    if (pattern_label == kWildcard) {
      out.resize(nodes_.size());
      for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i] = i;
      return out;
    }
    out = nodes_with_label(std::string(pattern_label));
    if (auto it = label_index_.find(std::string(kWildcard)); it != label_index_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
  }

  bool has_edge(int src, std::string_view label, int dst) const {
    for (const Arc& a : out_[src])
      if (a.node == dst && labels_match(edge_labels_[a.label], label)) return true;
    return false;
  }

  bool has_any_edge(int src, int dst) const {
    for (const Arc& a : out_[src])
      if (a.node == dst) return true;
    return false;
  }

  std::vector<EdgeRecord> edge_records() const {
    std::vector<EdgeRecord> out;
    out.reserve(edge_count_);
    for (int u = 0; u < static_cast<int>(nodes_.size()); ++u)
      for (const Arc& a : out_[u])
        out.push_back({nodes_[u].id, edge_labels_[a.label], nodes_[a.node].id});
    return out;
  }

 private:
  static void dedup(std::vector<Arc>& arcs) {
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  }

  int intern_edge_label(const std::string& label) {
    auto [it, fresh] = edge_label_ids_.emplace(label, static_cast<int>(edge_labels_.size()));
    if (fresh) edge_labels_.push_back(label);
    return it->second;
  }

  std::vector<NodeRecord> nodes_;
  std::unordered_map<NodeId, int> index_;
  std::map<std::string, std::vector<int>> label_index_;
  std::vector<std::string> edge_labels_;
  std::unordered_map<std::string, int> edge_label_ids_;
  std::vector<std::vector<Arc>> out_, in_;
  std::size_t edge_count_ = 0;
};

struct PatternEdge {
  int from;           // variable index
  std::string label;  // may be "*"
  int to;             // variable index
  friend bool operator==(const PatternEdge& a, const PatternEdge& b) {
    return a.from == b.from && a.to == b.to && a.label == b.label;
  }
};

// Directed labeled pattern over named variables; node labels may be "*".
// Weak connectivity is enforced at construction (a disconnected "pattern"
// is two patterns).
class GraphPattern {
 public:
  GraphPattern() = default;

  static GraphPattern build(std::vector<std::string> variables,
                            const std::map<std::string, std::string>& labels,
                            const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
    GraphPattern q;
    q.variables_ = std::move(variables);
    if (q.variables_.empty()) throw DataError("pattern has no variables");
    std::unordered_map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(q.variables_.size()); ++i)
      if (!pos.emplace(q.variables_[i], i).second)
        throw DataError("duplicate pattern variable: " + q.variables_[i]);
    q.labels_.resize(q.variables_.size(), std::string(kWildcard));
    for (const auto& [var, lab] : labels) {
      auto it = pos.find(var);
      if (it == pos.end()) throw DataError("label for unknown pattern variable: " + var);
      q.labels_[it->second] = lab;
    }
    for (const auto& [from, lab, to] : edges) {
      auto f = pos.find(from);
      auto t = pos.find(to);
      if (f == pos.end() || t == pos.end())
        throw DataError("pattern edge references unknown variable");
      PatternEdge e{f->second, lab, t->second};
      if (std::find(q.edges_.begin(), q.edges_.end(), e) == q.edges_.end())
        q.edges_.push_back(e);
    }
    if (!q.weakly_connected())
      throw DataError("pattern is not weakly connected");
    return q;
  }

  std::size_t size_nodes() const { return variables_.size(); }
  std::size_t size_edges() const { return edges_.size(); }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::string& variable(int i) const { return variables_[i]; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<PatternEdge>& edges() const { return edges_; }

  int variable_index(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(variables_.size()); ++i)
      if (variables_[i] == name) return i;
    return -1;
  }

  bool has_edge(int from, std::string_view label, int to) const {
    for (const PatternEdge& e : edges_)
      if (e.from == from && e.to == to && labels_match(e.label, label)) return true;
    return false;
  }

  bool has_any_edge(int from, int to) const {
    for (const PatternEdge& e : edges_)
      if (e.from == from && e.to == to) return true;
    return false;
  }

  friend bool operator==(const GraphPattern& a, const GraphPattern& b) {
    return a.variables_ == b.variables_ && a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  bool weakly_connected() const {
    if (variables_.size() <= 1) return true;
    std::vector<std::vector<int>> adj(variables_.size());
    for (const PatternEdge& e : edges_) {
      adj[e.from].push_back(e.to);
      adj[e.to].push_back(e.from);
    }
    std::vector<char> seen(variables_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
    }
    return reached == variables_.size();
  }

  std::vector<std::string> variables_;
  std::vector<std::string> labels_;
  std::vector<PatternEdge> edges_;
};

/// Simplified graph w.r.t. a pattern: drop nodes whose label matches no
/// pattern node label, drop edges whose label matches no pattern edge label,
/// then drop isolated nodes. Matches of Q are preserved.
inline PropertyGraph filter_graph(const PropertyGraph& g, const GraphPattern& q) {
  auto node_label_ok = [&](const std::string& lab) {
    for (const std::string& ql : q.labels())
      if (labels_match(ql, lab)) return true;
    return false;
  };
  auto edge_label_ok = [&](const std::string& lab) {
    for (const PatternEdge& e : q.edges())
      if (labels_match(e.label, lab)) return true;
    return false;
  };

  std::vector<char> keep_node(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    keep_node[i] = node_label_ok(g.node(static_cast<int>(i)).label);

  std::vector<EdgeRecord> edges;
  std::vector<char> touched(g.node_count(), 0);
  for (int u = 0; u < static_cast<int>(g.node_count()); ++u) {
    if (!keep_node[u]) continue;
    for (const PropertyGraph::Arc& a : g.out(u)) {
      if (!keep_node[a.node]) continue;
      if (!edge_label_ok(g.edge_label(a.label))) continue;
      edges.push_back({g.node(u).id, g.edge_label(a.label), g.node(a.node).id});
      touched[u] = touched[a.node] = 1;
    }
  }

  std::vector<NodeRecord> nodes;
  for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
    if (keep_node[i] && (touched[i] || q.size_edges() == 0))
      nodes.push_back(g.node(i));
  return PropertyGraph::build(std::move(nodes), edges);
}

}  // namespace gedmine
