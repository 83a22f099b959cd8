#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gedmine/errors.hpp"
#include "gedmine/graph.hpp"
#include "gedmine/isomorphism.hpp"

namespace gedmine {

// One homomorphism h(ū): node index per pattern variable. Bindings need not
// be injective.
struct Match {
  std::vector<int> binding;
  friend bool operator==(const Match& a, const Match& b) { return a.binding == b.binding; }
  friend bool operator<(const Match& a, const Match& b) { return a.binding < b.binding; }
};

enum class MatchSemantics { homomorphism, isomorphism };

struct MatchOptions {
  MatchSemantics semantics = MatchSemantics::homomorphism;
  // Report one representative per automorphism orbit of the pattern
  // variables (canonical: lexicographically smallest permuted binding).
  bool orbit_dedup = true;
};

namespace detail {

// Neighbor node list for one adjacency constraint, label-filtered. Arcs are
// sorted by (label, node), so concrete labels are contiguous ranges.
inline void arc_targets(const PropertyGraph& g, const std::vector<PropertyGraph::Arc>& arcs,
                        std::string_view pattern_label, std::vector<int>& out) {
  out.clear();
  if (pattern_label == kWildcard) {
    for (const auto& a : arcs) out.push_back(a.node);
  } else {
    int lab = g.edge_label_id(pattern_label);
    int star = g.edge_label_id(kWildcard);
    for (int want : {lab, star}) {
      if (want < 0) continue;
      auto lo = std::lower_bound(arcs.begin(), arcs.end(), PropertyGraph::Arc{want, -1});
      for (auto it = lo; it != arcs.end() && it->label == want; ++it) out.push_back(it->node);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

inline void intersect_sorted(std::vector<int>& acc, const std::vector<int>& other) {
  std::vector<int> merged;
  merged.reserve(std::min(acc.size(), other.size()));
  std::set_intersection(acc.begin(), acc.end(), other.begin(), other.end(),
                        std::back_inserter(merged));
  acc.swap(merged);
}

}  // namespace detail

/// All homomorphisms of Q into G (equivalently into filter_graph(G, Q); label
/// filtering happens through the candidate sets). Worst-case-optimal-join
/// style: variables are bound one at a time in ascending candidate-set order,
/// and candidates for the next variable come from intersecting the adjacency
/// lists of all already-bound neighbors. Output is sorted by binding tuple.
inline std::vector<Match> homomorphic_matches(const GraphPattern& q, const PropertyGraph& g,
                                              const MatchOptions& opts = {}) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<std::vector<int>> base(n);
  for (int v = 0; v < n; ++v) {
    base[v] = g.nodes_matching_label(q.label(v));
    if (base[v].empty()) return {};
  }

  // fixed order: fewest candidates first, staying adjacent to the bound set
  std::vector<int> order;
  {
    std::vector<char> placed(n, 0);
    auto adjacent = [&](int v) {
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
        if (step > 0 && !adjacent(v)) continue;
        if (pick < 0 || base[v].size() < base[pick].size()) pick = v;
      }
      if (pick < 0)  // unreachable for weakly connected patterns
        for (int v = 0; v < n && pick < 0; ++v)
          if (!placed[v]) pick = v;
      placed[pick] = 1;
      order.push_back(pick);
    }
  }

  std::vector<Match> out;
  std::vector<int> binding(n, -1);
  std::vector<int> candidates, scratch;
  const bool injective = opts.semantics == MatchSemantics::isomorphism;

  std::function<void(int)> expand = [&](int depth) {
    if (depth == n) {
      out.push_back(Match{binding});
      return;
    }
    const int v = order[depth];
    candidates = base[v];
    for (const PatternEdge& e : q.edges()) {
      if (e.from == v && binding[e.to] >= 0) {
        detail::arc_targets(g, g.in(binding[e.to]), e.label, scratch);
        detail::intersect_sorted(candidates, scratch);
      } else if (e.to == v && binding[e.from] >= 0) {
        detail::arc_targets(g, g.out(binding[e.from]), e.label, scratch);
        detail::intersect_sorted(candidates, scratch);
      }
      if (candidates.empty()) return;
    }
    std::vector<int> local = candidates;  // recursion reuses the buffers
    for (int u : local) {
      if (injective) {
        bool clash = false;
        for (int w = 0; w < n && !clash; ++w) clash = binding[w] == u;
        if (clash) continue;
      }
      binding[v] = u;
      expand(depth + 1);
      binding[v] = -1;
    }
  };
  expand(0);

  if (opts.orbit_dedup) {
    auto autos = pattern_automorphisms(q);
    if (autos.size() > 1) {
      std::set<std::vector<int>> canon;
      for (const Match& m : out) {
        std::vector<int> best = m.binding;
        std::vector<int> perm(n);
        for (const auto& a : autos) {
          // variable v plays the role of a[v] in the permuted match
          for (int v = 0; v < n; ++v) perm[v] = m.binding[a[v]];
          if (perm < best) best = perm;
        }
        canon.insert(best);
      }
      out.clear();
      for (auto& b : canon) out.push_back(Match{b});
      return out;  // std::set is already sorted
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Per-variable attribute restriction for pseudo-relation construction
// (variable index -> retained attribute names). Id columns are always kept.
using AttributeSelection = std::map<int, std::set<std::string>>;

// Pseudo-relation over a pattern's matches: one row per match, one column per
// retained (variable, attribute) pair plus one id column per variable. Cell
// values are interned; -1 marks an absent attribute.
class MatchTable {
 public:
  struct Column {
    int var;
    std::string attr;  // "id" for the identity column
    bool is_id;
  };

  MatchTable() = default;

  static MatchTable build(const GraphPattern& q, const std::vector<Match>& matches,
                          const PropertyGraph& g,
                          const std::optional<AttributeSelection>& selection = std::nullopt) {
    MatchTable t;
    t.pattern_ = q;
    const int n = static_cast<int>(q.size_nodes());

    std::vector<Match> rows = matches;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    // column set: per variable, the union of attribute names seen on its
    // matched nodes, optionally restricted
    for (int v = 0; v < n; ++v) {
      t.columns_.push_back({v, "id", true});
      std::set<std::string> attrs;
      for (const Match& m : rows)
        for (const auto& [k, val] : g.node(m.binding[v]).attributes) {
          (void)val;
          attrs.insert(k);
        }
      if (selection) {
        auto it = selection->find(v);
        if (it != selection->end()) {
          std::set<std::string> kept;
          for (const auto& a : attrs)
            if (it->second.count(a)) kept.insert(a);
          attrs.swap(kept);
        }
      }
      for (const auto& a : attrs) t.columns_.push_back({v, a, false});
    }

    t.n_rows_ = rows.size();
    t.cells_.assign(t.n_rows_ * t.columns_.size(), -1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < t.columns_.size(); ++c) {
        const Column& col = t.columns_[c];
        const NodeRecord& node = g.node(rows[r].binding[col.var]);
        if (col.is_id) {
          t.cells_[r * t.columns_.size() + c] = t.intern(node.id);
        } else if (auto val = node.attribute(col.attr)) {
          t.cells_[r * t.columns_.size() + c] = t.intern(std::string(*val));
        }
      }
    }
    t.matches_ = std::move(rows);
    return t;
  }

  // Direct construction from string cells; used by tests and table-level
  // tooling. `rows[r][c]` nullopt means absent.
  static MatchTable from_rows(const GraphPattern& q, std::vector<Column> columns,
                              const std::vector<std::vector<std::optional<std::string>>>& rows) {
    MatchTable t;
    t.pattern_ = q;
    t.columns_ = std::move(columns);
    t.n_rows_ = rows.size();
    t.cells_.assign(t.n_rows_ * t.columns_.size(), -1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != t.columns_.size()) throw DataError("row arity mismatch");
      for (std::size_t c = 0; c < t.columns_.size(); ++c)
        if (rows[r][c]) t.cells_[r * t.columns_.size() + c] = t.intern(*rows[r][c]);
    }
    return t;
  }

  const GraphPattern& pattern() const { return pattern_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Match>& matches() const { return matches_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }

  int column_index(int var, std::string_view attr) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c].var == var && columns_[c].attr == attr) return static_cast<int>(c);
    return -1;
  }

  // interned value id, -1 when absent
  int32_t cell(std::size_t row, std::size_t col) const { return cells_[row * columns_.size() + col]; }

  std::optional<std::string_view> value(std::size_t row, std::size_t col) const {
    int32_t id = cell(row, col);
    if (id < 0) return std::nullopt;
    return std::string_view(dict_[id]);
  }

  const std::string& dict_value(int32_t id) const { return dict_[id]; }
  std::size_t dict_size() const { return dict_.size(); }

 private:
  int32_t intern(const std::string& v) {
    auto [it, fresh] = ids_.emplace(v, static_cast<int32_t>(dict_.size()));
    if (fresh) dict_.push_back(v);
    return it->second;
  }

  GraphPattern pattern_;
  std::vector<Column> columns_;
  std::vector<std::string> dict_;
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<int32_t> cells_;
  std::vector<Match> matches_;
  std::size_t n_rows_ = 0;
};

/// Materializes the pseudo-relation of a pattern's matches.
inline MatchTable build_pseudo_relation(const GraphPattern& q, const std::vector<Match>& matches,
                                        const PropertyGraph& g,
                                        const std::optional<AttributeSelection>& selection = std::nullopt) {
  return MatchTable::build(q, matches, g, selection);
}

}  // namespace gedmine
