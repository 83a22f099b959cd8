#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "gedmine/graph.hpp"

namespace gedmine {

namespace detail {

inline std::string encode_with_order(const GraphPattern& q, const std::vector<int>& order) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::string s;
  s.reserve(n * 8 + q.size_edges() * 12);
  s += "V:";
  for (int i = 0; i < n; ++i) {
    s += q.label(order[i]);
    s += '|';
  }
  std::vector<std::tuple<int, int, std::string>> es;
  es.reserve(q.size_edges());
  for (const PatternEdge& e : q.edges()) es.emplace_back(pos[e.from], pos[e.to], e.label);
  std::sort(es.begin(), es.end());
  s += "E:";
  for (const auto& [a, b, l] : es) {
    s += std::to_string(a);
    s += '>';
    s += std::to_string(b);
    s += ':';
    s += l;
    s += '|';
  }
  return s;
}

}  // namespace detail

/// Deterministic canonical code of a directed labeled pattern: the minimum
/// serialization over all variable orderings. Used as a dedup key and a total
/// tie-break order; patterns here are small (a handful of nodes) so the
/// exhaustive minimum is cheap.
inline std::string canonical_code(const GraphPattern& q) {
  const int n = static_cast<int>(q.size_nodes());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::string best = detail::encode_with_order(q, order);
  while (std::next_permutation(order.begin(), order.end())) {
    std::string code = detail::encode_with_order(q, order);
    if (code < best) best = std::move(code);
  }
  return best;
}

}  // namespace gedmine
