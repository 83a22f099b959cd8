#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gedmine/errors.hpp"
#include "gedmine/graph.hpp"

namespace gedmine {

namespace detail {

inline std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
    cells.back().pop_back();
  return cells;
}

inline std::string json_scalar_to_string(const nlohmann::json& v, std::size_t line) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ParseError("attribute values must be scalar", line);
}

}  // namespace detail

// Nodes file: TSV, header exactly `id<TAB>label<TAB>attrs`. Each data row is
// `id`, `label`, then either zero or more `key=value` cells or a single JSON
// object cell. Values are opaque strings.
inline std::vector<NodeRecord> read_nodes(std::istream& in) {
  std::vector<NodeRecord> nodes;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_tsv(line);
    if (!saw_header) {
      if (!(cells.size() == 3 && cells[0] == "id" && cells[1] == "label" && cells[2] == "attrs") &&
          !(cells.size() == 2 && cells[0] == "id" && cells[1] == "label"))
        throw ParseError("nodes header must be 'id\\tlabel\\tattrs' (got '" + line + "')", lineno);
      saw_header = true;
      continue;
    }
    if (cells.size() < 2 || cells[0].empty() || cells[1].empty())
      throw ParseError("node row needs at least non-empty id and label cells", lineno);
    NodeRecord n;
    n.id = cells[0];
    n.label = cells[1];
    if (cells.size() > 2 && !cells[2].empty() && cells[2].front() == '{') {
      if (cells.size() > 3)
        throw ParseError("JSON attribute object must be the last cell", lineno);
      nlohmann::json obj = nlohmann::json::parse(cells[2], nullptr, false);
      if (obj.is_discarded() || !obj.is_object())
        throw ParseError("malformed JSON attribute object", lineno);
      for (const auto& [k, v] : obj.items())
        n.attributes.emplace_back(k, detail::json_scalar_to_string(v, lineno));
    } else {
      for (std::size_t c = 2; c < cells.size(); ++c) {
        if (cells[c].empty()) continue;  // trailing tab tolerance
        std::size_t eq = cells[c].find('=');
        if (eq == std::string::npos || eq == 0)
          throw ParseError("attribute cell is not key=value: '" + cells[c] + "'", lineno);
        n.attributes.emplace_back(cells[c].substr(0, eq), cells[c].substr(eq + 1));
      }
    }
    nodes.push_back(std::move(n));
  }
  if (!saw_header && lineno == 0) return nodes;  // fully empty file == empty graph
  if (!saw_header) throw ParseError("missing header row", 1);
  return nodes;
}

// Edges file: TSV, header exactly `src<TAB>label<TAB>dst`, rows of 3 cells.
inline std::vector<EdgeRecord> read_edges(std::istream& in) {
  std::vector<EdgeRecord> edges;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_tsv(line);
    if (!saw_header) {
      if (cells.size() != 3 || cells[0] != "src" || cells[1] != "label" || cells[2] != "dst")
        throw ParseError("edges header must be 'src\\tlabel\\tdst' (got '" + line + "')", lineno);
      saw_header = true;
      continue;
    }
    if (cells.size() != 3 || cells[0].empty() || cells[1].empty() || cells[2].empty())
      throw ParseError("edge row needs exactly src, label, dst cells", lineno);
    edges.push_back({cells[0], cells[1], cells[2]});
  }
  if (!saw_header && lineno > 0) throw ParseError("missing header row", 1);
  return edges;
}

/// Loads a property graph from node and edge streams, building label and
/// adjacency indices. Throws ParseError / DataError per the format contract.
inline PropertyGraph load_graph(std::istream& node_source, std::istream& edge_source) {
  return PropertyGraph::build(read_nodes(node_source), read_edges(edge_source));
}

inline PropertyGraph load_graph_files(const std::string& nodes_path, const std::string& edges_path) {
  std::ifstream nf(nodes_path);
  if (!nf) throw ConfigError("cannot open nodes file: " + nodes_path);
  std::ifstream ef(edges_path);
  if (!ef) throw ConfigError("cannot open edges file: " + edges_path);
  return load_graph(nf, ef);
}

// Pattern file: JSON object {"variables": [..], "labels": {var: label},
// "edges": [{"from": v, "label": l, "to": v}, ..]}. Missing labels mean "*".
inline GraphPattern parse_pattern_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("pattern JSON must be an object");
  std::vector<std::string> vars;
  for (const auto& v : j.at("variables")) vars.push_back(v.get<std::string>());
  std::map<std::string, std::string> labels;
  if (j.contains("labels"))
    for (const auto& [k, v] : j.at("labels").items()) labels[k] = v.get<std::string>();
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  if (j.contains("edges"))
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at("from").get<std::string>(), e.at("label").get<std::string>(),
                         e.at("to").get<std::string>());
  return GraphPattern::build(std::move(vars), labels, edges);
}

inline GraphPattern load_pattern(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed pattern JSON", 1);
  return parse_pattern_json(j);
}

inline GraphPattern load_pattern_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open pattern file: " + path);
  return load_pattern(f);
}

inline nlohmann::json pattern_to_json(const GraphPattern& q) {
  nlohmann::json j;
  j["variables"] = q.variables();
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t i = 0; i < q.size_nodes(); ++i)
    labels[q.variable(static_cast<int>(i))] = q.label(static_cast<int>(i));
  j["labels"] = labels;
  nlohmann::json edges = nlohmann::json::array();
  for (const PatternEdge& e : q.edges())
    edges.push_back({{"from", q.variable(e.from)}, {"label", e.label}, {"to", q.variable(e.to)}});
  j["edges"] = edges;
  return j;
}

}  // namespace gedmine
