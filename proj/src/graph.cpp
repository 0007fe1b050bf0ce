#include "cbcfog/graph.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>

namespace cbcfog {

namespace {

std::optional<OriginalId> parse_id(std::string_view token) {
  OriginalId value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
      ++j;
    }
    if (j > i) {
      out.push_back(s.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

// Reads "origin=<id>" out of a "# nodes=<n> origin=<id>" header comment.
std::optional<OriginalId> header_origin(std::string_view comment) {
  for (auto token : split_ws(comment)) {
    if (token.starts_with("origin=")) {
      return parse_id(token.substr(7));
    }
  }
  return std::nullopt;
}

} // namespace

OriginSpec OriginSpec::parse(std::string_view text) {
  if (text == "auto") {
    return automatic();
  }
  if (text == "header") {
    return from_header();
  }
  if (auto id = parse_id(text)) {
    return node(*id);
  }
  throw GraphError("origin must be 'auto', 'header' or a node id, got '" + std::string(text) + "'");
}

Topology Topology::from_edges(std::size_t node_count,
                              std::span<const std::pair<NodeId, NodeId>> edges, NodeId origin,
                              std::string snapshot_label, std::vector<OriginalId> original_ids) {
  if (node_count == 0) {
    throw GraphError("topology must have at least one node");
  }
  if (origin >= node_count) {
    throw GraphError("origin " + std::to_string(origin) + " is not a valid node id");
  }
  if (original_ids.empty()) {
    original_ids.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
      original_ids[i] = i;
    }
  }
  if (original_ids.size() != node_count ||
      std::adjacent_find(original_ids.begin(), original_ids.end(),
                         std::greater_equal<>{}) != original_ids.end()) {
    throw GraphError("original ids must be strictly increasing, one per node");
  }

  Topology t;
  t.adjacency_.resize(node_count);
  for (auto [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw GraphError("edge references node outside 0.." + std::to_string(node_count - 1));
    }
    if (a == b) {
      throw GraphError("self-loop on node " + std::to_string(original_ids[a]));
    }
    t.adjacency_[a].push_back(b);
    t.adjacency_[b].push_back(a);
  }
  std::size_t twice_edges = 0;
  for (auto& adj : t.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    twice_edges += adj.size();
  }
  t.edge_count_ = twice_edges / 2;
  t.original_ids_ = std::move(original_ids);
  t.origin_ = origin;
  t.snapshot_label_ = std::move(snapshot_label);
  return t;
}

bool Topology::has_edge(NodeId a, NodeId b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<NodeId> Topology::dense_id(OriginalId original) const {
  auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end() || *it != original) {
    return std::nullopt;
  }
  return static_cast<NodeId>(it - original_ids_.begin());
}

Topology Topology::with_origin(NodeId origin) const {
  if (!valid(origin)) {
    throw GraphError("origin " + std::to_string(origin) + " is not a valid node id");
  }
  Topology t = *this;
  t.origin_ = origin;
  return t;
}

Topology Topology::with_label(std::string label) const {
  Topology t = *this;
  t.snapshot_label_ = std::move(label);
  return t;
}

NodeId Topology::max_degree_node() const {
  NodeId best = 0;
  for (NodeId v = 1; v < adjacency_.size(); ++v) {
    if (adjacency_[v].size() > adjacency_[best].size()) {
      best = v;
    }
  }
  return best;
}

Topology load_topology(std::string_view text, OriginSpec origin, std::string snapshot_label) {
  std::vector<std::pair<OriginalId, OriginalId>> raw_edges;
  std::optional<OriginalId> declared_origin;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      nl = text.size();
    }
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      if (!declared_origin) {
        declared_origin = header_origin(line.substr(1));
      }
      continue;
    }
    auto tokens = split_ws(line);
    if (tokens.size() != 2) {
      throw GraphError("line " + std::to_string(line_no) + ": expected two node ids");
    }
    auto a = parse_id(tokens[0]);
    auto b = parse_id(tokens[1]);
    if (!a || !b) {
      throw GraphError("line " + std::to_string(line_no) + ": node ids must be non-negative integers");
    }
    if (*a == *b) {
      throw GraphError("line " + std::to_string(line_no) + ": self-loop on node " + std::to_string(*a));
    }
    raw_edges.emplace_back(*a, *b);
  }
  if (raw_edges.empty()) {
    throw GraphError("topology document contains no edges");
  }

  std::vector<OriginalId> ids;
  ids.reserve(raw_edges.size() * 2);
  for (auto [a, b] : raw_edges) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  auto dense = [&](OriginalId id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw_edges.size());
  for (auto [a, b] : raw_edges) {
    edges.emplace_back(dense(a), dense(b));
  }

  const std::size_t n = ids.size();
  Topology topo = Topology::from_edges(n, edges, 0, std::move(snapshot_label), ids);

  auto resolve = [&](OriginalId id) {
    auto d = topo.dense_id(id);
    if (!d) {
      throw GraphError("origin " + std::to_string(id) + " is not a node of the topology");
    }
    return *d;
  };
  switch (origin.mode) {
  case OriginSpec::Mode::automatic:
    return topo.with_origin(topo.max_degree_node());
  case OriginSpec::Mode::header:
    if (!declared_origin) {
      throw GraphError("document has no '# nodes=<n> origin=<id>' header");
    }
    return topo.with_origin(resolve(*declared_origin));
  case OriginSpec::Mode::explicit_id:
    return topo.with_origin(resolve(origin.id));
  }
  return topo;
}

Topology read_topology_file(const std::string& path, OriginSpec origin) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot read topology file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_topology(buf.str(), origin, std::filesystem::path(path).stem().string());
}

std::string serialize_topology(const Topology& topology) {
  std::vector<std::pair<OriginalId, OriginalId>> edges;
  edges.reserve(topology.edge_count());
  for (NodeId v = 0; v < topology.node_count(); ++v) {
    for (NodeId w : topology.neighbors(v)) {
      if (v < w) {
        edges.emplace_back(topology.original_id(v), topology.original_id(w));
      }
    }
  }
  std::sort(edges.begin(), edges.end());

  std::string out = "# nodes=" + std::to_string(topology.node_count()) +
                    " origin=" + std::to_string(topology.original_id(topology.origin())) + "\n";
  for (auto [a, b] : edges) {
    out += std::to_string(a);
    out += ' ';
    out += std::to_string(b);
    out += '\n';
  }
  return out;
}

void write_topology_file(const std::string& path, const Topology& topology) {
  std::ofstream out(path);
  if (!out) {
    throw GraphError("cannot write topology file '" + path + "'");
  }
  out << serialize_topology(topology);
}

ShortestPathData bfs_shortest_paths(const Topology& topology, NodeId source) {
  if (!topology.valid(source)) {
    throw GraphError("invalid source node " + std::to_string(source));
  }
  const std::size_t n = topology.node_count();
  ShortestPathData sp;
  sp.source = source;
  sp.dist.assign(n, kUnreachable);
  sp.sigma.assign(n, 0.0);
  sp.preds.assign(n, {});
  sp.order.reserve(n);

  sp.dist[source] = 0;
  sp.sigma[source] = 1.0;
  sp.order.push_back(source);
  for (std::size_t head = 0; head < sp.order.size(); ++head) {
    const NodeId v = sp.order[head];
    for (NodeId w : topology.neighbors(v)) {
      if (sp.dist[w] == kUnreachable) {
        sp.dist[w] = sp.dist[v] + 1;
        sp.order.push_back(w);
      }
      if (sp.dist[w] == sp.dist[v] + 1) {
        sp.sigma[w] += sp.sigma[v];
        sp.preds[w].push_back(v);
      }
    }
  }
  return sp;
}

std::vector<std::uint32_t> bfs_distances(const Topology& topology, NodeId source) {
  if (!topology.valid(source)) {
    throw GraphError("invalid source node " + std::to_string(source));
  }
  std::vector<std::uint32_t> dist(topology.node_count(), kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(topology.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : topology.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::vector<NodeId>> connected_components(const Topology& topology) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(topology.node_count(), false);
  for (NodeId start = 0; start < topology.node_count(); ++start) {
    if (seen[start]) {
      continue;
    }
    std::vector<NodeId> members{start};
    seen[start] = true;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (NodeId w : topology.neighbors(members[head])) {
        if (!seen[w]) {
          seen[w] = true;
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

DistanceTable::DistanceTable(const Topology& topology) : n_(topology.node_count()) {
  dist_.resize(n_ * n_);
  for (NodeId s = 0; s < n_; ++s) {
    auto d = bfs_distances(topology, s);
    std::copy(d.begin(), d.end(), dist_.begin() + static_cast<std::ptrdiff_t>(s * n_));
  }
}

} // namespace cbcfog
