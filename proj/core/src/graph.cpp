#include "treemod/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace treemod {

namespace {

struct Dsu {
  std::vector<int> parent;

  explicit Dsu(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  }

  // Returns false if u and v were already connected.
  bool unite(int u, int v) {
    int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    parent[static_cast<size_t>(ru)] = rv;
    return true;
  }
};

}  // namespace

Graph::Graph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  labels_.resize(static_cast<size_t>(n_ < 0 ? 0 : n_));
  std::iota(labels_.begin(), labels_.end(), 0LL);
  build_and_validate();
}

Graph::Graph(int vertex_count, std::vector<Edge> edges, std::vector<long long> vertex_labels)
    : n_(vertex_count), edges_(std::move(edges)), labels_(std::move(vertex_labels)) {
  if (labels_.size() != static_cast<size_t>(n_ < 0 ? 0 : n_)) {
    throw std::invalid_argument("graph: label vector length does not match vertex count");
  }
  build_and_validate();
}

void Graph::build_and_validate() {
  if (n_ < 1) throw std::invalid_argument("graph: needs at least one vertex");
  adj_.assign(static_cast<size_t>(n_), {});
  for (size_t id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw std::invalid_argument("graph: edge " + std::to_string(id) + " endpoint out of range");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("graph: edge " + std::to_string(id) + " is a self-loop");
    }
    adj_[static_cast<size_t>(e.u)].emplace_back(static_cast<int>(id), e.v);
    adj_[static_cast<size_t>(e.v)].emplace_back(static_cast<int>(id), e.u);
  }
  // Connectivity via DSU; a Graph is connected by contract.
  Dsu dsu(n_);
  int components = n_;
  for (const Edge& e : edges_) {
    if (dsu.unite(e.u, e.v)) --components;
  }
  if (components != 1) {
    throw std::invalid_argument("graph: not connected");
  }
}

SpanningTree::SpanningTree(std::vector<int> edge_ids) : ids_(std::move(edge_ids)) {
  std::sort(ids_.begin(), ids_.end());
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] < 0) throw std::invalid_argument("spanning tree: negative edge id");
    if (i > 0 && ids_[i] == ids_[i - 1]) {
      throw std::invalid_argument("spanning tree: duplicate edge id " + std::to_string(ids_[i]));
    }
  }
}

bool SpanningTree::contains(int edge_id) const {
  return std::binary_search(ids_.begin(), ids_.end(), edge_id);
}

bool is_spanning_tree(const Graph& g, const SpanningTree& t) {
  if (t.size() != g.vertex_count() - 1) return false;
  Dsu dsu(g.vertex_count());
  for (int id : t.edge_ids()) {
    if (id >= g.edge_count()) return false;
    const Edge& e = g.edge(id);
    if (!dsu.unite(e.u, e.v)) return false;  // cycle
  }
  return true;  // n-1 acyclic edges on n vertices always span
}

Graph parse_graph(std::string_view text) {
  std::vector<Edge> edges;
  std::vector<long long> labels;
  std::unordered_map<long long, int> id_of;

  auto intern = [&](long long label) {
    auto [it, inserted] = id_of.try_emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    // Trim and skip blanks / comment lines.
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    if (line[b] == '#') continue;
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    long long endpoints[2];
    int tokens = 0;
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      std::string_view tok = line.substr(i, j - i);
      if (tokens >= 2) {
        throw ParseError(ParseError::Kind::MalformedLine,
                         "line " + std::to_string(line_no) + ": expected two vertex labels");
      }
      long long value = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
        throw ParseError(ParseError::Kind::MalformedLine,
                         "line " + std::to_string(line_no) + ": '" + std::string(tok) +
                             "' is not a nonnegative integer");
      }
      endpoints[tokens++] = value;
      i = j;
    }
    if (tokens != 2) {
      throw ParseError(ParseError::Kind::MalformedLine,
                       "line " + std::to_string(line_no) + ": expected two vertex labels");
    }
    if (endpoints[0] == endpoints[1]) {
      throw ParseError(ParseError::Kind::SelfLoop,
                       "line " + std::to_string(line_no) + ": self-loop at vertex " +
                           std::to_string(endpoints[0]));
    }
    int u = intern(endpoints[0]);
    int v = intern(endpoints[1]);
    edges.push_back({u, v});
  }

  if (edges.empty()) {
    throw ParseError(ParseError::Kind::EmptyInput, "input contains no edges");
  }

  // Count first: the ctor call moves `labels` away, and argument evaluation
  // order would otherwise be free to read .size() from the emptied vector.
  const int vertex_count = static_cast<int>(labels.size());
  try {
    return Graph(vertex_count, std::move(edges), std::move(labels));
  } catch (const std::invalid_argument&) {
    // Endpoints are interned and self-loops rejected above, so the only
    // validation left to fail is connectivity.
    throw ParseError(ParseError::Kind::Disconnected, "graph is not connected");
  }
}

std::uint64_t count_spanning_trees(const Graph& g) {
  const int n = g.vertex_count();
  if (n == 1) return 1;
  const int m = n - 1;

  // Reduced Laplacian (vertex 0 struck out), exact integers.
  std::vector<std::vector<__int128>> a(static_cast<size_t>(m),
                                       std::vector<__int128>(static_cast<size_t>(m), 0));
  for (const Edge& e : g.edges()) {
    if (e.u > 0) a[static_cast<size_t>(e.u - 1)][static_cast<size_t>(e.u - 1)] += 1;
    if (e.v > 0) a[static_cast<size_t>(e.v - 1)][static_cast<size_t>(e.v - 1)] += 1;
    if (e.u > 0 && e.v > 0) {
      a[static_cast<size_t>(e.u - 1)][static_cast<size_t>(e.v - 1)] -= 1;
      a[static_cast<size_t>(e.v - 1)][static_cast<size_t>(e.u - 1)] -= 1;
    }
  }

  auto mul = [](__int128 x, __int128 y) {
    __int128 r;
    if (__builtin_mul_overflow(x, y, &r)) {
      throw std::overflow_error("spanning tree count exceeds integer range");
    }
    return r;
  };

  // Bareiss fraction-free elimination: every division below is exact, so the
  // whole computation stays in integers.
  int sign = 1;
  __int128 prev = 1;
  for (int k = 0; k < m; ++k) {
    if (a[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < m; ++i) {
        if (a[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return 0;  // singular: cannot happen for a connected graph
      std::swap(a[static_cast<size_t>(k)], a[static_cast<size_t>(swap_row)]);
      sign = -sign;
    }
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < m; ++j) {
        __int128 num = mul(a[static_cast<size_t>(i)][static_cast<size_t>(j)],
                           a[static_cast<size_t>(k)][static_cast<size_t>(k)]) -
                       mul(a[static_cast<size_t>(i)][static_cast<size_t>(k)],
                           a[static_cast<size_t>(k)][static_cast<size_t>(j)]);
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] = num / prev;
      }
      a[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
    }
    prev = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
  }

  __int128 det = sign * a[static_cast<size_t>(m - 1)][static_cast<size_t>(m - 1)];
  if (det < 0) throw std::logic_error("tree count determinant came out negative");
  if (det > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("spanning tree count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(det);
}

namespace {

void enumerate_rec(const Graph& g, int next_edge, int joins_left, Dsu& dsu,
                   std::vector<int>& chosen, std::vector<SpanningTree>& out) {
  if (joins_left == 0) {
    out.emplace_back(chosen);  // chosen is ascending, so trees arrive in lex order
    return;
  }
  if (next_edge >= g.edge_count()) return;

  const Edge& e = g.edge(next_edge);
  int ru = dsu.find(e.u), rv = dsu.find(e.v);

  // Include next_edge first: lexicographically smaller id sets come first.
  if (ru != rv) {
    Dsu with = dsu;
    with.unite(e.u, e.v);
    chosen.push_back(next_edge);
    enumerate_rec(g, next_edge + 1, joins_left - 1, with, chosen, out);
    chosen.pop_back();
  }

  // Exclude next_edge, but only if the remaining edges can still connect
  // everything that is currently separate.
  Dsu rest = dsu;
  int need = joins_left;
  for (int id = next_edge + 1; id < g.edge_count() && need > 0; ++id) {
    const Edge& r = g.edge(id);
    if (rest.unite(r.u, r.v)) --need;
  }
  if (need == 0) {
    enumerate_rec(g, next_edge + 1, joins_left, dsu, chosen, out);
  }
}

}  // namespace

std::vector<SpanningTree> enumerate_spanning_trees(const Graph& g, std::uint64_t cap) {
  std::uint64_t total = count_spanning_trees(g);
  if (total > cap) {
    throw CapExceeded("graph has " + std::to_string(total) +
                      " spanning trees, above the cap of " + std::to_string(cap));
  }
  std::vector<SpanningTree> out;
  out.reserve(static_cast<size_t>(total));
  if (g.vertex_count() == 1) {
    out.emplace_back(std::vector<int>{});
    return out;
  }
  Dsu dsu(g.vertex_count());
  std::vector<int> chosen;
  chosen.reserve(static_cast<size_t>(g.vertex_count() - 1));
  enumerate_rec(g, 0, g.vertex_count() - 1, dsu, chosen, out);
  if (out.size() != total) {
    throw std::logic_error("tree enumeration disagrees with the determinant count");
  }
  return out;
}

MstResult min_spanning_tree(const Graph& g, const Density& rho) {
  if (static_cast<int>(rho.values.size()) != g.edge_count()) {
    throw std::invalid_argument("density length does not match edge count");
  }
  for (double w : rho.values) {
    if (!(w >= 0.0)) throw std::invalid_argument("density entries must be nonnegative");
  }

  std::vector<int> order(static_cast<size_t>(g.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rho.values[static_cast<size_t>(a)] < rho.values[static_cast<size_t>(b)];
  });  // stable keeps equal weights in id order -> deterministic tie-break

  Dsu dsu(g.vertex_count());
  std::vector<int> picked;
  picked.reserve(static_cast<size_t>(g.vertex_count() - 1));
  double length = 0.0;
  for (int id : order) {
    const Edge& e = g.edge(id);
    if (dsu.unite(e.u, e.v)) {
      picked.push_back(id);
      length += rho.values[static_cast<size_t>(id)];
      if (static_cast<int>(picked.size()) == g.vertex_count() - 1) break;
    }
  }
  return MstResult{SpanningTree(std::move(picked)), length};
}

namespace {

struct BridgeDfs {
  const Graph& g;
  std::vector<int> disc, low;
  std::vector<bool> is_bridge;
  int timer = 0;

  explicit BridgeDfs(const Graph& graph)
      : g(graph),
        disc(static_cast<size_t>(graph.vertex_count()), -1),
        low(static_cast<size_t>(graph.vertex_count()), -1),
        is_bridge(static_cast<size_t>(graph.edge_count()), false) {}

  void run(int v, int parent_edge) {
    disc[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = timer++;
    for (auto [id, to] : g.incident(v)) {
      if (id == parent_edge) continue;  // only the exact entering edge; a parallel copy counts
      if (disc[static_cast<size_t>(to)] >= 0) {
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)],
                                               disc[static_cast<size_t>(to)]);
      } else {
        run(to, id);
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)],
                                               low[static_cast<size_t>(to)]);
        if (low[static_cast<size_t>(to)] > disc[static_cast<size_t>(v)]) {
          is_bridge[static_cast<size_t>(id)] = true;
        }
      }
    }
  }
};

}  // namespace

std::vector<int> find_bridges(const Graph& g) {
  BridgeDfs dfs(g);
  dfs.run(0, -1);
  std::vector<int> out;
  for (int id = 0; id < g.edge_count(); ++id) {
    if (dfs.is_bridge[static_cast<size_t>(id)]) out.push_back(id);
  }
  return out;
}

}  // namespace treemod
