#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "belltasks/error.hpp"

namespace belltasks {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;  // stored with first <= second

/// Undirected graph on vertices 0..n-1; an edge (v, v) is a self-loop that
/// lets an agent stay at v. Immutable after construction.
class Graph {
 public:
  Graph(std::string name, int n, const std::vector<Edge>& edges) : name_(std::move(name)), n_(n) {
    if (n < 1) throw Error(ErrorKind::invalid_parameter, "graph needs at least one vertex");
    std::set<Edge> unique;
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw Error(ErrorKind::invalid_graph, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                                  ") out of range for n=" + std::to_string(n));
      }
      unique.insert({std::min(u, v), std::max(u, v)});
    }
    edges_.assign(unique.begin(), unique.end());
    moves_.assign(n, {});
    for (auto [u, v] : edges_) {
      moves_[u].push_back(v);
      if (u != v) moves_[v].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
      auto& m = moves_[v];
      std::sort(m.begin(), m.end());
      if (m.empty()) {
        throw Error(ErrorKind::invalid_graph,
                    "vertex " + std::to_string(v) + " of '" + name_ + "' has no allowed move");
      }
    }
  }

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbors of x in ascending order, x itself included iff it carries a self-loop.
  const std::vector<Vertex>& allowed_moves(Vertex x) const {
    check_vertex(x);
    return moves_[x];
  }

  bool has_edge(Vertex u, Vertex v) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{std::min(u, v), std::max(u, v)});
  }

  bool has_loop(Vertex v) const { return has_edge(v, v); }

  /// {v} together with its non-loop neighbors, ascending.
  std::vector<Vertex> closed_neighborhood(Vertex v) const {
    check_vertex(v);
    std::vector<Vertex> out = moves_[v];
    if (!has_loop(v)) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  int loop_count() const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.first == e.second; }));
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  void check_vertex(Vertex x) const {
    if (x < 0 || x >= n_) throw Error(ErrorKind::invalid_parameter, "vertex " + std::to_string(x) + " out of range");
  }

  std::string name_;
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> moves_;
};

inline Graph make_cycle(int n) {
  if (n < 3) throw Error(ErrorKind::invalid_parameter, "cycle needs n >= 3, got " + std::to_string(n));
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(std::to_string(n) + "-gon", n, e);
}

/// Path 0-1-...-(n-1); `curly` adds self-loops at both endpoints.
inline Graph make_path(int n, bool curly) {
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "path needs n >= 2, got " + std::to_string(n));
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  if (curly) {
    e.push_back({0, 0});
    e.push_back({n - 1, n - 1});
  }
  return Graph(std::to_string(n) + "-line" + (curly ? " curly" : ""), n, e);
}

inline Graph make_complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph("K" + std::to_string(n), n, e);
}

inline Graph make_hypercube(int dim) {
  const int n = 1 << dim;
  std::vector<Edge> e;
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < dim; ++b)
      if (int u = v ^ (1 << b); v < u) e.push_back({v, u});
  return Graph("Q" + std::to_string(dim), n, e);
}

/// Copy of g with a self-loop added at every vertex.
inline Graph with_all_loops(const Graph& g, std::string name) {
  std::vector<Edge> e = g.edges();
  for (int v = 0; v < g.n(); ++v) e.push_back({v, v});
  return Graph(std::move(name), g.n(), e);
}

/// Edge (x, a) iff a walk of exactly h steps leads from x to a.
inline Graph walk_power(const Graph& g, int h) {
  if (h < 1) throw Error(ErrorKind::invalid_parameter, "walk length must be >= 1");
  if (h == 1) return g;
  const int n = g.n();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int x = 0; x < n; ++x) reach[x][x] = 1;
  for (int step = 0; step < h; ++step) {
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (reach[x][y])
          for (Vertex z : g.allowed_moves(y)) next[x][z] = 1;
    reach = std::move(next);
  }
  std::vector<Edge> e;
  for (int x = 0; x < n; ++x)
    for (int a = x; a < n; ++a)
      if (reach[x][a]) e.push_back({x, a});
  return Graph(g.name() + "^" + std::to_string(h), n, e);
}

/// Result of reading a graph file: the graph plus original label of each vertex.
struct LoadedGraph {
  Graph graph;
  std::vector<long long> labels;  // labels[i] is the file label remapped to vertex i
};

/// Text format: first data line "n m", then m lines "u v"; '#' starts a comment line.
/// Labels may be arbitrary integers; they are remapped to 0..n-1 in ascending order.
inline LoadedGraph parse_graph(std::istream& in, std::string name) {
  std::vector<std::string> lines;
  std::vector<int> line_numbers;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
    line_numbers.push_back(no);
  }
  if (lines.empty()) throw Error(ErrorKind::parse_error, "graph file is empty");
  long long n = 0, m = 0;
  {
    std::istringstream head(lines[0]);
    if (!(head >> n >> m) || n < 1 || m < 0) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_numbers[0]) + ": expected 'n m'");
    }
  }
  if (static_cast<long long>(lines.size()) - 1 != m) {
    throw Error(ErrorKind::parse_error, "declared " + std::to_string(m) + " edges, found " +
                                            std::to_string(lines.size() - 1));
  }
  std::vector<std::pair<long long, long long>> raw;
  std::set<long long> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    long long u = 0, v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_numbers[i]) + ": expected 'u v'");
    }
    raw.push_back({u, v});
    labels.insert(u);
    labels.insert(v);
  }
  if (static_cast<long long>(labels.size()) > n) {
    throw Error(ErrorKind::parse_error, "more distinct labels than declared vertex count");
  }
  if (static_cast<long long>(labels.size()) < n) {
    throw Error(ErrorKind::invalid_graph, "declared " + std::to_string(n) + " vertices but only " +
                                              std::to_string(labels.size()) + " appear in edges");
  }
  std::map<long long, int> index;
  std::vector<long long> order(labels.begin(), labels.end());
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (auto [u, v] : raw) edges.push_back({index[u], index[v]});
  return {Graph(std::move(name), static_cast<int>(n), edges), std::move(order)};
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << "# " << g.name() << "\n" << g.n() << " " << g.edges().size() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

}  // namespace belltasks
