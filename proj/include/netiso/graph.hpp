#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netiso {

using Unit = std::size_t;
using Edge = std::pair<Unit, Unit>;

/// Immutable directed graph. Edge (i, j) means unit i interferes with unit j,
/// so j lists i among its in-neighbors. Undirected inputs are stored with both
/// directions present. Adjacency lists are sorted and duplicate-free.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds a graph on `n` units. Duplicate edges collapse; self-loops and
  /// out-of-range ids throw std::invalid_argument. With `directed == false`
  /// every edge is mirrored.
  static DirectedGraph from_edges(std::size_t n, std::span<const Edge> edges,
                                  bool directed) {
    DirectedGraph g;
    g.out_adj_.assign(n, {});
    g.in_adj_.assign(n, {});
    for (const auto& [i, j] : edges) {
      if (i >= n || j >= n)
        throw std::invalid_argument("edge (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") out of range for n=" +
                                    std::to_string(n));
      if (i == j)
        throw std::invalid_argument("self-loop at unit " + std::to_string(i));
      g.out_adj_[i].push_back(j);
      if (!directed) g.out_adj_[j].push_back(i);
    }
    for (auto& row : g.out_adj_) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    for (Unit i = 0; i < n; ++i)
      for (Unit j : g.out_adj_[i]) g.in_adj_[j].push_back(i);  // already sorted
    g.in_degree_.resize(n);
    for (Unit i = 0; i < n; ++i) g.in_degree_[i] = g.in_adj_[i].size();
    return g;
  }

  std::size_t size() const noexcept { return out_adj_.size(); }
  bool empty() const noexcept { return out_adj_.empty(); }

  /// Number of directed edges (a symmetric pair counts twice).
  std::size_t edge_count() const noexcept {
    std::size_t m = 0;
    for (const auto& row : out_adj_) m += row.size();
    return m;
  }

  std::span<const Unit> out_neighbors(Unit i) const { return out_adj_.at(i); }
  std::span<const Unit> in_neighbors(Unit i) const { return in_adj_.at(i); }
  std::size_t in_degree(Unit i) const { return in_degree_.at(i); }
  const std::vector<std::size_t>& in_degrees() const noexcept { return in_degree_; }

  std::size_t max_in_degree() const noexcept {
    return in_degree_.empty() ? 0 : *std::max_element(in_degree_.begin(), in_degree_.end());
  }

  double mean_in_degree() const noexcept {
    return empty() ? 0.0 : static_cast<double>(edge_count()) / static_cast<double>(size());
  }

  bool has_edge(Unit i, Unit j) const {
    const auto& row = out_adj_.at(i);
    return std::binary_search(row.begin(), row.end(), j);
  }

  bool is_symmetric() const {
    for (Unit i = 0; i < size(); ++i)
      if (out_adj_[i] != in_adj_[i]) return false;
    return true;
  }

  /// All directed edges in (source, target) lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Unit i = 0; i < size(); ++i)
      for (Unit j : out_adj_[i]) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  std::vector<std::vector<Unit>> out_adj_;
  std::vector<std::vector<Unit>> in_adj_;
  std::vector<std::size_t> in_degree_;
};

inline void check_unit(const DirectedGraph& g, Unit i) {
  if (i >= g.size())
    throw std::out_of_range("unit " + std::to_string(i) + " out of range for n=" +
                            std::to_string(g.size()));
}

/// In-neighbors of i together with i itself, sorted.
inline std::vector<Unit> closed_in_neighborhood(const DirectedGraph& g, Unit i) {
  check_unit(g, i);
  auto nb = g.in_neighbors(i);
  std::vector<Unit> out(nb.begin(), nb.end());
  out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  return out;
}

/// Out-neighbors of i together with i itself, sorted.
inline std::vector<Unit> closed_out_neighborhood(const DirectedGraph& g, Unit i) {
  check_unit(g, i);
  auto nb = g.out_neighbors(i);
  std::vector<Unit> out(nb.begin(), nb.end());
  out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  return out;
}

/// Calls `fn(j)` for every j in the union of closed out-neighborhoods of the
/// closed in-neighborhood of i. Units may be visited more than once.
template <class Fn>
void for_each_in_removal_set(const DirectedGraph& g, Unit i, Fn&& fn) {
  auto visit_closed_out = [&](Unit l) {
    fn(l);
    for (Unit j : g.out_neighbors(l)) fn(j);
  };
  visit_closed_out(i);
  for (Unit l : g.in_neighbors(i)) visit_closed_out(l);
}

/// Units that can no longer be isolated once i is selected: every j whose
/// closed in-neighborhood meets that of i. Sorted, contains i.
inline std::vector<Unit> removal_set(const DirectedGraph& g, Unit i) {
  check_unit(g, i);
  std::vector<Unit> out;
  for_each_in_removal_set(g, i, [&](Unit j) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Empirical in-degree distribution of a unit subset on the support
/// 0..d_max_ref. `empty` marks a PMF built from no units (all zeros).
struct DegreePMF {
  std::vector<double> prob;
  bool empty = false;
};

template <class Units>
DegreePMF degree_pmf(const DirectedGraph& g, const Units& subset, std::size_t d_max_ref) {
  DegreePMF pmf;
  pmf.prob.assign(d_max_ref + 1, 0.0);
  std::size_t count = 0;
  for (Unit i : subset) {
    std::size_t d = g.in_degree(i);
    if (d > d_max_ref)
      throw std::invalid_argument("in-degree " + std::to_string(d) + " of unit " +
                                  std::to_string(i) + " exceeds reference support");
    pmf.prob[d] += 1.0;
    ++count;
  }
  if (count == 0) {
    pmf.empty = true;
    return pmf;
  }
  for (double& p : pmf.prob) p /= static_cast<double>(count);
  return pmf;
}

/// PMF over all units on the support 0..max_in_degree(g).
inline DegreePMF population_degree_pmf(const DirectedGraph& g) {
  std::vector<Unit> all(g.size());
  for (Unit i = 0; i < g.size(); ++i) all[i] = i;
  return degree_pmf(g, all, g.max_in_degree());
}

inline double l2_pmf_distance_sq(const DegreePMF& p, const DegreePMF& q) {
  if (p.prob.size() != q.prob.size())
    throw std::invalid_argument("degree PMFs have different support lengths");
  double s = 0.0;
  for (std::size_t d = 0; d < p.prob.size(); ++d) {
    double diff = p.prob[d] - q.prob[d];
    s += diff * diff;
  }
  return s;
}

/// Two-step reachability graph: (i, j) iff i -> l -> j for some l.
/// Diagonal entries (i -> l -> i) are dropped so the result is loop-free.
inline DirectedGraph squared_graph(const DirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<Edge> edges;
  std::vector<char> seen(n, 0);
  std::vector<Unit> touched;
  for (Unit i = 0; i < n; ++i) {
    touched.clear();
    for (Unit l : g.out_neighbors(i))
      for (Unit j : g.out_neighbors(l))
        if (j != i && !seen[j]) {
          seen[j] = 1;
          touched.push_back(j);
        }
    for (Unit j : touched) {
      seen[j] = 0;
      edges.emplace_back(i, j);
    }
  }
  return DirectedGraph::from_edges(n, edges, /*directed=*/true);
}

/// Number of weakly connected components.
inline std::size_t component_count(const DirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<char> seen(n, 0);
  std::vector<Unit> stack;
  std::size_t components = 0;
  for (Unit s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      Unit u = stack.back();
      stack.pop_back();
      auto push = [&](Unit v) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      };
      for (Unit v : g.out_neighbors(u)) push(v);
      for (Unit v : g.in_neighbors(u)) push(v);
    }
  }
  return components;
}

// ---------------------------------------------------------------------------
// Edge-list files

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool parse_unit(const std::string& tok, Unit& out) {
  if (tok.empty()) return false;
  for (char c : tok)
    if (c < '0' || c > '9') return false;
  try {
    out = static_cast<Unit>(std::stoull(tok));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace detail

/// Reads `i j` pairs, one per line. `#` starts a comment; a line of the form
/// `# n=<count>` declares the unit count, otherwise n = max id + 1.
inline DirectedGraph load_edge_list(std::istream& in, bool directed) {
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::size_t declared_n = 0;
  bool has_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string tok;
      if (cs >> tok && tok.rfind("n=", 0) == 0) {
        Unit n = 0;
        if (!detail::parse_unit(tok.substr(2), n))
          throw ParseError(lineno, "malformed unit-count header");
        declared_n = n;
        has_header = true;
      }
      line.resize(hash);
    }
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    Unit a = 0, b = 0;
    if (toks.size() != 2 || !detail::parse_unit(toks[0], a) || !detail::parse_unit(toks[1], b))
      throw ParseError(lineno, "expected two non-negative integer unit ids");
    if (a == b) throw ParseError(lineno, "self-loop at unit " + toks[0]);
    edges.emplace_back(a, b);
    edge_lines.push_back(lineno);
  }
  std::size_t n = declared_n;
  if (!has_header)
    for (const auto& [a, b] : edges) n = std::max(n, std::max(a, b) + 1);
  for (std::size_t k = 0; k < edges.size(); ++k)
    if (edges[k].first >= n || edges[k].second >= n)
      throw ParseError(edge_lines[k], "unit id out of range for n=" + std::to_string(n));
  return DirectedGraph::from_edges(n, edges, directed);
}

inline DirectedGraph parse_edge_list(const std::string& text, bool directed) {
  std::istringstream in(text);
  return load_edge_list(in, directed);
}

/// Writes the `# n=` header and edges. For symmetric graphs written with
/// `directed == false`, each undirected edge appears once as `i j`, i < j.
inline void write_edge_list(std::ostream& out, const DirectedGraph& g, bool directed) {
  out << "# n=" << g.size() << '\n';
  for (Unit i = 0; i < g.size(); ++i)
    for (Unit j : g.out_neighbors(i))
      if (directed || i < j) out << i << ' ' << j << '\n';
}

}  // namespace netiso
