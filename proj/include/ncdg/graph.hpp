#pragma once

// Ordered graphs and digraphs on vertices 1..n, the eight family properties
// computed directly from their definitions, and exhaustive enumeration.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncdg/error.hpp"

namespace ncdg {

using Vertex = int;

struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Unordered pair stored with lo <= hi.
struct Edge {
  Vertex lo = 0;
  Vertex hi = 0;
  Edge() = default;
  Edge(Vertex a, Vertex b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Spans interleave: min1 < min2 < max1 < max2 (or the mirror).
inline bool spans_cross(Edge a, Edge b) {
  return (a.lo < b.lo && b.lo < a.hi && a.hi < b.hi) ||
         (b.lo < a.lo && a.lo < b.hi && b.hi < a.hi);
}

class Digraph {
 public:
  Digraph() : Digraph(1) {}
  explicit Digraph(int n) : n_(n), adj_(static_cast<size_t>(n) * n, 0) {}

  int n() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  size_t size() const { return arcs_.size(); }
  bool has_arc(Vertex u, Vertex v) const {
    return adj_[static_cast<size_t>(u - 1) * n_ + (v - 1)] != 0;
  }
  bool has_loops() const {
    return std::any_of(arcs_.begin(), arcs_.end(),
                       [](const Arc& a) { return a.from == a.to; });
  }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  friend Digraph make_digraph(int, const std::vector<Arc>&, bool);
  friend class DigraphBuilder;

  int n_;
  std::vector<Arc> arcs_;  // sorted, unique
  std::vector<uint8_t> adj_;
};

// Unchecked incremental construction for hot loops (enumeration, decoding).
// Callers guarantee endpoints are in range.
class DigraphBuilder {
 public:
  explicit DigraphBuilder(int n) : g_(n) {}
  void add(Vertex u, Vertex v) {
    auto& cell = g_.adj_[static_cast<size_t>(u - 1) * g_.n_ + (v - 1)];
    if (!cell) {
      cell = 1;
      g_.arcs_.push_back({u, v});
    }
  }
  bool has(Vertex u, Vertex v) const { return g_.has_arc(u, v); }
  Digraph build() && {
    std::sort(g_.arcs_.begin(), g_.arcs_.end());
    return std::move(g_);
  }

 private:
  Digraph g_;
};

inline Digraph make_digraph(int n, const std::vector<Arc>& arcs,
                            bool allow_loops = false) {
  if (n < 1) throw InputError("vertex count must be positive");
  Digraph g(n);
  for (const Arc& a : arcs) {
    if (a.from < 1 || a.from > n || a.to < 1 || a.to > n)
      throw InputError("arc endpoint out of range: " + std::to_string(a.from) +
                       " " + std::to_string(a.to));
    if (a.from == a.to && !allow_loops)
      throw InputError("self-loop at vertex " + std::to_string(a.from));
    auto& cell = g.adj_[static_cast<size_t>(a.from - 1) * n + (a.to - 1)];
    if (!cell) {
      cell = 1;
      g.arcs_.push_back(a);
    }
  }
  std::sort(g.arcs_.begin(), g.arcs_.end());
  return g;
}

class Graph {
 public:
  Graph() : Graph(1) {}
  explicit Graph(int n) : n_(n) {}
  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 1) throw InputError("vertex count must be positive");
    for (const Edge& e : edges_)
      if (e.lo < 1 || e.hi > n) throw InputError("edge endpoint out of range");
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(Vertex u, Vertex v) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge(u, v));
  }
  size_t loop_count() const {
    return std::count_if(edges_.begin(), edges_.end(),
                         [](const Edge& e) { return e.lo == e.hi; });
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

inline Graph underlying(const Digraph& g) {
  std::vector<Edge> es;
  es.reserve(g.size());
  for (const Arc& a : g.arcs()) es.emplace_back(a.from, a.to);
  return Graph(g.n(), std::move(es));
}

// Every edge serialized as its two arcs; a self-loop is a single arc.
inline Digraph as_inverse_digraph(const Graph& g) {
  std::vector<Arc> arcs;
  for (const Edge& e : g.edges()) {
    arcs.push_back({e.lo, e.hi});
    arcs.push_back({e.hi, e.lo});
  }
  return make_digraph(g.n(), arcs, true);
}

inline bool is_noncrossing(const Graph& g) {
  const auto& es = g.edges();
  for (size_t a = 0; a < es.size(); ++a)
    for (size_t b = a + 1; b < es.size(); ++b)
      if (spans_cross(es[a], es[b])) return false;
  return true;
}

inline bool is_noncrossing(const Digraph& g) {
  return is_noncrossing(underlying(g));
}

// ---------------------------------------------------------------------------
// Properties

enum class PropertyId : uint8_t {
  OUT,
  INV,
  ORIENTED,
  PROJ_W,
  ACYC_D,
  ACYC_U,
  CONN_W,
  UNAMB_S
};

inline constexpr std::array<PropertyId, 8> kAllProperties = {
    PropertyId::OUT,    PropertyId::INV,    PropertyId::ORIENTED,
    PropertyId::PROJ_W, PropertyId::ACYC_D, PropertyId::ACYC_U,
    PropertyId::CONN_W, PropertyId::UNAMB_S};

inline constexpr std::string_view property_name(PropertyId p) {
  constexpr std::array<std::string_view, 8> names = {
      "OUT", "INV", "ORIENTED", "PROJ_W", "ACYC_D", "ACYC_U", "CONN_W",
      "UNAMB_S"};
  return names[static_cast<size_t>(p)];
}

inline std::optional<PropertyId> parse_property(std::string_view s) {
  for (PropertyId p : kAllProperties)
    if (property_name(p) == s) return p;
  return std::nullopt;
}

class PropertySet {
 public:
  constexpr PropertySet() = default;
  constexpr PropertySet(std::initializer_list<PropertyId> ps) {
    for (PropertyId p : ps) insert(p);
  }
  static constexpr PropertySet from_bits(uint8_t b) {
    PropertySet s;
    s.bits_ = b;
    return s;
  }
  static constexpr PropertySet all() { return from_bits(0xFF); }

  constexpr uint8_t bits() const { return bits_; }
  constexpr bool contains(PropertyId p) const {
    return (bits_ >> static_cast<int>(p)) & 1u;
  }
  constexpr void insert(PropertyId p) {
    bits_ |= static_cast<uint8_t>(1u << static_cast<int>(p));
  }
  constexpr void erase(PropertyId p) {
    bits_ &= static_cast<uint8_t>(~(1u << static_cast<int>(p)));
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(PropertySet o) const {
    return (bits_ & ~o.bits_) == 0;
  }
  int size() const { return std::popcount(bits_); }

  std::vector<PropertyId> members() const {
    std::vector<PropertyId> out;
    for (PropertyId p : kAllProperties)
      if (contains(p)) out.push_back(p);
    return out;
  }

  constexpr PropertySet operator|(PropertySet o) const {
    return from_bits(bits_ | o.bits_);
  }
  constexpr PropertySet operator&(PropertySet o) const {
    return from_bits(bits_ & o.bits_);
  }
  friend constexpr bool operator==(PropertySet, PropertySet) = default;

  std::string to_string() const {
    std::string s;
    for (PropertyId p : members()) {
      if (!s.empty()) s += ',';
      s += property_name(p);
    }
    return s;
  }

 private:
  uint8_t bits_ = 0;
};

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n + 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline std::vector<std::vector<Vertex>> out_lists(const Digraph& g) {
  std::vector<std::vector<Vertex>> adj(g.n() + 1);
  for (const Arc& a : g.arcs()) adj[a.from].push_back(a.to);
  return adj;
}

// Non-loop underlying edges.
inline std::vector<Edge> proper_edges(const Digraph& g) {
  std::vector<Edge> es;
  const Graph u = underlying(g);
  for (const Edge& e : u.edges())
    if (e.lo != e.hi) es.push_back(e);
  return es;
}

inline bool has_directed_cycle(const Digraph& g) {
  auto adj = out_lists(g);
  std::vector<int> colour(g.n() + 1, 0);
  // Iterative DFS: 0 unseen, 1 on stack, 2 done.
  for (Vertex s = 1; s <= g.n(); ++s) {
    if (colour[s]) continue;
    std::vector<std::pair<Vertex, size_t>> stack{{s, 0}};
    colour[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i == adj[v].size()) {
        colour[v] = 2;
        stack.pop_back();
        continue;
      }
      Vertex w = adj[v][i++];
      if (colour[w] == 1) return true;
      if (colour[w] == 0) {
        colour[w] = 1;
        stack.push_back({w, 0});
      }
    }
  }
  return false;
}

// Visits every repeat-free path from s; stops early when f returns false.
template <typename F>
bool for_each_simple_path(const std::vector<std::vector<Vertex>>& adj,
                          Vertex s, F&& f) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<Vertex> path{s};
  seen[s] = 1;
  std::function<bool(Vertex)> dfs = [&](Vertex v) {
    for (Vertex w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      path.push_back(w);
      if (!f(path) || !dfs(w)) return false;
      path.pop_back();
      seen[w] = 0;
    }
    return true;
  };
  return dfs(s);
}

inline bool strongly_unambiguous(const Digraph& g) {
  auto adj = out_lists(g);
  for (Vertex s = 1; s <= g.n(); ++s) {
    std::vector<int> count(g.n() + 1, 0);
    bool ok = for_each_simple_path(adj, s, [&](const std::vector<Vertex>& p) {
      return ++count[p.back()] <= 1;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

inline bool check_property(const Digraph& g, PropertyId p) {
  switch (p) {
    case PropertyId::OUT: {
      std::vector<int> indeg(g.n() + 1, 0);
      for (const Arc& a : g.arcs())
        if (++indeg[a.to] > 1) return false;
      return true;
    }
    case PropertyId::INV:
      return std::all_of(g.arcs().begin(), g.arcs().end(), [&](const Arc& a) {
        return g.has_arc(a.to, a.from);
      });
    case PropertyId::ORIENTED:
      return std::none_of(g.arcs().begin(), g.arcs().end(), [&](const Arc& a) {
        return g.has_arc(a.to, a.from);
      });
    case PropertyId::PROJ_W:
      // Outgoing j->i must not properly cover incoming k->j.
      for (const Arc& in : g.arcs())
        for (const Arc& out : g.arcs()) {
          if (out.from != in.to || out.to == in.from) continue;
          Edge cover(out.from, out.to), inner(in.from, in.to);
          if (cover.lo <= inner.lo && inner.hi <= cover.hi) return false;
        }
      return true;
    case PropertyId::ACYC_D:
      return !detail::has_directed_cycle(g);
    case PropertyId::ACYC_U: {
      detail::DisjointSets ds(g.n());
      for (const Edge& e : detail::proper_edges(g))
        if (!ds.unite(e.lo, e.hi)) return false;
      return true;
    }
    case PropertyId::CONN_W: {
      detail::DisjointSets ds(g.n());
      int comps = g.n();
      for (const Edge& e : detail::proper_edges(g))
        if (ds.unite(e.lo, e.hi)) --comps;
      return comps == 1;
    }
    case PropertyId::UNAMB_S:
      return detail::strongly_unambiguous(g);
  }
  return false;
}

inline PropertySet properties_of(const Digraph& g) {
  PropertySet s;
  for (PropertyId p : kAllProperties)
    if (check_property(g, p)) s.insert(p);
  return s;
}

inline bool satisfies(const Digraph& g, PropertySet req) {
  for (PropertyId p : req.members())
    if (!check_property(g, p)) return false;
  return true;
}

// Transcription of the logspace chain walk: for each covering edge {u,y},
// follow the longest edge out of the current vertex towards y.
inline bool uacyclic_chain_scan(const Graph& g) {
  for (const Edge& cover : g.edges()) {
    const Vertex u = cover.lo, y = cover.hi;
    if (u == y) continue;
    Vertex v = u, p = u;
    while (p != -1) {
      v = p;
      p = -1;
      for (Vertex vv = v + 1; vv <= y; ++vv) {
        if (g.has_edge(v, vv) && Edge(v, vv) != cover) {
          if (vv == y) return false;
          p = vv;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

// Pair states in enumeration order.
enum class PairState : uint8_t { absent, forward, backward, bidirectional };

inline std::vector<Edge> vertex_pairs(int n) {
  std::vector<Edge> ps;
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j) ps.emplace_back(i, j);
  return ps;
}

// Depth-first over pair-state vectors, lexicographic with pair (1,2) most
// significant. Crossing assignments are pruned as soon as they appear.
template <typename F>
void for_each_noncrossing_digraph(int n, F&& f) {
  const auto pairs = vertex_pairs(n);
  std::vector<PairState> state(pairs.size(), PairState::absent);
  std::vector<size_t> chosen;

  auto emit = [&] {
    DigraphBuilder b(n);
    for (size_t k : chosen) {
      const Edge e = pairs[k];
      if (state[k] != PairState::backward) b.add(e.lo, e.hi);
      if (state[k] != PairState::forward) b.add(e.hi, e.lo);
    }
    f(std::move(b).build());
  };

  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == pairs.size()) {
      emit();
      return;
    }
    state[k] = PairState::absent;
    rec(k + 1);
    for (size_t c : chosen)
      if (spans_cross(pairs[c], pairs[k])) return;
    chosen.push_back(k);
    for (PairState s : {PairState::forward, PairState::backward,
                        PairState::bidirectional}) {
      state[k] = s;
      rec(k + 1);
    }
    chosen.pop_back();
    state[k] = PairState::absent;
  };
  rec(0);
}

inline std::vector<Digraph> enumerate_noncrossing_digraphs(int n) {
  std::vector<Digraph> out;
  for_each_noncrossing_digraph(n, [&](Digraph g) { out.push_back(std::move(g)); });
  return out;
}

// Noncrossing graphs by edge subsets, optionally with self-loops.
template <typename F>
void for_each_noncrossing_graph(int n, bool with_loops, F&& f) {
  const auto pairs = vertex_pairs(n);
  std::vector<Edge> chosen;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == pairs.size()) {
      if (!with_loops) {
        f(Graph(n, chosen));
        return;
      }
      for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        auto es = chosen;
        for (int v = 0; v < n; ++v)
          if (mask >> v & 1u) es.emplace_back(v + 1, v + 1);
        f(Graph(n, std::move(es)));
      }
      return;
    }
    rec(k + 1);
    for (const Edge& c : chosen)
      if (spans_cross(c, pairs[k])) return;
    chosen.push_back(pairs[k]);
    rec(k + 1);
    chosen.pop_back();
  };
  rec(0);
}

// ---------------------------------------------------------------------------
// Forbidden configurations

struct Configuration {
  std::vector<Vertex> vertices;  // sorted
  std::vector<Arc> arcs;         // sorted
};

namespace detail {

inline Configuration make_configuration(const Digraph& g,
                                        std::vector<Vertex> vs,
                                        const std::vector<Edge>& edges) {
  Configuration c;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  c.vertices = std::move(vs);
  for (const Edge& e : edges) {
    if (g.has_arc(e.lo, e.hi)) c.arcs.push_back({e.lo, e.hi});
    if (e.lo != e.hi && g.has_arc(e.hi, e.lo)) c.arcs.push_back({e.hi, e.lo});
  }
  std::sort(c.arcs.begin(), c.arcs.end());
  c.arcs.erase(std::unique(c.arcs.begin(), c.arcs.end()), c.arcs.end());
  return c;
}

inline Configuration path_configuration(const std::vector<Vertex>& p,
                                        const std::vector<Vertex>& q) {
  Configuration c;
  for (const auto* path : {&p, &q}) {
    for (size_t i = 0; i + 1 < path->size(); ++i)
      c.arcs.push_back({(*path)[i], (*path)[i + 1]});
    c.vertices.insert(c.vertices.end(), path->begin(), path->end());
  }
  std::sort(c.vertices.begin(), c.vertices.end());
  c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()),
                   c.vertices.end());
  std::sort(c.arcs.begin(), c.arcs.end());
  c.arcs.erase(std::unique(c.arcs.begin(), c.arcs.end()), c.arcs.end());
  return c;
}

// Two internally disjoint directed paths with common ends, cut out of two
// distinct repeat-free paths that share a source and target.
inline Configuration diverging_pair(const std::vector<Vertex>& p1,
                                    const std::vector<Vertex>& p2) {
  size_t a = 0;
  while (a + 1 < p1.size() && a + 1 < p2.size() && p1[a + 1] == p2[a + 1]) ++a;
  size_t b1 = a + 1;
  while (std::find(p2.begin(), p2.end(), p1[b1]) == p2.end()) ++b1;
  size_t b2 = std::find(p2.begin(), p2.end(), p1[b1]) - p2.begin();
  std::vector<Vertex> q1(p1.begin() + a, p1.begin() + b1 + 1);
  std::vector<Vertex> q2(p2.begin() + a, p2.begin() + b2 + 1);
  return path_configuration(q1, q2);
}

}  // namespace detail

inline std::optional<Configuration> find_forbidden_configuration(
    const Digraph& g, PropertyId p) {
  switch (p) {
    case PropertyId::ACYC_D: {
      for (const Arc& a : g.arcs())
        if (a.from < a.to && g.has_arc(a.to, a.from))
          return detail::make_configuration(g, {a.from, a.to},
                                            {Edge(a.from, a.to)});
      // Shortest cycle through each arc u->v: shortest path v ~> u.
      std::optional<Configuration> best;
      auto adj = detail::out_lists(g);
      for (const Arc& a : g.arcs()) {
        std::vector<Vertex> prev(g.n() + 1, 0);
        std::vector<Vertex> queue{a.to};
        prev[a.to] = a.to;
        for (size_t i = 0; i < queue.size() && !prev[a.from]; ++i)
          for (Vertex w : adj[queue[i]])
            if (!prev[w]) {
              prev[w] = queue[i];
              queue.push_back(w);
            }
        if (!prev[a.from]) continue;
        std::vector<Vertex> cyc{a.from};
        for (Vertex v = a.from; v != a.to; v = prev[v]) cyc.push_back(prev[v]);
        std::reverse(cyc.begin(), cyc.end());  // a.to ... a.from
        cyc.insert(cyc.begin(), a.from);       // a.from -> a.to ... a.from
        Configuration c;
        for (size_t i = 0; i + 1 < cyc.size(); ++i)
          c.arcs.push_back({cyc[i], cyc[i + 1]});
        c.vertices.assign(cyc.begin(), cyc.end() - 1);
        std::sort(c.vertices.begin(), c.vertices.end());
        std::sort(c.arcs.begin(), c.arcs.end());
        if (!best || c.arcs.size() < best->arcs.size()) best = std::move(c);
      }
      return best;
    }
    case PropertyId::ACYC_U: {
      // An edge whose endpoints stay connected without it; the cycle is that
      // edge plus a shortest underlying path between its ends.
      const auto es = detail::proper_edges(g);
      for (const Edge& cover : es) {
        std::vector<std::vector<Vertex>> adj(g.n() + 1);
        for (const Edge& e : es)
          if (e != cover) {
            adj[e.lo].push_back(e.hi);
            adj[e.hi].push_back(e.lo);
          }
        std::vector<Vertex> prev(g.n() + 1, 0);
        std::vector<Vertex> queue{cover.lo};
        prev[cover.lo] = cover.lo;
        for (size_t i = 0; i < queue.size(); ++i)
          for (Vertex w : adj[queue[i]])
            if (!prev[w]) {
              prev[w] = queue[i];
              queue.push_back(w);
            }
        if (!prev[cover.hi]) continue;
        std::vector<Vertex> vs{cover.hi};
        std::vector<Edge> path{cover};
        for (Vertex v = cover.hi; v != cover.lo; v = prev[v]) {
          path.emplace_back(v, prev[v]);
          vs.push_back(prev[v]);
        }
        return detail::make_configuration(g, vs, path);
      }
      return std::nullopt;
    }
    case PropertyId::CONN_W: {
      if (check_property(g, PropertyId::CONN_W)) return std::nullopt;
      // The component of least span is an interval with no outside arcs.
      detail::DisjointSets ds(g.n());
      for (const Edge& e : detail::proper_edges(g)) ds.unite(e.lo, e.hi);
      std::vector<Vertex> lo(g.n() + 1, g.n() + 1), hi(g.n() + 1, 0);
      for (Vertex v = 1; v <= g.n(); ++v) {
        int r = ds.find(v);
        lo[r] = std::min(lo[r], v);
        hi[r] = std::max(hi[r], v);
      }
      int best = -1;
      for (Vertex v = 1; v <= g.n(); ++v)
        if (ds.find(v) == v && (best < 0 || hi[v] - lo[v] < hi[best] - lo[best]))
          best = v;
      std::vector<Vertex> vs;
      std::vector<Edge> es;
      for (Vertex v = lo[best]; v <= hi[best]; ++v) vs.push_back(v);
      for (const Edge& e : detail::proper_edges(g))
        if (ds.find(e.lo) == best) es.push_back(e);
      return detail::make_configuration(g, vs, es);
    }
    case PropertyId::UNAMB_S: {
      auto adj = detail::out_lists(g);
      for (Vertex s = 1; s <= g.n(); ++s) {
        std::vector<std::vector<Vertex>> first(g.n() + 1);
        std::optional<Configuration> found;
        detail::for_each_simple_path(adj, s, [&](const std::vector<Vertex>& p) {
          auto& f = first[p.back()];
          if (f.empty()) {
            f = p;
            return true;
          }
          found = detail::diverging_pair(f, p);
          return false;
        });
        if (found) return found;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Text format: "n <count>" then one "<u> <v>" line per arc; '#' comments.

inline Digraph read_digraph(std::istream& in, bool allow_loops = false) {
  std::string line;
  std::optional<int> n;
  std::vector<Arc> arcs;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    auto bad = [&] {
      return InputError("line " + std::to_string(lineno) + ": cannot parse '" +
                        line + "'");
    };
    if (!n) {
      std::string key;
      int count = 0;
      if (!(ls >> key >> count) || key != "n") throw bad();
      n = count;
    } else {
      Arc a;
      if (!(ls >> a.from >> a.to)) throw bad();
      arcs.push_back(a);
    }
    std::string rest;
    if (ls >> rest) throw bad();
  }
  if (!n) throw InputError("missing 'n <count>' header");
  return make_digraph(*n, arcs, allow_loops);
}

inline Digraph parse_digraph(const std::string& text, bool allow_loops = false) {
  std::istringstream in(text);
  return read_digraph(in, allow_loops);
}

inline void write_digraph(std::ostream& out, const Digraph& g) {
  out << "n " << g.n() << '\n';
  for (const Arc& a : g.arcs()) out << a.from << ' ' << a.to << '\n';
}

inline std::string format_digraph(const Digraph& g) {
  std::ostringstream out;
  write_digraph(out, g);
  return out.str();
}

}  // namespace ncdg
