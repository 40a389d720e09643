#pragma once

// Bracket encoding of noncrossing graphs and digraphs.
//
// Vertex i contributes, in order: closers for edges {j,i} with j = i-1 .. 1,
// openers for {i,j} with j = n .. i+1, "[]" for a self-loop, then "{}" unless
// i is the last vertex. Oriented edges use "/ >" (left to right) and
// "< \" (right to left); bidirectional edges and graph edges use "[ ]".

#include <string>
#include <string_view>
#include <vector>

#include "ncdg/error.hpp"
#include "ncdg/graph.hpp"

namespace ncdg {

using BracketString = std::string;

inline bool is_opener(char c) { return c == '[' || c == '/' || c == '<'; }
inline bool is_closer(char c) { return c == ']' || c == '>' || c == '\\'; }

inline char closer_for(char opener) {
  switch (opener) {
    case '[': return ']';
    case '/': return '>';
    case '<': return '\\';
    case '{': return '}';
  }
  return 0;
}

namespace detail {

// Shared traversal; kind(i, j) gives the opener for edge {i,j}, i < j, or 0.
template <typename Kind>
BracketString encode_with(int n, Kind&& kind, const std::vector<char>& loop) {
  BracketString s;
  for (Vertex i = 1; i <= n; ++i) {
    for (Vertex j = i - 1; j >= 1; --j)
      if (char k = kind(j, i)) s += closer_for(k);
    for (Vertex j = n; j > i; --j)
      if (char k = kind(i, j)) s += k;
    if (loop[i]) s += "[]";
    if (i < n) s += "{}";
  }
  return s;
}

struct OpenBracket {
  char kind;
  Vertex at;
};

// Stack decoding; emit(opener, from, to) is called for each matched pair.
// Returns the vertex count.
template <typename Emit>
int decode_with(std::string_view s, std::string_view alphabet, Emit&& emit) {
  int cur = 1;
  std::vector<OpenBracket> stack;
  for (size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if (alphabet.find(c) == std::string_view::npos)
      throw InputError(std::string("unexpected symbol '") + c + "' at offset " +
                       std::to_string(k));
    if (c == '{') {
      if (k + 1 >= s.size() || s[k + 1] != '}')
        throw InputError("'{' not immediately followed by '}' at offset " +
                         std::to_string(k));
      ++cur;
      ++k;
    } else if (c == '}') {
      throw InputError("'}' not preceded by '{' at offset " + std::to_string(k));
    } else if (is_opener(c)) {
      stack.push_back({c, cur});
    } else {
      if (stack.empty())
        throw InputError("unmatched closer at offset " + std::to_string(k));
      OpenBracket o = stack.back();
      stack.pop_back();
      if (closer_for(o.kind) != c)
        throw InputError(std::string("closer '") + c + "' does not match '" +
                         o.kind + "' at offset " + std::to_string(k));
      emit(o.kind, o.at, cur);
    }
  }
  if (!stack.empty()) throw InputError("unclosed bracket at end of string");
  return cur;
}

}  // namespace detail

inline BracketString encode_graph(const Graph& g) {
  if (!is_noncrossing(g)) throw InputError("graph has crossing edges");
  std::vector<char> loop(g.n() + 1, 0);
  for (const Edge& e : g.edges())
    if (e.lo == e.hi) loop[e.lo] = 1;
  return detail::encode_with(
      g.n(), [&](Vertex i, Vertex j) { return g.has_edge(i, j) ? '[' : char(0); },
      loop);
}

inline BracketString encode_digraph(const Digraph& g) {
  if (!is_noncrossing(g)) throw InputError("digraph has crossing arcs");
  std::vector<char> loop(g.n() + 1, 0);
  for (const Arc& a : g.arcs())
    if (a.from == a.to) loop[a.from] = 1;
  return detail::encode_with(
      g.n(),
      [&](Vertex i, Vertex j) {
        const bool f = g.has_arc(i, j), b = g.has_arc(j, i);
        return f && b ? '[' : f ? '/' : b ? '<' : char(0);
      },
      loop);
}

// Decoders accept exactly the encoder image: a string that balances but is
// not the canonical emission order (duplicate edges, a loop placed before an
// opener, ...) is rejected.
inline Graph decode_graph(std::string_view s) {
  std::vector<Edge> edges;
  const int n = detail::decode_with(s, "[]{}", [&](char, Vertex i, Vertex j) {
    edges.emplace_back(i, j);
  });
  Graph g(n, edges);
  if (g.edges().size() != edges.size() || encode_graph(g) != s)
    throw InputError("not a canonical graph encoding");
  return g;
}

inline Digraph decode_digraph(std::string_view s, bool allow_loops = false) {
  std::vector<Arc> arcs;
  size_t pairs = 0;
  const int n = detail::decode_with(s, "[]{}/><\\", [&](char k, Vertex i, Vertex j) {
    ++pairs;
    if (i == j && !allow_loops)
      throw InputError("self-loop at vertex " + std::to_string(i));
    if (k == '/' || k == '[') arcs.push_back({i, j});
    if (k == '<' || k == '[') arcs.push_back({j, i});
  });
  Digraph g = make_digraph(n, arcs, allow_loops);
  if (underlying(g).edges().size() != pairs || encode_digraph(g) != s)
    throw InputError("not a canonical digraph encoding");
  return g;
}

}  // namespace ncdg
