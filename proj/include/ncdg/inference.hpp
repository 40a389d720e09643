#pragma once

// Exact arc-factored max-weight parsing over a digraph family.
//
// The search space is the Dyck grammar over latent brackets intersected with
// the family recognizer (Reg_lat plus one scanner per required property).
// Vertex positions are built into the product: nonterminals span vertex
// intervals, so the vertex-count language and per-vertex lexical
// restrictions are enforced while the grammar is built. Each edge production
// carries its arc as a tag, and a Viterbi pass over the acyclic grammar
// finds the heaviest string.

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncdg/automaton.hpp"
#include "ncdg/cfg.hpp"
#include "ncdg/error.hpp"
#include "ncdg/graph.hpp"
#include "ncdg/latent.hpp"

namespace ncdg {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Weights

template <typename W = double>
class WeightMatrix {
 public:
  explicit WeightMatrix(int n) : n_(n), w_(static_cast<size_t>(n + 1) * (n + 1), W(0)) {
    if (n < 1) throw InputError("vertex count must be positive");
  }
  int n() const { return n_; }
  const W& operator()(Vertex i, Vertex j) const { return w_[index(i, j)]; }
  void set(Vertex i, Vertex j, W value) {
    if (i == j) throw InputError("weight on the diagonal");
    if constexpr (std::is_floating_point_v<W>) {
      if (!std::isfinite(value)) throw InputError("weight is not finite");
    }
    if (value < W(0)) throw InputError("negative weight");
    w_[index(i, j)] = std::move(value);
  }
  WeightMatrix scaled(const W& factor) const {
    WeightMatrix out(n_);
    for (Vertex i = 1; i <= n_; ++i)
      for (Vertex j = 1; j <= n_; ++j)
        if (i != j) out.set(i, j, (*this)(i, j) * factor);
    return out;
  }

 private:
  size_t index(Vertex i, Vertex j) const {
    if (i < 1 || j < 1 || i > n_ || j > n_) throw InputError("weight index out of range");
    return static_cast<size_t>(i) * (n_ + 1) + j;
  }
  int n_;
  std::vector<W> w_;
};

// Decimal text (optional sign, digits, fraction, exponent) to W. Doubles go
// through from_chars; other types are built exactly from the digits.
template <typename W>
W parse_weight(std::string_view text) {
  if constexpr (std::is_floating_point_v<W>) {
    W v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InputError("malformed weight '" + std::string(text) + "'");
    return v;
  } else {
    size_t k = 0;
    bool negative = false;
    if (k < text.size() && (text[k] == '+' || text[k] == '-')) negative = text[k++] == '-';
    boost::multiprecision::cpp_int mantissa = 0;
    long exponent = 0;
    bool digits = false, point = false;
    for (; k < text.size(); ++k) {
      const char c = text[k];
      if (c >= '0' && c <= '9') {
        mantissa = mantissa * 10 + (c - '0');
        digits = true;
        if (point) --exponent;
      } else if (c == '.' && !point) {
        point = true;
      } else {
        break;
      }
    }
    if (k < text.size() && (text[k] == 'e' || text[k] == 'E')) {
      long e = 0;
      auto [ptr, ec] = std::from_chars(text.data() + k + 1, text.data() + text.size(), e);
      if (ec != std::errc()) throw InputError("malformed weight '" + std::string(text) + "'");
      exponent += e;
      k = ptr - text.data();
    }
    if (!digits || k != text.size())
      throw InputError("malformed weight '" + std::string(text) + "'");
    W v(mantissa);
    const W ten(10);
    for (; exponent > 0; --exponent) v *= ten;
    for (; exponent < 0; ++exponent) v /= ten;
    return negative ? W(-v) : v;
  }
}

template <typename W>
std::string format_weight(const W& w) {
  if constexpr (std::is_floating_point_v<W>) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, ptr);
  } else {
    // Exact decimal when the expansion terminates, else num/den.
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(w), den = boost::multiprecision::denominator(w);
    cpp_int d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) d /= 2, ++twos;
    while (d % 5 == 0) d /= 5, ++fives;
    if (d != 1) return num.str() + "/" + den.str();
    const int places = std::max(twos, fives);
    cpp_int scale = 1;
    for (int k = 0; k < places; ++k) scale *= 10;
    cpp_int scaled = num * (scale / den);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (places > 0) {
      if (static_cast<int>(digits.size()) <= places)
        digits.insert(0, places + 1 - digits.size(), '0');
      digits.insert(digits.size() - places, ".");
    }
    return (negative ? "-" : "") + digits;
  }
}

// `n <count>`, then `<i> <j> <weight>` lines; `#` starts a comment line.
// Missing pairs weigh 0.
template <typename W = double>
WeightMatrix<W> read_weights(std::istream& in) {
  std::string line;
  std::optional<WeightMatrix<W>> w;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string a, b, c, extra;
    if (!(ss >> a) || a[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw InputError("weights line " + std::to_string(lineno) + ": " + why);
    };
    auto to_int = [&](const std::string& s) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad integer '" + s + "'");
      return v;
    };
    if (!w) {
      if (a != "n" || !(ss >> b) || (ss >> extra)) fail("expected header 'n <count>'");
      w.emplace(to_int(b));
      continue;
    }
    if (!(ss >> b >> c) || (ss >> extra)) fail("expected '<i> <j> <weight>'");
    try {
      w->set(to_int(a), to_int(b), parse_weight<W>(c));
    } catch (const InputError& e) {
      fail(e.what());
    }
  }
  if (!w) throw InputError("weights: missing header");
  return *w;
}

// ---------------------------------------------------------------------------
// Lexical constraints

enum LexFlag : uint8_t {
  kInLeft = 1,    // arc from a vertex on the left (closer '>')
  kInRight = 2,   // arc from a vertex on the right (opener '<')
  kOutLeft = 4,   // arc to a vertex on the left (closer '\')
  kOutRight = 8,  // arc to a vertex on the right (opener '/')
  kBidir = 16     // inverse pair, either side ('[' or ']')
};

inline std::optional<uint8_t> parse_lex_flag(std::string_view s) {
  if (s == "in-left") return kInLeft;
  if (s == "in-right") return kInRight;
  if (s == "out-left") return kOutLeft;
  if (s == "out-right") return kOutRight;
  if (s == "bidir") return kBidir;
  return std::nullopt;
}

inline uint8_t lex_flag_of(char base) {
  switch (base) {
    case '/': return kOutRight;
    case '<': return kInRight;
    case '[': case ']': return kBidir;
    case '>': return kInLeft;
    case '\\': return kOutLeft;
  }
  return 0;
}

struct LexicalConstraint {
  // Indexed by vertex; nullopt means unrestricted.
  std::vector<std::optional<uint8_t>> allowed;

  explicit LexicalConstraint(int n = 1) : allowed(n + 1) {}
  int n() const { return static_cast<int>(allowed.size()) - 1; }
  void restrict(Vertex v, uint8_t flags) { allowed.at(v) = flags; }

  bool allows(Vertex v, char base) const {
    const auto& a = allowed.at(v);
    return !a || (*a & lex_flag_of(base));
  }
  bool allows(const Digraph& g) const {
    const Graph u = underlying(g);
    for (const Edge& e : u.edges()) {
      const bool f = g.has_arc(e.lo, e.hi), b = g.has_arc(e.hi, e.lo);
      const char open = f && b ? '[' : f ? '/' : '<';
      if (!allows(e.lo, open) || !allows(e.hi, closer_for(open))) return false;
    }
    return true;
  }
};

// Lines `<vertex> <flag>[,<flag>...]`; flags may also be space separated. A
// listed vertex without flags admits no arcs.
inline LexicalConstraint read_lexicon(std::istream& in, int n) {
  LexicalConstraint lex(n);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    std::string v;
    if (!(ss >> v) || v[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw InputError("lexicon line " + std::to_string(lineno) + ": " + why);
    };
    int vertex = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), vertex);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("bad vertex '" + v + "'");
    if (vertex < 1 || vertex > n) fail("vertex out of range");
    uint8_t flags = 0;
    for (std::string f; ss >> f;) {
      auto bit = parse_lex_flag(f);
      if (!bit) fail("unknown flag '" + f + "'");
      flags |= *bit;
    }
    lex.restrict(vertex, flags);
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Grammar

// Exactly the latent strings with n-1 boundary pairs.
inline Recognizer vertex_language(int n) {
  const auto& sigma = latent_alphabet();
  Dfa d(sigma.size());
  for (int k = 0; k < n; ++k) d.add_state(k == n - 1);
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < sigma.size(); ++c)
      if (c != LatentAlphabet::lbrace) d.set(k, c, k);
      else if (k + 1 < n) d.set(k, c, k + 1);
  return {sigma.spellings(), d};
}

// Positioned token names: the spelling, '@', and the vertex it sits at.
inline std::string positioned(std::string_view spelling, Vertex v) {
  return std::string(spelling) + "@" + std::to_string(v);
}

inline std::vector<std::string> positioned_tokens(const LatentString& s) {
  std::vector<std::string> out;
  Vertex v = 1;
  for (const auto& b : s) {
    out.push_back(positioned(spelling(b), v));
    if (b.base == '}') ++v;
  }
  return out;
}

inline std::optional<std::vector<int>> positioned_ids(const Grammar& g, const LatentString& s) {
  std::vector<int> out;
  for (const auto& t : positioned_tokens(s)) {
    auto id = g.find_terminal(t);
    if (!id) return std::nullopt;
    out.push_back(*id);
  }
  return out;
}

// Arc tags on edge productions: ((lo-1)*n + (hi-1))*3 + direction.
struct ArcTag {
  Vertex lo, hi;
  Direction dir;
};

inline int encode_arc_tag(int n, Vertex lo, Vertex hi, Direction d) {
  return ((lo - 1) * n + (hi - 1)) * 3 + static_cast<int>(d);
}

inline ArcTag decode_arc_tag(int n, int tag) {
  const int pair = tag / 3;
  return {pair / n + 1, pair % n + 1, static_cast<Direction>(tag % 3)};
}

// Grammar of positioned latent strings of the n-vertex digraphs in the
// family. S[a,p,b,q] derives balanced strings from vertex a in recognizer
// state p to vertex b in state q; E[a,p,b,q] derives one edge {a,b}.
//   S -> ε | {@a }@a S[a+1..] | E S      E -> opener@a S closer@b
// Items are created only once productive, span by span, so the result holds
// no dead nonterminals; trimming removes the unreachable ones.
inline Grammar build_intersection_grammar(int n, PropertySet req,
                                          const std::optional<LexicalConstraint>& lex = {}) {
  if (n < 1) throw InputError("vertex count must be positive");
  if (lex && lex->n() != n) throw InputError("lexicon vertex count differs from n");
  const auto& sigma = latent_alphabet();
  const Dfa R = family_automaton(req);
  const int Q = R.size(), K = sigma.size();
  const int labels = static_cast<int>(sigma.labels().size());

  Grammar g;
  const int start = g.declare("START");
  g.set_start(start);

  auto item = [&](Vertex a, int p, Vertex b, int q) {
    return ((static_cast<size_t>(a - 1) * n + (b - 1)) * Q + p) * Q + q;
  };
  const size_t items = static_cast<size_t>(n) * n * Q * Q;
  std::vector<int> S(items, -1), E(items, -1);

  std::vector<std::vector<int>> tok(n + 1, std::vector<int>(K, -1));
  auto terminal = [&](int id, Vertex v) {
    int& t = tok[v][id];
    if (t < 0) t = g.terminal(positioned(sigma.spellings()[id], v));
    return t;
  };
  auto allowed = [&](int id, Vertex v) {
    return !lex || lex->allows(v, sigma.bracket(id).base);
  };

  // Openers entering each state, for the edge rule.
  std::vector<std::vector<std::pair<int, int>>> enter(Q);  // (from state, label)
  for (int p = 0; p < Q; ++p)
    for (int l = 0; l < labels; ++l) {
      const int to = R.next(p, 2 + 2 * l);
      if (to != Dfa::dead) enter[to].push_back({p, l});
    }
  std::vector<int> boundary(Q, Dfa::dead);
  for (int p = 0; p < Q; ++p)
    boundary[p] = R.next(R.next(p, LatentAlphabet::lbrace), LatentAlphabet::rbrace);

  for (Vertex a = 1; a <= n; ++a)
    for (int p = 0; p < Q; ++p) {
      const int nt = g.declare();
      S[item(a, p, a, p)] = nt;
      g.add(nt, std::span<const Symbol>{});
    }

  std::vector<Symbol> rhs;
  for (int d = 1; d < n; ++d)
    for (Vertex a = 1; a + d <= n; ++a) {
      const Vertex b = a + d;
      std::vector<std::pair<int, int>> fresh_s;  // (p, q)
      auto add_s = [&](int p, int q, std::span<const Symbol> body) {
        int& nt = S[item(a, p, b, q)];
        if (nt < 0) {
          nt = g.declare();
          fresh_s.push_back({p, q});
        }
        g.add(nt, body);
      };
      for (int p = 0; p < Q; ++p) {
        // Boundary pair at a.
        if (const int p2 = boundary[p]; p2 != Dfa::dead)
          for (int q = 0; q < Q; ++q)
            if (const int rest = S[item(a + 1, p2, b, q)]; rest >= 0) {
              rhs = {Symbol::t(terminal(LatentAlphabet::lbrace, a)),
                     Symbol::t(terminal(LatentAlphabet::rbrace, a)), Symbol::nt(rest)};
              add_s(p, q, rhs);
            }
        // An edge ending strictly inside, then the rest.
        for (Vertex c = a + 1; c < b; ++c)
          for (int r = 0; r < Q; ++r) {
            const int e = E[item(a, p, c, r)];
            if (e < 0) continue;
            for (int q = 0; q < Q; ++q)
              if (const int rest = S[item(c, r, b, q)]; rest >= 0) {
                rhs = {Symbol::nt(e), Symbol::nt(rest)};
                add_s(p, q, rhs);
              }
          }
      }
      // Edges spanning exactly [a, b] and the S items they complete feed
      // each other; run to a fixpoint.
      while (!fresh_s.empty()) {
        auto [p1, q1] = fresh_s.back();
        fresh_s.pop_back();
        const int inner = S[item(a, p1, b, q1)];
        for (auto [p, l] : enter[p1]) {
          const int open = 2 + 2 * l, close = open + 1;
          if (!allowed(open, a) || !allowed(close, b)) continue;
          const int q = R.next(q1, close);
          if (q == Dfa::dead) continue;
          int& nt = E[item(a, p, b, q)];
          const bool fresh_e = nt < 0;
          if (fresh_e) nt = g.declare();
          rhs = {Symbol::t(terminal(open, a)), Symbol::nt(inner), Symbol::t(terminal(close, b))};
          g.add(nt, rhs, encode_arc_tag(n, a, b, sigma.labels()[l].dir));
          if (fresh_e) {
            rhs = {Symbol::nt(nt), Symbol::nt(S[item(b, q, b, q)])};
            add_s(p, q, rhs);
          }
        }
      }
    }

  for (int q = 0; q < Q; ++q)
    if (R.accepting(q))
      if (const int s = S[item(1, R.start(), n, q)]; s >= 0) g.add(start, {Symbol::nt(s)});
  return trim(g);
}

// ---------------------------------------------------------------------------
// Parsing

template <typename W = double>
struct ParseResult {
  Digraph digraph;
  W weight;
};

namespace detail {

// Fewer arcs first, then the smaller sorted arc list. Keys are bitsets over
// arc index (i-1)*n + (j-1); with equal arc counts the smaller list is the
// one owning the lowest bit where the keys differ.
inline int compare_keys(const uint64_t* a, const uint64_t* b, int words) {
  for (int k = 0; k < words; ++k)
    if (const uint64_t x = a[k] ^ b[k]) return (a[k] & x & (~x + 1)) ? -1 : 1;
  return 0;
}

template <typename W>
bool better(const W& wa, int ca, const uint64_t* ka, const W& wb, int cb, const uint64_t* kb,
            int words) {
  if (wa != wb) return wa > wb;
  if (ca != cb) return ca < cb;
  return compare_keys(ka, kb, words) < 0;
}

inline Digraph digraph_from_key(int n, const uint64_t* key) {
  DigraphBuilder b(n);
  for (int bit = 0; bit < n * n; ++bit)
    if ((key[bit / 64] >> (bit % 64)) & 1u) b.add(bit / n + 1, bit % n + 1);
  return std::move(b).build();
}

}  // namespace detail

// Grammar built once per (n, req, lex), parsed against many weight matrices.
template <typename W = double>
class Parser {
 public:
  Parser(int n, PropertySet req, std::optional<LexicalConstraint> lex = std::nullopt)
      : n_(n), req_(req), grammar_(build_intersection_grammar(n, req, lex)) {
    auto order = topological_order(grammar_);
    if (!order) throw std::logic_error("intersection grammar is cyclic");
    order_ = std::move(*order);
    words_ = (n * n + 63) / 64;
  }

  int n() const { return n_; }
  PropertySet requirements() const { return req_; }
  const Grammar& grammar() const { return grammar_; }
  bool empty() const { return grammar_.productions_of(grammar_.start()).empty(); }

  ParseResult<W> parse(const WeightMatrix<W>& w) const {
    if (w.n() != n_) throw InputError("weight matrix size differs from parser size");
    if (empty()) throw NoParse("no digraph in the requested family");
    const int N = grammar_.nonterminal_count();
    const int words = words_;
    std::vector<char> has(N, 0);
    std::vector<W> weight(N, W(0));
    std::vector<int> count(N, 0);
    std::vector<uint64_t> key(static_cast<size_t>(N) * words, 0);
    std::vector<uint64_t> cand(words);
    const auto& prods = grammar_.productions();
    for (int a : order_) {
      uint64_t* best = &key[static_cast<size_t>(a) * words];
      for (int pi : grammar_.productions_of(a)) {
        const auto& p = prods[pi];
        W cw(0);
        int cc = 0;
        std::fill(cand.begin(), cand.end(), 0);
        bool ok = true;
        for (Symbol s : grammar_.rhs(p)) {
          if (s.terminal) continue;
          if (!has[s.id]) {
            ok = false;
            break;
          }
          cw += weight[s.id];
          cc += count[s.id];
          const uint64_t* k = &key[static_cast<size_t>(s.id) * words];
          for (int x = 0; x < words; ++x) cand[x] |= k[x];
        }
        if (!ok) continue;
        if (p.tag >= 0) {
          const ArcTag t = detail_arc(p.tag);
          if (t.dir != Direction::backward) add_arc(t.lo, t.hi, w, cw, cc, cand);
          if (t.dir != Direction::forward) add_arc(t.hi, t.lo, w, cw, cc, cand);
        }
        if (!has[a] || detail::better(cw, cc, cand.data(), weight[a], count[a], best, words)) {
          has[a] = 1;
          weight[a] = cw;
          count[a] = cc;
          std::copy(cand.begin(), cand.end(), best);
        }
      }
    }
    const int s = grammar_.start();
    if (!has[s]) throw NoParse("no digraph in the requested family");
    return {detail::digraph_from_key(n_, &key[static_cast<size_t>(s) * words]), weight[s]};
  }

 private:
  ArcTag detail_arc(int tag) const { return decode_arc_tag(n_, tag); }
  void add_arc(Vertex i, Vertex j, const WeightMatrix<W>& w, W& cw, int& cc,
               std::vector<uint64_t>& cand) const {
    cw += w(i, j);
    ++cc;
    const int bit = (i - 1) * n_ + (j - 1);
    cand[bit / 64] |= uint64_t{1} << (bit % 64);
  }

  int n_;
  PropertySet req_;
  Grammar grammar_;
  std::vector<int> order_;
  int words_;
};

template <typename W>
ParseResult<W> parse_max(const WeightMatrix<W>& w, PropertySet req,
                         const std::optional<LexicalConstraint>& lex = std::nullopt) {
  return Parser<W>(w.n(), req, lex).parse(w);
}

// Exhaustive oracle: every noncrossing digraph on n vertices is enumerated
// and classified once, then each query scans the pool.
class BruteForce {
 public:
  explicit BruteForce(int n) : n_(n) {
    for_each_noncrossing_digraph(n, [&](const Digraph& g) {
      pool_.push_back({g, properties_of(g)});
    });
  }
  int n() const { return n_; }

  template <typename W>
  ParseResult<W> max(const WeightMatrix<W>& w, PropertySet req,
                     const std::optional<LexicalConstraint>& lex = std::nullopt) const {
    if (w.n() != n_) throw InputError("weight matrix size differs from oracle size");
    const Entry* best = nullptr;
    W best_w(0);
    for (const auto& e : pool_) {
      if (!req.subset_of(e.props) || (lex && !lex->allows(e.g))) continue;
      W total(0);
      for (const Arc& a : e.g.arcs()) total += w(a.from, a.to);
      if (!best || total > best_w ||
          (total == best_w && (e.g.arcs().size() < best->g.arcs().size() ||
                               (e.g.arcs().size() == best->g.arcs().size() &&
                                e.g.arcs() < best->g.arcs())))) {
        best = &e;
        best_w = total;
      }
    }
    if (!best) throw NoParse("no digraph in the requested family");
    return {best->g, best_w};
  }

 private:
  struct Entry {
    Digraph g;
    PropertySet props;
  };
  int n_;
  std::vector<Entry> pool_;
};

template <typename W>
ParseResult<W> brute_force_max(const WeightMatrix<W>& w, PropertySet req,
                               const std::optional<LexicalConstraint>& lex = std::nullopt) {
  if (w.n() > 6) throw InputError("brute force limited to n <= 6");
  return BruteForce(w.n()).max(w, req, lex);
}

}  // namespace ncdg
