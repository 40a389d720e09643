#pragma once

// Latent bracketing: every edge bracket pair carries the class of the chain
// prefix it ends, whether it starts a non-loose chain (primed), and a subtype
// saying what the edge closes over. With these labels each nonlocal family
// property becomes a ban on adjacent bracket pairs.
//
// Chains. Inside the string, an opener directly after another opener (or at
// the very start) begins a non-loose chain; an opener directly after `}`
// begins a loose chain; an opener directly after a closer continues that
// closer's chain. The child chain of an edge is the chain whose last closer
// sits right before the edge's own closer.
//
// Chain classes. A chain prefix is summarized by which direction patterns its
// underlying path admits (runs of forward/backward arcs, up to three runs),
// minimized to ten classes. Once a covering edge would create an ambiguous
// path pair, the violation is already visible in the string, so the cover
// only needs to remember its plain forward/backward reach.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ncdg/automaton.hpp"
#include "ncdg/cfg.hpp"
#include "ncdg/codec.hpp"
#include "ncdg/error.hpp"
#include "ncdg/graph.hpp"

namespace ncdg {

enum class ChainState : char {
  initial = '0',  // before the first edge of a non-loose chain
  loose = '1',    // the only state of a loose chain
  I = 'I',
  A = 'A',
  F = 'F',
  Q = 'Q',
  C = 'C',
  E = 'E',
  Z = 'Z',
  i = 'i',
  a = 'a',
  f = 'f',
  q = 'q',
  c = 'c',
  e = 'e',
  z = 'z'
};

enum class Direction : uint8_t { forward, backward, bidirectional };

enum class Subtype : uint8_t { plain, cycle_forming, covers_2turn };

// What one edge contributes to the chain that contains it: a plain direction,
// or an oriented edge whose cover reach is wider than its own direction.
//   X: reaches both ways (bidirectional, or closes a cycle with its child)
//   V/v: forward/backward edge over a forward/backward 2-turn child
enum class Step : uint8_t { F, B, X, V, v };

inline constexpr std::array<ChainState, 10> kChainClasses = {
    ChainState::F, ChainState::f, ChainState::I, ChainState::Q, ChainState::q,
    ChainState::C, ChainState::c, ChainState::E, ChainState::e, ChainState::Z};

namespace detail {

// Index into kChainClasses; A/a, i and z are treated as their merged classes.
inline int class_index(ChainState s) {
  switch (s) {
    case ChainState::F: return 0;
    case ChainState::f: return 1;
    case ChainState::I: case ChainState::i: return 2;
    case ChainState::Q: case ChainState::A: return 3;
    case ChainState::q: case ChainState::a: return 4;
    case ChainState::C: return 5;
    case ChainState::c: return 6;
    case ChainState::E: return 7;
    case ChainState::e: return 8;
    case ChainState::Z: case ChainState::z: return 9;
    default: return -1;
  }
}

using ChainRow = std::array<ChainState, 5>;  // indexed by Step

constexpr ChainState F_ = ChainState::F, f_ = ChainState::f, I_ = ChainState::I,
                     Q_ = ChainState::Q, q_ = ChainState::q, C_ = ChainState::C,
                     c_ = ChainState::c, E_ = ChainState::E, e_ = ChainState::e,
                     Z_ = ChainState::Z;

//                                 F    B    X    V    v
inline constexpr ChainRow kFromInitial = {F_, f_, I_, Q_, q_};
inline constexpr std::array<ChainRow, 10> kChainTable = {{
    {F_, C_, Q_, Q_, C_},  // F  forward run
    {c_, f_, q_, c_, q_},  // f
    {Q_, q_, I_, Q_, q_},  // I  reaches both ways
    {Q_, C_, Q_, Q_, C_},  // Q  forward, already ambiguous both ways
    {c_, q_, q_, c_, q_},  // q
    {E_, C_, C_, E_, C_},  // C  forward then backward
    {c_, e_, c_, c_, e_},  // c
    {E_, Z_, E_, E_, Z_},  // E  forward, backward, forward
    {Z_, e_, e_, Z_, e_},  // e
    {Z_, Z_, Z_, Z_, Z_},  // Z  nothing left to detect
}};

// Cover reach of an oriented edge over a child chain: {forward cover,
// backward cover}. Without a child the edge just has its own direction.
inline constexpr std::array<std::array<Step, 2>, 10> kCoverTable = {{
    {Step::F, Step::X},  // F
    {Step::X, Step::B},  // f
    {Step::X, Step::X},  // I
    {Step::F, Step::X},  // Q
    {Step::X, Step::B},  // q
    {Step::F, Step::B},  // C
    {Step::F, Step::B},  // c
    {Step::V, Step::B},  // E
    {Step::F, Step::v},  // e
    {Step::F, Step::B},  // Z
}};

}  // namespace detail

inline constexpr ChainState mirror(ChainState s) {
  const char ch = static_cast<char>(s);
  if (ch >= 'A' && ch <= 'Z') return static_cast<ChainState>(ch - 'A' + 'a');
  if (ch >= 'a' && ch <= 'z') return static_cast<ChainState>(ch - 'a' + 'A');
  return s;
}

inline constexpr Step mirror(Step e) {
  switch (e) {
    case Step::F: return Step::B;
    case Step::B: return Step::F;
    case Step::V: return Step::v;
    case Step::v: return Step::V;
    default: return e;
  }
}

inline constexpr Direction mirror(Direction d) {
  return d == Direction::forward    ? Direction::backward
         : d == Direction::backward ? Direction::forward
                                    : d;
}

inline Step step_of(Direction d) {
  return d == Direction::forward ? Step::F : d == Direction::backward ? Step::B : Step::X;
}

inline ChainState chain_step(ChainState s, Step e) {
  if (s == ChainState::loose) return s;
  if (s == ChainState::initial) return detail::kFromInitial[static_cast<int>(e)];
  const int k = detail::class_index(s);
  return detail::kChainTable[k][static_cast<int>(e)];
}

inline ChainState chain_step(ChainState s, Direction d) {
  return chain_step(s, step_of(d));
}

// Reach of an edge of direction d whose child chain ended in `inner`.
inline Step cover_step(Direction d, std::optional<ChainState> inner) {
  if (d == Direction::bidirectional) return Step::X;
  if (!inner || *inner == ChainState::loose || *inner == ChainState::initial)
    return step_of(d);
  return detail::kCoverTable[detail::class_index(*inner)][d == Direction::forward ? 0 : 1];
}

inline Subtype subtype_of(Direction d, Step e) {
  if (d == Direction::bidirectional) return Subtype::plain;
  if (e == Step::X) return Subtype::cycle_forming;
  if (e == Step::V || e == Step::v) return Subtype::covers_2turn;
  return Subtype::plain;
}

inline Step step_of(Direction d, Subtype t) {
  switch (t) {
    case Subtype::cycle_forming: return Step::X;
    case Subtype::covers_2turn: return d == Direction::forward ? Step::V : Step::v;
    default: return step_of(d);
  }
}

// ---------------------------------------------------------------------------
// Latent brackets

struct LatentBracket {
  char base = '{';
  ChainState state = ChainState::initial;  // ignored for boundaries and loose
  bool loose = false;
  bool primed = false;
  Subtype subtype = Subtype::plain;

  bool boundary() const { return base == '{' || base == '}'; }
  bool opener() const { return is_opener(base); }
  bool closer() const { return is_closer(base); }
  Direction direction() const {
    return (base == '/' || base == '>')   ? Direction::forward
           : (base == '<' || base == '\\') ? Direction::backward
                                           : Direction::bidirectional;
  }
  friend bool operator==(const LatentBracket& a, const LatentBracket& b) {
    if (a.base != b.base) return false;
    if (a.boundary()) return true;
    return a.loose == b.loose && a.primed == b.primed && a.subtype == b.subtype &&
           (a.loose || a.state == b.state);
  }
};

using LatentString = std::vector<LatentBracket>;

// The label shared by the two brackets of one edge.
struct EdgeLabel {
  Direction dir = Direction::forward;
  bool loose = false;
  bool primed = false;
  ChainState state = ChainState::initial;
  Subtype subtype = Subtype::plain;

  friend bool operator==(const EdgeLabel& a, const EdgeLabel& b) {
    return a.dir == b.dir && a.loose == b.loose && a.primed == b.primed &&
           a.subtype == b.subtype && (a.loose || a.state == b.state);
  }
  LatentBracket open() const { return bracket(true); }
  LatentBracket close() const { return bracket(false); }

 private:
  LatentBracket bracket(bool opening) const {
    static constexpr char open_of[] = {'/', '<', '['};
    char b = open_of[static_cast<int>(dir)];
    return {opening ? b : closer_for(b), state, loose, primed, subtype};
  }
};

inline EdgeLabel label_of(const LatentBracket& b) {
  return {b.direction(), b.loose, b.primed, b.state, b.subtype};
}

// base, then '.' or the state letter, then '*' (cycle-forming) or '^'
// (covers a 2-turn chain), then '\'' when primed.
inline std::string spelling(const LatentBracket& b) {
  std::string s(1, b.base);
  if (b.boundary()) return s;
  s += b.loose ? '.' : static_cast<char>(b.state);
  if (b.subtype == Subtype::cycle_forming) s += '*';
  if (b.subtype == Subtype::covers_2turn) s += '^';
  if (b.primed) s += '\'';
  return s;
}

inline std::string format_latent(const LatentString& s) {
  std::string out;
  for (const auto& b : s) out += spelling(b);
  return out;
}

// Accepts any state letter in the ChainState inventory, so strings written
// with other label conventions can still be read and stripped. Whitespace
// between tokens is ignored.
inline LatentString parse_latent(std::string_view s) {
  static constexpr std::string_view bases = "{}[]/><\\";
  static constexpr std::string_view states = "01IAFQCEZiafqcez";
  LatentString out;
  for (size_t k = 0; k < s.size();) {
    const char c = s[k];
    if (c == ' ' || c == '\t') {
      ++k;
      continue;
    }
    if (bases.find(c) == std::string_view::npos)
      throw InputError(std::string("unexpected latent symbol '") + c + "' at offset " +
                       std::to_string(k));
    LatentBracket b;
    b.base = c;
    ++k;
    if (!b.boundary()) {
      if (k < s.size() && s[k] == '.') {
        b.loose = true;
        b.state = ChainState::loose;
        ++k;
      } else if (k < s.size() && states.find(s[k]) != std::string_view::npos) {
        b.state = static_cast<ChainState>(s[k]);
        b.loose = b.state == ChainState::loose;
        ++k;
      } else {
        throw InputError("missing chain label at offset " + std::to_string(k));
      }
      if (k < s.size() && s[k] == '*') {
        b.subtype = Subtype::cycle_forming;
        ++k;
      } else if (k < s.size() && s[k] == '^') {
        b.subtype = Subtype::covers_2turn;
        ++k;
      }
      if (k < s.size() && s[k] == '\'') {
        b.primed = true;
        ++k;
      }
    }
    out.push_back(b);
  }
  return out;
}

inline BracketString h_lat(const LatentString& s) {
  BracketString out;
  out.reserve(s.size());
  for (const auto& b : s) out += b.base;
  return out;
}

// ---------------------------------------------------------------------------
// Alphabet

// Token ids: 0 = '{', 1 = '}', then 2k / 2k+1 for the opener / closer of
// edge label k.
class LatentAlphabet {
 public:
  static constexpr int lbrace = 0, rbrace = 1;

  LatentAlphabet() {
    // Chain classes reachable from the initial state, and the cover reaches
    // that can actually occur; closed under each other.
    std::vector<ChainState> states;
    std::vector<Step> steps;
    auto add_state = [&](ChainState s) {
      if (std::find(states.begin(), states.end(), s) == states.end()) states.push_back(s);
    };
    auto add_step = [&](Step e) {
      if (std::find(steps.begin(), steps.end(), e) == steps.end()) steps.push_back(e);
    };
    for (Direction d : kDirs) add_step(cover_step(d, std::nullopt));
    for (size_t seen = 0;;) {
      for (Step e : std::vector<Step>(steps)) {
        add_state(chain_step(ChainState::initial, e));
        for (ChainState s : std::vector<ChainState>(states)) add_state(chain_step(s, e));
      }
      for (ChainState s : std::vector<ChainState>(states))
        for (Direction d : kDirs) add_step(cover_step(d, s));
      if (states.size() + steps.size() == seen) break;
      seen = states.size() + steps.size();
    }
    states_ = states;

    auto add_label = [&](const EdgeLabel& l) {
      if (std::find(labels_.begin(), labels_.end(), l) == labels_.end()) labels_.push_back(l);
    };
    for (Direction d : kDirs) {
      std::vector<std::optional<ChainState>> inners{std::nullopt};
      for (ChainState s : states) inners.push_back(s);
      for (auto inner : inners) {
        const Step e = cover_step(d, inner);
        const Subtype t = subtype_of(d, e);
        add_label({d, false, true, chain_step(ChainState::initial, e), t});
        for (ChainState prev : states) add_label({d, false, false, chain_step(prev, e), t});
      }
    }
    for (Direction d : kDirs)
      add_label({d, true, false, ChainState::loose, Subtype::plain});

    spellings_ = {"{", "}"};
    for (const auto& l : labels_) {
      spellings_.push_back(spelling(l.open()));
      spellings_.push_back(spelling(l.close()));
    }
  }

  int size() const { return static_cast<int>(spellings_.size()); }
  int pair_count() const { return static_cast<int>(labels_.size()) + 1; }
  const std::vector<EdgeLabel>& labels() const { return labels_; }
  const std::vector<ChainState>& chain_classes() const { return states_; }
  const std::vector<std::string>& spellings() const { return spellings_; }

  LatentBracket bracket(int id) const {
    if (id == lbrace) return {'{'};
    if (id == rbrace) return {'}'};
    const auto& l = labels_[(id - 2) / 2];
    return id % 2 == 0 ? l.open() : l.close();
  }
  std::optional<int> id_of(const LatentBracket& b) const {
    if (b.base == '{') return lbrace;
    if (b.base == '}') return rbrace;
    const EdgeLabel l = label_of(b);
    for (size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == l) return static_cast<int>(2 + 2 * k + (b.closer() ? 1 : 0));
    return std::nullopt;
  }
  std::optional<std::vector<int>> ids_of(const LatentString& s) const {
    std::vector<int> out;
    out.reserve(s.size());
    for (const auto& b : s) {
      auto id = id_of(b);
      if (!id) return std::nullopt;
      out.push_back(*id);
    }
    return out;
  }
  static bool is_open_id(int id) { return id >= 2 && id % 2 == 0; }
  static bool is_close_id(int id) { return id >= 2 && id % 2 == 1; }
  static int label_index(int id) { return (id - 2) / 2; }

 private:
  static constexpr Direction kDirs[] = {Direction::forward, Direction::backward,
                                        Direction::bidirectional};
  std::vector<ChainState> states_;
  std::vector<EdgeLabel> labels_;
  std::vector<std::string> spellings_;
};

inline const LatentAlphabet& latent_alphabet() {
  static const LatentAlphabet alphabet;
  return alphabet;
}

inline DyckSpec dyck_latent() {
  const auto& sigma = latent_alphabet();
  DyckSpec d;
  d.pairs.push_back({"{", "}"});
  for (int k = 0; k < static_cast<int>(sigma.labels().size()); ++k)
    d.pairs.push_back({sigma.spellings()[2 + 2 * k], sigma.spellings()[3 + 2 * k]});
  return d;
}

inline bool dyck_check(const DyckSpec& spec, const LatentString& s) {
  std::vector<std::string> toks;
  for (const auto& b : s) toks.push_back(spelling(b));
  return dyck_check(spec, toks);
}

// ---------------------------------------------------------------------------
// Encoding

struct LatentEdge {
  Edge edge;
  Direction dir;
  size_t open_pos, close_pos;  // bracket offsets in the encoding
};

namespace detail {

struct LatentLayout {
  LatentString brackets;
  std::vector<LatentEdge> edges;
  std::vector<int> edge_at;  // per bracket: edge index or -1
  std::vector<int> chain;    // per edge: chain id
};

inline LatentLayout latent_layout(const Digraph& g) {
  if (!is_noncrossing(g)) throw InputError("digraph has crossing arcs");
  if (g.has_loops()) throw InputError("latent encoding requires a loop-free digraph");
  LatentLayout L;
  const int n = g.n();
  std::vector<std::vector<int>> open_edge(n + 1, std::vector<int>(n + 1, -1));
  auto dir_of = [&](Vertex i, Vertex j) -> std::optional<Direction> {
    const bool f = g.has_arc(i, j), b = g.has_arc(j, i);
    if (f && b) return Direction::bidirectional;
    if (f) return Direction::forward;
    if (b) return Direction::backward;
    return std::nullopt;
  };
  auto push = [&](char base, int e) {
    L.brackets.push_back({base});
    L.edge_at.push_back(e);
  };
  static constexpr char open_of[] = {'/', '<', '['};
  for (Vertex i = 1; i <= n; ++i) {
    for (Vertex j = i - 1; j >= 1; --j)
      if (auto d = dir_of(j, i)) {
        int e = open_edge[j][i];
        L.edges[e].close_pos = L.brackets.size();
        push(closer_for(open_of[static_cast<int>(*d)]), e);
      }
    for (Vertex j = n; j > i; --j)
      if (auto d = dir_of(i, j)) {
        int e = static_cast<int>(L.edges.size());
        open_edge[i][j] = e;
        L.edges.push_back({Edge(i, j), *d, L.brackets.size(), 0});
        push(open_of[static_cast<int>(*d)], e);
      }
    if (i < n) {
      push('{', -1);
      push('}', -1);
    }
  }
  return L;
}

}  // namespace detail

// Labels are assigned at each closer, left to right: the cover reach comes
// from the bracket just before the closer, the chain state from the closer
// just before the edge's opener.
inline LatentString latent_encode(const Digraph& g) {
  auto L = detail::latent_layout(g);
  auto& s = L.brackets;
  const size_t m = L.edges.size();
  std::vector<EdgeLabel> label(m);
  std::vector<int> pred(m, -1);  // chain predecessor edge
  for (size_t e = 0; e < m; ++e) {
    const size_t p = L.edges[e].open_pos;
    EdgeLabel& l = label[e];
    l.dir = L.edges[e].dir;
    if (p == 0 || s[p - 1].opener()) {
      l.primed = true;
    } else if (s[p - 1].base == '}') {
      l.loose = true;
      l.state = ChainState::loose;
    } else {
      pred[e] = L.edge_at[p - 1];
    }
  }
  // Covers close after their children and after chain predecessors, so a
  // single pass in closer order sees every dependency resolved.
  std::vector<size_t> by_close(m);
  std::iota(by_close.begin(), by_close.end(), 0);
  std::sort(by_close.begin(), by_close.end(),
            [&](size_t a, size_t b) { return L.edges[a].close_pos < L.edges[b].close_pos; });
  for (size_t e : by_close) {
    const size_t c = L.edges[e].close_pos;
    EdgeLabel& l = label[e];
    l.loose = l.loose || (pred[e] >= 0 && label[pred[e]].loose);
    if (l.loose) {
      l.state = ChainState::loose;
      continue;
    }
    std::optional<ChainState> inner;
    if (s[c - 1].closer()) {
      const EdgeLabel& child = label[L.edge_at[c - 1]];
      if (!child.loose) inner = child.state;
    }
    const Step step = cover_step(l.dir, inner);
    l.subtype = subtype_of(l.dir, step);
    const ChainState before = pred[e] >= 0 ? label[pred[e]].state : ChainState::initial;
    l.state = chain_step(before, step);
  }
  for (size_t e = 0; e < m; ++e) {
    s[L.edges[e].open_pos] = label[e].open();
    s[L.edges[e].close_pos] = label[e].close();
  }
  return s;
}

// Maximal linear chains as edge groups, ordered by their first opener.
inline std::vector<std::vector<Edge>> maximal_chains(const Digraph& g) {
  auto L = detail::latent_layout(g);
  std::vector<std::vector<Edge>> chains;
  std::vector<int> chain_of(L.edges.size(), -1);
  for (size_t e = 0; e < L.edges.size(); ++e) {
    const size_t p = L.edges[e].open_pos;
    if (p > 0 && L.brackets[p - 1].closer()) {
      chain_of[e] = chain_of[L.edge_at[p - 1]];
    } else {
      chain_of[e] = static_cast<int>(chains.size());
      chains.emplace_back();
    }
    chains[chain_of[e]].push_back(L.edges[e].edge);
  }
  return chains;
}

// ---------------------------------------------------------------------------
// Reg_lat

namespace detail {

struct RegMemory {
  enum Kind : uint8_t { open, lbrace, loose_end, closer } kind = open;
  bool primed = false;
  ChainState state = ChainState::initial;
  friend auto operator<=>(const RegMemory&, const RegMemory&) = default;
};

inline std::optional<RegMemory> reg_step(const RegMemory& m, const LatentBracket& b) {
  using K = RegMemory::Kind;
  if (m.kind == K::lbrace) {
    if (b.base != '}') return std::nullopt;
    return RegMemory{K::loose_end};
  }
  if (b.base == '}') return std::nullopt;
  if (b.base == '{') return RegMemory{K::lbrace};
  const Step step = step_of(b.direction(), b.subtype);
  if (b.subtype != subtype_of(b.direction(), step)) return std::nullopt;
  if (b.opener()) {
    // Chain starts and continuation.
    switch (m.kind) {
      case K::open:
        if (b.loose || !b.primed || b.state != chain_step(ChainState::initial, step))
          return std::nullopt;
        break;
      case K::loose_end:
        if (!b.loose) return std::nullopt;
        break;
      default:
        if (m.state == ChainState::loose) {
          if (!b.loose) return std::nullopt;
        } else if (b.loose || b.primed || b.state != chain_step(m.state, step)) {
          return std::nullopt;
        }
    }
    return RegMemory{K::open};
  }
  // Closers: no empty edge, no closer right after a primed closer, and the
  // subtype must match the child chain ending just before.
  if (m.kind == K::open) return std::nullopt;
  if (m.kind == K::closer && m.primed) return std::nullopt;
  if (b.loose) return RegMemory{K::loose_end};
  std::optional<ChainState> inner;
  if (m.kind == K::closer && m.state != ChainState::loose) inner = m.state;
  if (step != cover_step(b.direction(), inner)) return std::nullopt;
  return RegMemory{K::closer, b.primed, b.state};
}

inline RegMemory reg_memory_after_loose_closer() {
  return {RegMemory::Kind::loose_end};
}

}  // namespace detail

// Deterministic recognizer over token ids of latent_alphabet(). A loose
// closer and `}` leave the same memory: both end a loose stretch.
inline const Dfa& reg_lat_dfa() {
  static const Dfa dfa = [] {
    const auto& sigma = latent_alphabet();
    return compile_scanner(
        sigma.size(), detail::RegMemory{},
        [&](const detail::RegMemory& m, int id) { return detail::reg_step(m, sigma.bracket(id)); },
        [](const detail::RegMemory& m) { return m.kind != detail::RegMemory::Kind::lbrace; });
  }();
  return dfa;
}

inline Recognizer reg_lat() { return {latent_alphabet().spellings(), reg_lat_dfa()}; }

inline bool reg_lat_accepts(const LatentString& s) {
  auto ids = latent_alphabet().ids_of(s);
  return ids && reg_lat_dfa().accepts(*ids);
}

// ---------------------------------------------------------------------------
// Bracket classes and constraint languages

enum class BracketClass {
  L_fwd,       // L_/ : [ and / openers
  L_bwd,       // L_< : [ and < openers
  R_fwd,       // R_> : ] and > closers
  R_bwd,       // R_\ : ] and \ closers
  B,           // { }
  R,           // all edge closers
  R_loose,     // } and loose closers
  R_nonloose,  // R - R_loose
  R_right,     // closers reaching F, Q, I
  R_left,      // closers reaching f, q, I
  R_right2,    // closers reaching E
  R_left2,     // closers reaching e
  R_vergent,   // unprimed closers reaching C, c, I, Q, q
  Sigma_in,    // L_< and R_>
  Sigma_or,    // oriented brackets
  Sigma_inv,   // bidirectional brackets
  B_bar        // everything but { }
};

inline bool in_class(BracketClass k, const LatentBracket& b) {
  using K = BracketClass;
  auto reaches = [&](std::initializer_list<ChainState> ss) {
    if (!b.closer() || b.loose) return false;
    for (ChainState s : ss)
      if (detail::class_index(b.state) == detail::class_index(s)) return true;
    return false;
  };
  switch (k) {
    case K::L_fwd: return b.base == '[' || b.base == '/';
    case K::L_bwd: return b.base == '[' || b.base == '<';
    case K::R_fwd: return b.base == ']' || b.base == '>';
    case K::R_bwd: return b.base == ']' || b.base == '\\';
    case K::B: return b.boundary();
    case K::R: return b.closer();
    case K::R_loose: return b.base == '}' || (b.closer() && b.loose);
    case K::R_nonloose: return b.closer() && !b.loose;
    case K::R_right: return reaches({ChainState::F, ChainState::Q, ChainState::I});
    case K::R_left: return reaches({ChainState::f, ChainState::q, ChainState::I});
    case K::R_right2: return reaches({ChainState::E});
    case K::R_left2: return reaches({ChainState::e});
    case K::R_vergent:
      return !b.primed && reaches({ChainState::C, ChainState::c, ChainState::I,
                                   ChainState::Q, ChainState::q});
    case K::Sigma_in: return in_class(K::L_bwd, b) || in_class(K::R_fwd, b);
    case K::Sigma_or: return !b.boundary() && b.direction() != Direction::bidirectional;
    case K::Sigma_inv: return b.base == '[' || b.base == ']';
    case K::B_bar: return !b.boundary();
  }
  return false;
}

inline std::vector<int> class_members(BracketClass k) {
  const auto& sigma = latent_alphabet();
  std::vector<int> out;
  for (int id = 0; id < sigma.size(); ++id)
    if (in_class(k, sigma.bracket(id))) out.push_back(id);
  return out;
}

namespace detail {

// Forbidden two-symbol factor prev·cur (prev is null at the string start).
inline bool forbidden_factor(PropertyId p, const LatentBracket* prev, const LatentBracket& cur) {
  using K = BracketClass;
  auto P = [&](K k) { return prev && in_class(k, *prev); };
  auto C = [&](K k) { return in_class(k, cur); };
  switch (p) {
    case PropertyId::ACYC_U:
      return P(K::R_nonloose) && C(K::R);
    case PropertyId::CONN_W:
      return (!prev && C(K::B)) || (P(K::R_loose) && C(K::B));
    case PropertyId::ACYC_D:
      return C(K::Sigma_inv) || (P(K::R_right) && C(K::R_bwd)) ||
             (P(K::R_left) && C(K::R_fwd));
    case PropertyId::UNAMB_S:
      return (P(K::R_right) && C(K::R_fwd)) || (P(K::R_left) && C(K::R_bwd)) ||
             (P(K::R_vergent) && C(K::R)) || (P(K::R_left2) && C(K::R_fwd)) ||
             (P(K::R_right2) && C(K::R_bwd));
    case PropertyId::PROJ_W:
      return (P(K::L_fwd) && C(K::L_bwd)) || (P(K::R_fwd) && C(K::R_bwd));
    case PropertyId::INV:
      return C(K::Sigma_or);
    case PropertyId::ORIENTED:
      return C(K::Sigma_inv);
    case PropertyId::OUT:
      return false;  // counted, see below
  }
  return false;
}

// Only CONN_W restricts the last symbol.
inline bool forbidden_end(PropertyId p, const LatentBracket& last) {
  return p == PropertyId::CONN_W &&
         (in_class(BracketClass::B, last) || in_class(BracketClass::R_loose, last));
}

struct ScanMemory {
  int prev = -1;     // token id, -1 at start
  bool in_seen = false;  // an incoming bracket since the last boundary
  friend auto operator<=>(const ScanMemory&, const ScanMemory&) = default;
};

}  // namespace detail

// Single left-to-right pass over s; true iff no forbidden pattern occurs.
inline bool constraint_accepts(PropertyId p, const LatentString& s) {
  const LatentBracket* prev = nullptr;
  bool in_seen = false;
  for (const auto& b : s) {
    if (p == PropertyId::OUT) {
      if (b.boundary()) {
        in_seen = false;
      } else if (in_class(BracketClass::Sigma_in, b)) {
        if (in_seen) return false;
        in_seen = true;
      }
    } else if (detail::forbidden_factor(p, prev, b)) {
      return false;
    }
    prev = &b;
  }
  return !(prev && detail::forbidden_end(p, *prev));
}

inline bool constraint_accepts(PropertySet req, const LatentString& s) {
  for (PropertyId p : req.members())
    if (!constraint_accepts(p, s)) return false;
  return true;
}

// The same scan compiled to a minimal DFA over latent token ids.
inline Dfa constraint_automaton(PropertyId p) {
  const auto& sigma = latent_alphabet();
  using M = detail::ScanMemory;
  Dfa d = compile_scanner(
      sigma.size(), M{},
      [&](const M& m, int id) -> std::optional<M> {
        const LatentBracket b = sigma.bracket(id);
        M next{id, m.in_seen};
        if (p == PropertyId::OUT) {
          if (b.boundary()) {
            next.in_seen = false;
          } else if (in_class(BracketClass::Sigma_in, b)) {
            if (m.in_seen) return std::nullopt;
            next.in_seen = true;
          }
          next.prev = 0;  // history beyond the flag is irrelevant
        } else {
          const LatentBracket prev_b = m.prev >= 0 ? sigma.bracket(m.prev) : LatentBracket{};
          if (detail::forbidden_factor(p, m.prev >= 0 ? &prev_b : nullptr, b))
            return std::nullopt;
        }
        return next;
      },
      [&](const M& m) {
        return p == PropertyId::OUT || m.prev < 0 ||
               !detail::forbidden_end(p, sigma.bracket(m.prev));
      });
  return minimize(d);
}

inline Recognizer constraint_recognizer(PropertyId p) {
  return {latent_alphabet().spellings(), constraint_automaton(p)};
}

// Reg_lat intersected with every constraint in req, minimized.
inline Dfa family_automaton(PropertySet req) {
  Dfa d = reg_lat_dfa();
  for (PropertyId p : req.members()) d = intersect(d, constraint_automaton(p));
  return minimize(d);
}

// ---------------------------------------------------------------------------
// Searches over latent strings

// Number of latent strings in D_55 ∩ L(reg) whose base symbols spell w,
// found by trying every label at every opener (closers repeat the label of
// their opener, as D_55 demands).
inline BigInt count_latent_preimages(std::string_view w, const Dfa& reg) {
  const auto& sigma = latent_alphabet();
  const int labels = static_cast<int>(sigma.labels().size());
  std::vector<int> stack;
  BigInt count = 0;
  std::function<void(size_t, int)> rec = [&](size_t k, int state) {
    if (state == Dfa::dead) return;
    if (k == w.size()) {
      if (stack.empty() && reg.accepting(state)) ++count;
      return;
    }
    const char c = w[k];
    if (c == '{' || c == '}') {
      rec(k + 1, reg.next(state, c == '{' ? LatentAlphabet::lbrace : LatentAlphabet::rbrace));
    } else if (is_opener(c)) {
      for (int l = 0; l < labels; ++l) {
        if (sigma.labels()[l].open().base != c) continue;
        stack.push_back(l);
        rec(k + 1, reg.next(state, 2 + 2 * l));
        stack.pop_back();
      }
    } else {
      if (stack.empty()) return;
      const int l = stack.back();
      if (sigma.labels()[l].close().base != c) return;
      stack.pop_back();
      rec(k + 1, reg.next(state, 3 + 2 * l));
      stack.push_back(l);
    }
  };
  rec(0, reg.start());
  return count;
}

// Every string of D_55 ∩ L(reg) with exactly n-1 boundary pairs, depth first.
// Each opener is generated together with the vertex where it will close, so
// only strings with noncrossing, duplicate-free layouts are ever built and
// the remaining dead ends are label choices the DFA rejects.
template <typename F>
void for_each_latent_string(int n, const Dfa& reg, F&& f) {
  const auto& sigma = latent_alphabet();
  struct Open {
    int label;
    int vertex;  // where it opened
    int target;  // where it will close
  };
  std::vector<Open> stack;
  LatentString word;
  std::function<void(int, int)> rec = [&](int state, int vertex) {
    if (state == Dfa::dead) return;
    if (!stack.empty() && stack.back().target == vertex) {
      const Open o = stack.back();
      stack.pop_back();
      word.push_back(sigma.labels()[o.label].close());
      rec(reg.next(state, 3 + 2 * o.label), vertex);
      word.pop_back();
      stack.push_back(o);
      return;
    }
    if (vertex == n) {
      if (stack.empty() && reg.accepting(state)) f(static_cast<const LatentString&>(word));
      return;
    }
    // Openers at this vertex close at strictly decreasing vertices, inside
    // whatever edge encloses them.
    int limit = n;
    if (!stack.empty())
      limit = stack.back().vertex == vertex ? stack.back().target - 1 : stack.back().target;
    for (int t = limit; t > vertex; --t)
      for (int l = 0; l < static_cast<int>(sigma.labels().size()); ++l) {
        const int s1 = reg.next(state, 2 + 2 * l);
        if (s1 == Dfa::dead) continue;
        stack.push_back({l, vertex, t});
        word.push_back(sigma.labels()[l].open());
        rec(s1, vertex);
        word.pop_back();
        stack.pop_back();
      }
    const int s1 = reg.next(state, LatentAlphabet::lbrace);
    const int s2 = s1 == Dfa::dead ? s1 : reg.next(s1, LatentAlphabet::rbrace);
    if (s2 != Dfa::dead) {
      word.push_back({'{'});
      word.push_back({'}'});
      rec(s2, vertex + 1);
      word.pop_back();
      word.pop_back();
    }
  };
  rec(reg.start(), 1);
}

inline uint64_t count_latent_strings(int n, const Dfa& reg) {
  uint64_t count = 0;
  for_each_latent_string(n, reg, [&](const LatentString&) { ++count; });
  return count;
}

}  // namespace ncdg
