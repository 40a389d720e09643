#pragma once

// Context-free grammars with exact derivation counting, Dyck bracket sets,
// homomorphisms, and finite-state recognizers over named token alphabets.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncdg/automaton.hpp"
#include "ncdg/codec.hpp"

namespace ncdg {

using BigInt = boost::multiprecision::cpp_int;

struct Symbol {
  int id = 0;
  bool terminal = false;
  static Symbol t(int i) { return {i, true}; }
  static Symbol nt(int i) { return {i, false}; }
  friend bool operator==(Symbol, Symbol) = default;
};

class Grammar {
 public:
  struct Production {
    int lhs;
    uint32_t begin;
    uint32_t length;
    int tag;  // caller-defined annotation, -1 if unused
  };

  int declare(const std::string& name) {
    auto [it, fresh] = nt_index_.try_emplace(name, static_cast<int>(nt_names_.size()));
    if (!fresh) throw std::invalid_argument("nonterminal declared twice: " + name);
    nt_names_.push_back(name);
    by_lhs_.emplace_back();
    return it->second;
  }
  // Anonymous nonterminal; cheaper for machine-built grammars.
  int declare() {
    nt_names_.emplace_back();
    by_lhs_.emplace_back();
    return static_cast<int>(nt_names_.size()) - 1;
  }
  int terminal(std::string_view spelling) {
    auto [it, fresh] = t_index_.try_emplace(std::string(spelling),
                                            static_cast<int>(t_names_.size()));
    if (fresh) t_names_.emplace_back(spelling);
    return it->second;
  }
  std::optional<int> find_nonterminal(std::string_view name) const {
    auto it = nt_index_.find(std::string(name));
    if (it == nt_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_terminal(std::string_view s) const {
    auto it = t_index_.find(std::string(s));
    if (it == t_index_.end()) return std::nullopt;
    return it->second;
  }

  void set_start(int nt) { start_ = nt; }
  int start() const { return start_; }

  int add(int lhs, std::span<const Symbol> rhs, int tag = -1) {
    productions_.push_back({lhs, static_cast<uint32_t>(symbols_.size()),
                            static_cast<uint32_t>(rhs.size()), tag});
    symbols_.insert(symbols_.end(), rhs.begin(), rhs.end());
    by_lhs_[lhs].push_back(static_cast<int>(productions_.size()) - 1);
    return static_cast<int>(productions_.size()) - 1;
  }
  int add(int lhs, std::initializer_list<Symbol> rhs, int tag = -1) {
    return add(lhs, std::span<const Symbol>(rhs.begin(), rhs.size()), tag);
  }
  // Tokens naming a declared nonterminal are nonterminals; all others are
  // terminals. An empty list is an epsilon production.
  void add(const std::string& lhs, std::initializer_list<std::string_view> rhs) {
    auto l = find_nonterminal(lhs);
    if (!l) throw std::invalid_argument("undeclared nonterminal: " + lhs);
    std::vector<Symbol> syms;
    for (std::string_view tok : rhs) {
      if (auto n = find_nonterminal(tok))
        syms.push_back(Symbol::nt(*n));
      else
        syms.push_back(Symbol::t(terminal(tok)));
    }
    add(*l, syms);
  }

  std::span<const Symbol> rhs(const Production& p) const {
    return {symbols_.data() + p.begin, p.length};
  }
  const std::vector<Production>& productions() const { return productions_; }
  const std::vector<int>& productions_of(int nt) const { return by_lhs_[nt]; }
  int nonterminal_count() const { return static_cast<int>(nt_names_.size()); }
  int terminal_count() const { return static_cast<int>(t_names_.size()); }
  const std::string& nonterminal_name(int i) const { return nt_names_[i]; }
  const std::string& terminal_name(int i) const { return t_names_[i]; }
  size_t size() const { return productions_.size() + symbols_.size(); }

 private:
  std::vector<std::string> nt_names_, t_names_;
  std::unordered_map<std::string, int> nt_index_, t_index_;
  std::vector<Production> productions_;
  std::vector<Symbol> symbols_;
  std::vector<std::vector<int>> by_lhs_;
  int start_ = 0;
};

// Longest-match tokenization against the grammar's terminal spellings.
inline std::optional<std::vector<int>> tokenize(const Grammar& g, std::string_view s) {
  size_t longest = 0;
  for (int t = 0; t < g.terminal_count(); ++t)
    longest = std::max(longest, g.terminal_name(t).size());
  std::vector<int> out;
  for (size_t i = 0; i < s.size();) {
    bool ok = false;
    for (size_t len = std::min(longest, s.size() - i); len > 0; --len)
      if (auto t = g.find_terminal(s.substr(i, len))) {
        out.push_back(*t);
        i += len;
        ok = true;
        break;
      }
    if (!ok) return std::nullopt;
  }
  return out;
}

namespace detail {

// Counts derivations of w from each (symbol, span). Productions are binarized
// on the fly: the prefix X1..Xm of a production is its own chart item, which
// keeps every derivation distinct and counted once.
template <typename T>
class DerivationChart {
 public:
  DerivationChart(const Grammar& g, std::span<const int> w) : g_(g), w_(w), L_(w.size() + 1) {
    size_t total = 0;
    for (const auto& p : g.productions()) {
      prefix_base_.push_back(total);
      total += p.length;
    }
    nt_memo_.assign(static_cast<size_t>(g.nonterminal_count()) * L_ * L_, {});
    seq_memo_.assign(total * L_ * L_, {});
    nullable_.assign(g.nonterminal_count(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : g.productions()) {
        if (nullable_[p.lhs]) continue;
        bool all = true;
        for (Symbol s : g.rhs(p)) all = all && !s.terminal && nullable_[s.id];
        if (all) nullable_[p.lhs] = changed = true;
      }
    }
  }

  T nonterminal(int a, size_t i, size_t j) {
    if (i == j && !nullable_[a]) return T(0);
    auto& cell = nt_memo_[(static_cast<size_t>(a) * L_ + i) * L_ + j];
    if (cell.state == 2) return cell.value;
    if (cell.state == 1) throw std::logic_error("grammar has cyclic derivations");
    cell.state = 1;
    T sum = T(0);
    for (int p : g_.productions_of(a)) {
      T x = prefix(p, g_.productions()[p].length, i, j);
      if constexpr (std::is_same_v<T, bool>) {
        if (x) {
          sum = true;
          break;
        }
      } else {
        sum += x;
      }
    }
    auto& done = nt_memo_[(static_cast<size_t>(a) * L_ + i) * L_ + j];
    done.value = sum;
    done.state = 2;
    return sum;
  }

 private:
  struct Cell {
    T value{};
    int state = 0;
  };

  T symbol(Symbol s, size_t i, size_t j) {
    if (s.terminal) return (j == i + 1 && w_[i] == s.id) ? T(1) : T(0);
    return nonterminal(s.id, i, j);
  }

  // Ways the first m symbols of production p derive w[i..j).
  T prefix(int p, size_t m, size_t i, size_t j) {
    if (m == 0) return i == j ? T(1) : T(0);
    auto& cell = seq_memo_[((prefix_base_[p] + m - 1) * L_ + i) * L_ + j];
    if (cell.state == 2) return cell.value;
    if (cell.state == 1) throw std::logic_error("grammar has cyclic derivations");
    cell.state = 1;
    const Symbol last = g_.rhs(g_.productions()[p])[m - 1];
    T sum = T(0);
    size_t lo = i, hi = j;
    if (last.terminal) {
      if (j == i) lo = hi + 1;  // empty range
      else lo = hi = j - 1;
    }
    for (size_t l = lo; l <= hi && lo <= hi; ++l) {
      // Empty factors over non-nullable symbols are zero; ruling them out
      // before recursing keeps a span from revisiting itself needlessly.
      if (l == i && !prefix_nullable(p, m - 1)) continue;
      if (l == j && (last.terminal || !nullable_[last.id])) continue;
      T left = prefix(p, m - 1, i, l);
      if (left == T(0)) continue;
      T right = symbol(last, l, j);
      if (right == T(0)) continue;
      if constexpr (std::is_same_v<T, bool>) {
        sum = true;
        break;
      } else {
        sum += left * right;
      }
    }
    auto& done = seq_memo_[((prefix_base_[p] + m - 1) * L_ + i) * L_ + j];
    done.value = sum;
    done.state = 2;
    return sum;
  }

  bool prefix_nullable(int p, size_t m) const {
    auto rhs = g_.rhs(g_.productions()[p]);
    for (size_t k = 0; k < m; ++k)
      if (rhs[k].terminal || !nullable_[rhs[k].id]) return false;
    return true;
  }

  const Grammar& g_;
  std::span<const int> w_;
  size_t L_;
  std::vector<size_t> prefix_base_;
  std::vector<Cell> nt_memo_, seq_memo_;
  std::vector<bool> nullable_;
};

}  // namespace detail

inline BigInt derivation_count(const Grammar& g, std::span<const int> tokens) {
  detail::DerivationChart<BigInt> chart(g, tokens);
  return chart.nonterminal(g.start(), 0, tokens.size());
}

inline BigInt derivation_count(const Grammar& g, std::string_view s) {
  auto toks = tokenize(g, s);
  if (!toks) return 0;
  return derivation_count(g, *toks);
}

inline bool membership(const Grammar& g, std::span<const int> tokens) {
  detail::DerivationChart<bool> chart(g, tokens);
  return chart.nonterminal(g.start(), 0, tokens.size());
}

inline bool membership(const Grammar& g, std::string_view s) {
  auto toks = tokenize(g, s);
  return toks && membership(g, *toks);
}

// All strings of at most max_len tokens derivable from the start symbol,
// by bounded fixpoint over per-nonterminal languages.
inline std::set<std::vector<int>> language_up_to(const Grammar& g, size_t max_len) {
  std::vector<std::set<std::vector<int>>> lang(g.nonterminal_count());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      std::set<std::vector<int>> acc{{}};
      for (Symbol s : g.rhs(p)) {
        std::set<std::vector<int>> next;
        for (const auto& prefix : acc) {
          if (s.terminal) {
            if (prefix.size() + 1 > max_len) continue;
            auto w = prefix;
            w.push_back(s.id);
            next.insert(std::move(w));
          } else {
            for (const auto& suffix : lang[s.id]) {
              if (prefix.size() + suffix.size() > max_len) continue;
              auto w = prefix;
              w.insert(w.end(), suffix.begin(), suffix.end());
              next.insert(std::move(w));
            }
          }
        }
        acc = std::move(next);
      }
      for (auto& w : acc)
        if (lang[p.lhs].insert(w).second) changed = true;
    }
  }
  return lang[g.start()];
}

inline std::string spell(const Grammar& g, std::span<const int> tokens) {
  std::string s;
  for (int t : tokens) s += g.terminal_name(t);
  return s;
}

// Nonterminals in dependency order (children before parents); nullopt when
// some derivation is cyclic.
inline std::optional<std::vector<int>> topological_order(const Grammar& g) {
  const int n = g.nonterminal_count();
  std::vector<int> mark(n, 0), order;
  order.reserve(n);
  for (int root = 0; root < n; ++root) {
    if (mark[root]) continue;
    // Iterative DFS over (nonterminal, production cursor, symbol cursor).
    struct Frame {
      int nt;
      size_t prod, sym;
    };
    std::vector<Frame> stack{{root, 0, 0}};
    mark[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& prods = g.productions_of(f.nt);
      if (f.prod == prods.size()) {
        mark[f.nt] = 2;
        order.push_back(f.nt);
        stack.pop_back();
        continue;
      }
      auto rhs = g.rhs(g.productions()[prods[f.prod]]);
      if (f.sym == rhs.size()) {
        ++f.prod;
        f.sym = 0;
        continue;
      }
      Symbol s = rhs[f.sym++];
      if (s.terminal) continue;
      if (mark[s.id] == 1) return std::nullopt;
      if (mark[s.id] == 0) {
        mark[s.id] = 1;
        stack.push_back({s.id, 0, 0});
      }
    }
  }
  return order;
}

// Keeps only productive nonterminals reachable from the start symbol.
// Production tags and terminal ids are preserved.
inline Grammar trim(const Grammar& g) {
  const int n = g.nonterminal_count();
  std::vector<char> productive(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (productive[p.lhs]) continue;
      auto rhs = g.rhs(p);
      if (std::all_of(rhs.begin(), rhs.end(),
                      [&](Symbol s) { return s.terminal || productive[s.id]; }))
        productive[p.lhs] = changed = true;
    }
  }
  std::vector<char> reachable(n, 0);
  std::vector<int> stack;
  if (n > 0 && productive[g.start()]) {
    reachable[g.start()] = 1;
    stack.push_back(g.start());
  }
  auto usable = [&](const Grammar::Production& p) {
    auto rhs = g.rhs(p);
    return std::all_of(rhs.begin(), rhs.end(),
                       [&](Symbol s) { return s.terminal || productive[s.id]; });
  };
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int pi : g.productions_of(a)) {
      const auto& p = g.productions()[pi];
      if (!usable(p)) continue;
      for (Symbol s : g.rhs(p))
        if (!s.terminal && !reachable[s.id]) {
          reachable[s.id] = 1;
          stack.push_back(s.id);
        }
    }
  }

  Grammar out;
  for (int t = 0; t < g.terminal_count(); ++t) out.terminal(g.terminal_name(t));
  std::vector<int> remap(n, -1);
  for (int a = 0; a < n; ++a)
    if (reachable[a])
      remap[a] = g.nonterminal_name(a).empty() ? out.declare() : out.declare(g.nonterminal_name(a));
  if (n == 0 || !reachable[g.start()]) {
    // Empty language: a start symbol without productions.
    int s = out.declare();
    out.set_start(s);
    return out;
  }
  out.set_start(remap[g.start()]);
  std::vector<Symbol> buf;
  for (const auto& p : g.productions()) {
    if (!reachable[p.lhs] || !usable(p)) continue;
    buf.clear();
    for (Symbol s : g.rhs(p)) buf.push_back(s.terminal ? s : Symbol::nt(remap[s.id]));
    out.add(remap[p.lhs], buf, p.tag);
  }
  return out;
}

// Number of derivations of the whole language (= number of strings when the
// grammar is unambiguous). Requires an acyclic grammar.
inline BigInt count_language(const Grammar& g) {
  if (g.nonterminal_count() == 0) return 0;
  auto order = topological_order(g);
  if (!order) throw std::logic_error("count_language: cyclic grammar");
  std::vector<BigInt> count(g.nonterminal_count(), 0);
  for (int a : *order)
    for (int pi : g.productions_of(a)) {
      BigInt prod = 1;
      for (Symbol s : g.rhs(g.productions()[pi]))
        if (!s.terminal) prod *= count[s.id];
      count[a] += prod;
    }
  return count[g.start()];
}

// ---------------------------------------------------------------------------
// Built-in grammars

// S -> [S']S | {}S | e ; S' -> [S']T | {}S ; T -> [S']S | {}S
inline Grammar grammar_nc_graph() {
  Grammar g;
  g.set_start(g.declare("S"));
  g.declare("S'");
  g.declare("T");
  g.add("S", {"[", "S'", "]", "S"});
  g.add("S", {"{", "}", "S"});
  g.add("S", {});
  g.add("S'", {"[", "S'", "]", "T"});
  g.add("S'", {"{", "}", "S"});
  g.add("T", {"[", "S'", "]", "S"});
  g.add("T", {"{", "}", "S"});
  return g;
}

// The same language with the first edge of every non-loose chain primed:
// S'' -> ['S]'S | {}S | e ; S -> [S']S | {}S | e ;
// S' -> ['S]'T | {}S ; T -> [S']S | {}S
inline Grammar grammar_nc_graph_primed() {
  Grammar g;
  g.set_start(g.declare("S''"));
  g.declare("S");
  g.declare("S'");
  g.declare("T");
  g.add("S''", {"['", "S'", "]'", "S"});
  g.add("S''", {"{", "}", "S"});
  g.add("S''", {});
  g.add("S", {"[", "S'", "]", "S"});
  g.add("S", {"{", "}", "S"});
  g.add("S", {});
  g.add("S'", {"['", "S'", "]'", "T"});
  g.add("S'", {"{", "}", "S"});
  g.add("T", {"[", "S'", "]", "S"});
  g.add("T", {"{", "}", "S"});
  return g;
}

// Two-pair Dyck language: S -> [S]S | {S}S | e
inline Grammar grammar_dyck2() {
  Grammar g;
  g.set_start(g.declare("S"));
  g.add("S", {"[", "S", "]", "S"});
  g.add("S", {"{", "S", "}", "S"});
  g.add("S", {});
  return g;
}

// ---------------------------------------------------------------------------
// Dyck bracket sets, homomorphisms, recognizers

struct DyckSpec {
  std::vector<std::pair<std::string, std::string>> pairs;

  void validate() const {
    std::set<std::string> seen;
    for (const auto& [o, c] : pairs)
      if (!seen.insert(o).second || !seen.insert(c).second)
        throw std::invalid_argument("Dyck symbol used twice: " + o + " / " + c);
  }
  // Pair index for an opener (>= 0), closer (~index < 0), or nullopt.
  std::optional<int> classify(std::string_view tok) const {
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].first == tok) return static_cast<int>(i);
      if (pairs[i].second == tok) return ~static_cast<int>(i);
    }
    return std::nullopt;
  }
};

inline bool dyck_check(const DyckSpec& spec, const std::vector<std::string>& tokens) {
  std::vector<int> stack;
  for (const auto& tok : tokens) {
    auto k = spec.classify(tok);
    if (!k) return false;
    if (*k >= 0) {
      stack.push_back(*k);
    } else {
      if (stack.empty() || stack.back() != ~*k) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

// Longest-match split of s into the symbols of a DyckSpec.
inline std::optional<std::vector<std::string>> split_tokens(
    const std::vector<std::string>& alphabet, std::string_view s) {
  std::vector<std::string> out;
  for (size_t i = 0; i < s.size();) {
    const std::string* best = nullptr;
    for (const auto& a : alphabet)
      if (!a.empty() && s.substr(i, a.size()) == a && (!best || a.size() > best->size()))
        best = &a;
    if (!best) return std::nullopt;
    out.push_back(*best);
    i += best->size();
  }
  return out;
}

inline bool dyck_check(const DyckSpec& spec, std::string_view s) {
  std::vector<std::string> alphabet;
  for (const auto& [o, c] : spec.pairs) {
    alphabet.push_back(o);
    alphabet.push_back(c);
  }
  auto toks = split_tokens(alphabet, s);
  return toks && dyck_check(spec, *toks);
}

struct Homomorphism {
  std::map<std::string, std::string> image;

  std::string apply(const std::vector<std::string>& tokens) const {
    std::string out;
    for (const auto& t : tokens) {
      auto it = image.find(t);
      if (it == image.end()) throw std::invalid_argument("homomorphism undefined on " + t);
      out += it->second;
    }
    return out;
  }
  std::optional<std::string> apply(std::string_view s) const {
    std::vector<std::string> alphabet;
    for (const auto& [k, v] : image) alphabet.push_back(k);
    auto toks = split_tokens(alphabet, s);
    if (!toks) return std::nullopt;
    return apply(*toks);
  }
};

// A DFA whose integer symbols are named tokens.
struct Recognizer {
  std::vector<std::string> alphabet;
  Dfa dfa;

  std::optional<int> symbol(std::string_view tok) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == tok) return static_cast<int>(i);
    return std::nullopt;
  }
  bool accepts(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    for (const auto& t : tokens) {
      auto s = symbol(t);
      if (!s) return false;
      ids.push_back(*s);
    }
    return dfa.accepts(ids);
  }
  bool accepts(std::string_view s) const {
    auto toks = split_tokens(alphabet, s);
    return toks && accepts(*toks);
  }
};

inline Recognizer intersect_representations(const Recognizer& r1, const Recognizer& r2) {
  if (r1.alphabet != r2.alphabet)
    throw std::invalid_argument("recognizers over different alphabets");
  return {r1.alphabet, intersect(r1.dfa, r2.dfa)};
}

struct CsComponents {
  DyckSpec dyck;
  Recognizer reg;
  Homomorphism h;
};

// Local discipline read off the primed grammar: an edge opened at the start
// or right after another opener is primed, any other is plain; no edge is
// empty; a primed edge's closer is not directly followed by another closer.
inline CsComponents cs_components_graph() {
  CsComponents cs;
  cs.dyck.pairs = {{"[", "]"}, {"['", "]'"}, {"{", "}"}};
  cs.reg.alphabet = {"[", "]", "['", "]'", "{", "}"};
  enum Sym { plain_open, plain_close, primed_open, primed_close, lbrace, rbrace };
  enum State { after_open, after_lbrace, free, after_primed_close };
  Dfa d(6);
  for (int s = 0; s < 4; ++s) d.add_state(s != after_lbrace);
  d.set_start(after_open);
  for (int s : {after_open, free, after_primed_close}) d.set(s, lbrace, after_lbrace);
  d.set(after_lbrace, rbrace, free);
  d.set(after_open, primed_open, after_open);
  d.set(free, plain_open, after_open);
  d.set(after_primed_close, plain_open, after_open);
  d.set(free, plain_close, free);
  d.set(free, primed_close, after_primed_close);
  cs.reg.dfa = d;
  cs.h.image = {{"[", "["}, {"]", "]"}, {"['", "["}, {"]'", "]"}, {"{", "{"}, {"}", "}"}};
  return cs;
}

// Bar-Hillel product of a grammar with a recognizer over the same terminal
// spellings: nonterminals [p, A, q] for recognizer states p, q.
inline Grammar bar_hillel(const Grammar& g, const Recognizer& r) {
  const int Q = r.dfa.size();
  Grammar out;
  for (int t = 0; t < g.terminal_count(); ++t) out.terminal(g.terminal_name(t));
  std::vector<int> sym_of(g.terminal_count(), -1);
  for (int t = 0; t < g.terminal_count(); ++t)
    if (auto s = r.symbol(g.terminal_name(t))) sym_of[t] = *s;
  auto id = [&](int p, int a, int q) { return (p * g.nonterminal_count() + a) * Q + q; };
  const int total = Q * g.nonterminal_count() * Q;
  for (int i = 0; i < total; ++i) out.declare();
  const int start = out.declare();
  out.set_start(start);
  for (int q = 0; q < Q; ++q)
    if (r.dfa.accepting(q)) out.add(start, {Symbol::nt(id(r.dfa.start(), g.start(), q))});

  std::vector<Symbol> rhs;
  for (const auto& p : g.productions()) {
    auto body = g.rhs(p);
    // Thread states through the body; terminals fix the next state.
    std::function<void(size_t, int, int)> rec = [&](size_t k, int first, int cur) {
      if (k == body.size()) {
        out.add(id(first, p.lhs, cur), rhs);
        return;
      }
      Symbol s = body[k];
      if (s.terminal) {
        if (sym_of[s.id] < 0) return;
        int nxt = r.dfa.next(cur, sym_of[s.id]);
        if (nxt == Dfa::dead) return;
        rhs.push_back(s);
        rec(k + 1, first, nxt);
        rhs.pop_back();
      } else {
        for (int q = 0; q < Q; ++q) {
          rhs.push_back(Symbol::nt(id(cur, s.id, q)));
          rec(k + 1, first, q);
          rhs.pop_back();
        }
      }
    };
    for (int q0 = 0; q0 < Q; ++q0) rec(0, q0, q0);
  }
  return trim(out);
}

}  // namespace ncdg
