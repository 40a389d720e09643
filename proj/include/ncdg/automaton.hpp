#pragma once

// Deterministic finite automata over a dense integer alphabet 0..k-1, with
// product intersection and partition-refinement minimization.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ncdg {

class Dfa {
 public:
  static constexpr int dead = -1;

  Dfa() = default;
  explicit Dfa(int alphabet) : k_(alphabet) {}

  int alphabet_size() const { return k_; }
  int size() const { return static_cast<int>(accepting_.size()); }
  int start() const { return start_; }
  void set_start(int s) { start_ = s; }

  int add_state(bool accepting) {
    accepting_.push_back(accepting);
    delta_.resize(delta_.size() + k_, dead);
    return size() - 1;
  }
  void set(int from, int symbol, int to) {
    delta_[static_cast<size_t>(from) * k_ + symbol] = to;
  }
  int next(int s, int symbol) const {
    return s == dead ? dead : delta_[static_cast<size_t>(s) * k_ + symbol];
  }
  bool accepting(int s) const { return s != dead && accepting_[s]; }

  int run(std::span<const int> word) const {
    int s = start_;
    for (int c : word) {
      s = next(s, c);
      if (s == dead) break;
    }
    return s;
  }
  bool accepts(std::span<const int> word) const {
    return size() > 0 && accepting(run(word));
  }

  // Accepts every word.
  static Dfa universal(int alphabet) {
    Dfa d(alphabet);
    int s = d.add_state(true);
    for (int c = 0; c < alphabet; ++c) d.set(s, c, s);
    return d;
  }

 private:
  int k_ = 0;
  int start_ = 0;
  std::vector<int> delta_;
  std::vector<bool> accepting_;
};

// Product construction restricted to reachable pairs.
inline Dfa intersect(const Dfa& a, const Dfa& b) {
  if (a.alphabet_size() != b.alphabet_size())
    throw std::invalid_argument("intersect: alphabets differ");
  const int k = a.alphabet_size();
  Dfa out(k);
  if (a.size() == 0 || b.size() == 0) return out;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> queue;
  auto get = [&](int x, int y) {
    auto [it, fresh] = index.try_emplace({x, y}, out.size());
    if (fresh) {
      out.add_state(a.accepting(x) && b.accepting(y));
      queue.push_back({x, y});
    }
    return it->second;
  };
  out.set_start(get(a.start(), b.start()));
  for (size_t i = 0; i < queue.size(); ++i) {
    auto [x, y] = queue[i];
    const int from = index[{x, y}];
    for (int c = 0; c < k; ++c) {
      int x2 = a.next(x, c), y2 = b.next(y, c);
      if (x2 != Dfa::dead && y2 != Dfa::dead) out.set(from, c, get(x2, y2));
    }
  }
  return out;
}

// Minimal DFA for the same language: unreachable and dead states removed,
// equivalent states merged (Moore refinement). The implicit dead state is not
// counted in size().
inline Dfa minimize(const Dfa& d) {
  const int k = d.alphabet_size();
  const int n = d.size();
  if (n == 0) return Dfa(k);

  std::vector<char> reach(n, 0), live(n, 0);
  std::vector<int> stack{d.start()};
  reach[d.start()] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int c = 0; c < k; ++c) {
      int t = d.next(s, c);
      if (t != Dfa::dead && !reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
    }
  }
  for (int s = 0; s < n; ++s) live[s] = d.accepting(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (live[s]) continue;
      for (int c = 0; c < k && !live[s]; ++c) {
        int t = d.next(s, c);
        if (t != Dfa::dead && live[t]) live[s] = changed = true;
      }
    }
  }
  if (!live[d.start()]) {
    Dfa empty(k);
    empty.add_state(false);
    return empty;
  }

  // Block -1 is the dead class.
  std::vector<int> block(n, -1);
  for (int s = 0; s < n; ++s)
    if (reach[s] && live[s]) block[s] = d.accepting(s) ? 1 : 0;
  int blocks = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_index;
    std::vector<int> next_block(n, -1);
    for (int s = 0; s < n; ++s) {
      if (block[s] < 0) continue;
      std::vector<int> sig{block[s]};
      sig.reserve(k + 1);
      for (int c = 0; c < k; ++c) {
        int t = d.next(s, c);
        sig.push_back(t == Dfa::dead ? -1 : block[t]);
      }
      auto it = sig_index.try_emplace(std::move(sig), static_cast<int>(sig_index.size())).first;
      next_block[s] = it->second;
    }
    const int count = static_cast<int>(sig_index.size());
    block.swap(next_block);
    if (count == blocks) break;
    blocks = count;
  }

  Dfa out(k);
  std::vector<int> rep(blocks, -1);
  for (int s = 0; s < n; ++s)
    if (block[s] >= 0 && rep[block[s]] < 0) rep[block[s]] = s;
  for (int b = 0; b < blocks; ++b) out.add_state(d.accepting(rep[b]));
  for (int b = 0; b < blocks; ++b)
    for (int c = 0; c < k; ++c) {
      int t = d.next(rep[b], c);
      if (t != Dfa::dead && block[t] >= 0) out.set(b, c, block[t]);
    }
  out.set_start(block[d.start()]);
  return out;
}

// Builds a DFA by exploring a deterministic step function over hashable
// memory values: step(m, symbol) -> optional<M>, accept(m) -> bool.
template <typename M, typename Step, typename Accept>
Dfa compile_scanner(int alphabet, M init, Step&& step, Accept&& accept) {
  Dfa out(alphabet);
  std::map<M, int> index;
  std::vector<M> queue;
  auto get = [&](const M& m) {
    auto [it, fresh] = index.try_emplace(m, out.size());
    if (fresh) {
      out.add_state(accept(m));
      queue.push_back(m);
    }
    return it->second;
  };
  out.set_start(get(init));
  for (size_t i = 0; i < queue.size(); ++i) {
    const M m = queue[i];
    const int from = index.at(m);
    for (int c = 0; c < alphabet; ++c)
      if (auto m2 = step(m, c)) out.set(from, c, get(*m2));
  }
  return out;
}

}  // namespace ncdg
