#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "ncdg/cfg.hpp"
#include "ncdg/codec.hpp"
#include "oracles.hpp"

using namespace ncdg;

namespace {

// Encodings of loop-free noncrossing graphs no longer than max_len.
std::set<std::string> graph_image(size_t max_len) {
  std::set<std::string> out;
  for (int n = 1; 2 * static_cast<size_t>(n - 1) <= max_len; ++n)
    for_each_noncrossing_graph(n, false, [&](const Graph& g) {
      if (2 * (n - 1) + 2 * g.edges().size() <= max_len) out.insert(encode_graph(g));
    });
  return out;
}

std::set<std::string> spelled(const Grammar& g, size_t max_len) {
  std::set<std::string> out;
  for (const auto& w : language_up_to(g, max_len)) out.insert(spell(g, w));
  return out;
}

// Every string over the given symbols of length <= max_len.
void for_each_string(const std::string& sigma, size_t max_len,
                     const std::function<void(const std::string&)>& f) {
  std::string s;
  std::function<void()> rec = [&] {
    f(s);
    if (s.size() == max_len) return;
    for (char c : sigma) {
      s.push_back(c);
      rec();
      s.pop_back();
    }
  };
  rec();
}

// Strings balanced over the pairs [] and {}.
void for_each_balanced(size_t max_len, const std::function<void(const std::string&)>& f) {
  std::string s, stack;
  std::function<void()> rec = [&] {
    if (stack.empty()) f(s);
    if (!stack.empty()) {
      char c = stack.back();
      stack.pop_back();
      s.push_back(c);
      rec();
      s.pop_back();
      stack.push_back(c);
    }
    if (s.size() + stack.size() + 2 <= max_len)
      for (auto [o, c] : {std::pair{'[', ']'}, std::pair{'{', '}'}}) {
        s.push_back(o);
        stack.push_back(c);
        rec();
        stack.pop_back();
        s.pop_back();
      }
  };
  rec();
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

}  // namespace

TEST(GraphGrammar, Fixtures) {
  const Grammar g = grammar_nc_graph();
  EXPECT_TRUE(membership(g, ""));
  EXPECT_TRUE(membership(g, "[{}]"));
  EXPECT_TRUE(membership(g, "[[{}][[{}]{}]]"));
  EXPECT_TRUE(membership(g, "{}{}"));
  EXPECT_FALSE(membership(g, "["));
  EXPECT_FALSE(membership(g, "[[{}]]"));
  // Every edge must cover a boundary, so self-loops are not generated.
  EXPECT_FALSE(membership(g, "[]"));
  EXPECT_FALSE(membership(g, "[[{}][[]{}{}]]"));
}

TEST(GraphGrammar, ProductionsAreBalanced) {
  const Grammar g = grammar_nc_graph();
  for (const auto& p : g.productions()) {
    int depth = 0;
    for (Symbol s : g.rhs(p)) {
      if (!s.terminal) continue;
      const std::string& t = g.terminal_name(s.id);
      depth += (t == "[" || t == "{") ? 1 : -1;
      EXPECT_GE(depth, 0);
    }
    EXPECT_EQ(depth, 0);
  }
}

TEST(GraphGrammar, LanguageEqualsEncoderImageUpTo14) {
  EXPECT_EQ(spelled(grammar_nc_graph(), 14), graph_image(14));
}

TEST(GraphGrammar, MembershipExhaustiveUpTo8) {
  const Grammar g = grammar_nc_graph();
  const auto image = graph_image(8);
  size_t members = 0;
  for_each_string("[]{}", 8, [&](const std::string& s) {
    const bool in = membership(g, s);
    ASSERT_EQ(in, image.count(s) == 1) << s;
    members += in;
  });
  EXPECT_EQ(members, image.size());
}

TEST(GraphGrammar, MembershipOnBalancedStringsUpTo14) {
  const Grammar g = grammar_nc_graph();
  const auto image = graph_image(14);
  size_t members = 0, total = 0;
  for_each_balanced(14, [&](const std::string& s) {
    ++total;
    const bool in = membership(g, s);
    ASSERT_EQ(in, image.count(s) == 1) << s;
    members += in;
  });
  EXPECT_EQ(total, 64979u);  // sum over k <= 7 of Catalan(k) * 2^k
  EXPECT_EQ(members, image.size());
}

TEST(DerivationCount, OneForEveryEncodedGraph) {
  const Grammar g = grammar_nc_graph();
  for (int n = 1; n <= 5; ++n)
    for_each_noncrossing_graph(n, false, [&](const Graph& graph) {
      ASSERT_EQ(derivation_count(g, encode_graph(graph)), 1) << encode_graph(graph);
    });
  EXPECT_EQ(derivation_count(g, ""), 1);
  EXPECT_EQ(derivation_count(g, "[]"), 0);
  EXPECT_EQ(derivation_count(g, "]["), 0);
}

TEST(DerivationCount, CountsEveryDerivationOfAmbiguousGrammars) {
  // Binary and ternary bracketings of a^k: Catalan and ternary-tree numbers.
  Grammar bin;
  bin.set_start(bin.declare("S"));
  bin.add("S", {"S", "S"});
  bin.add("S", {"a"});
  const std::vector<int> catalan = {1, 1, 2, 5, 14, 42, 132};
  for (int k = 1; k <= 7; ++k)
    EXPECT_EQ(derivation_count(bin, std::string(k, 'a')), catalan[k - 1]) << k;

  Grammar ter;
  ter.set_start(ter.declare("S"));
  ter.add("S", {"S", "S", "S"});
  ter.add("S", {"a"});
  const std::vector<int> ternary = {1, 1, 3, 12, 55};
  for (int internal = 0; internal <= 4; ++internal)
    EXPECT_EQ(derivation_count(ter, std::string(2 * internal + 1, 'a')), ternary[internal]);
  EXPECT_EQ(derivation_count(ter, "aa"), 0);
}

TEST(DerivationCount, CyclicUnitRulesAreRejected) {
  Grammar g;
  g.set_start(g.declare("S"));
  g.declare("T");
  g.add("S", {"T"});
  g.add("T", {"S"});
  g.add("S", {"a"});
  EXPECT_THROW(derivation_count(g, "a"), std::exception);
  EXPECT_FALSE(topological_order(g).has_value());

  // S -> S S | a | ε derives every string in infinitely many ways.
  Grammar h;
  h.set_start(h.declare("S"));
  h.add("S", {"S", "S"});
  h.add("S", {"a"});
  h.add("S", {});
  EXPECT_THROW(derivation_count(h, "a"), std::exception);
}

TEST(CsComponents, HomomorphismFixture) {
  const auto cs = cs_components_graph();
  EXPECT_EQ(cs.h.apply("['['{}]'[['{}]'{}]]'"), std::optional<std::string>("[[{}][[{}]{}]]"));
  EXPECT_EQ(cs.h.apply(""), std::optional<std::string>(""));
  EXPECT_TRUE(cs.reg.accepts("['['{}]'[['{}]'{}]]'"));
  EXPECT_TRUE(dyck_check(cs.dyck, "['['{}]'[['{}]'{}]]'"));
}

TEST(CsComponents, PreimageUniqueOnEncodedGraphs) {
  const auto cs = cs_components_graph();
  for (int n = 1; n <= 5; ++n)
    for_each_noncrossing_graph(n, false, [&](const Graph& g) {
      const std::string w = encode_graph(g);
      // Each '[' ... ']' pair can be plain or primed: 2^edges annotations.
      std::vector<size_t> open;
      std::vector<std::pair<size_t, size_t>> pairs_;
      for (size_t k = 0; k < w.size(); ++k) {
        if (w[k] == '[') open.push_back(k);
        if (w[k] == ']') {
          pairs_.push_back({open.back(), k});
          open.pop_back();
        }
      }
      int found = 0;
      for (uint32_t mask = 0; mask < (1u << pairs_.size()); ++mask) {
        auto toks = tokens_of(w);
        for (size_t e = 0; e < pairs_.size(); ++e)
          if ((mask >> e) & 1) {
            toks[pairs_[e].first] = "['";
            toks[pairs_[e].second] = "]'";
          }
        if (dyck_check(cs.dyck, toks) && cs.reg.accepts(toks)) {
          ++found;
          ASSERT_EQ(cs.h.apply(toks), w);
        }
      }
      ASSERT_EQ(found, 1) << w;
    });
}

TEST(CsComponents, RepresentationDenotesGraphLanguage) {
  // h(D_3 ∩ Reg) up to length 14: generated by a stack search over the
  // extended alphabet, compared with the encoder image.
  const auto cs = cs_components_graph();
  std::multiset<std::string> images;
  std::vector<std::string> word;
  std::vector<int> stack;
  const int kLen = 14;
  std::function<void(int)> rec = [&](int state) {
    if (state == Dfa::dead) return;
    if (stack.empty() && cs.reg.dfa.accepting(state)) images.insert(cs.h.apply(word));
    if (static_cast<int>(word.size()) >= kLen) return;
    for (size_t t = 0; t < cs.reg.alphabet.size(); ++t) {
      const std::string& tok = cs.reg.alphabet[t];
      auto k = cs.dyck.classify(tok);
      ASSERT_TRUE(k.has_value());
      if (*k >= 0) {
        if (static_cast<int>(word.size() + stack.size()) + 2 > kLen) continue;
        stack.push_back(*k);
      } else {
        if (stack.empty() || stack.back() != ~*k) continue;
        stack.pop_back();
      }
      word.push_back(tok);
      rec(cs.reg.dfa.next(state, static_cast<int>(t)));
      word.pop_back();
      if (*k >= 0) stack.pop_back();
      else stack.push_back(~*k);
    }
  };
  rec(cs.reg.dfa.start());
  const auto image = graph_image(kLen);
  EXPECT_EQ(std::set<std::string>(images.begin(), images.end()), image);
  EXPECT_EQ(images.size(), image.size());  // no string has two preimages
}

TEST(CsComponents, PrimedGrammarMatchesRepresentation) {
  const auto cs = cs_components_graph();
  const Grammar g = grammar_nc_graph_primed();
  for (const auto& w : language_up_to(g, 12)) {
    std::vector<std::string> toks;
    for (int t : w) toks.push_back(g.terminal_name(t));
    EXPECT_TRUE(dyck_check(cs.dyck, toks) && cs.reg.accepts(toks)) << spell(g, w);
  }
  std::set<std::string> cleaned;
  for (const auto& w : language_up_to(g, 14)) {
    std::vector<std::string> toks;
    for (int t : w) toks.push_back(g.terminal_name(t));
    cleaned.insert(cs.h.apply(toks));
  }
  EXPECT_EQ(cleaned, graph_image(14));
}

TEST(Dyck, Checks) {
  const auto cs = cs_components_graph();
  EXPECT_TRUE(dyck_check(cs.dyck, ""));
  EXPECT_FALSE(dyck_check(cs.dyck, "['[']'"));
  EXPECT_FALSE(dyck_check(cs.dyck, "['{]'}"));
  EXPECT_TRUE(dyck_check(cs.dyck, "[['{}]']"));
  EXPECT_FALSE(dyck_check(cs.dyck, "[x]"));
  DyckSpec bad;
  bad.pairs = {{"[", "]"}, {"]", ")"}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Dyck2, StrictlyContainsEncodedGraphs) {
  const Grammar d2 = grammar_dyck2();
  std::set<std::string> image;
  for (int n = 1; n <= 5; ++n)
    for_each_noncrossing_graph(n, true, [&](const Graph& g) {
      if (encode_graph(g).size() <= 8) image.insert(encode_graph(g));
    });
  std::set<std::string> dyck;
  for_each_string("[]{}", 8, [&](const std::string& s) {
    if (membership(d2, s)) dyck.insert(s);
  });
  for (const auto& s : image) EXPECT_TRUE(dyck.count(s)) << s;
  EXPECT_GT(dyck.size(), image.size());
  EXPECT_TRUE(dyck.count("{[]}"));
  EXPECT_FALSE(image.count("{[]}"));
  EXPECT_TRUE(dyck.count("[[{}]]"));
  EXPECT_FALSE(image.count("[[{}]]"));
}

TEST(Recognizers, UniversalIntersectionIsIdentity) {
  const auto cs = cs_components_graph();
  Recognizer all{cs.reg.alphabet, Dfa::universal(static_cast<int>(cs.reg.alphabet.size()))};
  const auto both = intersect_representations(cs.reg, all);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(0, 12), sym(0, 5);
  for (int it = 0; it < 5000; ++it) {
    std::vector<std::string> toks;
    for (int k = len(rng); k > 0; --k) toks.push_back(cs.reg.alphabet[sym(rng)]);
    ASSERT_EQ(both.accepts(toks), cs.reg.accepts(toks));
  }
}

TEST(BarHillel, MembershipIsConjunction) {
  const Grammar g = grammar_nc_graph();
  // No "]]" factor.
  Recognizer r;
  r.alphabet = {"[", "]", "{", "}"};
  r.dfa = Dfa(4);
  const int free_ = r.dfa.add_state(true), after_close = r.dfa.add_state(true);
  for (int s : {free_, after_close}) {
    r.dfa.set(s, 0, free_);
    r.dfa.set(s, 2, free_);
    r.dfa.set(s, 3, free_);
  }
  r.dfa.set(free_, 1, after_close);
  const Grammar prod = bar_hillel(g, r);
  std::mt19937 rng(9);
  std::vector<std::string> samples;
  for (const auto& s : graph_image(12)) samples.push_back(s);
  for (int it = 0; it < 3000; ++it) {
    std::string s = samples[rng() % samples.size()];
    if (!s.empty() && rng() % 2) s[rng() % s.size()] = "[]{}"[rng() % 4];
    ASSERT_EQ(membership(prod, s), membership(g, s) && r.accepts(s)) << s;
  }
}

TEST(Trim, KeepsLanguageAndDropsUseless) {
  Grammar g;
  g.set_start(g.declare("S"));
  g.declare("Dead");
  g.declare("Unreached");
  g.add("S", {"a", "S"});
  g.add("S", {"b"});
  g.add("S", {"Dead"});
  g.add("Dead", {"Dead", "a"});
  g.add("Unreached", {"c"});
  const Grammar t = trim(g);
  EXPECT_EQ(t.nonterminal_count(), 1);
  EXPECT_EQ(spelled(t, 4), spelled(g, 4));
  EXPECT_EQ(spelled(t, 4), (std::set<std::string>{"b", "ab", "aab", "aaab"}));
}
