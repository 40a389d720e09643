#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ncdg/codec.hpp"
#include "ncdg/inference.hpp"
#include "oracles.hpp"

using namespace ncdg;

namespace {

using P = PropertyId;

bool oracle_satisfies(const Digraph& g, PropertySet req) {
  for (P p : req.members())
    if (!oracle::holds(g, p)) return false;
  return true;
}

// Test-side optimum: every arc set from the brute-force enumerator, filtered
// by the oracles, summed directly.
struct OracleBest {
  double weight = -1;
  std::vector<Arc> arcs;
};

class OraclePool {
 public:
  explicit OraclePool(int n) : n_(n) {
    for (const auto& arcs : oracle::all_noncrossing_arc_sets(n)) {
      const Digraph g = make_digraph(n, arcs);
      PropertySet s;
      for (P p : kAllProperties)
        if (oracle::holds(g, p)) s.insert(p);
      pool_.push_back({arcs, s});
    }
  }
  OracleBest best(const WeightMatrix<double>& w, PropertySet req) const {
    OracleBest b;
    for (const auto& [arcs, props] : pool_) {
      if (!req.subset_of(props)) continue;
      double total = 0;
      for (const Arc& a : arcs) total += w(a.from, a.to);
      if (total > b.weight || (total == b.weight && (arcs.size() < b.arcs.size() ||
                                                      (arcs.size() == b.arcs.size() && arcs < b.arcs)))) {
        b.weight = total;
        b.arcs = arcs;
      }
    }
    return b;
  }

 private:
  int n_;
  std::vector<std::pair<std::vector<Arc>, PropertySet>> pool_;
};

// Integer-valued weights, so sums are exact in double arithmetic.
WeightMatrix<double> random_weights(int n, std::mt19937& rng, int max = 20) {
  std::uniform_int_distribution<int> d(0, max);
  WeightMatrix<double> w(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) w.set(i, j, d(rng));
  return w;
}

std::vector<PropertySet> single_families() {
  std::vector<PropertySet> out;
  for (P p : kAllProperties) out.push_back(PropertySet{p});
  return out;
}

const std::vector<PropertySet> kComposites = {
    {P::CONN_W, P::UNAMB_S, P::ACYC_U},                                    // mixed tree
    {P::CONN_W, P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::ACYC_D},            // polytree
    {P::UNAMB_S, P::ORIENTED, P::ACYC_D},                                  // multitree
    {P::CONN_W, P::ORIENTED, P::ACYC_D},                                   // w.c. dag
    {P::CONN_W, P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::OUT, P::ACYC_D}};  // out or.tree

}  // namespace

TEST(VertexLanguage, CountsBoundaries) {
  const Recognizer g1 = vertex_language(1), g2 = vertex_language(2);
  EXPECT_TRUE(g1.accepts(""));
  EXPECT_FALSE(g1.accepts("{}"));
  EXPECT_TRUE(g2.accepts("{}"));
  EXPECT_TRUE(g2.accepts("/F'{}>F'"));
  EXPECT_FALSE(g2.accepts("{}{}"));
}

TEST(VertexLanguage, WithAcyclicityGivesTheDags) {
  const Dfa d = intersect(family_automaton(PropertySet{P::ACYC_D}), vertex_language(5).dfa);
  size_t count = 0;
  for_each_latent_string(5, d, [&](const LatentString& s) {
    ++count;
    ASSERT_TRUE(oracle::acyclic_directed(decode_digraph(h_lat(s))));
  });
  size_t expected = 0;
  for (const auto& arcs : oracle::all_noncrossing_arc_sets(5))
    expected += oracle::acyclic_directed(make_digraph(5, arcs));
  EXPECT_EQ(count, expected);
}

TEST(IntersectionGrammar, LanguageSizes) {
  EXPECT_EQ(count_language(build_intersection_grammar(5, {})), 62464);
  EXPECT_EQ(count_language(build_intersection_grammar(6, {})), oracle::conflict_graph_count(6));
  for (int n = 1; n <= 5; ++n)
    for (const auto& req : single_families()) {
      uint64_t expected = 0;
      for (const auto& arcs : oracle::all_noncrossing_arc_sets(n))
        expected += oracle_satisfies(make_digraph(n, arcs), req);
      ASSERT_EQ(count_language(build_intersection_grammar(n, req)), expected)
          << req.to_string() << " n=" << n;
    }
}

TEST(IntersectionGrammar, GeneratesPositionedEncodings) {
  for (int n = 1; n <= 4; ++n)
    for (const auto& req : {PropertySet{}, PropertySet{P::ACYC_U}, PropertySet{P::OUT}}) {
      const Grammar g = build_intersection_grammar(n, req);
      for (const auto& arcs : oracle::all_noncrossing_arc_sets(n)) {
        const Digraph d = make_digraph(n, arcs);
        const auto ids = positioned_ids(g, latent_encode(d));
        const bool member = ids && derivation_count(g, *ids) == 1;
        ASSERT_EQ(member, oracle_satisfies(d, req)) << format_digraph(d);
      }
    }
}

TEST(IntersectionGrammar, EmptyFamilies) {
  for (int n = 2; n <= 5; ++n) {
    const Parser<double> p(n, PropertySet{P::INV, P::ORIENTED, P::CONN_W});
    EXPECT_TRUE(p.empty()) << n;
    EXPECT_THROW(p.parse(WeightMatrix<double>(n)), NoParse);
  }
  // A lexicon that forces an arc at vertex 2 and forbids every arc at 1 and 3.
  LexicalConstraint lex(3);
  lex.restrict(1, 0);
  lex.restrict(3, 0);
  const Parser<double> forced(3, PropertySet{P::CONN_W}, lex);
  EXPECT_TRUE(forced.empty());
  EXPECT_FALSE(Parser<double>(1, PropertySet{P::INV, P::ORIENTED, P::CONN_W}).empty());
}

TEST(IntersectionGrammar, SizeGrowth) {
  // Nonterminals are (vertex, state, vertex, state) items: quadratic in n.
  // Productions add a split vertex for concatenation: cubic in n.
  std::vector<double> nt, prods;
  for (int n = 6; n <= 12; n += 2) {
    const Grammar g = build_intersection_grammar(n, {});
    nt.push_back(static_cast<double>(g.nonterminal_count()) / (n * n));
    prods.push_back(static_cast<double>(g.productions().size()) / (n * n * n));
  }
  for (size_t k = 1; k < nt.size(); ++k) {
    EXPECT_LT(nt[k], 1.5 * nt[k - 1]);
    EXPECT_LT(prods[k], 1.5 * prods[k - 1]);
  }
}

TEST(ParseMax, Examples) {
  WeightMatrix<double> ones(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) ones.set(i, j, 1);
  const auto all = parse_max(ones, {});
  EXPECT_EQ(all.weight, 6);
  EXPECT_EQ(all.digraph.size(), 6u);

  const PropertySet out_tree{P::OUT, P::ORIENTED, P::ACYC_U, P::CONN_W, P::UNAMB_S};
  std::mt19937 rng(4);
  for (int n = 1; n <= 7; ++n) {
    WeightMatrix<double> w(n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j) w.set(i, j, 1 + rng() % 9);
    const auto r = parse_max(w, out_tree);
    EXPECT_EQ(r.digraph.size(), static_cast<size_t>(n - 1)) << n;
  }

  const auto single = parse_max(WeightMatrix<double>(1), {});
  EXPECT_EQ(single.weight, 0);
  EXPECT_EQ(single.digraph.size(), 0u);

  // Zero weights: no arc is worth adding, unless the family needs it.
  const auto zero = parse_max(WeightMatrix<double>(4), {});
  EXPECT_EQ(zero.weight, 0);
  EXPECT_EQ(zero.digraph.size(), 0u);
  const auto tree = parse_max(WeightMatrix<double>(3), PropertySet{P::CONN_W});
  EXPECT_EQ(tree.digraph, make_digraph(3, {{1, 2}, {1, 3}}));
}

TEST(ParseMax, MatchesOracleOnRandomWeights) {
  std::mt19937 rng(12345);
  std::vector<PropertySet> reqs = single_families();
  reqs.insert(reqs.end(), kComposites.begin(), kComposites.end());
  reqs.push_back({});
  for (int n = 2; n <= 5; ++n) {
    const OraclePool pool(n);
    const BruteForce brute(n);
    for (const auto& req : reqs) {
      const Parser<double> parser(n, req);
      for (int it = 0; it < 25; ++it) {
        const auto w = random_weights(n, rng, it % 2 ? 3 : 50);
        const auto r = parser.parse(w);
        const auto o = pool.best(w, req);
        ASSERT_EQ(r.weight, o.weight) << req.to_string() << " n=" << n;
        ASSERT_EQ(r.digraph, make_digraph(n, o.arcs)) << req.to_string();
        ASSERT_EQ(brute.max(w, req).digraph, r.digraph);
      }
    }
  }
}

TEST(ParseMax, Invariants) {
  std::mt19937 rng(99);
  const std::vector<PropertySet> chain = {
      {}, {P::UNAMB_S}, {P::UNAMB_S, P::ORIENTED}, {P::UNAMB_S, P::ORIENTED, P::ACYC_D},
      {P::UNAMB_S, P::ORIENTED, P::ACYC_D, P::CONN_W},
      {P::UNAMB_S, P::ORIENTED, P::ACYC_D, P::CONN_W, P::ACYC_U}};
  for (int n = 2; n <= 6; ++n) {
    std::vector<Parser<double>> parsers;
    for (const auto& req : chain) parsers.emplace_back(n, req);
    for (int it = 0; it < 20; ++it) {
      const auto w = random_weights(n, rng);
      double previous = 1e300;
      for (size_t k = 0; k < chain.size(); ++k) {
        const auto r = parsers[k].parse(w);
        ASSERT_TRUE(is_noncrossing(r.digraph));
        ASSERT_TRUE(oracle_satisfies(r.digraph, chain[k]));
        double sum = 0;
        for (const Arc& a : r.digraph.arcs()) sum += w(a.from, a.to);
        ASSERT_EQ(sum, r.weight);
        ASSERT_LE(r.weight, previous);
        previous = r.weight;
        ASSERT_EQ(parsers[k].parse(w.scaled(3)).digraph, r.digraph);
      }
    }
  }
}

TEST(ParseMax, LexicalRestriction) {
  std::mt19937 rng(5);
  for (int n = 2; n <= 6; ++n)
    for (int v = 1; v <= n; ++v) {
      LexicalConstraint lex(n);
      lex.restrict(v, kOutLeft | kOutRight);
      const Parser<double> parser(n, {}, lex);
      for (int it = 0; it < 5; ++it) {
        const auto w = random_weights(n, rng);
        const auto r = parser.parse(w);
        for (const Arc& a : r.digraph.arcs()) ASSERT_NE(a.to, v);
        ASSERT_TRUE(lex.allows(r.digraph));
        if (n <= 5) {
          ASSERT_EQ(brute_force_max(w, {}, lex).weight, r.weight);
        }
      }
    }
}

TEST(ParseMax, ExactRationalWeights) {
  WeightMatrix<Rational> w(3);
  w.set(1, 2, parse_weight<Rational>("0.1"));
  w.set(2, 3, parse_weight<Rational>("0.2"));
  const auto r = parse_max(w, {});
  // In binary floating point this sum would be 0.30000000000000004.
  EXPECT_EQ(r.weight, parse_weight<Rational>("0.3"));
  EXPECT_EQ(format_weight(r.weight), "0.3");
  EXPECT_EQ(r.digraph, make_digraph(3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(format_weight(Rational(1, 3)), "1/3");
  EXPECT_EQ(format_weight(parse_weight<Rational>("2.50e1")), "25");
  EXPECT_EQ(format_weight(parse_weight<Rational>("0.125")), "0.125");
  EXPECT_THROW(parse_weight<Rational>("1..2"), InputError);
}

TEST(Weights, Reader) {
  std::istringstream ok("# comment\nn 3\n1 2 0.5\n3 1 2\n");
  const auto w = read_weights<double>(ok);
  EXPECT_EQ(w.n(), 3);
  EXPECT_EQ(w(1, 2), 0.5);
  EXPECT_EQ(w(3, 1), 2);
  EXPECT_EQ(w(2, 1), 0);
  for (const char* bad : {"", "1 2 3\n", "n 3\n1 1 2\n", "n 3\n1 4 2\n", "n 3\n1 2 -1\n",
                          "n 3\n1 2 x\n", "n 3\n1 2\n", "n 0\n", "n 3\n1 2 inf\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_weights<double>(in), InputError) << bad;
  }
}

TEST(Weights, Lexicon) {
  std::istringstream in("1 out-right,out-left\n3 bidir in-left\n");
  const auto lex = read_lexicon(in, 3);
  EXPECT_TRUE(lex.allows(1, '/'));
  EXPECT_FALSE(lex.allows(1, '<'));
  EXPECT_TRUE(lex.allows(2, '<'));
  EXPECT_TRUE(lex.allows(3, ']'));
  EXPECT_FALSE(lex.allows(3, '\\'));
  for (const char* bad : {"4 bidir\n", "1 sideways\n", "x bidir\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(read_lexicon(b, 3), InputError) << bad;
  }
}

TEST(ArcTags, RoundTrip) {
  for (int n = 2; n <= 6; ++n)
    for (int lo = 1; lo <= n; ++lo)
      for (int hi = lo + 1; hi <= n; ++hi)
        for (Direction d : {Direction::forward, Direction::backward, Direction::bidirectional}) {
          const ArcTag t = decode_arc_tag(n, encode_arc_tag(n, lo, hi, d));
          ASSERT_EQ(t.lo, lo);
          ASSERT_EQ(t.hi, hi);
          ASSERT_EQ(t.dir, d);
        }
}
