#pragma once

// Families of noncrossing digraphs as property conjunctions: exhaustive
// classification, the inclusion lattice over six properties, family counts.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncdg/graph.hpp"
#include "ncdg/latent.hpp"

namespace ncdg {

// Lattice signatures use these six, in display order C-U-O-A-T-D.
inline constexpr std::array<PropertyId, 6> kLatticeProperties = {
    PropertyId::CONN_W, PropertyId::UNAMB_S, PropertyId::ORIENTED,
    PropertyId::ACYC_U, PropertyId::OUT,     PropertyId::ACYC_D};

inline constexpr PropertySet kLatticeMask = {PropertyId::CONN_W, PropertyId::UNAMB_S,
                                             PropertyId::ORIENTED, PropertyId::ACYC_U,
                                             PropertyId::OUT, PropertyId::ACYC_D};

inline PropertySet classify(const Digraph& g) { return properties_of(g); }

inline PropertySet lattice_signature(PropertySet s) { return s & kLatticeMask; }

// Six presence letters, '.' where a property is absent: "C-U-.-A-.-D".
inline std::string signature_string(PropertySet s) {
  static constexpr char letters[] = {'C', 'U', 'O', 'A', 'T', 'D'};
  std::string out;
  for (size_t k = 0; k < kLatticeProperties.size(); ++k) {
    if (k) out += '-';
    out += s.contains(kLatticeProperties[k]) ? letters[k] : '.';
  }
  return out;
}

// Family names for the lattice cells that carry one.
inline std::optional<std::string> family_name(PropertySet signature) {
  using P = PropertyId;
  static const std::vector<std::pair<PropertySet, std::string>> names = {
      {{}, "NC-DIGRAPH"},
      {{P::CONN_W}, "CONN_W"},
      {{P::UNAMB_S}, "UNAMB_S"},
      {{P::ORIENTED}, "ORIENTED"},
      {{P::UNAMB_S, P::ACYC_U}, "ACYC_U"},
      {{P::UNAMB_S, P::OUT}, "OUT"},
      {{P::ORIENTED, P::ACYC_D}, "ACYC_D"},
      {{P::CONN_W, P::UNAMB_S}, "w.c.unamb."},
      {{P::CONN_W, P::ORIENTED}, "w.c.or."},
      {{P::UNAMB_S, P::ORIENTED}, "unamb.or."},
      {{P::UNAMB_S, P::ORIENTED, P::OUT}, "out oriented"},
      {{P::UNAMB_S, P::ACYC_U, P::OUT}, "out m-forest"},
      {{P::CONN_W, P::UNAMB_S, P::ACYC_U}, "mixed tree"},
      {{P::UNAMB_S, P::ORIENTED, P::ACYC_D}, "multitree"},
      {{P::CONN_W, P::ORIENTED, P::ACYC_D}, "w.c.dag"},
      {{P::CONN_W, P::UNAMB_S, P::ORIENTED}, "w.c.unamb.or."},
      {{P::CONN_W, P::UNAMB_S, P::ACYC_U, P::OUT}, "out mixed tree"},
      {{P::CONN_W, P::UNAMB_S, P::ORIENTED, P::OUT}, "w.c. out oriented"},
      {{P::CONN_W, P::UNAMB_S, P::ORIENTED, P::ACYC_D}, "w.c.multitree"},
      {{P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::ACYC_D}, "or.forest"},
      {{P::CONN_W, P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::ACYC_D}, "polytree"},
      {{P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::OUT, P::ACYC_D}, "out or.forest"},
      {kLatticeMask, "out or.tree"},
  };
  for (const auto& [sig, name] : names)
    if (sig == signature) return name;
  return std::nullopt;
}

struct FamilyClass {
  PropertySet signature;
  uint64_t count = 0;
  std::optional<std::string> name;
};

struct Lattice {
  std::vector<FamilyClass> nodes;  // sorted by signature bits
  // Cover pairs (lower, upper): nodes[lower].signature is a maximal proper
  // subset of nodes[upper].signature among realized signatures.
  std::vector<std::pair<int, int>> hasse;

  uint64_t total() const {
    uint64_t t = 0;
    for (const auto& c : nodes) t += c.count;
    return t;
  }
  std::optional<int> find(PropertySet signature) const {
    for (size_t k = 0; k < nodes.size(); ++k)
      if (nodes[k].signature == signature) return static_cast<int>(k);
    return std::nullopt;
  }
};

inline Lattice build_lattice(int n) {
  std::map<uint8_t, uint64_t> histogram;
  for_each_noncrossing_digraph(n, [&](const Digraph& g) {
    ++histogram[lattice_signature(classify(g)).bits()];
  });
  Lattice L;
  for (const auto& [bits, count] : histogram) {
    PropertySet s = PropertySet::from_bits(bits);
    L.nodes.push_back({s, count, family_name(s)});
  }
  const int m = static_cast<int>(L.nodes.size());
  auto below = [&](int a, int b) {
    return a != b && L.nodes[a].signature.subset_of(L.nodes[b].signature);
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (!below(a, b)) continue;
      bool cover = true;
      for (int c = 0; c < m && cover; ++c)
        if (below(a, c) && below(c, b)) cover = false;
      if (cover) L.hasse.push_back({a, b});
    }
  return L;
}

// Digraphs on n vertices with every property in req.
inline uint64_t count_family(int n, PropertySet req) {
  uint64_t count = 0;
  for_each_noncrossing_digraph(n, [&](const Digraph& g) {
    if (satisfies(g, req)) ++count;
  });
  return count;
}

// The same count taken over latent strings: enumerate D_55 ∩ Reg_lat with n
// vertices and filter by the constraint scanners.
inline uint64_t count_family_latent(int n, PropertySet req) {
  uint64_t count = 0;
  for_each_latent_string(n, reg_lat_dfa(), [&](const LatentString& s) {
    if (constraint_accepts(req, s)) ++count;
  });
  return count;
}

inline std::vector<uint64_t> sequence(PropertySet req, int n_max) {
  std::vector<uint64_t> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(count_family(n, req));
  return out;
}

}  // namespace ncdg
