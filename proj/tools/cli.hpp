#pragma once

// Command dispatch for the ncdg tool. Kept in a header so tests can drive it
// with captured streams.
//
// Exit status: 0 success, 1 malformed input or usage, 2 no parse.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncdg/ncdg.hpp"

namespace ncdg::cli {

// Comma-separated property names and composite aliases.
inline PropertySet parse_family(const std::string& text) {
  using P = PropertyId;
  static const std::vector<std::pair<std::string, PropertySet>> aliases = {
      {"polytree", {P::CONN_W, P::UNAMB_S, P::ORIENTED, P::ACYC_U, P::ACYC_D}},
      {"mixed-tree", {P::CONN_W, P::ACYC_U, P::UNAMB_S}},
      {"out-tree", {P::OUT, P::ORIENTED, P::ACYC_U, P::CONN_W, P::UNAMB_S, P::ACYC_D}},
      {"multitree", {P::ACYC_D, P::UNAMB_S, P::ORIENTED}},
      {"wc-dag", {P::CONN_W, P::ACYC_D, P::ORIENTED}},
  };
  PropertySet s;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    if (auto p = parse_property(item)) {
      s.insert(*p);
      continue;
    }
    bool found = false;
    for (const auto& [name, set] : aliases)
      if (name == item) {
        s = s | set;
        found = true;
      }
    if (!found) throw InputError("unknown family '" + item + "'");
  }
  return s;
}

inline Digraph read_digraph_file(const std::string& path, bool allow_loops) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_digraph(in, allow_loops);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncrossing digraph encodings, families and exact inference", "ncdg"};
  app.require_subcommand(1, 1);

  bool digraph = false, count_only = false, latent = false;
  std::string file, text, family, weights_path, lexicon_path;
  int n = 0;

  auto* encode = app.add_subcommand("encode", "bracket encoding of a graph file");
  encode->add_flag("--digraph", digraph, "encode arc orientations");
  encode->add_option("file", file, "digraph text file")->required();

  auto* decode = app.add_subcommand("decode", "digraph text from a bracket string");
  decode->add_flag("--digraph", digraph, "read oriented brackets");
  decode->add_option("string", text, "bracket string")->required()->allow_extra_args(false);

  auto* classify_cmd = app.add_subcommand("classify", "properties satisfied by a digraph");
  classify_cmd->add_option("file", file, "digraph text file")->required();

  auto* enumerate = app.add_subcommand("enumerate", "list noncrossing digraphs");
  enumerate->add_option("-n", n, "vertex count")->required();
  enumerate->add_option("--family", family, "properties or aliases, comma separated");
  enumerate->add_flag("--count-only", count_only, "print only the count");
  enumerate->add_flag("--latent", latent, "print latent encodings");

  auto* lattice = app.add_subcommand("lattice", "family lattice as TSV");
  lattice->add_option("-n", n, "vertex count")->required();

  auto* count = app.add_subcommand("count", "size of a family");
  count->add_option("-n", n, "vertex count")->required();
  count->add_option("--family", family, "properties or aliases, comma separated");

  auto* parse = app.add_subcommand("parse", "heaviest digraph in a family");
  parse->add_option("--weights", weights_path, "weight file")->required();
  parse->add_option("--family", family, "properties or aliases, comma separated");
  parse->add_option("--lexicon", lexicon_path, "per-vertex arc shapes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ncdg: " << e.what() << '\n';
    return 1;
  }

  auto need_n = [&] {
    if (n < 1) throw InputError("-n must be positive");
  };

  try {
    if (*encode) {
      Digraph g = read_digraph_file(file, true);
      out << (digraph ? encode_digraph(g) : encode_graph(underlying(g))) << '\n';
    } else if (*decode) {
      write_digraph(out, digraph ? decode_digraph(text, true)
                                 : as_inverse_digraph(decode_graph(text)));
    } else if (*classify_cmd) {
      Digraph g = read_digraph_file(file, false);
      for (PropertyId p : classify(g).members()) out << property_name(p) << '\n';
      out << "noncrossing: " << (is_noncrossing(g) ? "yes" : "no") << '\n';
    } else if (*enumerate) {
      need_n();
      const PropertySet req = parse_family(family);
      uint64_t total = 0;
      for_each_noncrossing_digraph(n, [&](const Digraph& g) {
        if (!satisfies(g, req)) return;
        ++total;
        if (count_only) return;
        out << (latent ? format_latent(latent_encode(g)) : encode_digraph(g)) << '\n';
      });
      if (count_only) out << total << '\n';
    } else if (*lattice) {
      need_n();
      const Lattice L = build_lattice(n);
      out << "signature\tcount\tname\n";
      for (const auto& c : L.nodes)
        out << signature_string(c.signature) << '\t' << c.count << '\t' << c.name.value_or("")
            << '\n';
    } else if (*count) {
      need_n();
      out << count_language(build_intersection_grammar(n, parse_family(family))) << '\n';
    } else if (*parse) {
      std::ifstream win(weights_path);
      if (!win) throw InputError("cannot open " + weights_path);
      const auto w = read_weights<Rational>(win);
      std::optional<LexicalConstraint> lex;
      if (!lexicon_path.empty()) {
        std::ifstream lin(lexicon_path);
        if (!lin) throw InputError("cannot open " + lexicon_path);
        lex = read_lexicon(lin, w.n());
      }
      const auto result = parse_max(w, parse_family(family), lex);
      write_digraph(out, result.digraph);
      out << "weight " << format_weight(result.weight) << '\n';
    }
  } catch (const NoParse& e) {
    err << "ncdg: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "ncdg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ncdg::cli
