#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mpc/base.hpp"
#include "mpc/engine.hpp"

namespace mpc {

/// Node ids stay below this so packed pair keys (u * n + v) and polynomial
/// score ranges fit comfortably in a word.
inline constexpr Word max_nodes = Word(1) << 20;

/// One edge. Unweighted instances carry w = 1 so the encoded form is uniform.
struct Edge {
  Word u = 0;
  Word v = 0;
  Word w = 1;
  auto operator<=>(const Edge&) const = default;
};

/// A graph instance plus the optional query parameters a problem may need.
/// Parallel edges are permitted; self loops only matter to the cycle counter.
struct GraphInstance {
  Word n = 0;
  bool directed = false;
  bool weighted = false;
  /// Declared weight bound; every w satisfies 0 <= w <= max_weight.
  Word max_weight = 1;
  std::vector<Edge> edges;
  /// Query parameters, -1 when unused: source, target, and the integer
  /// argument (k for kth successor style queries, b for stretch bounds).
  Word s = -1;
  Word t = -1;
  Word k = -1;

  Word m() const { return Word(edges.size()); }
  bool operator==(const GraphInstance&) const = default;
};

/// Sink marker used in successor files; in memory the sink stores n instead
/// so every stored value is a non-negative word.
inline constexpr Word no_successor = -1;

/// A path given by its successor function. succ[i] is the next node, or n
/// for the unique sink. a and b are the distinguished query nodes, -1 unset.
struct SuccessorList {
  Word n = 0;
  std::vector<Word> succ;
  Word a = -1;
  Word b = -1;

  bool operator==(const SuccessorList&) const = default;
};

enum class AnswerKind {
  boolean,
  integer,
  labels,
  values,
  edge_set,
  partition,
};

const char* to_string(AnswerKind k);

/// One problem answer. `value` holds the scalar part: 0/1 for boolean, the
/// number itself for integer, and the cut weight for partition. `items`
/// holds the array part: per-node labels or values, flattened (u,v,w)
/// triples for edge sets, or per-node side bits for partitions.
struct Answer {
  AnswerKind kind = AnswerKind::integer;
  Word value = 0;
  std::vector<Word> items;

  bool operator==(const Answer&) const = default;

  static Answer yes_no(bool b) {
    return {AnswerKind::boolean, b ? 1 : 0, {}};
  }
  static Answer number(Word v) { return {AnswerKind::integer, v, {}}; }
  static Answer of_labels(std::vector<Word> ls) {
    return {AnswerKind::labels, 0, std::move(ls)};
  }
  static Answer of_values(std::vector<Word> vs) {
    return {AnswerKind::values, 0, std::move(vs)};
  }
  static Answer of_edges(std::vector<Word> triples) {
    return {AnswerKind::edge_set, 0, std::move(triples)};
  }
  static Answer of_partition(Word cut_weight, std::vector<Word> side) {
    return {AnswerKind::partition, cut_weight, std::move(side)};
  }
};

/// Instance families the generator knows how to build.
enum class Family {
  one_cycle,
  two_cycles,
  union_of_cycles,
  successor_path,
  gnp,
  gnm_weighted,
  grid,
  random_bipartite,
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

/// Parameters for generate(); each family reads the fields it needs and
/// ignores the rest. Weights are drawn uniformly from
/// [min_weight, max_weight] when the family is weighted.
struct GenParams {
  Word n = 0;
  Word m = 0;
  Word split = 0;
  std::vector<Word> lengths;
  double p = 0.0;
  Word min_weight = 0;
  Word max_weight = 1;
  bool directed = false;
  bool weighted = false;
  /// When nonzero, gnm_weighted resamples edges so no node exceeds this
  /// degree (parallel edges count).
  Word degree_cap = 0;
  Word rows = 0;
  Word cols = 0;
};

using Instance = std::variant<GraphInstance, SuccessorList>;

/// Builds a family instance, deterministic in seed. Throws BadParams for
/// invalid parameters. Every returned instance passes its validator.
Instance generate(Family f, const GenParams& params, std::uint64_t seed);

/// generate() restricted to graph-valued families; BadParams otherwise.
GraphInstance generate_graph(Family f, const GenParams& params,
                             std::uint64_t seed);

/// The successor_path family: a seeded permutation path over n nodes.
SuccessorList generate_successors(const GenParams& params, std::uint64_t seed);

/// Structural checks: ids and weights in range, unweighted means w = 1,
/// n below max_nodes. Throws RangeError.
void validate(const GraphInstance& g);

/// succ array length n with values in [0, n]; a and b in range when set.
void validate(const SuccessorList& sl);

/// The single-path promise: exactly one sink, in-degrees at most one, and
/// the walk from the unique source visits every node. Throws
/// PromiseViolation.
void validate_path(const SuccessorList& sl);

/// Copy with edges in lexicographic (u, v, w) order.
GraphInstance canonical(GraphInstance g);

/// Text format: header "n m D W", then m lines "u v" (W = 0) or "u v w"
/// (W = 1). Ids are 0-based. Parse failures carry the 1-based line number.
GraphInstance load_graph(const std::string& text);
std::string save_graph(const GraphInstance& g);

/// Text format: "n" then n lines "i s_i", with s_i = -1 marking the sink.
SuccessorList load_successors(const std::string& text);
std::string save_successors(const SuccessorList& sl);

/// Word encoding [n, m, u0, v0, w0, u1, ...]; exactly 2 + 3m words.
std::vector<Word> encode(const GraphInstance& g);

/// Word encoding [n, i0, s0, i1, s1, ...]; exactly 1 + 2n words, sink as n.
std::vector<Word> encode(const SuccessorList& sl);

/// Inverse of encode(). The triple count comes from the span length; a
/// header inconsistent with it is a ParseError. Directedness and the weight
/// flag are not part of the encoding and must be supplied by the caller.
GraphInstance decode_graph(std::span<const Word> words, bool directed = false,
                           bool weighted = false);

SuccessorList decode_successors(std::span<const Word> words);

/// How the host scatters input words over the first machines.
enum class DistMode { round_robin, shuffle };

const char* to_string(DistMode d);

/// Loads an encoded instance into fresh machines. Records (the header, each
/// triple, each pair) stay whole, the header lands on the first machine of
/// the returned range, and every machine keeps two words of headroom (at
/// most s - 2 words) so scans can annotate records with a global index and
/// still deliver a routing offset. shuffle permutes the record order by
/// seed; round_robin keeps file order.
MachineRange distribute_words(Engine& eng, std::span<const Word> words,
                              std::uint64_t header_words,
                              std::uint64_t record_words, DistMode mode,
                              std::uint64_t seed);

MachineRange distribute(Engine& eng, const GraphInstance& g, DistMode mode,
                        std::uint64_t seed = 0);

MachineRange distribute(Engine& eng, const SuccessorList& sl, DistMode mode,
                        std::uint64_t seed = 0);

/// Words a program should skip at the front of a machine's input memory:
/// the header on the range's first machine, nothing elsewhere.
inline std::uint64_t header_skip(MachineId id, MachineRange input,
                                 std::uint64_t header_words) {
  return id == input.first ? header_words : 0;
}

inline constexpr std::uint64_t graph_header_words = 2;
inline constexpr std::uint64_t graph_record_words = 3;
inline constexpr std::uint64_t successor_header_words = 1;
inline constexpr std::uint64_t successor_record_words = 2;

}  // namespace mpc
