#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpc/graph.hpp"

namespace mpc {

/// Problems the library can pose, solve, and reduce between.
enum class ProblemTag {
  connectivity,
  st_connectivity,
  st_reachability,
  num_cc,
  cc_labels,
  bipartiteness,
  cycle_count,
  ord,
  list_ranking,
  shortest_path,
  sssp,
  apsp,
  diameter,
  radius,
  median,
  betweenness,
  msf,
  mincut,
};

const char* to_string(ProblemTag t);
ProblemTag tag_from_string(const std::string& name);

/// True when the problem consumes a successor list rather than a graph.
inline bool takes_successors(ProblemTag t) {
  return t == ProblemTag::ord || t == ProblemTag::list_ranking;
}

/// Exact rational with a positive, gcd reduced denominator. Centrality
/// thresholds are compared exactly, so no floats anywhere near these.
struct Rat {
  Word num = 0;
  Word den = 1;

  bool operator==(const Rat&) const = default;
};

Rat rat_make(Word num, Word den);
Rat rat_add(Rat a, Rat b);
Rat rat_mul(Rat a, Rat b);
bool rat_less(Rat a, Rat b);
bool rat_less_int(Rat a, Word b);

/// Finite stand-in for "unreachable": larger than any real distance since
/// paths have at most n - 1 edges of weight at most max_weight.
inline Word unreachable_distance(Word n, Word max_weight) {
  return n * max_weight + 1;
}

inline Word unreachable_distance(const GraphInstance& g) {
  return unreachable_distance(g.n, g.max_weight);
}

/// Dijkstra from src honoring the instance's edge direction; unreachable
/// nodes get the sentinel. Throws NegativeWeight on w < 0.
std::vector<Word> single_source_distances(const GraphInstance& g, Word src);

/// Reference answer for a graph problem. test_mode reruns the result
/// through an independent method where one is affordable and throws Error
/// on disagreement. WrongTag when the tag does not fit the instance.
Answer oracle(ProblemTag tag, const GraphInstance& g, bool test_mode = false);

/// Reference answer for ord and list_ranking. Validates the path promise.
Answer oracle(ProblemTag tag, const SuccessorList& sl, bool test_mode = false);

/// Betweenness centrality of every node by explicit enumeration of all
/// shortest paths; exponential, for cross-validation on tiny graphs only.
std::vector<Rat> betweenness_by_enumeration(const GraphInstance& g);

/// Minimum cut by scanning all 2^(n-1) bipartitions; n <= 20 or so.
std::pair<Word, std::vector<Word>> mincut_by_partition_scan(
    const GraphInstance& g);

/// Per-node betweenness as interleaved (numerator, denominator) words.
std::vector<Rat> betweenness_values(const GraphInstance& g);

/// Total weight of edges whose endpoints land on different sides.
Word crossing_weight(const GraphInstance& g, const std::vector<Word>& side);

}  // namespace mpc
