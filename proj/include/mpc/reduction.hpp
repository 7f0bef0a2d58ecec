#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpc/collectives.hpp"
#include "mpc/engine.hpp"
#include "mpc/graph.hpp"
#include "mpc/oracles.hpp"

namespace mpc {

/// Host-side constants of the instance being reduced. A transform may
/// branch on these freely; the edge data itself lives on the machines and
/// may only be touched by machine programs.
struct Meta {
  Word n = 0;
  Word m = 0;  ///< edge records in the input (0 for successor lists)
  bool directed = false;
  bool weighted = false;
  Word max_weight = 1;
  Word a = -1;  ///< query source, or the first order-query node
  Word b = -1;  ///< query target, or the second order-query node
  Word k = -1;  ///< integer query argument
  Word trials = 0;  ///< contraction trial count; 0 picks ceil(n^2 ln n)
};

Meta meta_of(const GraphInstance& g);
Meta meta_of(const SuccessorList& sl);
Meta meta_of(const Instance& inst);

/// The configuration's N for an instance: nodes plus edge records.
inline std::uint64_t model_size(const Meta& meta) {
  return std::uint64_t(meta.n + meta.m);
}

/// Wire format of one posed sub-instance inside a packed word stream.
/// Graph subs carry [n, m, directed, max_weight, qa, qb, qk] then m
/// (u, v, w) triples; successor subs carry [n, a, b] then n (i, succ)
/// pairs with the sink stored as n.
inline constexpr std::uint64_t sub_graph_header_words = 7;
inline constexpr std::uint64_t sub_ord_header_words = 3;

inline std::uint64_t sub_graph_words(Word m) {
  return sub_graph_header_words + 3 * std::uint64_t(m);
}
inline std::uint64_t sub_ord_words(Word n) {
  return sub_ord_header_words + 2 * std::uint64_t(n);
}

/// Appends a graph sub header to a machine emission.
void push_sub_header(std::vector<Word>& out, Word n, Word m, bool directed,
                     Word max_weight, Word qa, Word qb, Word qk);

/// Rebuilds the posed instance from its window of the packed stream. The
/// weighted flag is not on the wire; the reduction supplies it per sub.
GraphInstance decode_sub_graph(std::span<const Word> window, bool weighted);
SuccessorList decode_sub_ord(std::span<const Word> window);

/// One target instance produced by a transform: a word window into a packed
/// stream plus the machines reserved for the solver's answer. A zero
/// `length` marks a stream whose windows are found by reading each header
/// in order (used when sub sizes are data dependent).
struct SubInstance {
  ProblemTag tag = ProblemTag::st_connectivity;
  bool weighted = false;
  MachineRange data;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  MachineRange answer;
};

/// Machines an answer occupies: one word per machine for scalars, a count
/// machine followed by one machine per node for label vectors, and one
/// (numerator, denominator) machine per node for centrality vectors.
std::uint64_t answer_machines(ProblemTag tag, Word sub_nodes);

/// Transform output: the posed subs plus size bookkeeping for the growth
/// assertions. `notes` carries reduction-private host constants (layout
/// anchors) from transform to extract.
struct TransformResult {
  std::vector<SubInstance> subs;
  Word sub_nodes = 0;   ///< largest node count among the posed instances
  Word sub_edges = 0;   ///< largest edge count
  Word sub_weight = 0;  ///< largest declared weight bound
  std::vector<Word> notes;
};

/// A constant-round reduction: transform poses target instances from the
/// distributed input, a pluggable solver answers them, and extract folds
/// the answers back into a source answer. Both machine phases must run a
/// round count that depends only on epsilon, never on instance size.
class Reduction {
 public:
  virtual ~Reduction() = default;

  /// Stable kebab-case tag used by the command line and reports.
  virtual std::string name() const = 0;
  virtual ProblemTag source() const = 0;
  virtual ProblemTag target() const = 0;

  /// Whether the instance shape satisfies the construction's preconditions.
  virtual bool applicable(const Meta&) const { return true; }

  /// Upper bound on the words this reduction will provision, used to size
  /// the machine budget before the engine is built.
  virtual std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const = 0;

  virtual TransformResult transform(Engine& eng, MachineRange input,
                                    const Meta& meta) const = 0;

  virtual Answer extract(Engine& eng, const TransformResult& tr,
                         const Meta& meta) const = 0;

  /// Pinned growth constants, re-checked after every run. Default: no bound
  /// beyond what transform already produced.
  virtual void assert_growth(const TransformResult&, const Meta&,
                             std::uint64_t) const {}
};

/// The undirected equivalence class: order queries, connectivity, labels,
/// bipartiteness, forests, cuts.
const std::vector<const Reduction*>& conn_reductions();

/// The distance class: reachability, layered paths, pair distances and the
/// distance aggregates built from them.
const std::vector<const Reduction*>& path_reductions();

/// Both classes, in registry order.
std::vector<const Reduction*> all_reductions();

/// Lookup by tag; nullptr when unknown.
const Reduction* find_reduction(const std::string& name);

/// Whether the centrality construction's seeded tie-breaking weights give
/// this pair-distance instance unique shortest paths and the exact
/// reference answer. Used to pre-screen sampled instances; the run must
/// then use the same seed.
bool centrality_run_clean(const GraphInstance& g, std::uint64_t seed);

/// Word-demand models mirroring what the collectives provision, with slack
/// for tree scaffolding. All results are in engine words.
std::uint64_t replicate_demand(const MpcConfig& cfg, std::uint64_t copies,
                               std::uint64_t block, std::uint64_t apps);
std::uint64_t pack_demand(const MpcConfig& cfg, std::uint64_t sources,
                          std::uint64_t capacity_words);
std::uint64_t spawn_demand(const MpcConfig& cfg, std::uint64_t count);
std::uint64_t reduce_demand(const MpcConfig& cfg, std::uint64_t groups,
                            std::uint64_t per_group);

}  // namespace mpc
