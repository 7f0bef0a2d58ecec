#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mpc/engine.hpp"

namespace mpc {

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? 0 : (a + b - 1) / b;
}

/// Tree depth sufficient for any collective over at most N^degree items,
/// computed from the configuration alone. Because s >= N^(1-eps), a depth-L
/// s-ary tree covers s^L >= N^(L*(1-eps)) items, so L = ceil(degree/(1-eps))
/// always suffices; using this instead of a data-derived depth keeps round
/// counts identical across instance sizes.
std::uint64_t levels_for(const MpcConfig& cfg, double degree);

/// Smallest L with s^L >= count (0 for count <= 1). Data-derived depth for
/// one-shot primitives whose caller knows the exact count.
std::uint64_t levels_for_count(const MpcConfig& cfg, std::uint64_t count);

/// k copies of a `block`-machine unit, laid out copy-major per group:
/// copy (g, c) starts at all.first + (g * copies + c) * block.
struct ReplicaSet {
  MachineRange all;
  std::uint64_t copies = 0;
  std::uint64_t block = 0;
  std::uint64_t groups = 1;
  MachineRange copy_range(std::uint64_t group, std::uint64_t copy) const {
    return {all.first + (group * copies + copy) * block, block};
  }
  MachineRange copy_range(std::uint64_t copy) const { return copy_range(0, copy); }
};

/// Replicates, for each of `groups` source blocks (uniform size `block`,
/// group g starting at block_first(g)), the block's contents into `copies`
/// identical copies. Runs `apps` two-step broadcast applications, each
/// multiplying the copy count by up to s, so s^apps >= copies is required.
/// Sources are consumed. Costs exactly 2 * apps rounds (0 if apps = 0, which
/// requires copies = 1 and leaves the sources in place).
ReplicaSet replicate_blocks(Engine& eng, std::uint64_t groups,
                            const std::function<MachineId(std::uint64_t)>& block_first,
                            std::uint64_t block, std::uint64_t copies,
                            std::uint64_t apps);

/// Single-group replication of a machine range.
ReplicaSet replicate(Engine& eng, MachineRange src, std::uint64_t copies,
                     std::uint64_t apps);

/// As above with apps derived from `copies` (ceil(log_s copies)).
ReplicaSet replicate(Engine& eng, MachineRange src, std::uint64_t copies);

/// Appends the full memory of src(g) (at most `payload` words) to every
/// machine of dest(g), for all groups in parallel. dest ranges must be
/// disjoint from each other and from the sources and share one uniform
/// count. Sources are consumed. Costs 2 * apps + 1 rounds.
void group_broadcast(Engine& eng, std::uint64_t groups,
                     const std::function<MachineId(std::uint64_t)>& src,
                     const std::function<MachineId(std::uint64_t)>& dest_first,
                     std::uint64_t dest_count, std::uint64_t payload,
                     std::uint64_t apps);

void broadcast(Engine& eng, MachineId src, MachineRange dest,
               std::uint64_t payload, std::uint64_t apps);

/// Emission callback: reads one machine's memory, appends output words.
/// Must be pure: it runs once to size the output and once to route it.
using EmitFn =
    std::function<void(MachineId, std::span<const Word>, std::vector<Word>&)>;

/// Dense word array: machine data.first + i holds global words
/// [i*stride, (i+1)*stride). `meta` holds the exact total as its single word.
struct PackedArray {
  MachineRange data;
  MachineId meta = 0;
  std::uint64_t capacity = 0;
  std::uint64_t stride = 0;  ///< words per data machine
};

/// Concatenates every source machine's emission (ordered by machine id) into
/// a dense array, via an s-ary counting tree: up-sweep of counts, down-sweep
/// of exclusive offsets, then one routing round to exact positions. Source
/// memories are preserved but must keep one word of headroom to receive
/// their offset, and at least one source machine must be live. No machine
/// may emit more than s words. s^levels >= src.count required.
/// Costs 2 * levels + 1 rounds.
PackedArray emit_pack(Engine& eng, MachineRange src, std::uint64_t levels,
                      std::uint64_t capacity_words, const EmitFn& emit);

/// As above over several disjoint source ranges treated as one sequence;
/// the span order, not the id order, fixes the order of the output stream.
PackedArray emit_pack(Engine& eng, std::span<const MachineRange> srcs,
                      std::uint64_t levels, std::uint64_t capacity_words,
                      const EmitFn& emit);

/// Re-routes a packed array of fixed-width records to one record per
/// machine: record t lands on result.first + t. One round.
MachineRange spread_records(Engine& eng, const PackedArray& packed,
                            std::uint64_t record_words);

using GenFn = std::function<void(std::uint64_t, std::vector<Word>&)>;

/// Wakes `count` fresh machines through an s-ary activation-token tree
/// rooted at `initiator` (which must be live and keeps its memory), then
/// each computes its own contents as gen(index) locally. The generated data
/// must be derivable from the index alone. Costs `levels` rounds.
MachineRange spawn_generate(Engine& eng, MachineId initiator,
                            std::uint64_t count, std::uint64_t levels,
                            const GenFn& gen);

enum class ReduceOp { sum, min, max, bor };

Word reduce_identity(ReduceOp op);
Word reduce_apply(ReduceOp op, Word a, Word b);

/// Extracts the contribution of one item machine; return nullopt to skip.
using ValueFn =
    std::function<std::optional<Word>(MachineId, std::span<const Word>)>;

/// Delivers to every machine of `srcs` (linearized in span order) the
/// exclusive prefix sum of weigh() over the machines before it, appended to
/// its memory as one extra word (so one word of headroom is required; a
/// skipped or empty machine counts 0). Gives records a stable global index:
/// a machine holding k records learns the index of its first one. Returns
/// the tree root, whose single memory word is the grand total. s^levels >=
/// total machines required. Costs 2 * levels rounds.
MachineId assign_record_offsets(Engine& eng,
                                std::span<const MachineRange> srcs,
                                std::uint64_t levels, const ValueFn& weigh);

MachineId assign_record_offsets(Engine& eng, MachineRange src,
                                std::uint64_t levels, const ValueFn& weigh);

/// Item addressing for a multi-group fold: item machine with local index
/// `local` contributes to group `group` at in-group position `slot`
/// (injective per group, slot < per_group).
struct GroupLayout {
  MachineRange items;
  std::uint64_t groups = 1;
  std::uint64_t per_group = 0;
  std::function<void(std::uint64_t local, std::uint64_t& group,
                     std::uint64_t& slot)>
      locate;
};

/// Folds all items of each group through parallel s-ary trees. Returns G
/// result machines (result.first + g holds group g's fold); a group with no
/// items yields an untouched machine. Item memories are preserved.
/// s^levels >= per_group required. Costs `levels` rounds.
MachineRange grouped_reduce(Engine& eng, const GroupLayout& layout,
                            std::uint64_t levels, ReduceOp op,
                            const ValueFn& value);

/// One-shot host-read fold over a machine range (one contribution per live
/// machine). Depth derived from items.count; empty input returns the op
/// identity with zero rounds.
Word aggregate(Engine& eng, MachineRange items, ReduceOp op,
               const ValueFn& value);

/// Sorts a packed word array ascending (ties broken by original position).
/// Pairwise-merge ranking: half-full sorted runs are replicated so one
/// machine per run pair counts cross-run ranks locally; per-element count
/// trees then yield exact output positions. Costs O(levels) rounds
/// regardless of count. Output is packed at floor(s/2) words per machine.
PackedArray sort_words(Engine& eng, const PackedArray& data,
                       std::uint64_t count, std::uint64_t levels);

struct PermutationResult {
  PackedArray items;  ///< input words re-ordered by rank, floor(s/2) per machine
  bool redrawn = false;  ///< a score collision triggered the seed+1 redraw
};

/// Ranks `count` items by scores drawn uniformly from [1, count^3] seeded by
/// (engine seed, item index). A detected score collision triggers one
/// deterministic redraw with seed+1; remaining ties break by item index.
PermutationResult random_permutation(Engine& eng, const PackedArray& items,
                                     std::uint64_t count,
                                     std::uint64_t levels);

}  // namespace mpc
