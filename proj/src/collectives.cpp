#include "mpc/collectives.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <utility>

namespace mpc {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t s, std::uint64_t k) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < k; ++i) v = sat_mul(v, s);
  return v;
}

void step_one(Engine& eng, MachineRange r, const StepFn& fn) {
  eng.step_on(std::span<const MachineRange>(&r, 1), fn);
}

/// Disjoint machine ranges addressed as one linear sequence; the range
/// order (not the id order) defines the sequence.
struct RangeIndex {
  std::vector<MachineRange> ranges;
  std::vector<std::uint64_t> prefix;
  std::uint64_t total = 0;

  explicit RangeIndex(std::span<const MachineRange> rs) {
    for (const auto& r : rs) {
      if (r.count == 0) continue;
      prefix.push_back(total);
      ranges.push_back(r);
      total += r.count;
    }
  }

  std::uint64_t linear(MachineId id) const {
    for (std::size_t i = 0; i < ranges.size(); ++i)
      if (id >= ranges[i].first && id < ranges[i].end())
        return prefix[i] + (id - ranges[i].first);
    throw MalformedProgram("collective: machine outside its source ranges");
  }

  MachineId id_of(std::uint64_t lin) const {
    auto it = std::upper_bound(prefix.begin(), prefix.end(), lin);
    std::size_t i = static_cast<std::size_t>(it - prefix.begin()) - 1;
    return ranges[i].first + (lin - prefix[i]);
  }
};

/// Counting tree shared by emit_pack and assign_record_offsets: up-sweep of
/// weigh() totals, down-sweep of exclusive prefixes. Every source machine
/// ends with its offset appended to memory (delivered but not consumed);
/// the returned root holds the grand total as its single word.
/// Costs exactly 2 * levels rounds.
MachineId offset_tree(Engine& eng, std::shared_ptr<const RangeIndex> src,
                      std::uint64_t levels, const ValueFn& weigh) {
  const std::uint64_t s = eng.config().words_per_machine;
  if (levels == 0) throw BadParams("offsets: levels must be positive");
  if (sat_pow(s, levels) < src->total)
    throw BadParams("offsets: tree too shallow for the source count");

  std::vector<MachineRange> lvl(levels);
  {
    std::uint64_t nodes = src->total;
    for (std::uint64_t l = 0; l < levels; ++l) {
      nodes = ceil_div(nodes, s);
      lvl[l] = eng.provision_machines(nodes);
    }
  }
  const MachineId root = lvl[levels - 1].first;

  // up-sweep: sources report their weights
  eng.step_on(std::span<const MachineRange>(src->ranges), [=](MachineIo& io) {
    auto v = weigh(io.id, std::span<const Word>(io.memory));
    io.send(lvl[0].first + src->linear(io.id) / s, v ? *v : Word(0));
  });

  // up-sweep: interiors total their children, remembering exclusive prefixes
  for (std::uint64_t l = 0; l + 1 < levels; ++l) {
    MachineId child_first = l == 0 ? 0 : lvl[l - 1].first;
    MachineId lf = lvl[l].first, pf = lvl[l + 1].first;
    bool leaf = l == 0;
    step_one(eng, lvl[l], [=](MachineIo& io) {
      std::uint64_t k = io.id - lf;
      std::vector<Word> cnt(s, 0);
      for (const auto& e : io.inbox) {
        std::uint64_t c = leaf ? src->linear(e.sender) : e.sender - child_first;
        cnt[c - k * s] = io.payload(e)[0];
      }
      std::vector<Word> mem(s - 1, 0);
      Word run = 0;
      for (std::uint64_t q = 0; q < s; ++q) {
        if (q > 0) mem[q - 1] = run;
        run += cnt[q];
      }
      io.memory = std::move(mem);
      io.send(pf + k / s, run);
    });
  }

  // down-sweep: exclusive offsets flow back to the sources
  for (std::uint64_t l = levels; l-- > 0;) {
    MachineId child_first = l == 0 ? 0 : lvl[l - 1].first;
    std::uint64_t child_count = l == 0 ? src->total : lvl[l - 1].count;
    bool leaf = l == 0;
    MachineId lf = lvl[l].first;
    step_one(eng, lvl[l], [=](MachineIo& io) {
      std::uint64_t k = io.id - lf;
      std::uint64_t lo = k * s;
      std::uint64_t hi = std::min(lo + s, child_count);
      auto child_id = [&](std::uint64_t c) {
        return leaf ? src->id_of(c) : child_first + c;
      };
      if (io.id == root) {
        std::vector<Word> cnt(s, 0);
        for (const auto& e : io.inbox) {
          std::uint64_t c = leaf ? src->linear(e.sender) : e.sender - child_first;
          cnt[c - lo] = io.payload(e)[0];
        }
        Word run = 0;
        for (std::uint64_t q = 0; lo + q < hi; ++q) {
          io.send(child_id(lo + q), run);
          run += cnt[q];
        }
        for (std::uint64_t q = hi - lo; q < s; ++q) run += cnt[q];
        io.memory.assign(1, run);
      } else {
        Word off = io.memory.empty() ? 0 : io.memory.back();
        bool stored = io.memory.size() == s;  // s-1 prefixes plus the offset
        for (std::uint64_t q = 0; lo + q < hi; ++q) {
          Word p = (q == 0 || !stored) ? 0 : io.memory[q - 1];
          io.send(child_id(lo + q), off + p);
        }
        io.memory.clear();
      }
    });
  }
  return root;
}

/// Folds level-1 node memories (node (g, k) at level1.first + g*n1 + k)
/// through levels-1 further s-ary hops, then folds in place. Returns one
/// machine per group. Runs exactly levels-1 communication rounds.
MachineRange fold_up(Engine& eng, MachineRange level1, std::uint64_t groups,
                     std::uint64_t n1, std::uint64_t levels, ReduceOp op) {
  const std::uint64_t s = eng.config().words_per_machine;
  std::uint64_t nodes = n1;
  MachineRange cur = level1;
  for (std::uint64_t hop = 1; hop < levels; ++hop) {
    std::uint64_t next_nodes = ceil_div(nodes, s);
    MachineRange next = eng.provision_machines(groups * next_nodes);
    std::uint64_t cn = nodes;
    MachineId cf = cur.first, nf = next.first;
    step_one(eng, cur, [=](MachineIo& io) {
      std::uint64_t lin = io.id - cf;
      std::uint64_t g = lin / cn, k = lin % cn;
      Word acc = reduce_identity(op);
      for (Word w : io.memory) acc = reduce_apply(op, acc, w);
      io.send(nf + g * next_nodes + k / s, acc);
      io.memory.clear();
    });
    cur = next;
    nodes = next_nodes;
  }
  if (nodes != 1) throw BadParams("fold: tree too shallow for group size");
  step_one(eng, cur, [=](MachineIo& io) {
    Word acc = reduce_identity(op);
    for (Word w : io.memory) acc = reduce_apply(op, acc, w);
    io.memory.assign(1, acc);
  });
  return cur;
}

}  // namespace

std::uint64_t levels_for(const MpcConfig& cfg, double degree) {
  if (degree <= 0.0) return 0;
  double raw = degree / (1.0 - cfg.epsilon);
  double r = std::round(raw);
  if (std::abs(raw - r) < 1e-9 * std::max(1.0, r)) raw = r;
  auto lv = static_cast<std::uint64_t>(std::ceil(raw));
  if (lv == 0) lv = 1;
  return lv + 1;  // one slack level absorbs constant factors over N^degree
}

std::uint64_t levels_for_count(const MpcConfig& cfg, std::uint64_t count) {
  if (count <= 1) return 0;
  std::uint64_t lv = 0, reach = 1;
  while (reach < count) {
    reach = sat_mul(reach, cfg.words_per_machine);
    ++lv;
  }
  return lv;
}

Word reduce_identity(ReduceOp op) {
  switch (op) {
    case ReduceOp::sum:
    case ReduceOp::bor:
      return 0;
    case ReduceOp::min:
      return std::numeric_limits<Word>::max();
    case ReduceOp::max:
      return std::numeric_limits<Word>::min();
  }
  return 0;
}

Word reduce_apply(ReduceOp op, Word a, Word b) {
  switch (op) {
    case ReduceOp::sum:
      return a + b;
    case ReduceOp::min:
      return std::min(a, b);
    case ReduceOp::max:
      return std::max(a, b);
    case ReduceOp::bor:
      return a | b;
  }
  return a;
}

ReplicaSet replicate_blocks(Engine& eng, std::uint64_t groups,
                            const std::function<MachineId(std::uint64_t)>& block_first,
                            std::uint64_t block, std::uint64_t copies,
                            std::uint64_t apps) {
  const std::uint64_t s = eng.config().words_per_machine;
  ReplicaSet out;
  out.copies = copies;
  out.block = block;
  out.groups = groups;
  if (groups == 0 || block == 0 || copies == 0) return out;
  if (sat_pow(s, apps) < copies)
    throw BadParams("replicate: not enough applications for the copy count");
  if (apps == 0) {
    if (groups != 1)
      throw BadParams("replicate: in-place identity needs a single group");
    out.all = {block_first(0), block};
    return out;
  }

  std::vector<std::uint64_t> gcount(apps + 1);
  gcount[0] = 1;
  for (std::uint64_t t = 1; t <= apps; ++t)
    gcount[t] = std::min(sat_mul(gcount[t - 1], s), copies);

  // sorted block starts so application 1 can map machine ids back to groups
  std::vector<std::pair<MachineId, std::uint64_t>> index(groups);
  for (std::uint64_t g = 0; g < groups; ++g) index[g] = {block_first(g), g};
  std::sort(index.begin(), index.end());

  MachineRange cur{};
  for (std::uint64_t t = 1; t <= apps; ++t) {
    const std::uint64_t gold = gcount[t - 1], gnew = gcount[t];
    bool from_sources = (t == 1);
    MachineId cf = cur.first;

    std::vector<MachineRange> sranges;
    if (from_sources) {
      sranges.reserve(groups);
      for (std::uint64_t g = 0; g < groups; ++g)
        sranges.push_back({block_first(g), block});
    } else {
      sranges.push_back(cur);
    }
    auto source_lin = [=](MachineId id) {
      if (!from_sources) return std::uint64_t(id - cf);
      auto it = std::upper_bound(
          index.begin(), index.end(),
          std::make_pair(id, std::numeric_limits<std::uint64_t>::max()));
      --it;
      return it->second * block + (id - it->first);
    };

    MachineRange dest = eng.provision_machines(groups * gnew * block);
    MachineId df = dest.first;

    if (gnew == gold) {
      // copy count already reached: keep the two-round shape as 1:1 moves
      MachineRange inter = eng.provision_machines(groups * gold * block);
      MachineId inf = inter.first;
      eng.step_on(sranges, [=](MachineIo& io) {
        io.send(inf + source_lin(io.id), std::span<const Word>(io.memory));
        io.memory.clear();
      });
      step_one(eng, inter, [=](MachineIo& io) {
        io.send(df + (io.id - inf), std::span<const Word>(io.memory));
        io.memory.clear();
      });
      cur = dest;
      continue;
    }

    // only the first ceil(gnew / s) source copies need to scatter
    const std::uint64_t active = std::min(gold, ceil_div(gnew, s));
    MachineRange helpers = eng.provision_machines(groups * active * block * s);
    MachineId hf = helpers.first;
    eng.step_on(sranges, [=](MachineIo& io) {
      std::uint64_t lin = source_lin(io.id);
      std::uint64_t li = lin % block;
      std::uint64_t gc = lin / block;
      std::uint64_t g = gc / gold, c = gc % gold;
      if (c < active) {
        std::uint64_t alin = (g * active + c) * block + li;
        for (std::uint64_t j = 0; j < io.memory.size(); ++j)
          io.send(hf + alin * s + j, io.memory[j]);
      }
      io.memory.clear();
    });

    step_one(eng, helpers, [=](MachineIo& io) {
      std::uint64_t lin = io.id - hf;
      std::uint64_t rest = lin / s;
      std::uint64_t li = rest % block;
      std::uint64_t gc = rest / block;
      std::uint64_t g = gc / active, c = gc % active;
      Word w = io.memory.empty() ? 0 : io.memory[0];
      std::uint64_t lo = c * s;
      std::uint64_t hi = std::min(lo + s, gnew);
      for (std::uint64_t nc = lo; nc < hi; ++nc)
        io.send(df + (g * gnew + nc) * block + li, w);
      io.memory.clear();
    });
    cur = dest;
  }
  out.all = cur;
  return out;
}

ReplicaSet replicate(Engine& eng, MachineRange src, std::uint64_t copies,
                     std::uint64_t apps) {
  MachineId f = src.first;
  return replicate_blocks(
      eng, 1, [f](std::uint64_t) { return f; }, src.count, copies, apps);
}

ReplicaSet replicate(Engine& eng, MachineRange src, std::uint64_t copies) {
  return replicate(eng, src, copies, levels_for_count(eng.config(), copies));
}

void group_broadcast(Engine& eng, std::uint64_t groups,
                     const std::function<MachineId(std::uint64_t)>& src,
                     const std::function<MachineId(std::uint64_t)>& dest_first,
                     std::uint64_t dest_count, std::uint64_t payload,
                     std::uint64_t apps) {
  if (groups == 0 || dest_count == 0) return;
  if (payload > eng.config().words_per_machine)
    throw BadParams("broadcast: payload exceeds machine memory");
  if (apps == 0) throw BadParams("broadcast: needs at least one application");
  ReplicaSet reps = replicate_blocks(eng, groups, src, 1, dest_count, apps);
  MachineId af = reps.all.first;
  step_one(eng, reps.all, [=](MachineIo& io) {
    std::uint64_t lin = io.id - af;
    std::uint64_t g = lin / dest_count, c = lin % dest_count;
    io.send(dest_first(g) + c, std::span<const Word>(io.memory));
    io.memory.clear();
  });
}

void broadcast(Engine& eng, MachineId src, MachineRange dest,
               std::uint64_t payload, std::uint64_t apps) {
  if (dest.count == 0) return;
  MachineId df = dest.first;
  group_broadcast(
      eng, 1, [src](std::uint64_t) { return src; },
      [df](std::uint64_t) { return df; }, dest.count, payload, apps);
}

PackedArray emit_pack(Engine& eng, std::span<const MachineRange> srcs,
                      std::uint64_t levels, std::uint64_t capacity_words,
                      const EmitFn& emit) {
  const std::uint64_t s = eng.config().words_per_machine;
  PackedArray out;
  out.capacity = capacity_words;
  out.stride = s;
  MachineRange meta = eng.provision_machines(1);
  out.meta = meta.first;
  out.data = eng.provision_machines(ceil_div(capacity_words, s));
  auto src = std::make_shared<const RangeIndex>(srcs);
  if (src->total == 0) {
    Word zero = 0;
    eng.poke(meta.first, std::span<const Word>(&zero, 1));
    return out;
  }

  MachineId root = offset_tree(
      eng, src, levels,
      [&emit](MachineId id, std::span<const Word> mem) -> std::optional<Word> {
        std::vector<Word> tmp;
        emit(id, mem, tmp);
        return static_cast<Word>(tmp.size());
      });

  // route: emissions land at exact global offsets; the root ships the total
  std::vector<MachineRange> rr = src->ranges;
  rr.push_back({root, 1});
  MachineId data_first = out.data.first, meta_id = meta.first;
  eng.step_on(std::span<const MachineRange>(rr), [=](MachineIo& io) {
    if (io.id == root) {
      io.send(meta_id, io.memory.empty() ? Word(0) : io.memory[0]);
      io.memory.clear();
      return;
    }
    if (io.inbox.empty()) return;
    const InboxEntry& e = io.inbox.back();
    auto off = static_cast<std::uint64_t>(io.payload(e)[0]);
    io.memory.erase(io.memory.begin() + e.begin,
                    io.memory.begin() + e.begin + e.count);
    std::vector<Word> tmp;
    emit(io.id, std::span<const Word>(io.memory), tmp);
    if (off + tmp.size() > capacity_words)
      throw RangeError("pack: emissions exceed declared capacity");
    std::uint64_t i = 0;
    while (i < tmp.size()) {
      std::uint64_t g = off + i;
      std::uint64_t d = g / s;
      std::uint64_t take = std::min<std::uint64_t>(tmp.size() - i, (d + 1) * s - g);
      io.send(data_first + d, std::span<const Word>(tmp.data() + i, take));
      i += take;
    }
  });
  return out;
}

PackedArray emit_pack(Engine& eng, MachineRange src, std::uint64_t levels,
                      std::uint64_t capacity_words, const EmitFn& emit) {
  return emit_pack(eng, std::span<const MachineRange>(&src, 1), levels,
                   capacity_words, emit);
}

MachineId assign_record_offsets(Engine& eng,
                                std::span<const MachineRange> srcs,
                                std::uint64_t levels, const ValueFn& weigh) {
  auto src = std::make_shared<const RangeIndex>(srcs);
  if (src->total == 0) throw BadParams("offsets: empty source");
  return offset_tree(eng, src, levels, weigh);
}

MachineId assign_record_offsets(Engine& eng, MachineRange src,
                                std::uint64_t levels, const ValueFn& weigh) {
  return assign_record_offsets(eng, std::span<const MachineRange>(&src, 1),
                               levels, weigh);
}

MachineRange spread_records(Engine& eng, const PackedArray& packed,
                            std::uint64_t record_words) {
  const std::uint64_t stride = packed.stride;
  if (record_words == 0 || record_words > eng.config().words_per_machine)
    throw BadParams("spread: bad record width");
  std::uint64_t cap_records = packed.capacity / record_words;
  MachineRange out = eng.provision_machines(cap_records);
  if (packed.data.count == 0 || cap_records == 0) return out;
  MachineId df = packed.data.first, of = out.first;
  std::uint64_t w = record_words;
  step_one(eng, packed.data, [=](MachineIo& io) {
    std::uint64_t base = (io.id - df) * stride;
    for (std::uint64_t j = 0; j < io.memory.size(); ++j)
      io.send(of + (base + j) / w, io.memory[j]);
    io.memory.clear();
  });
  return out;
}

MachineRange spawn_generate(Engine& eng, MachineId initiator,
                            std::uint64_t count, std::uint64_t levels,
                            const GenFn& gen) {
  const std::uint64_t s = eng.config().words_per_machine;
  if (count == 0) return {};
  if (levels == 0 || sat_pow(s, levels) < count)
    throw BadParams("spawn: tree too shallow for the machine count");
  std::vector<std::uint64_t> n(levels + 1);
  n[levels] = count;
  for (std::uint64_t l = levels; l-- > 0;) n[l] = ceil_div(n[l + 1], s);
  std::vector<MachineRange> lvl(levels + 1);
  lvl[0] = {initiator, 1};
  for (std::uint64_t l = 1; l <= levels; ++l)
    lvl[l] = eng.provision_machines(n[l]);
  for (std::uint64_t l = 1; l <= levels; ++l) {
    MachineId pf = lvl[l - 1].first, nf = lvl[l].first;
    std::uint64_t nl = n[l];
    bool from_initiator = (l == 1);
    step_one(eng, lvl[l - 1], [=](MachineIo& io) {
      std::uint64_t k = io.id - pf;
      std::uint64_t lo = k * s, hi = std::min(lo + s, nl);
      for (std::uint64_t q = lo; q < hi; ++q) io.send(nf + q, Word(1));
      if (!from_initiator) io.memory.clear();
    });
  }
  MachineId ff = lvl[levels].first;
  step_one(eng, lvl[levels], [=](MachineIo& io) {
    std::uint64_t idx = io.id - ff;
    io.memory.clear();
    gen(idx, io.memory);
  });
  return lvl[levels];
}

MachineRange grouped_reduce(Engine& eng, const GroupLayout& layout,
                            std::uint64_t levels, ReduceOp op,
                            const ValueFn& value) {
  const std::uint64_t s = eng.config().words_per_machine;
  if (layout.groups == 0) return {};
  std::uint64_t per = std::max<std::uint64_t>(layout.per_group, 1);
  if (levels == 0 || sat_pow(s, levels) < per)
    throw BadParams("fold: tree too shallow for the group size");
  std::uint64_t n1 = ceil_div(per, s);
  MachineRange level1 = eng.provision_machines(layout.groups * n1);
  MachineId itf = layout.items.first, l1 = level1.first;
  auto locate = layout.locate;
  step_one(eng, layout.items, [=](MachineIo& io) {
    auto v = value(io.id, std::span<const Word>(io.memory));
    if (!v) return;
    std::uint64_t g = 0, slot = 0;
    locate(io.id - itf, g, slot);
    io.send(l1 + g * n1 + slot / s, *v);
  });
  return fold_up(eng, level1, layout.groups, n1, levels, op);
}

Word aggregate(Engine& eng, MachineRange items, ReduceOp op,
               const ValueFn& value) {
  if (items.count == 0) return reduce_identity(op);
  std::uint64_t levels =
      std::max<std::uint64_t>(1, levels_for_count(eng.config(), items.count));
  GroupLayout lay;
  lay.items = items;
  lay.groups = 1;
  lay.per_group = items.count;
  lay.locate = [](std::uint64_t local, std::uint64_t& g, std::uint64_t& slot) {
    g = 0;
    slot = local;
  };
  MachineRange res = grouped_reduce(eng, lay, levels, op, value);
  auto words = eng.peek(res.first);
  return words.empty() ? reduce_identity(op) : words[0];
}

namespace {

/// Shared pairwise-ranking skeleton for sort and random permutation.
/// Items are repacked into runs of rcap raw words; every ordered run pair
/// (i, j) meets at one machine which counts, for each element of run i, the
/// keys strictly below it in run j; per-element count trees then give exact
/// output positions. The key callback maps (global index, raw value, pair
/// machine flag word) to a (primary, secondary) tuple and must induce a
/// strict total order over all items.
struct PairwiseRank {
  using KeyFn = std::function<std::pair<Word, Word>(std::uint64_t, Word, Word)>;

  Engine& eng;
  std::uint64_t count;
  std::uint64_t levels;
  std::uint64_t s, rcap, R, out_per;
  MachineRange pairs{};

  PairwiseRank(Engine& e, std::uint64_t cnt, std::uint64_t lv)
      : eng(e), count(cnt), levels(std::max<std::uint64_t>(lv, 1)) {
    s = eng.config().words_per_machine;
    rcap = (s - 1) / 3;
    R = ceil_div(count, rcap);
    out_per = s / 2;
  }

  std::uint64_t run_size(std::uint64_t r) const {
    return std::min(rcap, count - r * rcap);
  }

  /// Consumes the packed input: raw words flow into runs, runs replicate
  /// into the R x R pair grid. Pair (i, j) ends holding run_j then run_i
  /// (row copies carry lower sender ids, so run_j is delivered first).
  void build_pairs(const PackedArray& data) {
    MachineRange runs = eng.provision_machines(R);
    MachineId df = data.data.first, rf = runs.first;
    std::uint64_t stride = data.stride, rc = rcap;
    step_one(eng, data.data, [=](MachineIo& io) {
      std::uint64_t base = (io.id - df) * stride;
      for (std::uint64_t j = 0; j < io.memory.size(); ++j)
        io.send(rf + (base + j) / rc, io.memory[j]);
      io.memory.clear();
    });

    ReplicaSet reps = replicate(eng, runs, 2 * R, levels + 1);
    pairs = eng.provision_machines(R * R);
    MachineId af = reps.all.first, pf = pairs.first;
    std::uint64_t rr = R;
    step_one(eng, reps.all, [=](MachineIo& io) {
      std::uint64_t lin = io.id - af;
      std::uint64_t c = lin / rr, li = lin % rr;
      // copies [0, R) feed pair rows with run_j; [R, 2R) feed columns with run_i
      std::uint64_t i = c < rr ? c : li;
      std::uint64_t j = c < rr ? li : c - rr;
      io.send(pf + i * rr + j, std::span<const Word>(io.memory));
      io.memory.clear();
    });
  }

  /// One ranking pass: pair machines count with `key`, counts fold up, ranks
  /// return to the diagonal homes, and (rank, value) records route to packed
  /// output. With trailing_skip = 1, the last word of each pair memory (a
  /// broadcast flag) is stripped and passed to `key`. Pair machines are
  /// consumed: off-diagonal ones die, the diagonal serves as element homes.
  PackedArray rank_and_route(const KeyFn& key, std::uint64_t trailing_skip) {
    std::uint64_t n1 = ceil_div(R, s);
    MachineRange acc1 = eng.provision_machines(count * n1);
    MachineId pf = pairs.first, a1 = acc1.first;
    std::uint64_t rr = R, rc = rcap, cnt = count, nn1 = n1, sw = s;
    std::uint64_t skip = trailing_skip;
    step_one(eng, pairs, [=](MachineIo& io) {
      std::uint64_t lin = io.id - pf;
      std::uint64_t i = lin / rr, j = lin % rr;
      std::uint64_t jsz = std::min(rc, cnt - j * rc);
      std::uint64_t body = io.memory.size() - skip;
      Word flag = skip ? io.memory[body] : 0;
      std::span<const Word> mem(io.memory.data(), body);
      std::span<const Word> run_j = mem.subspan(0, jsz);
      std::span<const Word> run_i = mem.subspan(jsz);
      std::vector<std::pair<Word, Word>> kj(run_j.size());
      for (std::uint64_t y = 0; y < run_j.size(); ++y)
        kj[y] = key(j * rc + y, run_j[y], flag);
      std::sort(kj.begin(), kj.end());
      for (std::uint64_t q = 0; q < run_i.size(); ++q) {
        std::uint64_t gx = i * rc + q;
        auto kx = key(gx, run_i[q], flag);
        auto below = static_cast<Word>(
            std::lower_bound(kj.begin(), kj.end(), kx) - kj.begin());
        io.send(a1 + gx * nn1 + j / sw, below);
      }
      if (i == j)
        io.memory.resize(jsz);  // keep one run copy: the element home
      else
        io.memory.clear();
    });

    MachineRange roots = fold_up(eng, acc1, count, n1, levels, ReduceOp::sum);
    MachineId rof = roots.first;
    step_one(eng, roots, [=](MachineIo& io) {
      std::uint64_t home = (io.id - rof) / rc;
      io.send(pf + home * rr + home, io.memory[0]);
      io.memory.clear();
    });

    PackedArray out;
    out.capacity = count;
    out.stride = out_per;
    out.data = eng.provision_machines(ceil_div(count, out_per));
    MachineId of = out.data.first;
    std::uint64_t op = out_per;
    step_one(eng, pairs, [=](MachineIo& io) {
      std::uint64_t half = io.memory.size() / 2;  // values, then their ranks
      for (std::uint64_t q = 0; q < half; ++q) {
        Word rank = io.memory[half + q];
        Word rec[2] = {rank, io.memory[q]};
        io.send(of + static_cast<std::uint64_t>(rank) / op,
                std::span<const Word>(rec, 2));
      }
      io.memory.clear();
    });
    step_one(eng, out.data, [](MachineIo& io) {
      std::vector<std::pair<Word, Word>> recs;
      for (std::uint64_t q = 0; q + 1 < io.memory.size(); q += 2)
        recs.emplace_back(io.memory[q], io.memory[q + 1]);
      std::sort(recs.begin(), recs.end());
      io.memory.clear();
      for (auto& rv : recs) io.memory.push_back(rv.second);
    });
    return out;
  }
};

}  // namespace

PackedArray sort_words(Engine& eng, const PackedArray& data,
                       std::uint64_t count, std::uint64_t levels) {
  if (count == 0) return PackedArray{};
  PairwiseRank pr(eng, count, levels);
  pr.build_pairs(data);
  return pr.rank_and_route(
      [](std::uint64_t g, Word v, Word) {
        return std::make_pair(v, static_cast<Word>(g));
      },
      0);
}

PermutationResult random_permutation(Engine& eng, const PackedArray& items,
                                     std::uint64_t count,
                                     std::uint64_t levels) {
  PermutationResult res;
  if (count == 0) return res;
  const std::uint64_t s = eng.config().words_per_machine;
  std::uint64_t range = sat_mul(sat_mul(count, count), count);
  std::uint64_t seed = eng.seed();

  PairwiseRank pr(eng, count, levels);
  pr.build_pairs(items);
  std::uint64_t rr = pr.R, rc = pr.rcap, cnt = count;
  MachineId pf = pr.pairs.first;

  // collision scan under the first draw
  std::uint64_t per_flag = rr * rr;
  std::uint64_t lf =
      std::max<std::uint64_t>(1, levels_for_count(eng.config(), per_flag));
  std::uint64_t n1f = ceil_div(per_flag, s);
  MachineRange flag1 = eng.provision_machines(n1f);
  MachineId f1 = flag1.first;
  step_one(eng, pr.pairs, [=](MachineIo& io) {
    std::uint64_t lin = io.id - pf;
    std::uint64_t i = lin / rr, j = lin % rr;
    std::uint64_t jsz = std::min(rc, cnt - j * rc);
    std::span<const Word> mem(io.memory);
    std::span<const Word> run_j = mem.subspan(0, jsz);
    std::span<const Word> run_i = mem.subspan(jsz);
    Word clash = 0;
    for (std::uint64_t q = 0; q < run_i.size() && !clash; ++q) {
      std::uint64_t gx = i * rc + q;
      auto sx = static_cast<Word>(mix64(seed, gx) % range + 1);
      for (std::uint64_t y = 0; y < run_j.size(); ++y) {
        std::uint64_t gy = j * rc + y;
        if (gy == gx) continue;
        if (static_cast<Word>(mix64(seed, gy) % range + 1) == sx) {
          clash = 1;
          break;
        }
      }
    }
    io.send(f1 + lin / s, clash);
  });
  MachineRange flag_root = fold_up(eng, flag1, 1, n1f, lf, ReduceOp::bor);
  res.redrawn = [&] {
    auto w = eng.peek(flag_root.first);  // host report only, never control
    return !w.empty() && w[0] != 0;
  }();

  // every pair machine learns the flag and keys by the matching draw
  broadcast(eng, flag_root.first, pr.pairs, 1, lf);
  res.items = pr.rank_and_route(
      [seed, range](std::uint64_t g, Word, Word flag) {
        std::uint64_t sd = seed + (flag ? 1 : 0);
        return std::make_pair(static_cast<Word>(mix64(sd, g) % range + 1),
                              static_cast<Word>(g));
      },
      1);
  return res;
}

}  // namespace mpc
