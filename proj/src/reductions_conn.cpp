#include "mpc/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace mpc {

namespace {

void run_on(Engine& eng, std::initializer_list<MachineRange> ranges,
            const StepFn& fn) {
  std::vector<MachineRange> rs(ranges);
  eng.step_on(std::span<const MachineRange>(rs.data(), rs.size()), fn);
}

/// Machines a distributed payload can occupy, for demand sizing. The real
/// count comes from the engine; this only needs to dominate it.
std::uint64_t spread_bound(std::uint64_t payload_words, std::uint64_t s) {
  return 2 * ceil_div(payload_words, s - 2) + 2;
}

/// Words a record-offset pass may provision for its counting tree.
std::uint64_t offsets_demand(const MpcConfig& cfg, std::uint64_t sources) {
  const std::uint64_t s = cfg.words_per_machine;
  return s * (2 * ceil_div(sources, s - 1) + 64);
}

std::uint64_t graph_input_words(const Meta& meta) {
  return graph_header_words + graph_record_words * std::uint64_t(meta.m);
}

std::uint64_t ord_input_words(const Meta& meta) {
  return successor_header_words + successor_record_words * std::uint64_t(meta.n);
}

/// Sort key that makes every edge weight distinct: weight, normalized
/// endpoints, then the input position as the final tie break.
using EdgeKey = std::array<Word, 4>;

EdgeKey edge_key(Word w, Word u, Word v, Word g) {
  return {w, std::min(u, v), std::max(u, v), g};
}

// ---------------------------------------------------------------------------
// order query -> cycle counting
//
// The walk is reshaped into a union of cycles whose count answers the
// query. Cutting the walk's edges into a and into b splits it into up to
// three segments; three splice edges (sink to b, walk start to a, and one
// joining the two cut stubs) close the segments so that exactly two cycles
// appear when a precedes b and one otherwise. When a query node is the
// walk's start it has no cut stub and the relay reroutes its splice.
// ---------------------------------------------------------------------------

class OrdToCycles final : public Reduction {
 public:
  std::string name() const override { return "ord-to-cycles"; }
  ProblemTag source() const override { return ProblemTag::ord; }
  ProblemTag target() const override { return ProblemTag::cycle_count; }

  bool applicable(const Meta& meta) const override {
    return meta.n >= 2 && meta.a >= 0 && meta.a < meta.n && meta.b >= 0 &&
           meta.b < meta.n && meta.a != meta.b;
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t n = std::uint64_t(meta.n);
    return s * spread_bound(ord_input_words(meta), s) + s * (n + 2) +
           pack_demand(cfg, n + 2, sub_graph_words(meta.n)) + 64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n;
    const Word qa = meta.a, qb = meta.b;

    // one cell per node, a lead cell for the header, a relay for the splice
    MachineRange cells = eng.provision_machines(std::uint64_t(n) + 2);
    const MachineId lead = cells.first;
    const MachineId node0 = cells.first + 1;
    const MachineId relay = cells.first + 1 + std::uint64_t(n);

    // successor tokens: cell i learns succ(i); the lead cell wakes up
    run_on(eng, {input}, [=](MachineIo& io) {
      if (io.id == input.first) io.send(lead, Word(1));
      std::uint64_t skip = header_skip(io.id, input, successor_header_words);
      for (std::uint64_t r = skip; r + 1 < io.memory.size(); r += 2)
        io.send(node0 + std::uint64_t(io.memory[r]), io.memory[r + 1]);
    });

    // predecessor tokens: cell succ(i) learns i
    run_on(eng, {input}, [=](MachineIo& io) {
      std::uint64_t skip = header_skip(io.id, input, successor_header_words);
      for (std::uint64_t r = skip; r + 1 < io.memory.size(); r += 2)
        if (io.memory[r + 1] < n)
          io.send(node0 + std::uint64_t(io.memory[r + 1]), io.memory[r]);
    });

    // each query cell reports its predecessor to the relay, n marking none;
    // the b token is shifted past the a range so the relay can tell them apart
    run_on(eng, {MachineRange{node0, std::uint64_t(n)}}, [=](MachineIo& io) {
      const Word v = Word(io.id - node0);
      const Word pred = io.memory.size() >= 2 ? io.memory[1] : n;
      if (v == qa) io.send(relay, pred);
      if (v == qb) io.send(relay, n + 1 + pred);
    });

    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      if (id == lead) {
        push_sub_header(out, n, n, false, 1, -1, -1, -1);
        return;
      }
      if (id == relay) {
        if (mem.size() < 2) return;
        Word pa = n, pb = n;
        for (Word t : mem) {
          if (t <= n)
            pa = t;
          else
            pb = t - (n + 1);
        }
        if (pa < n && pb < n)
          out.insert(out.end(), {pa, pb, 1});
        else if (pa == n)
          out.insert(out.end(), {qa, pb, 1});
        else
          out.insert(out.end(), {pa, qa, 1});
        return;
      }
      const Word v = Word(id - node0);
      const Word succ = mem[0];
      if (succ < n && succ != qa && succ != qb)
        out.insert(out.end(), {v, succ, 1});
      if (succ == n) out.insert(out.end(), {qb, v, 1});
      if (mem.size() == 1 && v != qa && v != qb)
        out.insert(out.end(), {v, qa, 1});
    };
    PackedArray packed = emit_pack(eng, cells, levels_for(cfg, 2.0),
                                   sub_graph_words(n), emit);

    MachineRange ans = eng.provision_machines(1);
    TransformResult tr;
    SubInstance sub;
    sub.tag = ProblemTag::cycle_count;
    sub.weighted = false;
    sub.data = packed.data;
    sub.offset = 0;
    sub.length = sub_graph_words(n);
    sub.answer = ans;
    tr.subs.push_back(sub);
    tr.sub_nodes = n;
    tr.sub_edges = n;
    tr.sub_weight = 1;
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta&) const override {
    auto w = eng.peek(tr.subs[0].answer.first);
    return Answer::yes_no(!w.empty() && w[0] == 2);
  }
};

// ---------------------------------------------------------------------------
// list ranking -> order queries
//
// The rank of a node is the number of nodes that precede it, so one order
// query per ordered pair and a per-node sum of yes bits recover all ranks.
// ---------------------------------------------------------------------------

class ListRankingViaOrd final : public Reduction {
 public:
  std::string name() const override { return "list-ranking-via-ord"; }
  ProblemTag source() const override { return ProblemTag::list_ranking; }
  ProblemTag target() const override { return ProblemTag::ord; }

  bool applicable(const Meta& meta) const override { return meta.n >= 1; }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t n = std::uint64_t(meta.n);
    if (n <= 1) return 64 * s;
    const std::uint64_t pairs = n * (n - 1);
    const std::uint64_t block = spread_bound(ord_input_words(meta), s);
    return s * block +
           replicate_demand(cfg, 2 * pairs, block, levels_for(cfg, 3.0)) +
           pack_demand(cfg, 2 * pairs * block, pairs * sub_ord_words(meta.n)) +
           s * pairs + reduce_demand(cfg, n, n) + s * n + 64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n;
    TransformResult tr;
    tr.sub_nodes = n;
    tr.sub_weight = 1;
    if (n <= 1) return tr;

    const std::uint64_t pairs = std::uint64_t(n) * std::uint64_t(n - 1);
    ReplicaSet rep = replicate(eng, input, 2 * pairs, levels_for(cfg, 3.0));
    const MachineId all0 = rep.all.first;
    const std::uint64_t block = rep.block;

    // even copies emit one pair's query header, odd copies its records
    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const std::uint64_t copy = lin / block;
      const std::uint64_t slot = lin % block;
      const std::uint64_t p = copy >> 1;
      const Word u = Word(p / std::uint64_t(n - 1));
      const Word vv = Word(p % std::uint64_t(n - 1));
      const Word v = vv + (vv >= u ? 1 : 0);
      if ((copy & 1) == 0) {
        if (slot == 0) out.insert(out.end(), {n, v, u});
        return;
      }
      std::uint64_t skip = slot == 0 ? successor_header_words : 0;
      for (std::uint64_t r = skip; r + 1 < mem.size(); r += 2)
        out.insert(out.end(), {mem[r], mem[r + 1]});
    };
    const std::uint64_t sub_len = sub_ord_words(n);
    PackedArray packed = emit_pack(eng, rep.all, levels_for(cfg, 4.0),
                                   pairs * sub_len, emit);

    MachineRange ans = eng.provision_machines(pairs);
    for (std::uint64_t p = 0; p < pairs; ++p) {
      SubInstance sub;
      sub.tag = ProblemTag::ord;
      sub.data = packed.data;
      sub.offset = p * sub_len;
      sub.length = sub_len;
      sub.answer = {ans.first + p, 1};
      tr.subs.push_back(sub);
    }
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta& meta) const override {
    const Word n = meta.n;
    if (n <= 1) return Answer::of_values(std::vector<Word>(std::size_t(n), 0));
    const MpcConfig& cfg = eng.config();
    const std::uint64_t per = std::uint64_t(n - 1);

    GroupLayout lay;
    lay.items = {tr.subs[0].answer.first, std::uint64_t(n) * per};
    lay.groups = std::uint64_t(n);
    lay.per_group = per;
    lay.locate = [per](std::uint64_t local, std::uint64_t& g,
                       std::uint64_t& slot) {
      g = local / per;
      slot = local % per;
    };
    MachineRange ranks = grouped_reduce(
        eng, lay, levels_for(cfg, 1.0), ReduceOp::sum,
        [](MachineId, std::span<const Word> mem) -> std::optional<Word> {
          return mem.empty() ? std::optional<Word>() : std::optional<Word>(mem[0]);
        });

    std::vector<Word> out(std::size_t(n), 0);
    for (Word u = 0; u < n; ++u) {
      auto w = eng.peek(ranks.first + std::uint64_t(u));
      if (!w.empty()) out[std::size_t(u)] = w[0];
    }
    return Answer::of_values(std::move(out));
  }
};

// ---------------------------------------------------------------------------
// st-connectivity -> bipartiteness
//
// Two mirrored copies of the graph with every edge subdivided are always
// two-colorable; a rung joining the copies at a and an apex tied to both
// copies of b create an odd cycle exactly when a reaches b.
// ---------------------------------------------------------------------------

class StConnToBipartiteness final : public Reduction {
 public:
  std::string name() const override { return "stconn-to-bipartiteness"; }
  ProblemTag source() const override { return ProblemTag::st_connectivity; }
  ProblemTag target() const override { return ProblemTag::bipartiteness; }

  bool applicable(const Meta& meta) const override {
    return !meta.directed && meta.n >= 1 && meta.a >= 0 && meta.a < meta.n &&
           meta.b >= 0 && meta.b < meta.n;
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t block = spread_bound(graph_input_words(meta), s);
    return s * block + offsets_demand(cfg, block) +
           replicate_demand(cfg, 8, block, levels_for(cfg, 1.0)) +
           pack_demand(cfg, 8 * block, sub_graph_words(4 * meta.m + 3)) +
           64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n, m = meta.m;
    const Word qa = meta.a, qb = meta.b;
    const Word apex = 2 * n + 2 * m;
    const Word n2 = 2 * n + 2 * m + 1;
    const Word m2 = 4 * m + 3;

    assign_record_offsets(
        eng, input, levels_for(cfg, 2.0),
        [=](MachineId id, std::span<const Word> mem) -> std::optional<Word> {
          std::uint64_t skip = header_skip(id, input, graph_header_words);
          return Word((mem.size() - skip) / graph_record_words);
        });
    ReplicaSet rep = replicate(eng, input, 8, levels_for(cfg, 1.0));
    const MachineId all0 = rep.all.first;
    const std::uint64_t block = rep.block;

    // copies 0..3 carry the header and the three joint edges; copies 4..7
    // carry one subdivided edge direction each, numbered by global record
    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const std::uint64_t copy = lin / block;
      const std::uint64_t slot = lin % block;
      if (copy < 4) {
        if (slot != 0) return;
        switch (copy) {
          case 0: push_sub_header(out, n2, m2, false, 1, -1, -1, -1); break;
          case 1: out.insert(out.end(), {qa, n + qa, 1}); break;
          case 2: out.insert(out.end(), {qb, apex, 1}); break;
          default: out.insert(out.end(), {n + qb, apex, 1}); break;
        }
        return;
      }
      const std::uint64_t skip = slot == 0 ? graph_header_words : 0;
      const Word base = mem.back();
      const std::uint64_t count = (mem.size() - skip - 1) / graph_record_words;
      for (std::uint64_t r = 0; r < count; ++r) {
        const Word x = mem[skip + 3 * r];
        const Word y = mem[skip + 3 * r + 1];
        const Word g = base + Word(r);
        switch (copy) {
          case 4: out.insert(out.end(), {x, 2 * n + g, 1}); break;
          case 5: out.insert(out.end(), {2 * n + g, y, 1}); break;
          case 6: out.insert(out.end(), {n + x, 2 * n + m + g, 1}); break;
          default: out.insert(out.end(), {2 * n + m + g, n + y, 1}); break;
        }
      }
    };
    PackedArray packed = emit_pack(eng, rep.all, levels_for(cfg, 3.0),
                                   sub_graph_words(m2), emit);

    MachineRange ans = eng.provision_machines(1);
    TransformResult tr;
    SubInstance sub;
    sub.tag = ProblemTag::bipartiteness;
    sub.data = packed.data;
    sub.offset = 0;
    sub.length = sub_graph_words(m2);
    sub.answer = ans;
    tr.subs.push_back(sub);
    tr.sub_nodes = n2;
    tr.sub_edges = m2;
    tr.sub_weight = 1;
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta&) const override {
    auto w = eng.peek(tr.subs[0].answer.first);
    return Answer::yes_no(!w.empty() && w[0] == 0);
  }
};

// ---------------------------------------------------------------------------
// bipartiteness -> st-connectivity
//
// One parity double cover per start node, all sharing a source hooked to
// the even side and a sink hooked to the odd side of their own start. The
// sink is reachable exactly when some start node closes an odd walk.
// ---------------------------------------------------------------------------

class BipartitenessToStConn final : public Reduction {
 public:
  std::string name() const override { return "bipartiteness-to-stconn"; }
  ProblemTag source() const override { return ProblemTag::bipartiteness; }
  ProblemTag target() const override { return ProblemTag::st_connectivity; }

  bool applicable(const Meta& meta) const override {
    return !meta.directed && meta.n >= 1;
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t n = std::uint64_t(meta.n);
    const std::uint64_t block = spread_bound(graph_input_words(meta), s);
    return s * block +
           replicate_demand(cfg, 4 * n + 1, block, levels_for(cfg, 2.0)) +
           pack_demand(cfg, (4 * n + 1) * block,
                       sub_graph_words(Word(2 * n * std::uint64_t(meta.m) + 2 * n))) +
           64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n, m = meta.m;
    const Word n2 = 2 * n * n + 2;
    const Word m2 = 2 * n * m + 2 * n;
    auto node = [n](Word u, Word side, Word c) {
      return 2 + 2 * n * c + side * n + u;
    };

    ReplicaSet rep = replicate(eng, input, 4 * std::uint64_t(n) + 1,
                               levels_for(cfg, 2.0));
    const MachineId all0 = rep.all.first;
    const std::uint64_t block = rep.block;

    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const Word copy = Word(lin / block);
      const std::uint64_t slot = lin % block;
      if (copy == 0) {
        if (slot == 0) push_sub_header(out, n2, m2, false, 1, 0, 1, -1);
        return;
      }
      if (copy <= 2 * n) {
        if (slot != 0) return;
        if (copy <= n) {
          const Word i = copy - 1;
          out.insert(out.end(), {0, node(i, 0, i), 1});
        } else {
          const Word i = copy - n - 1;
          out.insert(out.end(), {1, node(i, 1, i), 1});
        }
        return;
      }
      const Word r = copy - (2 * n + 1);
      const Word c = r >> 1;
      const Word dir = r & 1;
      const std::uint64_t skip = slot == 0 ? graph_header_words : 0;
      for (std::uint64_t p = skip; p + 2 < mem.size() + 1; p += 3) {
        const Word x = mem[p], y = mem[p + 1];
        if (dir == 0)
          out.insert(out.end(), {node(x, 0, c), node(y, 1, c), 1});
        else
          out.insert(out.end(), {node(x, 1, c), node(y, 0, c), 1});
      }
    };
    PackedArray packed = emit_pack(eng, rep.all, levels_for(cfg, 3.0),
                                   sub_graph_words(m2), emit);

    MachineRange ans = eng.provision_machines(1);
    TransformResult tr;
    SubInstance sub;
    sub.tag = ProblemTag::st_connectivity;
    sub.data = packed.data;
    sub.offset = 0;
    sub.length = sub_graph_words(m2);
    sub.answer = ans;
    tr.subs.push_back(sub);
    tr.sub_nodes = n2;
    tr.sub_edges = m2;
    tr.sub_weight = 1;
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta&) const override {
    auto w = eng.peek(tr.subs[0].answer.first);
    return Answer::yes_no(!w.empty() && w[0] == 0);
  }
};

// ---------------------------------------------------------------------------
// component labels -> st-connectivity
//
// One pair query per ordered node pair (the diagonal included keeps every
// group populated); the label of u is the smallest v it reaches.
// ---------------------------------------------------------------------------

class ComponentsViaStConn final : public Reduction {
 public:
  std::string name() const override { return "cc-via-stconn"; }
  ProblemTag source() const override { return ProblemTag::cc_labels; }
  ProblemTag target() const override { return ProblemTag::st_connectivity; }

  bool applicable(const Meta& meta) const override {
    return !meta.directed && meta.n >= 1;
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t n = std::uint64_t(meta.n);
    const std::uint64_t block = spread_bound(graph_input_words(meta), s);
    return s * block +
           replicate_demand(cfg, 2 * n * n, block, levels_for(cfg, 3.0)) +
           pack_demand(cfg, 2 * n * n * block,
                       n * n * sub_graph_words(meta.m)) +
           s * n * n + reduce_demand(cfg, n, n) + s * n + 64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n, m = meta.m;
    const std::uint64_t subs = std::uint64_t(n) * std::uint64_t(n);

    ReplicaSet rep = replicate(eng, input, 2 * subs, levels_for(cfg, 3.0));
    const MachineId all0 = rep.all.first;
    const std::uint64_t block = rep.block;

    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const std::uint64_t copy = lin / block;
      const std::uint64_t slot = lin % block;
      const std::uint64_t p = copy >> 1;
      if ((copy & 1) == 0) {
        if (slot == 0)
          push_sub_header(out, n, m, false, meta.max_weight,
                          Word(p / std::uint64_t(n)), Word(p % std::uint64_t(n)),
                          -1);
        return;
      }
      const std::uint64_t skip = slot == 0 ? graph_header_words : 0;
      out.insert(out.end(), mem.begin() + skip, mem.end());
    };
    const std::uint64_t sub_len = sub_graph_words(m);
    PackedArray packed =
        emit_pack(eng, rep.all, levels_for(cfg, 4.0), subs * sub_len, emit);

    MachineRange ans = eng.provision_machines(subs);
    TransformResult tr;
    for (std::uint64_t p = 0; p < subs; ++p) {
      SubInstance sub;
      sub.tag = ProblemTag::st_connectivity;
      sub.weighted = meta.weighted;
      sub.data = packed.data;
      sub.offset = p * sub_len;
      sub.length = sub_len;
      sub.answer = {ans.first + p, 1};
      tr.subs.push_back(sub);
    }
    tr.sub_nodes = n;
    tr.sub_edges = m;
    tr.sub_weight = meta.max_weight;
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n;
    const std::uint64_t un = std::uint64_t(n);

    GroupLayout lay;
    lay.items = {tr.subs[0].answer.first, un * un};
    lay.groups = un;
    lay.per_group = un;
    lay.locate = [un](std::uint64_t local, std::uint64_t& g,
                      std::uint64_t& slot) {
      g = local / un;
      slot = local % un;
    };
    const MachineId ans0 = tr.subs[0].answer.first;
    MachineRange folded = grouped_reduce(
        eng, lay, levels_for(cfg, 1.0), ReduceOp::min,
        [ans0, un](MachineId id, std::span<const Word> mem)
            -> std::optional<Word> {
          if (mem.empty() || mem[0] != 1) return std::nullopt;
          return Word((id - ans0) % un);
        });

    std::vector<Word> labels(std::size_t(n), 0);
    Word count = 0;
    for (Word u = 0; u < n; ++u) {
      auto w = eng.peek(folded.first + std::uint64_t(u));
      labels[std::size_t(u)] = w.empty() ? u : w[0];
      if (labels[std::size_t(u)] == u) ++count;
    }
    Answer a = Answer::of_labels(std::move(labels));
    a.value = count;
    return a;
  }
};

// ---------------------------------------------------------------------------
// minimum spanning forest -> st-connectivity
//
// An edge joins the forest exactly when the strictly lighter edges leave
// its endpoints separated, under a total order on weights.  Every edge gets
// a copy of the whole edge set, learns its own candidate by a diagonal hop
// plus a per-copy broadcast, counts the lighter edges to size its header,
// and emits them as one connectivity question.
// ---------------------------------------------------------------------------

class ForestViaStConn final : public Reduction {
 public:
  std::string name() const override { return "msf-via-stconn"; }
  ProblemTag source() const override { return ProblemTag::msf; }
  ProblemTag target() const override { return ProblemTag::st_connectivity; }

  bool applicable(const Meta& meta) const override {
    return !meta.directed && meta.n >= 1;
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t m = std::uint64_t(meta.m);
    if (m == 0) return 64 * s;
    const std::uint64_t in_block = spread_bound(graph_input_words(meta), s);
    const std::uint64_t block = m + 2;
    const std::uint64_t cap = 7 * m + 3 * m * (m - 1) / 2;
    return s * in_block + offsets_demand(cfg, in_block) + s * block +
           replicate_demand(cfg, m, block, levels_for(cfg, 1.0)) +
           m * replicate_demand(cfg, m, 1, levels_for(cfg, 1.0)) +
           reduce_demand(cfg, m, m) + s * m + pack_demand(cfg, m * block, cap) +
           s * m + pack_demand(cfg, m * block, 3 * m) + 64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n, m = meta.m;
    TransformResult tr;
    tr.sub_nodes = n;
    tr.sub_edges = m;
    tr.sub_weight = meta.max_weight;
    if (m == 0) return tr;

    assign_record_offsets(
        eng, input, levels_for(cfg, 2.0),
        [=](MachineId id, std::span<const Word> mem) -> std::optional<Word> {
          std::uint64_t skip = header_skip(id, input, graph_header_words);
          return Word((mem.size() - skip) / graph_record_words);
        });

    // one cell per edge, a header cell in front, a broadcast seed behind
    const std::uint64_t block = std::uint64_t(m) + 2;
    MachineRange stage = eng.provision_machines(block);
    const MachineId stage0 = stage.first;
    run_on(eng, {input}, [=](MachineIo& io) {
      const std::uint64_t skip = header_skip(io.id, input, graph_header_words);
      const Word base = io.memory.back();
      const std::uint64_t count = (io.memory.size() - skip - 1) / 3;
      for (std::uint64_t r = 0; r < count; ++r)
        io.send(stage0 + 1 + std::uint64_t(base) + r,
                std::span<const Word>(io.memory.data() + skip + 3 * r, 3));
      if (io.id == input.first) {
        const std::array<Word, 2> hdr{n, m};
        io.send(stage0, std::span<const Word>(hdr.data(), 2));
        io.send(stage0 + std::uint64_t(m) + 1, Word(1));
      }
    });

    ReplicaSet rep = replicate(eng, stage, std::uint64_t(m),
                               levels_for(cfg, 1.0));
    const MachineId all0 = rep.all.first;

    // copy c's candidate edge lands on its header cell and broadcast seed
    run_on(eng, {rep.all}, [=](MachineIo& io) {
      const std::uint64_t lin = io.id - all0;
      const std::uint64_t c = lin / block;
      if (lin % block != 1 + c) return;
      io.send(all0 + c * block, std::span<const Word>(io.memory));
      io.send(all0 + c * block + std::uint64_t(m) + 1,
              std::span<const Word>(io.memory));
    });
    group_broadcast(
        eng, std::uint64_t(m),
        [=](std::uint64_t g) { return all0 + g * block + std::uint64_t(m) + 1; },
        [=](std::uint64_t g) { return all0 + g * block + 1; }, std::uint64_t(m),
        4, levels_for(cfg, 1.0));

    // edge cell memory is now [x, y, w, seed, xc, yc, wc]
    auto lighter = [block](std::uint64_t lin, std::span<const Word> mem) {
      const Word c = Word(lin / block);
      const Word g = Word(lin % block) - 1;
      return edge_key(mem[2], mem[0], mem[1], g) <
             edge_key(mem[6], mem[4], mem[5], c);
    };

    GroupLayout lay;
    lay.items = rep.all;
    lay.groups = std::uint64_t(m);
    lay.per_group = std::uint64_t(m);
    lay.locate = [block](std::uint64_t local, std::uint64_t& g,
                         std::uint64_t& slot) {
      g = local / block;
      slot = local % block - 1;
    };
    MachineRange counts = grouped_reduce(
        eng, lay, levels_for(cfg, 1.0), ReduceOp::sum,
        [=](MachineId id, std::span<const Word> mem) -> std::optional<Word> {
          const std::uint64_t lin = id - all0;
          const std::uint64_t slot = lin % block;
          if (slot < 1 || slot > std::uint64_t(m) || mem.size() < 7)
            return std::nullopt;
          return Word(lighter(lin, mem) ? 1 : 0);
        });
    const MachineId counts0 = counts.first;
    run_on(eng, {counts}, [=](MachineIo& io) {
      io.send(all0 + (io.id - counts0) * block, io.memory[0]);
    });

    // header cell memory is now [n, m, xc, yc, wc, count]
    const Word maxw = meta.max_weight;
    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const std::uint64_t slot = lin % block;
      if (slot == 0) {
        push_sub_header(out, n, mem[5], false, maxw, mem[2], mem[3], -1);
        return;
      }
      if (slot <= std::uint64_t(m) && mem.size() >= 7 && lighter(lin, mem))
        out.insert(out.end(), {mem[0], mem[1], mem[2]});
    };
    const std::uint64_t cap =
        7 * std::uint64_t(m) + 3 * std::uint64_t(m) * std::uint64_t(m - 1) / 2;
    PackedArray packed =
        emit_pack(eng, rep.all, levels_for(cfg, 3.0), cap, emit);

    MachineRange ans = eng.provision_machines(std::uint64_t(m));
    for (Word c = 0; c < m; ++c) {
      SubInstance sub;
      sub.tag = ProblemTag::st_connectivity;
      sub.weighted = meta.weighted;
      sub.data = packed.data;
      sub.offset = 0;
      sub.length = 0;  // sized by each window's own header
      sub.answer = {ans.first + std::uint64_t(c), 1};
      tr.subs.push_back(sub);
    }
    tr.notes = {Word(all0), Word(block)};
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta& meta) const override {
    if (meta.m == 0) return Answer::of_edges({});
    const MpcConfig& cfg = eng.config();
    const std::uint64_t m = std::uint64_t(meta.m);
    const MachineId all0 = MachineId(tr.notes[0]);
    const std::uint64_t block = std::uint64_t(tr.notes[1]);
    const MachineId ans0 = tr.subs[0].answer.first;

    // verdicts ride back to their header cells; an edge whose endpoints
    // stayed separated is in the forest
    run_on(eng, {MachineRange{ans0, m}}, [=](MachineIo& io) {
      io.send(all0 + (io.id - ans0) * block, io.memory[0]);
    });
    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      if (lin % block != 0) return;
      if (mem.size() >= 7 && mem[6] == 0)
        out.insert(out.end(), {mem[2], mem[3], mem[4]});
    };
    PackedArray packed = emit_pack(
        eng, MachineRange{all0, m * block}, levels_for(cfg, 3.0), 3 * m, emit);

    std::vector<Word> words = eng.peek_range(packed.data);
    std::vector<std::array<Word, 3>> chosen;
    for (std::uint64_t i = 0; i + 2 < words.size() + 1; i += 3)
      chosen.push_back({words[i], words[i + 1], words[i + 2]});
    std::sort(chosen.begin(), chosen.end());
    std::vector<Word> items;
    Word total = 0;
    for (const auto& e : chosen) {
      items.insert(items.end(), {e[0], e[1], e[2]});
      total += e[2];
    }
    Answer a = Answer::of_edges(std::move(items));
    a.value = total;
    return a;
  }
};

// ---------------------------------------------------------------------------
// minimum cut -> component labels
//
// Random contraction by seeded edge ranks: trial t poses every prefix size
// k of its rank order as a labeling question.  The smallest prefix that
// leaves exactly two clusters is that trial's candidate split; its crossing
// weight is measured against the posed labelings and the best trial wins.
// ---------------------------------------------------------------------------

class MinCutViaComponents final : public Reduction {
 public:
  std::string name() const override { return "mincut-via-cc"; }
  ProblemTag source() const override { return ProblemTag::mincut; }
  ProblemTag target() const override { return ProblemTag::cc_labels; }

  static Word trials_of(const Meta& meta) {
    if (meta.trials > 0) return meta.trials;
    const double n = double(meta.n);
    return Word(std::ceil(n * n * std::log(n)));
  }

  bool applicable(const Meta& meta) const override {
    return !meta.directed && !meta.weighted && meta.max_weight <= 1 &&
           meta.n >= 2 && trials_of(meta) < (Word(1) << 20);
  }

  std::uint64_t demand(const Meta& meta, const MpcConfig& cfg) const override {
    const std::uint64_t s = cfg.words_per_machine;
    const std::uint64_t m = std::uint64_t(meta.m);
    const std::uint64_t n = std::uint64_t(meta.n);
    if (m == 0) return 64 * s;
    const std::uint64_t T = std::uint64_t(trials_of(meta));
    const std::uint64_t in_block = spread_bound(graph_input_words(meta), s);
    const std::uint64_t block = m + 1;
    const std::uint64_t cap = T * (7 * block + 3 * m * block / 2);
    return s * in_block + offsets_demand(cfg, in_block) + s * block +
           replicate_demand(cfg, T * block, block, levels_for(cfg, 4.0)) +
           pack_demand(cfg, T * block * block, cap) +
           s * T * block * (n + 1) + reduce_demand(cfg, T, block) + 3 * s * T +
           T * replicate_demand(cfg, block * block, 1, levels_for(cfg, 2.0)) +
           reduce_demand(cfg, T, m) + reduce_demand(cfg, 1, T) + 64 * s;
  }

  TransformResult transform(Engine& eng, MachineRange input,
                            const Meta& meta) const override {
    const MpcConfig& cfg = eng.config();
    const Word n = meta.n, m = meta.m;
    TransformResult tr;
    tr.sub_nodes = n;
    tr.sub_edges = m;
    tr.sub_weight = 1;
    if (m == 0) return tr;
    const Word T = trials_of(meta);

    assign_record_offsets(
        eng, input, levels_for(cfg, 2.0),
        [=](MachineId id, std::span<const Word> mem) -> std::optional<Word> {
          std::uint64_t skip = header_skip(id, input, graph_header_words);
          return Word((mem.size() - skip) / graph_record_words);
        });

    const std::uint64_t block = std::uint64_t(m) + 1;
    MachineRange stage = eng.provision_machines(block);
    const MachineId stage0 = stage.first;
    run_on(eng, {input}, [=](MachineIo& io) {
      const std::uint64_t skip = header_skip(io.id, input, graph_header_words);
      const Word base = io.memory.back();
      const std::uint64_t count = (io.memory.size() - skip - 1) / 3;
      for (std::uint64_t r = 0; r < count; ++r)
        io.send(stage0 + 1 + std::uint64_t(base) + r,
                std::span<const Word>(io.memory.data() + skip + 3 * r, 3));
      if (io.id == input.first) {
        const std::array<Word, 2> hdr{n, m};
        io.send(stage0, std::span<const Word>(hdr.data(), 2));
      }
    });

    ReplicaSet rep = replicate(eng, stage, std::uint64_t(T) * block,
                               levels_for(cfg, 4.0));
    const MachineId all0 = rep.all.first;

    // seeded rank of edge g within trial t, memoized per trial
    const std::uint64_t seed = eng.seed();
    auto memo = std::make_shared<std::map<Word, std::vector<Word>>>();
    auto rank_of = [=](Word t, Word g) {
      auto it = memo->find(t);
      if (it == memo->end()) {
        std::vector<Word> order(static_cast<std::size_t>(m));
        for (Word i = 0; i < m; ++i) order[std::size_t(i)] = i;
        std::sort(order.begin(), order.end(), [&](Word a, Word b) {
          auto ka = std::array<std::uint64_t, 2>{
              mix64(seed, 2 * std::uint64_t(t), std::uint64_t(a)),
              std::uint64_t(a)};
          auto kb = std::array<std::uint64_t, 2>{
              mix64(seed, 2 * std::uint64_t(t), std::uint64_t(b)),
              std::uint64_t(b)};
          return ka < kb;
        });
        std::vector<Word> ranks(static_cast<std::size_t>(m));
        for (Word i = 0; i < m; ++i) ranks[std::size_t(order[std::size_t(i)])] = i;
        it = memo->emplace(t, std::move(ranks)).first;
      }
      return it->second[std::size_t(g)];
    };

    auto emit = [=](MachineId id, std::span<const Word> mem,
                    std::vector<Word>& out) {
      const std::uint64_t lin = id - all0;
      const std::uint64_t copy = lin / block;
      const std::uint64_t slot = lin % block;
      const Word t = Word(copy / block);
      const Word k = Word(copy % block);
      if (slot == 0) {
        push_sub_header(out, n, k, false, 1, -1, -1, -1);
        return;
      }
      if (rank_of(t, Word(slot - 1)) < k)
        out.insert(out.end(), {mem[0], mem[1], 1});
    };
    const std::uint64_t trial_words =
        7 * block + 3 * std::uint64_t(m) * block / 2;
    PackedArray packed =
        emit_pack(eng, rep.all, levels_for(cfg, 5.0),
                  std::uint64_t(T) * trial_words, emit);

    const std::uint64_t cells = std::uint64_t(n) + 1;
    MachineRange ans =
        eng.provision_machines(std::uint64_t(T) * block * cells);
    for (Word t = 0; t < T; ++t) {
      for (Word k = 0; k <= m; ++k) {
        SubInstance sub;
        sub.tag = ProblemTag::cc_labels;
        sub.data = packed.data;
        sub.offset = std::uint64_t(t) * trial_words + 7 * std::uint64_t(k) +
                     3 * std::uint64_t(k) * std::uint64_t(k - 1) / 2;
        sub.length = sub_graph_words(k);
        sub.answer = {ans.first +
                          (std::uint64_t(t) * block + std::uint64_t(k)) * cells,
                      cells};
        tr.subs.push_back(sub);
      }
    }
    tr.notes = {Word(all0), T, Word(block)};
    return tr;
  }

  Answer extract(Engine& eng, const TransformResult& tr,
                 const Meta& meta) const override {
    const Word n = meta.n, m = meta.m;
    const std::uint64_t cells = std::uint64_t(n) + 1;
    if (m == 0) {
      std::vector<Word> side(std::size_t(n), 1);
      side[0] = 0;
      return Answer::of_partition(0, std::move(side));
    }
    const MpcConfig& cfg = eng.config();
    const MachineId all0 = MachineId(tr.notes[0]);
    const Word T = tr.notes[1];
    const std::uint64_t block = std::uint64_t(tr.notes[2]);
    const MachineId ans0 = tr.subs[0].answer.first;

    auto side_of = [&](Word t, Word k) {
      const MachineId base =
          ans0 + (std::uint64_t(t) * block + std::uint64_t(k)) * cells;
      std::vector<Word> side(std::size_t(n), 0);
      auto w0 = eng.peek(base + 1);
      const Word ref = w0.empty() ? 0 : w0[0];
      for (Word v = 0; v < n; ++v) {
        auto w = eng.peek(base + 1 + std::uint64_t(v));
        side[std::size_t(v)] = (!w.empty() && w[0] == ref) ? 0 : 1;
      }
      return side;
    };

    // a disconnected input short-circuits: the untouched prefix of any
    // trial already splits it at zero cost
    auto full = eng.peek(ans0 + std::uint64_t(m) * cells);
    if (full.empty() || full[0] >= 2)
      return Answer::of_partition(0, side_of(0, m));

    // per trial, the first prefix that leaves exactly two clusters
    GroupLayout l1;
    l1.items = {ans0, std::uint64_t(T) * block * cells};
    l1.groups = std::uint64_t(T);
    l1.per_group = block;
    l1.locate = [cells, block](std::uint64_t local, std::uint64_t& g,
                               std::uint64_t& slot) {
      const std::uint64_t sub = local / cells;
      g = sub / block;
      slot = sub % block;
    };
    MachineRange firsts = grouped_reduce(
        eng, l1, levels_for(cfg, 1.0), ReduceOp::min,
        [ans0, cells, block](MachineId id, std::span<const Word> mem)
            -> std::optional<Word> {
          const std::uint64_t local = id - ans0;
          if (local % cells != 0) return std::nullopt;
          if (mem.empty() || mem[0] != 2) return std::nullopt;
          return Word((local / cells) % block);
        });

    // one threshold copy feeds the broadcast, one stays for the host
    MachineRange bcast = eng.provision_machines(std::uint64_t(T));
    MachineRange kept = eng.provision_machines(std::uint64_t(T));
    const MachineId firsts0 = firsts.first;
    const MachineId bcast0 = bcast.first, kept0 = kept.first;
    run_on(eng, {firsts}, [=](MachineIo& io) {
      const std::uint64_t t = io.id - firsts0;
      io.send(bcast0 + t, io.memory[0]);
      io.send(kept0 + t, io.memory[0]);
    });
    group_broadcast(
        eng, std::uint64_t(T),
        [=](std::uint64_t t) { return bcast0 + t; },
        [=](std::uint64_t t) { return all0 + t * block * block; },
        block * block, 1, levels_for(cfg, 2.0));

    // trial t's raw-edge copy asks the winning labeling for its endpoints
    run_on(eng, {MachineRange{all0, std::uint64_t(T) * block * block}},
           [=](MachineIo& io) {
             const std::uint64_t lin = io.id - all0;
             const std::uint64_t copy = lin / block;
             const std::uint64_t slot = lin % block;
             if (copy % block != 0 || slot == 0 || io.memory.size() < 4) return;
             const std::uint64_t t = copy / block;
             const Word ks = io.memory[3];
             const MachineId labels =
                 ans0 + (t * block + std::uint64_t(ks)) * cells + 1;
             io.send(labels + std::uint64_t(io.memory[0]), Word(slot - 1));
             io.send(labels + std::uint64_t(io.memory[1]), Word(slot - 1));
           });
    run_on(eng, {MachineRange{ans0, std::uint64_t(T) * block * cells}},
           [](MachineIo& io) {
             if (io.inbox.empty()) return;
             const Word lab = io.memory.empty() ? 0 : io.memory[0];
             for (const InboxEntry& e : io.inbox) io.send(e.sender, lab);
           });

    // crossing weight of each trial's split, then the best trial
    GroupLayout l2;
    l2.items = {all0, std::uint64_t(T) * block * block};
    l2.groups = std::uint64_t(T);
    l2.per_group = std::uint64_t(m);
    l2.locate = [block](std::uint64_t local, std::uint64_t& g,
                        std::uint64_t& slot) {
      g = local / (block * block);
      slot = local % block - 1;
    };
    MachineRange crossings = grouped_reduce(
        eng, l2, levels_for(cfg, 1.0), ReduceOp::sum,
        [all0, block](MachineId id, std::span<const Word> mem)
            -> std::optional<Word> {
          const std::uint64_t lin = id - all0;
          if ((lin / block) % block != 0 || lin % block == 0) return std::nullopt;
          if (mem.size() < 6) return std::nullopt;
          return mem[4] != mem[5] ? mem[2] : Word(0);
        });

    GroupLayout l3;
    l3.items = crossings;
    l3.groups = 1;
    l3.per_group = std::uint64_t(T);
    l3.locate = [](std::uint64_t local, std::uint64_t& g, std::uint64_t& slot) {
      g = 0;
      slot = local;
    };
    const MachineId cross0 = crossings.first;
    MachineRange best = grouped_reduce(
        eng, l3, levels_for(cfg, 3.0), ReduceOp::min,
        [cross0](MachineId id, std::span<const Word> mem)
            -> std::optional<Word> {
          if (mem.empty()) return std::nullopt;
          return (mem[0] << 20) | Word(id - cross0);
        });

    const Word enc = eng.peek(best.first)[0];
    const Word that = enc & ((Word(1) << 20) - 1);
    const Word cut = enc >> 20;
    const Word ks = eng.peek(kept0 + std::uint64_t(that))[0];
    return Answer::of_partition(cut, side_of(that, ks));
  }
};

}  // namespace

const std::vector<const Reduction*>& conn_reductions() {
  static const OrdToCycles r0;
  static const ListRankingViaOrd r1;
  static const StConnToBipartiteness r2;
  static const BipartitenessToStConn r3;
  static const ComponentsViaStConn r4;
  static const ForestViaStConn r5;
  static const MinCutViaComponents r6;
  static const std::vector<const Reduction*> regs{&r0, &r1, &r2, &r3,
                                                  &r4, &r5, &r6};
  return regs;
}

}  // namespace mpc
