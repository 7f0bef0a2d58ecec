#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mpc/collectives.hpp"

using namespace mpc;

namespace {

MpcConfig cfg_of(std::uint64_t n, double eps = 0.5, double gamma = 2.0) {
  return MpcConfig::make(n, eps, gamma);
}

MachineRange load_one_per_machine(Engine& eng, const std::vector<Word>& vals) {
  MachineRange r = eng.provision_machines(vals.size());
  for (std::uint64_t i = 0; i < vals.size(); ++i)
    eng.poke(r.first + i, std::span<const Word>(&vals[i], 1));
  return r;
}

PackedArray load_packed(Engine& eng, const std::vector<Word>& words) {
  const std::uint64_t s = eng.config().words_per_machine;
  PackedArray p;
  p.capacity = words.size();
  p.stride = s;
  p.data = eng.provision_machines(ceil_div(words.size(), s));
  for (std::uint64_t d = 0; d < p.data.count; ++d) {
    std::uint64_t lo = d * s;
    std::uint64_t hi = std::min<std::uint64_t>(lo + s, words.size());
    eng.poke(p.data.first + d,
             std::span<const Word>(words.data() + lo, hi - lo));
  }
  return p;
}

std::vector<Word> packed_contents(Engine& eng, const PackedArray& p,
                                  std::uint64_t count) {
  std::vector<Word> out;
  for (std::uint64_t d = 0; d < p.data.count && out.size() < count; ++d) {
    auto w = eng.peek(p.data.first + d);
    for (Word x : w)
      if (out.size() < count) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("static tree depths derive from the configuration") {
  auto c = cfg_of(1 << 20, 0.5);
  CHECK(levels_for(c, 0.0) == 0);
  CHECK(levels_for(c, 1.0) == 3);  // ceil(1/0.5) + slack
  CHECK(levels_for(c, 2.0) == 5);
  auto c9 = cfg_of(1 << 20, 0.9);
  CHECK(levels_for(c9, 1.0) == 11);

  CHECK(levels_for_count(c, 0) == 0);
  CHECK(levels_for_count(c, 1) == 0);
  CHECK(levels_for_count(c, 2) == 1);
  CHECK(levels_for_count(c, 1024) == 1);
  CHECK(levels_for_count(c, 1025) == 2);
}

TEST_CASE("replication of a one-machine block into s copies costs 2 rounds") {
  auto c = cfg_of(1024, 0.5);  // s = 32
  REQUIRE(c.words_per_machine == 32);
  Engine eng(c, 7);
  std::vector<Word> payload(32);
  std::iota(payload.begin(), payload.end(), 100);
  MachineRange src = eng.provision_machines(1);
  eng.poke(src.first, payload);

  std::uint64_t before = eng.rounds();
  ReplicaSet reps = replicate(eng, src, 32);
  CHECK(eng.rounds() - before == 2);
  CHECK(reps.copies == 32);
  for (std::uint64_t cpy = 0; cpy < 32; ++cpy)
    CHECK(eng.peek(reps.copy_range(cpy).first) == payload);
  CHECK(eng.report().max_sent <= c.words_per_machine);
  CHECK(eng.report().max_received <= c.words_per_machine);
}

TEST_CASE("replication to one copy is free and in place") {
  Engine eng(cfg_of(256), 1);
  std::vector<Word> payload = {1, 2, 3};
  MachineRange src = eng.provision_machines(2);
  eng.poke(src.first, payload);
  std::uint64_t before = eng.rounds();
  ReplicaSet reps = replicate(eng, src, 1);
  CHECK(eng.rounds() == before);
  CHECK(reps.all.first == src.first);
  CHECK(eng.peek(src.first) == payload);
}

TEST_CASE("replication reaches machine-count many copies within four rounds") {
  auto c = cfg_of(256, 0.5);  // s = 16
  Engine eng(c, 3);
  std::vector<Word> payload(16);
  std::iota(payload.begin(), payload.end(), 0);
  MachineRange src = eng.provision_machines(1);
  eng.poke(src.first, payload);
  std::uint64_t before = eng.rounds();
  ReplicaSet reps = replicate(eng, src, 256);
  CHECK(eng.rounds() - before == 4);
  for (std::uint64_t cpy : {std::uint64_t(0), std::uint64_t(100),
                            std::uint64_t(255)})
    CHECK(eng.peek(reps.copy_range(cpy).first) == payload);
}

TEST_CASE("multi-block replication keeps groups separate") {
  Engine eng(cfg_of(256), 5);
  std::vector<MachineRange> blocks;
  for (int g = 0; g < 3; ++g) {
    MachineRange b = eng.provision_machines(2);
    Word w0 = 10 * g, w1 = 10 * g + 1;
    eng.poke(b.first, std::span<const Word>(&w0, 1));
    eng.poke(b.first + 1, std::span<const Word>(&w1, 1));
    blocks.push_back(b);
  }
  ReplicaSet reps = replicate_blocks(
      eng, 3, [&](std::uint64_t g) { return blocks[g].first; }, 2, 5, 2);
  for (std::uint64_t g = 0; g < 3; ++g)
    for (std::uint64_t cpy = 0; cpy < 5; ++cpy) {
      MachineRange r = reps.copy_range(g, cpy);
      CHECK(eng.peek(r.first) == std::vector<Word>{Word(10 * g)});
      CHECK(eng.peek(r.first + 1) == std::vector<Word>{Word(10 * g + 1)});
    }
}

TEST_CASE("group broadcast appends each group's payload to its listeners") {
  Engine eng(cfg_of(256), 2);
  std::vector<MachineId> srcs;
  for (int g = 0; g < 3; ++g) {
    MachineRange one = eng.provision_machines(1);
    std::vector<Word> pay = {Word(g), Word(g * g + 1)};
    eng.poke(one.first, pay);
    srcs.push_back(one.first);
  }
  MachineRange dests = eng.provision_machines(12);
  for (std::uint64_t d = 0; d < 12; ++d) {
    Word tagw = Word(1000 + d);
    eng.poke(dests.first + d, std::span<const Word>(&tagw, 1));
  }
  group_broadcast(
      eng, 3, [&](std::uint64_t g) { return srcs[g]; },
      [&](std::uint64_t g) { return dests.first + 4 * g; }, 4, 2, 1);
  for (std::uint64_t g = 0; g < 3; ++g)
    for (std::uint64_t d = 0; d < 4; ++d) {
      std::uint64_t m = 4 * g + d;
      std::vector<Word> want = {Word(1000 + m), Word(g), Word(g * g + 1)};
      CHECK(eng.peek(dests.first + m) == want);
    }
}

TEST_CASE("aggregate folds machine values and handles the empty range") {
  Engine eng(cfg_of(4096, 0.5), 0);  // s = 64
  std::uint64_t r0 = eng.rounds();
  CHECK(aggregate(eng, MachineRange{}, ReduceOp::sum,
                  [](MachineId, std::span<const Word>) {
                    return std::optional<Word>(1);
                  }) == 0);
  CHECK(eng.rounds() == r0);

  MachineRange trio = load_one_per_machine(eng, {5, 2, 9});
  auto first_word = [](MachineId, std::span<const Word> mem) {
    return std::optional<Word>(mem[0]);
  };
  CHECK(aggregate(eng, trio, ReduceOp::min, first_word) == 2);
  CHECK(aggregate(eng, trio, ReduceOp::max, first_word) == 9);
  CHECK(aggregate(eng, trio, ReduceOp::sum, first_word) == 16);
}

TEST_CASE("aggregate sums 4096 ones within the round bound") {
  auto c = cfg_of(4096, 0.5);  // s = 64
  REQUIRE(c.words_per_machine == 64);
  Engine eng(c, 0);
  std::vector<Word> ones(4096, 1);
  MachineRange items = load_one_per_machine(eng, ones);
  std::uint64_t before = eng.rounds();
  Word total = aggregate(eng, items, ReduceOp::sum,
                         [](MachineId, std::span<const Word> mem) {
                           return std::optional<Word>(mem[0]);
                         });
  CHECK(total == 4096);
  CHECK(eng.rounds() - before <= 3);  // ceil(log_64 4096) + 1
}

TEST_CASE("emit_pack concatenates emissions in machine order") {
  auto c = cfg_of(256, 0.5);  // s = 16
  Engine eng(c, 11);
  // machine i holds [i, i+1) repeated i%4 times; emission = 2 words per item
  std::uint64_t n = 20;
  MachineRange src = eng.provision_machines(n);
  std::vector<Word> expected;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::vector<Word> mem;
    for (std::uint64_t k = 0; k < i % 4; ++k) mem.push_back(Word(i));
    if (!mem.empty()) eng.poke(src.first + i, mem);
    for (std::uint64_t k = 0; k < i % 4; ++k) {
      expected.push_back(Word(i));
      expected.push_back(Word(2 * i));
    }
  }
  // keep machine 0 live so the scan always has a live source
  std::vector<Word> anchor = {Word(0)};
  eng.poke(src.first, anchor);
  expected.insert(expected.begin(), {Word(0), Word(0)});

  std::uint64_t levels = levels_for_count(c, n) + 1;
  std::uint64_t before = eng.rounds();
  PackedArray packed = emit_pack(
      eng, src, levels, 256,
      [](MachineId id, std::span<const Word> mem, std::vector<Word>& out) {
        for (Word w : mem) {
          out.push_back(w);
          out.push_back(2 * w);
        }
        (void)id;
      });
  CHECK(eng.rounds() - before == 2 * levels + 1);
  CHECK(eng.peek(packed.meta) ==
        std::vector<Word>{Word(expected.size())});
  CHECK(packed_contents(eng, packed, expected.size()) == expected);
  // sources keep their content
  CHECK(eng.peek(src.first) == anchor);
}

TEST_CASE("spread_records gives every record its own machine") {
  Engine eng(cfg_of(256), 4);
  std::vector<Word> words;
  for (Word r = 0; r < 25; ++r) {
    words.push_back(r);
    words.push_back(r * r);
    words.push_back(-r);
  }
  PackedArray packed = load_packed(eng, words);
  MachineRange recs = spread_records(eng, packed, 3);
  REQUIRE(recs.count == 25);
  for (Word r = 0; r < 25; ++r) {
    std::vector<Word> want = {r, r * r, -r};
    CHECK(eng.peek(recs.first + r) == want);
  }
}

TEST_CASE("spawn_generate wakes fresh machines that build their own state") {
  auto c = cfg_of(256, 0.5);
  Engine eng(c, 9);
  MachineRange init = eng.provision_machines(1);
  std::vector<Word> keep = {42, 43};
  eng.poke(init.first, keep);
  std::uint64_t count = 100;
  std::uint64_t levels = levels_for_count(c, count);
  MachineRange out = spawn_generate(
      eng, init.first, count, levels,
      [](std::uint64_t idx, std::vector<Word>& mem) {
        mem.push_back(Word(idx));
        mem.push_back(Word(idx * idx));
      });
  REQUIRE(out.count == count);
  for (std::uint64_t i : {std::uint64_t(0), std::uint64_t(37),
                          std::uint64_t(99)}) {
    std::vector<Word> want = {Word(i), Word(i * i)};
    CHECK(eng.peek(out.first + i) == want);
  }
  CHECK(eng.peek(init.first) == keep);
}

TEST_CASE("grouped_reduce folds each group independently") {
  auto c = cfg_of(1024, 0.5);  // s = 32
  Engine eng(c, 13);
  std::uint64_t groups = 10, per = 50;
  std::vector<Word> vals(groups * per);
  for (std::uint64_t i = 0; i < vals.size(); ++i) vals[i] = Word(i % 7 + 1);
  MachineRange items = load_one_per_machine(eng, vals);
  GroupLayout lay;
  lay.items = items;
  lay.groups = groups;
  lay.per_group = per;
  lay.locate = [per](std::uint64_t local, std::uint64_t& g, std::uint64_t& sl) {
    g = local / per;
    sl = local % per;
  };
  MachineRange res = grouped_reduce(
      eng, lay, levels_for_count(c, per), ReduceOp::sum,
      [](MachineId, std::span<const Word> mem) {
        return std::optional<Word>(mem[0]);
      });
  REQUIRE(res.count == groups);
  for (std::uint64_t g = 0; g < groups; ++g) {
    Word want = 0;
    for (std::uint64_t k = 0; k < per; ++k) want += vals[g * per + k];
    CHECK(eng.peek(res.first + g) == std::vector<Word>{want});
  }
}

TEST_CASE("sort orders reverse input and keeps equal keys together") {
  auto c = cfg_of(256, 0.5);  // s = 16
  Engine eng(c, 21);
  std::vector<Word> input = {9, 7, 5, 3, 1};
  PackedArray data = load_packed(eng, input);
  PackedArray sorted = sort_words(eng, data, input.size(),
                                  levels_for_count(c, input.size()));
  CHECK(packed_contents(eng, sorted, input.size()) ==
        std::vector<Word>{1, 3, 5, 7, 9});

  Engine eng2(c, 21);
  std::vector<Word> dup = {4, 4, 2, 4, 2, 2};
  PackedArray d2 = load_packed(eng2, dup);
  PackedArray s2 = sort_words(eng2, d2, dup.size(),
                              levels_for_count(c, dup.size()));
  CHECK(packed_contents(eng2, s2, dup.size()) ==
        std::vector<Word>{2, 2, 2, 4, 4, 4});
}

TEST_CASE("sort matches the host oracle on ten thousand random keys") {
  auto c = cfg_of(10000, 0.5);  // s = 100
  Engine eng(c, 77);
  std::vector<Word> input(10000);
  for (std::uint64_t i = 0; i < input.size(); ++i)
    input[i] = Word(mix64(404, i) % 5000);
  PackedArray data = load_packed(eng, input);
  PackedArray sorted = sort_words(eng, data, input.size(),
                                  levels_for_count(c, input.size()));
  std::vector<Word> expect = input;
  std::sort(expect.begin(), expect.end());
  CHECK(packed_contents(eng, sorted, input.size()) == expect);
  CHECK(eng.report().max_sent <= c.words_per_machine);
  CHECK(eng.report().max_received <= c.words_per_machine);
}

TEST_CASE("sort rounds depend on depth, not item count") {
  auto c = cfg_of(4096, 0.5);  // s = 64; both sizes fit depth 1 trees
  std::uint64_t rounds_small, rounds_big;
  {
    Engine eng(c, 1);
    std::vector<Word> in(50);
    for (auto& w : in) w = Word(mix64(1, &w - in.data()) % 100);
    PackedArray d = load_packed(eng, in);
    std::uint64_t r0 = eng.rounds();
    sort_words(eng, d, in.size(), 2);
    rounds_small = eng.rounds() - r0;
  }
  {
    Engine eng(c, 1);
    std::vector<Word> in(900);
    for (auto& w : in) w = Word(mix64(2, &w - in.data()) % 100);
    PackedArray d = load_packed(eng, in);
    std::uint64_t r0 = eng.rounds();
    sort_words(eng, d, in.size(), 2);
    rounds_big = eng.rounds() - r0;
  }
  CHECK(rounds_small == rounds_big);
}

TEST_CASE("random permutation of one item is that item") {
  auto c = cfg_of(256, 0.5);
  Engine eng(c, 5);
  PackedArray data = load_packed(eng, {123});
  PermutationResult res = random_permutation(eng, data, 1, 1);
  CHECK(packed_contents(eng, res.items, 1) == std::vector<Word>{123});
}

TEST_CASE("random permutation is a deterministic reshuffle of its input") {
  auto c = cfg_of(256, 0.5);
  std::vector<Word> input = {10, 20, 30, 40, 50, 60, 70};
  auto run = [&](std::uint64_t seed) {
    Engine eng(c, seed);
    PackedArray data = load_packed(eng, input);
    PermutationResult res = random_permutation(
        eng, data, input.size(), levels_for_count(c, input.size()));
    return packed_contents(eng, res.items, input.size());
  };
  auto a = run(1234), b = run(1234);
  CHECK(a == b);
  std::vector<Word> sorted_a = a;
  std::sort(sorted_a.begin(), sorted_a.end());
  CHECK(sorted_a == input);  // a permutation, nothing lost
  bool differs = false;
  for (std::uint64_t sd = 0; sd < 20 && !differs; ++sd)
    differs = run(sd) != a;
  CHECK(differs);
}

TEST_CASE("permutation redraw path is exercised and stays deterministic") {
  auto c = cfg_of(256, 0.5);
  std::vector<Word> input = {1, 2, 3};
  bool saw_redraw = false;
  for (std::uint64_t sd = 0; sd < 4000 && !saw_redraw; ++sd) {
    Engine eng(c, sd);
    PackedArray data = load_packed(eng, input);
    PermutationResult res = random_permutation(eng, data, 3, 1);
    if (res.redrawn) {
      saw_redraw = true;
      Engine eng2(c, sd);
      PackedArray d2 = load_packed(eng2, input);
      PermutationResult res2 = random_permutation(eng2, d2, 3, 1);
      CHECK(res2.redrawn);
      CHECK(packed_contents(eng, res.items, 3) ==
            packed_contents(eng2, res2.items, 3));
    }
  }
  CHECK(saw_redraw);  // scores live in [1, 27], collisions are common
}

TEST_CASE("three-item permutation is uniform across one hundred thousand seeds") {
  auto c = cfg_of(256, 0.5);
  std::vector<Word> input = {1, 2, 3};
  std::map<std::vector<Word>, std::uint64_t> hist;
  const std::uint64_t trials = 100000;
  for (std::uint64_t sd = 0; sd < trials; ++sd) {
    Engine eng(c, sd);
    PackedArray data = load_packed(eng, input);
    PermutationResult res = random_permutation(eng, data, 3, 1);
    ++hist[packed_contents(eng, res.items, 3)];
  }
  CHECK(hist.size() == 6);
  for (const auto& [perm, cnt] : hist) {
    double frac = double(cnt) / double(trials);
    CHECK(frac > 1.0 / 6.0 - 0.01);
    CHECK(frac < 1.0 / 6.0 + 0.01);
  }
}
