#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <vector>

#include "doctest.h"
#include "mpc/graph.hpp"

using namespace mpc;

namespace {

std::vector<Word> degrees(const GraphInstance& g) {
  std::vector<Word> deg(std::size_t(g.n), 0);
  for (const Edge& e : g.edges) {
    ++deg[std::size_t(e.u)];
    ++deg[std::size_t(e.v)];
  }
  return deg;
}

/// Component sizes via breadth first search, self loops ignored.
std::vector<std::size_t> component_sizes(const GraphInstance& g) {
  std::vector<std::vector<Word>> adj(std::size_t(g.n));
  for (const Edge& e : g.edges) {
    if (e.u == e.v) continue;
    adj[std::size_t(e.u)].push_back(e.v);
    adj[std::size_t(e.v)].push_back(e.u);
  }
  std::vector<bool> seen(std::size_t(g.n), false);
  std::vector<std::size_t> sizes;
  for (Word r = 0; r < g.n; ++r) {
    if (seen[std::size_t(r)]) continue;
    std::size_t cnt = 0;
    std::queue<Word> q;
    q.push(r);
    seen[std::size_t(r)] = true;
    while (!q.empty()) {
      Word u = q.front();
      q.pop();
      ++cnt;
      for (Word v : adj[std::size_t(u)])
        if (!seen[std::size_t(v)]) {
          seen[std::size_t(v)] = true;
          q.push(v);
        }
    }
    sizes.push_back(cnt);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

bool two_colorable(const GraphInstance& g) {
  std::vector<std::vector<Word>> adj(std::size_t(g.n));
  for (const Edge& e : g.edges) {
    adj[std::size_t(e.u)].push_back(e.v);
    adj[std::size_t(e.v)].push_back(e.u);
  }
  std::vector<int> color(std::size_t(g.n), -1);
  for (Word r = 0; r < g.n; ++r) {
    if (color[std::size_t(r)] != -1) continue;
    color[std::size_t(r)] = 0;
    std::queue<Word> q;
    q.push(r);
    while (!q.empty()) {
      Word u = q.front();
      q.pop();
      for (Word v : adj[std::size_t(u)]) {
        if (color[std::size_t(v)] == -1) {
          color[std::size_t(v)] = 1 - color[std::size_t(u)];
          q.push(v);
        } else if (color[std::size_t(v)] == color[std::size_t(u)]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("one cycle is connected and two regular") {
  auto g = generate_graph(Family::one_cycle, {.n = 5}, 3);
  CHECK(g.n == 5);
  CHECK(g.m() == 5);
  for (Word d : degrees(g)) CHECK(d == 2);
  CHECK(component_sizes(g) == std::vector<std::size_t>{5});
  CHECK(generate_graph(Family::one_cycle, {.n = 5}, 3) == g);
  CHECK(generate_graph(Family::one_cycle, {.n = 5}, 4) != g);
  CHECK_THROWS_AS(generate_graph(Family::one_cycle, {.n = 2}, 0), BadParams);
}

TEST_CASE("two cycles split into the requested component sizes") {
  auto g = generate_graph(Family::two_cycles, {.n = 7, .split = 3}, 11);
  CHECK(g.n == 7);
  CHECK(g.m() == 7);
  for (Word d : degrees(g)) CHECK(d == 2);
  CHECK(component_sizes(g) == std::vector<std::size_t>{3, 4});
  CHECK_THROWS_AS(generate_graph(Family::two_cycles, {.n = 5, .split = 5}, 0),
                  BadParams);
}

TEST_CASE("a union of cycles admits loops and parallel pairs") {
  GenParams p;
  p.lengths = {1, 2, 5};
  auto g = generate_graph(Family::union_of_cycles, p, 9);
  CHECK(g.n == 8);
  CHECK(g.m() == 8);
  for (Word d : degrees(g)) CHECK(d == 2);
  // the loop node forms its own component; bfs sees it as isolated
  auto sizes = component_sizes(g);
  CHECK(sizes == std::vector<std::size_t>{1, 2, 5});
  GenParams bad;
  bad.lengths = {3, 0};
  CHECK_THROWS_AS(generate_graph(Family::union_of_cycles, bad, 0), BadParams);
}

TEST_CASE("successor paths are seeded permutations with one source") {
  auto sl = generate_successors({.n = 6}, 21);
  CHECK(sl.n == 6);
  validate_path(sl);
  Word sinks = 0;
  std::vector<Word> indeg(6, 0);
  for (Word i = 0; i < 6; ++i) {
    if (sl.succ[std::size_t(i)] == 6) {
      ++sinks;
    } else {
      ++indeg[std::size_t(sl.succ[std::size_t(i)])];
    }
  }
  CHECK(sinks == 1);
  CHECK(std::count(indeg.begin(), indeg.end(), 0) == 1);
  CHECK(generate_successors({.n = 6}, 21) == sl);
}

TEST_CASE("gnp respects its probability extremes") {
  auto empty = generate_graph(Family::gnp, {.n = 6, .p = 0.0}, 1);
  CHECK(empty.m() == 0);
  auto full = generate_graph(Family::gnp, {.n = 6, .p = 1.0}, 1);
  CHECK(full.m() == 15);
  GenParams dir;
  dir.n = 6;
  dir.p = 1.0;
  dir.directed = true;
  CHECK(generate_graph(Family::gnp, dir, 1).m() == 30);
  GenParams bad;
  bad.n = 4;
  bad.p = 1.5;
  CHECK_THROWS_AS(generate_graph(Family::gnp, bad, 0), BadParams);
}

TEST_CASE("gnm draws exact edge counts with bounded weights") {
  GenParams p;
  p.n = 10;
  p.m = 25;
  p.min_weight = 2;
  p.max_weight = 9;
  auto g = generate_graph(Family::gnm_weighted, p, 5);
  CHECK(g.m() == 25);
  CHECK(g.weighted);
  CHECK(g.max_weight == 9);
  for (const Edge& e : g.edges) {
    CHECK(e.u != e.v);
    CHECK(e.w >= 2);
    CHECK(e.w <= 9);
  }
}

TEST_CASE("gnm honors degree caps") {
  GenParams p;
  p.n = 12;
  p.m = 20;
  p.max_weight = 4;
  p.degree_cap = 8;
  auto g = generate_graph(Family::gnm_weighted, p, 77);
  for (Word d : degrees(g)) CHECK(d <= 8);
  p.m = 100;
  CHECK_THROWS_AS(generate_graph(Family::gnm_weighted, p, 77), BadParams);
}

TEST_CASE("grids have the lattice edge count") {
  GenParams p;
  p.rows = 3;
  p.cols = 4;
  auto g = generate_graph(Family::grid, p, 0);
  CHECK(g.n == 12);
  CHECK(g.m() == 17);
  CHECK_FALSE(g.weighted);
  p.weighted = true;
  p.min_weight = 1;
  p.max_weight = 6;
  auto wg = generate_graph(Family::grid, p, 0);
  CHECK(wg.weighted);
  for (const Edge& e : wg.edges) {
    CHECK(e.w >= 1);
    CHECK(e.w <= 6);
  }
}

TEST_CASE("random bipartite instances are two colorable") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = generate_graph(Family::random_bipartite, {.n = 9, .m = 14}, seed);
    CHECK(g.m() == 14);
    CHECK(two_colorable(g));
  }
}

TEST_CASE("family names round trip through their strings") {
  for (Family f : {Family::one_cycle, Family::two_cycles,
                   Family::union_of_cycles, Family::successor_path,
                   Family::gnp, Family::gnm_weighted, Family::grid,
                   Family::random_bipartite})
    CHECK(family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(family_from_string("banana"), BadParams);
}

TEST_CASE("graph files parse and canonicalize") {
  auto tri = load_graph("3 3 0 0\n0 1\n1 2\n2 0\n");
  CHECK(tri.n == 3);
  CHECK(tri.m() == 3);
  CHECK_FALSE(tri.directed);
  CHECK_FALSE(tri.weighted);
  CHECK(tri.max_weight == 1);

  auto one = load_graph("2 1 0 1\n0 1 5\n");
  CHECK(one.weighted);
  CHECK(one.max_weight == 5);
  CHECK(one.edges == std::vector<Edge>{{0, 1, 5}});

  CHECK(save_graph(tri) == "3 3 0 0\n0 1\n1 2\n2 0\n");
  auto again = load_graph(save_graph(tri));
  CHECK(again == canonical(tri));
}

TEST_CASE("graph round trips preserve generated instances") {
  GenParams p;
  p.n = 9;
  p.m = 15;
  p.max_weight = 30;
  p.directed = true;
  auto g = canonical(generate_graph(Family::gnm_weighted, p, 13));
  g.max_weight = std::max_element(g.edges.begin(), g.edges.end(),
                                  [](const Edge& a, const Edge& b) {
                                    return a.w < b.w;
                                  })->w;
  g.max_weight = std::max<Word>(g.max_weight, 1);
  CHECK(load_graph(save_graph(g)) == g);
}

TEST_CASE("graph parse failures carry line numbers") {
  CHECK_THROWS_AS(load_graph(""), ParseError);
  CHECK_THROWS_AS(load_graph("3 1 0\n0 1\n"), ParseError);
  CHECK_THROWS_AS(load_graph("3 1 0 0\n0 x\n"), ParseError);
  CHECK_THROWS_AS(load_graph("3 2 0 0\n0 1\n"), ParseError);
  CHECK_THROWS_AS(load_graph("3 1 0 0\n0 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(load_graph("3 1 0 0\n0 1 4\n"), ParseError);
  CHECK_THROWS_AS(load_graph("3 1 0 2\n0 1 4\n"), ParseError);
  CHECK_THROWS_AS(load_graph("2 1 0 0\n0 2\n"), RangeError);
  CHECK_THROWS_AS(load_graph("2 1 0 1\n0 1 -3\n"), NegativeWeight);
  try {
    load_graph("3 2 0 0\n0 1\n0 x\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("successor files use -1 for the sink") {
  auto sl = load_successors("3\n0 1\n1 2\n2 -1\n");
  CHECK(sl.n == 3);
  CHECK(sl.succ == std::vector<Word>{1, 2, 3});
  CHECK(save_successors(sl) == "3\n0 1\n1 2\n2 -1\n");
  CHECK(load_successors(save_successors(sl)) == sl);

  auto shuffledlines = load_successors("3\n2 -1\n0 1\n1 2\n");
  CHECK(shuffledlines == sl);

  CHECK_THROWS_AS(load_successors("2\n0 1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(load_successors("2\n0 1\n"), ParseError);
  CHECK_THROWS_AS(load_successors("2\n0 1\n1 5\n"), RangeError);
  CHECK_THROWS_AS(load_successors("2\n0 1\n1 -1\nrest\n"), ParseError);
}

TEST_CASE("validators reject out of range structures") {
  GraphInstance g;
  g.n = 3;
  g.edges = {{0, 5, 1}};
  CHECK_THROWS_AS(validate(g), RangeError);
  g.edges = {{0, 1, 3}};
  CHECK_THROWS_AS(validate(g), RangeError);
  g.weighted = true;
  g.max_weight = 2;
  CHECK_THROWS_AS(validate(g), RangeError);
  g.max_weight = 3;
  validate(g);
  g.n = max_nodes + 1;
  CHECK_THROWS_AS(validate(g), RangeError);

  SuccessorList broken;
  broken.n = 3;
  broken.succ = {1, 1, 3};
  validate(broken);
  CHECK_THROWS_AS(validate_path(broken), PromiseViolation);
  SuccessorList cycle;
  cycle.n = 2;
  cycle.succ = {1, 0};
  CHECK_THROWS_AS(validate_path(cycle), PromiseViolation);
}

TEST_CASE("encodings have the documented exact sizes") {
  auto tri = load_graph("3 3 0 0\n0 1\n1 2\n2 0\n");
  auto words = encode(tri);
  CHECK(words.size() == 11);
  CHECK(words[0] == 3);
  CHECK(words[1] == 3);
  CHECK(decode_graph(words) == canonical(tri));

  auto sl = load_successors("4\n0 1\n1 2\n2 3\n3 -1\n");
  auto sw = encode(sl);
  CHECK(sw.size() == 9);
  CHECK(decode_successors(sw) == sl);

  CHECK_THROWS_AS(decode_graph(std::vector<Word>{3, 2, 0, 1, 1}), ParseError);
  CHECK_THROWS_AS(decode_graph(std::vector<Word>{3, 9, 0, 1, 1, 1, 2, 1}),
                  ParseError);
}

TEST_CASE("distribution packs whole records with headroom") {
  auto tri = load_graph("3 3 0 0\n0 1\n1 2\n2 0\n");
  auto cfg = MpcConfig::make(11, 0.5, 2.0);
  REQUIRE(cfg.words_per_machine == 8);

  Engine eng(cfg, 1);
  auto region = distribute(eng, tri, DistMode::round_robin);
  CHECK(region.first == 0);
  CHECK(region.count == 2);
  auto m0 = eng.peek(0);
  auto m1 = eng.peek(1);
  CHECK(m0.size() == 5);
  CHECK(m1.size() == 6);
  CHECK(m0[0] == 3);
  CHECK(m0[1] == 3);
  CHECK(decode_graph(eng.peek_range(region)) == canonical(tri));
}

TEST_CASE("an edgeless instance still ships its header") {
  GraphInstance g;
  g.n = 4;
  auto cfg = MpcConfig::make(2, 0.5, 2.0);
  Engine eng(cfg, 1);
  auto region = distribute(eng, g, DistMode::round_robin);
  CHECK(region.count == 1);
  CHECK(eng.peek(region.first) == std::vector<Word>{4, 0});
}

TEST_CASE("shuffle mode reorders records but keeps the header pinned") {
  GenParams p;
  p.n = 20;
  p.m = 40;
  p.max_weight = 12;
  auto g = generate_graph(Family::gnm_weighted, p, 3);
  auto words = encode(g);
  auto cfg = MpcConfig::make(words.size(), 0.5, 2.0);

  Engine rr(cfg, 1);
  auto r1 = distribute(rr, g, DistMode::round_robin);
  Engine sh(cfg, 1);
  auto r2 = distribute(sh, g, DistMode::shuffle, 99);

  auto h = sh.peek(r2.first);
  REQUIRE(h.size() >= 2);
  CHECK(h[0] == g.n);
  CHECK(h[1] == g.m());

  auto a = decode_graph(rr.peek_range(r1), false, true);
  auto b = decode_graph(sh.peek_range(r2), false, true);
  CHECK(canonical(a) == canonical(b));
  CHECK(rr.peek_range(r1) != sh.peek_range(r2));

  for (std::uint64_t i = 0; i < r2.count; ++i)
    CHECK(sh.peek(r2.first + i).size() <= cfg.words_per_machine - 1);
}

TEST_CASE("successor lists distribute as atomic pairs") {
  auto sl = generate_successors({.n = 25}, 8);
  auto cfg = MpcConfig::make(51, 0.5, 2.0);
  Engine eng(cfg, 1);
  auto region = distribute(eng, sl, DistMode::shuffle, 5);
  for (std::uint64_t i = 0; i < region.count; ++i) {
    auto mem = eng.peek(region.first + i);
    std::uint64_t skip = header_skip(region.first + i, region, 1);
    CHECK((mem.size() - skip) % 2 == 0);
    CHECK(mem.size() <= cfg.words_per_machine - 1);
  }
  CHECK(decode_successors(eng.peek_range(region)) == sl);
}
