#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mpc/harness.hpp"

using namespace mpc;

namespace {

GraphInstance graph(Word n, std::vector<std::array<Word, 3>> edges,
                    bool weighted = false) {
  GraphInstance g;
  g.n = n;
  g.weighted = weighted;
  for (const auto& e : edges) {
    g.edges.push_back({e[0], e[1], e[2]});
    if (weighted) g.max_weight = std::max(g.max_weight, e[2]);
  }
  return g;
}

/// Successor list for the path visiting `order` front to back.
SuccessorList path_of(const std::vector<Word>& order, Word a = -1,
                      Word b = -1) {
  SuccessorList sl;
  sl.n = Word(order.size());
  sl.succ.assign(order.size(), sl.n);
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    sl.succ[std::size_t(order[i])] = order[i + 1];
  sl.a = a;
  sl.b = b;
  return sl;
}

std::vector<Word> shuffled_order(Word n, std::uint64_t seed) {
  std::vector<Word> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[mix64(seed, i) % i]);
  return order;
}

const Reduction& red(const std::string& name) {
  const Reduction* r = find_reduction(name);
  REQUIRE(r != nullptr);
  return *r;
}

Answer reference(ProblemTag tag, const Instance& inst) {
  return std::visit([&](const auto& x) { return oracle(tag, x, true); }, inst);
}

/// Full pipeline against the reference answer, failing with both answers
/// rendered when they disagree.
RunResult check_run(const Reduction& r, const Instance& inst,
                    RunOptions opt = {}) {
  OracleSolver solver;
  RunResult run = run_reduction(r, inst, opt, solver);
  const Answer want = reference(r.source(), inst);
  const bool ok = answers_match(r.source(), inst, run.answer, want);
  if (!ok) {
    CAPTURE(r.name());
    CAPTURE(answer_to_string(run.answer));
    CAPTURE(answer_to_string(want));
    CHECK(ok);
  }
  return run;
}

/// Runs the same instance in both record orders and returns the first run.
RunResult check_both_dists(const Reduction& r, const Instance& inst,
                           RunOptions opt = {}) {
  opt.dist = DistMode::round_robin;
  RunResult first = check_run(r, inst, opt);
  opt.dist = DistMode::shuffle;
  check_run(r, inst, opt);
  return first;
}

}  // namespace

TEST_CASE("the undirected registry names seven constructions") {
  const auto& rs = conn_reductions();
  REQUIRE(rs.size() == 7);
  const std::vector<std::array<std::string, 1>> names = {
      {"ord-to-cycles"},        {"list-ranking-via-ord"},
      {"stconn-to-bipartiteness"}, {"bipartiteness-to-stconn"},
      {"cc-via-stconn"},        {"msf-via-stconn"},
      {"mincut-via-cc"}};
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(rs[i]->name() == names[i][0]);
    CHECK(find_reduction(names[i][0]) == rs[i]);
  }
  CHECK(rs[0]->source() == ProblemTag::ord);
  CHECK(rs[0]->target() == ProblemTag::cycle_count);
  CHECK(rs[1]->source() == ProblemTag::list_ranking);
  CHECK(rs[1]->target() == ProblemTag::ord);
  CHECK(rs[2]->source() == ProblemTag::st_connectivity);
  CHECK(rs[2]->target() == ProblemTag::bipartiteness);
  CHECK(rs[3]->source() == ProblemTag::bipartiteness);
  CHECK(rs[3]->target() == ProblemTag::st_connectivity);
  CHECK(rs[4]->source() == ProblemTag::cc_labels);
  CHECK(rs[4]->target() == ProblemTag::st_connectivity);
  CHECK(rs[5]->source() == ProblemTag::msf);
  CHECK(rs[5]->target() == ProblemTag::st_connectivity);
  CHECK(rs[6]->source() == ProblemTag::mincut);
  CHECK(rs[6]->target() == ProblemTag::cc_labels);
  CHECK(find_reduction("no-such-construction") == nullptr);
}

TEST_CASE("order queries match the oracle on every path up to five nodes") {
  const Reduction& r = red("ord-to-cycles");
  OracleSolver solver;
  std::set<std::uint64_t> rounds;
  std::uint64_t cases = 0;
  std::uint64_t bad = 0;
  std::string first_bad;
  for (Word n = 2; n <= 5; ++n) {
    std::vector<Word> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    do {
      for (Word a = 0; a < n; ++a)
        for (Word b = 0; b < n; ++b) {
          if (a == b) continue;
          const SuccessorList sl = path_of(order, a, b);
          RunOptions opt;
          opt.dist = (cases % 2 == 0) ? DistMode::round_robin
                                      : DistMode::shuffle;
          opt.seed = 1 + cases;
          ++cases;
          const RunResult run = run_reduction(r, sl, opt, solver);
          rounds.insert(run.rounds_transform + run.rounds_extract);
          const Answer want = oracle(ProblemTag::ord, sl, true);
          if (run.answer != want && ++bad == 1) {
            std::ostringstream why;
            why << "order (";
            for (Word v : order) why << v << ' ';
            why << ") a=" << a << " b=" << b << " got "
                << answer_to_string(run.answer) << " want "
                << answer_to_string(want);
            first_bad = why.str();
          }
        }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  CHECK(cases == 4 + 36 + 288 + 2400);
  CAPTURE(first_bad);
  CHECK(bad == 0);
  CHECK(rounds.size() == 1);
}

TEST_CASE("order reduction rejects degenerate queries") {
  const Reduction& r = red("ord-to-cycles");
  Meta meta;
  meta.n = 5;
  meta.a = 2;
  meta.b = 2;
  CHECK_FALSE(r.applicable(meta));
  meta.b = -1;
  CHECK_FALSE(r.applicable(meta));
  meta.b = 5;
  CHECK_FALSE(r.applicable(meta));
  meta.a = 0;
  meta.b = 1;
  CHECK(r.applicable(meta));
  meta.n = 1;
  meta.b = 0;
  CHECK_FALSE(r.applicable(meta));

  OracleSolver solver;
  const SuccessorList same = path_of({0, 1, 2}, 1, 1);
  CHECK_THROWS_AS(run_reduction(r, same, RunOptions{}, solver), BadParams);
}

TEST_CASE("list ranking recovers all positions through order queries") {
  const Reduction& r = red("list-ranking-via-ord");

  SUBCASE("trivial lists") {
    const RunResult one = check_run(r, path_of({0}));
    CHECK(one.sub_count == 0);
    CHECK(one.answer == Answer::of_values({0}));
    check_run(r, path_of({0, 1}));
    check_run(r, path_of({1, 0}));
  }

  SUBCASE("five nodes in fixed and drawn orders") {
    check_both_dists(r, path_of({0, 1, 2, 3, 4}));
    check_both_dists(r, path_of({4, 3, 2, 1, 0}));
    check_run(r, path_of(shuffled_order(5, 11)));
    check_run(r, path_of(shuffled_order(5, 12)));
  }

  SUBCASE("wider lists pose one query per ordered pair") {
    RunOptions opt;
    opt.dist = DistMode::shuffle;
    const RunResult run = check_run(r, path_of(shuffled_order(9, 77)), opt);
    CHECK(run.sub_count == 9 * 8);
  }
}

TEST_CASE("st connectivity folds into one bipartiteness question") {
  const Reduction& r = red("stconn-to-bipartiteness");

  auto ask = [&](GraphInstance g, Word s, Word t) {
    g.s = s;
    g.t = t;
    return check_both_dists(r, g);
  };

  SUBCASE("triangle and path answer yes") {
    const RunResult run = ask(graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}), 0, 2);
    CHECK(run.sub_count == 1);
    CHECK(run.answer == Answer::yes_no(true));
    ask(graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}), 0, 3);
  }

  SUBCASE("separate components answer no") {
    GraphInstance g = graph(4, {{0, 1, 1}, {2, 3, 1}});
    const RunResult run = ask(g, 0, 3);
    CHECK(run.answer == Answer::yes_no(false));
    ask(g, 2, 3);
    ask(g, 1, 0);
  }

  SUBCASE("edgeless and coincident queries") {
    ask(graph(2, {}), 0, 1);
    ask(graph(1, {}), 0, 0);
    ask(graph(3, {{0, 1, 1}}), 2, 2);
  }

  SUBCASE("parallel edges and self loops do not fool the cover") {
    ask(graph(2, {{0, 1, 1}, {0, 1, 1}, {1, 1, 1}}), 0, 1);
    ask(graph(3, {{0, 0, 1}, {2, 2, 1}}), 0, 2);
  }

  SUBCASE("weighted inputs keep their weight bound out of the question") {
    GraphInstance g = graph(3, {{0, 1, 5}, {1, 2, 7}}, true);
    ask(g, 0, 2);
  }

  SUBCASE("directed inputs are rejected") {
    GraphInstance g = graph(2, {{0, 1, 1}});
    g.directed = true;
    g.s = 0;
    g.t = 1;
    CHECK_FALSE(r.applicable(meta_of(g)));
  }
}

TEST_CASE("bipartiteness folds into one st connectivity question") {
  const Reduction& r = red("bipartiteness-to-stconn");

  SUBCASE("even structures answer yes") {
    const RunResult run =
        check_both_dists(r, graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}));
    CHECK(run.sub_count == 1);
    CHECK(run.answer == Answer::yes_no(true));
    check_run(r, graph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}}));
    check_run(r, graph(3, {}));
    check_run(r, graph(1, {}));
  }

  SUBCASE("odd cycles and loops answer no") {
    check_both_dists(r, graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
    check_run(r, graph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1},
                           {4, 0, 1}}));
    check_run(r, graph(2, {{0, 0, 1}}));
    check_run(r, graph(6, {{0, 1, 1}, {2, 3, 1}, {3, 4, 1}, {2, 4, 1}}));
  }

  SUBCASE("parallel edges stay even") {
    check_run(r, graph(2, {{0, 1, 1}, {0, 1, 1}, {1, 0, 1}}));
  }

  SUBCASE("directed inputs are rejected") {
    GraphInstance g = graph(2, {{0, 1, 1}});
    g.directed = true;
    CHECK_FALSE(r.applicable(meta_of(g)));
  }
}

TEST_CASE("component labels come back as the least member per node") {
  const Reduction& r = red("cc-via-stconn");

  SUBCASE("two triangles") {
    const GraphInstance g = graph(
        6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
    const RunResult run = check_both_dists(r, g);
    CHECK(run.sub_count == 36);
    REQUIRE(run.answer.kind == AnswerKind::labels);
    CHECK(run.answer.value == 2);
    CHECK(run.answer.items == std::vector<Word>{0, 0, 0, 3, 3, 3});
  }

  SUBCASE("edgeless graphs label every node by itself") {
    const RunResult run = check_run(r, graph(4, {}));
    CHECK(run.answer.value == 4);
    CHECK(run.answer.items == std::vector<Word>{0, 1, 2, 3});
    check_run(r, graph(1, {}));
  }

  SUBCASE("one component, stars, and stragglers") {
    check_run(r, graph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}}));
    check_both_dists(r, graph(5, {{4, 0, 1}, {4, 1, 1}, {4, 2, 1}}));
    check_run(r, graph(3, {{1, 2, 1}, {1, 2, 1}, {0, 0, 1}}));
  }
}

TEST_CASE("minimum forests keep exactly the locally lightest edges") {
  const Reduction& r = red("msf-via-stconn");

  SUBCASE("a tree keeps every edge") {
    const GraphInstance g = graph(5, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1},
                                      {3, 4, 1}});
    const RunResult run = check_both_dists(r, g);
    CHECK(run.sub_count == 4);
    CHECK(run.answer.items.size() == 12);
    CHECK(run.answer.value == 4);
  }

  SUBCASE("weights pick the cheap cycle exits") {
    const GraphInstance g = graph(4, {{0, 1, 4}, {1, 2, 1}, {2, 0, 2},
                                      {2, 3, 9}}, true);
    const RunResult run = check_run(r, g);
    CHECK(run.answer.value == 1 + 2 + 9);
  }

  SUBCASE("ties fall to the earlier record") {
    check_both_dists(r, graph(3, {{0, 1, 1}, {0, 1, 1}, {1, 2, 1}}));
    check_run(r, graph(3, {{0, 1, 5}, {1, 0, 5}, {1, 2, 5}}, true));
    check_run(r, graph(2, {{0, 1, 3}, {0, 1, 2}, {0, 1, 7}}, true));
  }

  SUBCASE("self loops never enter the forest") {
    const RunResult run = check_run(r, graph(3, {{0, 0, 1}, {0, 1, 1},
                                                 {1, 2, 1}}));
    CHECK(run.answer.items.size() == 6);
  }

  SUBCASE("forests of several components") {
    check_run(r, graph(6, {{0, 1, 2}, {1, 2, 3}, {0, 2, 1}, {4, 5, 8}}, true));
    const RunResult none = check_run(r, graph(3, {}));
    CHECK(none.answer == Answer::of_edges({}));
    CHECK(none.sub_count == 0);
  }
}

TEST_CASE("minimum cuts emerge from contraction trials") {
  const Reduction& r = red("mincut-via-cc");
  RunOptions opt;
  opt.trials = 24;

  SUBCASE("four cycle cuts two edges") {
    const GraphInstance g = graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1},
                                      {3, 0, 1}});
    const RunResult run = check_both_dists(r, g, opt);
    CHECK(run.answer.kind == AnswerKind::partition);
    CHECK(run.answer.value == 2);
  }

  SUBCASE("a bridge cuts one edge") {
    const GraphInstance g = graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                      {2, 3, 1}, {3, 4, 1}, {4, 5, 1},
                                      {3, 5, 1}});
    const RunResult run = check_run(r, g, opt);
    CHECK(run.answer.value == 1);
  }

  SUBCASE("disconnected inputs cut nothing") {
    const GraphInstance g = graph(5, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}});
    const RunResult run = check_both_dists(r, g, opt);
    CHECK(run.answer.value == 0);
    CHECK(run.rounds_extract == 0);
  }

  SUBCASE("tiny and degenerate shapes") {
    check_run(r, graph(2, {{0, 1, 1}}), opt);
    check_run(r, graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}}), opt);
    check_run(r, graph(3, {}), opt);
    check_run(r, graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}), opt);
  }

  SUBCASE("self loops never cross a cut") {
    check_run(r, graph(3, {{0, 1, 1}, {1, 2, 1}, {1, 1, 1}}), opt);
  }

  SUBCASE("weighted and directed inputs are rejected") {
    GraphInstance g = graph(2, {{0, 1, 3}}, true);
    CHECK_FALSE(r.applicable(meta_of(g)));
    GraphInstance d = graph(2, {{0, 1, 1}});
    d.directed = true;
    CHECK_FALSE(r.applicable(meta_of(d)));
    Meta one = meta_of(graph(1, {}));
    CHECK_FALSE(r.applicable(one));
  }
}

TEST_CASE("round counts ignore the instance data at fixed machine scale") {
  const Reduction& stc = red("stconn-to-bipartiteness");
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GraphInstance g = graph(8, {});
    for (Word i = 0; i + 1 < 8; ++i)
      if (mix64(seed, std::uint64_t(i)) % 2 == 0)
        g.edges.push_back({i, i + 1, 1});
    g.edges.push_back({0, 7, 1});
    g.s = Word(mix64(seed, 101) % 8);
    g.t = Word(mix64(seed, 102) % 8);
    RunOptions opt;
    opt.seed = seed;
    OracleSolver solver;
    const RunResult run = run_reduction(stc, g, opt, solver);
    CHECK(answers_match(ProblemTag::st_connectivity, g, run.answer,
                        reference(ProblemTag::st_connectivity, g)));
    seen.insert({run.rounds_transform, run.rounds_extract});
  }
  CHECK(seen.size() == 1);
}

TEST_CASE("every undirected run stays inside the declared machine budget") {
  const GraphInstance g = graph(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1},
                                    {3, 4, 1}, {4, 5, 1}, {5, 0, 1},
                                    {0, 3, 1}});
  for (const Reduction* r : conn_reductions()) {
    Instance inst = g;
    if (r->source() == ProblemTag::ord)
      inst = path_of(shuffled_order(6, 5), 2, 4);
    else if (r->source() == ProblemTag::list_ranking)
      inst = path_of(shuffled_order(6, 6));
    else if (r->source() == ProblemTag::st_connectivity) {
      GraphInstance q = g;
      q.s = 0;
      q.t = 4;
      inst = q;
    }
    RunOptions opt;
    opt.trials = 16;
    OracleSolver solver;
    const RunResult run = run_reduction(*r, inst, opt, solver);
    const Meta meta = meta_of(inst);
    const MpcConfig cfg = MpcConfig::make(model_size(meta), opt.epsilon,
                                          opt.min_gamma);
    CAPTURE(r->name());
    CHECK(run.cost.max_sent <= cfg.words_per_machine);
    CHECK(run.cost.max_received <= cfg.words_per_machine);
    CHECK(run.cost.machines_used >= 1);
    CHECK(run.demand_words >= run.cost.total_words);
  }
}
