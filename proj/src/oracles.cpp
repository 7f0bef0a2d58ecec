#include "mpc/oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace mpc {
namespace {

using Big = __int128;

Word checked_word(Big v, const char* what) {
  if (v > Big(std::numeric_limits<Word>::max()) ||
      v < Big(std::numeric_limits<Word>::min()))
    throw Error(std::string(what) + " overflows a word");
  return Word(v);
}

Big gcd_big(Big a, Big b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Big t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rat rat_norm(Big num, Big den) {
  if (den == 0) throw BadParams("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Big g = gcd_big(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {checked_word(num, "rational numerator"),
          checked_word(den, "rational denominator")};
}

/// Edge-level adjacency: one entry per edge per usable direction, so
/// parallel edges contribute multiplicity to path counts.
struct Adj {
  std::vector<std::vector<std::pair<Word, Word>>> out;
};

Adj build_adj(const GraphInstance& g) {
  Adj a;
  a.out.resize(std::size_t(g.n));
  for (const Edge& e : g.edges) {
    a.out[std::size_t(e.u)].push_back({e.v, e.w});
    if (!g.directed) a.out[std::size_t(e.v)].push_back({e.u, e.w});
  }
  return a;
}

struct UnionFind {
  std::vector<Word> parent;

  explicit UnionFind(Word n) : parent(std::size_t(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  Word find(Word x) {
    while (parent[std::size_t(x)] != x) {
      parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
      x = parent[std::size_t(x)];
    }
    return x;
  }
  bool unite(Word a, Word b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::size_t(b)] = a;
    return true;
  }
};

/// Component label of each node: the minimum node id in its component.
std::vector<Word> component_labels(const GraphInstance& g) {
  UnionFind uf(g.n);
  for (const Edge& e : g.edges) uf.unite(e.u, e.v);
  std::vector<Word> label(std::size_t(g.n), -1);
  for (Word i = 0; i < g.n; ++i) {
    Word r = uf.find(i);
    if (label[std::size_t(r)] == -1) label[std::size_t(r)] = i;
  }
  std::vector<Word> out(std::size_t(g.n));
  for (Word i = 0; i < g.n; ++i) out[std::size_t(i)] = label[std::size_t(uf.find(i))];
  return out;
}

Word component_count(const GraphInstance& g) {
  auto labels = component_labels(g);
  Word cnt = 0;
  for (Word i = 0; i < g.n; ++i)
    if (labels[std::size_t(i)] == i) ++cnt;
  return cnt;
}

bool is_bipartite(const GraphInstance& g) {
  auto adj = build_adj(g);
  for (const Edge& e : g.edges)
    if (e.u == e.v) return false;
  std::vector<int> color(std::size_t(g.n), -1);
  for (Word r = 0; r < g.n; ++r) {
    if (color[std::size_t(r)] != -1) continue;
    color[std::size_t(r)] = 0;
    std::queue<Word> q;
    q.push(r);
    while (!q.empty()) {
      Word u = q.front();
      q.pop();
      for (auto [v, w] : adj.out[std::size_t(u)]) {
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

bool reaches(const GraphInstance& g, Word s, Word t) {
  auto adj = build_adj(g);
  std::vector<bool> seen(std::size_t(g.n), false);
  std::queue<Word> q;
  q.push(s);
  seen[std::size_t(s)] = true;
  while (!q.empty()) {
    Word u = q.front();
    q.pop();
    if (u == t) return true;
    for (auto [v, w] : adj.out[std::size_t(u)])
      if (!seen[std::size_t(v)]) {
        seen[std::size_t(v)] = true;
        q.push(v);
      }
  }
  return false;
}

std::vector<std::vector<Word>> distance_matrix(const GraphInstance& g) {
  std::vector<std::vector<Word>> d;
  d.reserve(std::size_t(g.n));
  for (Word s = 0; s < g.n; ++s) d.push_back(single_source_distances(g, s));
  return d;
}

std::vector<std::vector<Word>> floyd_warshall(const GraphInstance& g) {
  const Word inf = unreachable_distance(g);
  std::vector<std::vector<Word>> d(std::size_t(g.n),
                                   std::vector<Word>(std::size_t(g.n), inf));
  for (Word i = 0; i < g.n; ++i) d[std::size_t(i)][std::size_t(i)] = 0;
  for (const Edge& e : g.edges) {
    if (e.w < 0) throw NegativeWeight("negative edge weight");
    auto& duv = d[std::size_t(e.u)][std::size_t(e.v)];
    duv = std::min(duv, e.w);
    if (!g.directed) {
      auto& dvu = d[std::size_t(e.v)][std::size_t(e.u)];
      dvu = std::min(dvu, e.w);
    }
  }
  for (Word k = 0; k < g.n; ++k)
    for (Word i = 0; i < g.n; ++i)
      for (Word j = 0; j < g.n; ++j) {
        Word via = std::min<Word>(d[std::size_t(i)][std::size_t(k)] +
                                      d[std::size_t(k)][std::size_t(j)],
                                  inf);
        auto& cur = d[std::size_t(i)][std::size_t(j)];
        cur = std::min(cur, via);
      }
  return d;
}

void cross_check_distances(const GraphInstance& g,
                           const std::vector<std::vector<Word>>& dij) {
  if (g.n > 128) return;
  auto fw = floyd_warshall(g);
  if (fw != dij)
    throw Error("distance oracles disagree between methods");
}

Word require_node(const GraphInstance& g, Word id, const char* what) {
  if (id < 0 || id >= g.n)
    throw BadParams(std::string(what) + " node not set or out of range");
  return id;
}

/// Weighted Brandes pass from one source; adds ordered-pair dependencies
/// into bc. Requires strictly positive weights so the shortest-path DAG
/// is acyclic in settle order.
void brandes_from(const GraphInstance& g, const Adj& adj, Word s,
                  std::vector<Rat>& bc) {
  const Word inf = unreachable_distance(g);
  const std::size_t n = std::size_t(g.n);
  std::vector<Word> dist(n, inf), sigma(n, 0);
  std::vector<bool> done(n, false);
  std::vector<Word> order;
  order.reserve(n);
  using Item = std::pair<Word, Word>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[std::size_t(s)] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[std::size_t(u)]) continue;
    done[std::size_t(u)] = true;
    order.push_back(u);
    for (auto [v, w] : adj.out[std::size_t(u)])
      if (d + w < dist[std::size_t(v)]) {
        dist[std::size_t(v)] = d + w;
        pq.push({d + w, v});
      }
  }
  for (Word u : order)
    for (auto [v, w] : adj.out[std::size_t(u)]) {
      if (dist[std::size_t(u)] + w != dist[std::size_t(v)]) continue;
      Big sum = Big(sigma[std::size_t(v)]) +
                Big(u == s ? 1 : sigma[std::size_t(u)]);
      sigma[std::size_t(v)] = checked_word(sum, "path count");
    }
  sigma[std::size_t(s)] = 1;

  std::vector<Rat> delta(n, Rat{0, 1});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Word v = *it;
    if (v == s) continue;
    for (auto [u, w] : adj.out[std::size_t(v)]) {
      // scan v's incident edges backwards: u is a predecessor when the
      // distances line up along this edge in the u -> v direction
      if (g.directed) continue;
      if (dist[std::size_t(u)] + w != dist[std::size_t(v)]) continue;
      Rat frac = rat_norm(Big(sigma[std::size_t(u)]),
                          Big(sigma[std::size_t(v)]));
      Rat term = rat_mul(frac, rat_add({1, 1}, delta[std::size_t(v)]));
      delta[std::size_t(u)] = rat_add(delta[std::size_t(u)], term);
    }
    bc[std::size_t(v)] = rat_add(bc[std::size_t(v)], delta[std::size_t(v)]);
  }
  if (!g.directed) return;

  // directed graphs need predecessor edges by target, built explicitly
  std::vector<std::vector<Word>> preds(n);
  for (const Edge& e : g.edges)
    if (dist[std::size_t(e.u)] != inf &&
        dist[std::size_t(e.u)] + e.w == dist[std::size_t(e.v)])
      preds[std::size_t(e.v)].push_back(e.u);
  std::fill(delta.begin(), delta.end(), Rat{0, 1});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Word v = *it;
    for (Word u : preds[std::size_t(v)]) {
      Rat frac = rat_norm(Big(sigma[std::size_t(u)]),
                          Big(sigma[std::size_t(v)]));
      Rat term = rat_mul(frac, rat_add({1, 1}, delta[std::size_t(v)]));
      delta[std::size_t(u)] = rat_add(delta[std::size_t(u)], term);
    }
    if (v != s)
      bc[std::size_t(v)] = rat_add(bc[std::size_t(v)], delta[std::size_t(v)]);
  }
}

std::vector<Word> kruskal_indices(const GraphInstance& g,
                                  bool flip_tiebreak) {
  std::vector<Word> idx(g.edges.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto key = [&](Word i) {
    const Edge& e = g.edges[std::size_t(i)];
    Word lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
    if (flip_tiebreak) std::swap(lo, hi);
    return std::tuple<Word, Word, Word, Word>(e.w, lo, hi, i);
  };
  std::sort(idx.begin(), idx.end(),
            [&](Word a, Word b) { return key(a) < key(b); });
  UnionFind uf(g.n);
  std::vector<Word> chosen;
  for (Word i : idx) {
    const Edge& e = g.edges[std::size_t(i)];
    if (e.u != e.v && uf.unite(e.u, e.v)) chosen.push_back(i);
  }
  return chosen;
}

Answer msf_answer(const GraphInstance& g, bool test_mode) {
  auto chosen = kruskal_indices(g, false);
  std::vector<Edge> forest;
  Word total = 0;
  for (Word i : chosen) {
    forest.push_back(g.edges[std::size_t(i)]);
    total += g.edges[std::size_t(i)].w;
  }
  std::sort(forest.begin(), forest.end());
  if (test_mode) {
    Word alt_total = 0;
    for (Word i : kruskal_indices(g, true)) alt_total += g.edges[std::size_t(i)].w;
    if (alt_total != total)
      throw Error("forest weight depends on the tie-break order");
    if (Word(chosen.size()) != g.n - component_count(g))
      throw Error("forest size does not match the component structure");
  }
  std::vector<Word> items;
  for (const Edge& e : forest) {
    items.push_back(e.u);
    items.push_back(e.v);
    items.push_back(e.w);
  }
  Answer a = Answer::of_edges(std::move(items));
  a.value = total;
  return a;
}

std::pair<Word, std::vector<Word>> stoer_wagner(const GraphInstance& g) {
  const std::size_t n = std::size_t(g.n);
  if (g.n < 2) throw BadParams("minimum cut needs at least two nodes");
  std::vector<std::vector<Word>> w(n, std::vector<Word>(n, 0));
  for (const Edge& e : g.edges) {
    if (e.u == e.v) continue;
    w[std::size_t(e.u)][std::size_t(e.v)] += e.w;
    w[std::size_t(e.v)][std::size_t(e.u)] += e.w;
  }
  std::vector<std::vector<Word>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {Word(i)};
  std::vector<Word> active(n);
  std::iota(active.begin(), active.end(), 0);

  Word best = std::numeric_limits<Word>::max();
  std::vector<Word> best_side;
  while (active.size() > 1) {
    std::vector<Word> weight(n, 0);
    std::vector<bool> added(n, false);
    Word prev = -1, last = -1;
    for (std::size_t step = 0; step < active.size(); ++step) {
      Word pick = -1;
      for (Word v : active)
        if (!added[std::size_t(v)] &&
            (pick == -1 || weight[std::size_t(v)] > weight[std::size_t(pick)]))
          pick = v;
      added[std::size_t(pick)] = true;
      prev = last;
      last = pick;
      for (Word v : active)
        if (!added[std::size_t(v)])
          weight[std::size_t(v)] += w[std::size_t(pick)][std::size_t(v)];
    }
    if (weight[std::size_t(last)] < best ||
        (weight[std::size_t(last)] == best && best_side.empty())) {
      best = weight[std::size_t(last)];
      best_side = members[std::size_t(last)];
    }
    for (Word v : active)
      if (v != last && v != prev) {
        w[std::size_t(prev)][std::size_t(v)] += w[std::size_t(last)][std::size_t(v)];
        w[std::size_t(v)][std::size_t(prev)] = w[std::size_t(prev)][std::size_t(v)];
      }
    members[std::size_t(prev)].insert(members[std::size_t(prev)].end(),
                                      members[std::size_t(last)].begin(),
                                      members[std::size_t(last)].end());
    active.erase(std::find(active.begin(), active.end(), last));
  }
  std::vector<Word> side(n, 0);
  for (Word v : best_side) side[std::size_t(v)] = 1;
  if (side[0] == 1)
    for (auto& b : side) b = 1 - b;
  return {best, side};
}

}  // namespace

Word crossing_weight(const GraphInstance& g, const std::vector<Word>& side) {
  Word total = 0;
  for (const Edge& e : g.edges)
    if (e.u != e.v && side[std::size_t(e.u)] != side[std::size_t(e.v)])
      total += e.w;
  return total;
}

namespace {

std::vector<Word> path_positions(const SuccessorList& sl) {
  validate_path(sl);
  std::vector<Word> indeg(std::size_t(sl.n), 0);
  for (Word i = 0; i < sl.n; ++i)
    if (sl.succ[std::size_t(i)] != sl.n) ++indeg[std::size_t(sl.succ[std::size_t(i)])];
  Word source = -1;
  for (Word i = 0; i < sl.n; ++i)
    if (indeg[std::size_t(i)] == 0) source = i;
  std::vector<Word> pos(std::size_t(sl.n), 0);
  Word r = 0;
  for (Word cur = source; cur != sl.n; cur = sl.succ[std::size_t(cur)])
    pos[std::size_t(cur)] = r++;
  return pos;
}

}  // namespace

const char* to_string(ProblemTag t) {
  switch (t) {
    case ProblemTag::connectivity: return "connectivity";
    case ProblemTag::st_connectivity: return "st-connectivity";
    case ProblemTag::st_reachability: return "st-reachability";
    case ProblemTag::num_cc: return "num-cc";
    case ProblemTag::cc_labels: return "cc-labels";
    case ProblemTag::bipartiteness: return "bipartiteness";
    case ProblemTag::cycle_count: return "cycle-count";
    case ProblemTag::ord: return "ord";
    case ProblemTag::list_ranking: return "list-ranking";
    case ProblemTag::shortest_path: return "shortest-path";
    case ProblemTag::sssp: return "sssp";
    case ProblemTag::apsp: return "apsp";
    case ProblemTag::diameter: return "diameter";
    case ProblemTag::radius: return "radius";
    case ProblemTag::median: return "median";
    case ProblemTag::betweenness: return "betweenness";
    case ProblemTag::msf: return "msf";
    case ProblemTag::mincut: return "mincut";
  }
  return "?";
}

ProblemTag tag_from_string(const std::string& name) {
  for (ProblemTag t :
       {ProblemTag::connectivity, ProblemTag::st_connectivity,
        ProblemTag::st_reachability, ProblemTag::num_cc, ProblemTag::cc_labels,
        ProblemTag::bipartiteness, ProblemTag::cycle_count, ProblemTag::ord,
        ProblemTag::list_ranking, ProblemTag::shortest_path, ProblemTag::sssp,
        ProblemTag::apsp, ProblemTag::diameter, ProblemTag::radius,
        ProblemTag::median, ProblemTag::betweenness, ProblemTag::msf,
        ProblemTag::mincut})
    if (name == to_string(t)) return t;
  throw BadParams("unknown problem '" + name + "'");
}

Rat rat_make(Word num, Word den) { return rat_norm(Big(num), Big(den)); }

Rat rat_add(Rat a, Rat b) {
  return rat_norm(Big(a.num) * b.den + Big(b.num) * a.den, Big(a.den) * b.den);
}

Rat rat_mul(Rat a, Rat b) {
  return rat_norm(Big(a.num) * b.num, Big(a.den) * b.den);
}

bool rat_less(Rat a, Rat b) { return Big(a.num) * b.den < Big(b.num) * a.den; }

bool rat_less_int(Rat a, Word b) { return Big(a.num) < Big(b) * a.den; }

std::vector<Word> single_source_distances(const GraphInstance& g, Word src) {
  require_node(g, src, "source");
  for (const Edge& e : g.edges)
    if (e.w < 0) throw NegativeWeight("negative edge weight");
  const Word inf = unreachable_distance(g);
  auto adj = build_adj(g);
  std::vector<Word> dist(std::size_t(g.n), inf);
  using Item = std::pair<Word, Word>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[std::size_t(src)] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[std::size_t(u)]) continue;
    for (auto [v, w] : adj.out[std::size_t(u)])
      if (d + w < dist[std::size_t(v)]) {
        dist[std::size_t(v)] = d + w;
        pq.push({d + w, v});
      }
  }
  return dist;
}

std::vector<Rat> betweenness_values(const GraphInstance& g) {
  validate(g);
  for (const Edge& e : g.edges)
    if (e.w < 1)
      throw BadParams("betweenness needs strictly positive weights");
  auto adj = build_adj(g);
  std::vector<Rat> bc(std::size_t(g.n), Rat{0, 1});
  for (Word s = 0; s < g.n; ++s) brandes_from(g, adj, s, bc);
  if (!g.directed)
    for (auto& r : bc) r = rat_mul(r, {1, 2});
  return bc;
}

std::vector<Rat> betweenness_by_enumeration(const GraphInstance& g) {
  const std::size_t n = std::size_t(g.n);
  auto adj = build_adj(g);
  std::vector<Rat> bc(n, Rat{0, 1});
  const Word inf = unreachable_distance(g);
  for (Word s = 0; s < g.n; ++s)
    for (Word t = g.directed ? Word(0) : s + 1; t < g.n; ++t) {
      if (s == t) continue;
      Word best = inf;
      Word count = 0;
      std::vector<Word> through(n, 0);
      std::vector<bool> onpath(n, false);
      std::vector<Word> stack{s};
      std::function<void(Word, Word)> dfs = [&](Word u, Word len) {
        if (len > best) return;
        if (u == t) {
          if (len < best) {
            best = len;
            count = 0;
            std::fill(through.begin(), through.end(), 0);
          }
          ++count;
          for (Word x : stack)
            if (x != s && x != t) ++through[std::size_t(x)];
          return;
        }
        for (auto [v, w] : adj.out[std::size_t(u)]) {
          if (onpath[std::size_t(v)] || v == u) continue;
          onpath[std::size_t(v)] = true;
          stack.push_back(v);
          dfs(v, len + w);
          stack.pop_back();
          onpath[std::size_t(v)] = false;
        }
      };
      onpath[std::size_t(s)] = true;
      dfs(s, 0);
      if (count == 0) continue;
      for (Word u = 0; u < g.n; ++u)
        if (through[std::size_t(u)] > 0)
          bc[std::size_t(u)] = rat_add(
              bc[std::size_t(u)], rat_make(through[std::size_t(u)], count));
    }
  return bc;
}

std::pair<Word, std::vector<Word>> mincut_by_partition_scan(
    const GraphInstance& g) {
  if (g.n < 2 || g.n > 24) throw BadParams("partition scan needs 2 <= n <= 24");
  Word best = std::numeric_limits<Word>::max();
  std::uint64_t best_mask = 1;
  for (std::uint64_t mask = 1; mask < (1ull << (g.n - 1)); ++mask) {
    // node n-1 stays on side 0, so each bipartition appears once
    Word cut = 0;
    for (const Edge& e : g.edges) {
      bool su = e.u < g.n - 1 && ((mask >> e.u) & 1);
      bool sv = e.v < g.n - 1 && ((mask >> e.v) & 1);
      if (su != sv) cut += e.w;
    }
    if (cut < best) {
      best = cut;
      best_mask = mask;
    }
  }
  std::vector<Word> side(std::size_t(g.n), 0);
  for (Word i = 0; i + 1 < g.n; ++i) side[std::size_t(i)] = (best_mask >> i) & 1;
  if (side[0] == 1)
    for (auto& b : side) b = 1 - b;
  return {best, side};
}

Answer oracle(ProblemTag tag, const GraphInstance& g, bool test_mode) {
  if (takes_successors(tag))
    throw WrongTag("problem expects a successor list");
  validate(g);
  auto undirected_only = [&] {
    if (g.directed) throw WrongTag("problem is defined on undirected graphs");
  };
  switch (tag) {
    case ProblemTag::connectivity:
      undirected_only();
      return Answer::yes_no(component_count(g) <= 1);
    case ProblemTag::st_connectivity: {
      undirected_only();
      auto labels = component_labels(g);
      Word s = require_node(g, g.s, "source");
      Word t = require_node(g, g.t, "target");
      return Answer::yes_no(labels[std::size_t(s)] == labels[std::size_t(t)]);
    }
    case ProblemTag::st_reachability: {
      if (!g.directed) throw WrongTag("reachability asks a directed question");
      Word s = require_node(g, g.s, "source");
      Word t = require_node(g, g.t, "target");
      return Answer::yes_no(reaches(g, s, t));
    }
    case ProblemTag::num_cc:
      undirected_only();
      return Answer::number(component_count(g));
    case ProblemTag::cc_labels: {
      undirected_only();
      auto labels = component_labels(g);
      if (test_mode)
        for (const Edge& e : g.edges)
          if (labels[std::size_t(e.u)] != labels[std::size_t(e.v)])
            throw Error("edge endpoints got different labels");
      Answer a = Answer::of_labels(std::move(labels));
      a.value = component_count(g);  // scalar rides along with the labels
      return a;
    }
    case ProblemTag::bipartiteness:
      undirected_only();
      return Answer::yes_no(is_bipartite(g));
    case ProblemTag::cycle_count: {
      undirected_only();
      std::vector<Word> deg(std::size_t(g.n), 0);
      for (const Edge& e : g.edges) {
        ++deg[std::size_t(e.u)];
        ++deg[std::size_t(e.v)];
      }
      for (Word d : deg)
        if (d != 2)
          throw PromiseViolation("cycle counting needs every degree to be 2");
      return Answer::number(component_count(g));
    }
    case ProblemTag::shortest_path: {
      Word s = require_node(g, g.s, "source");
      Word t = require_node(g, g.t, "target");
      auto dist = single_source_distances(g, s);
      if (test_mode) cross_check_distances(g, distance_matrix(g));
      return Answer::number(dist[std::size_t(t)]);
    }
    case ProblemTag::sssp: {
      Word s = require_node(g, g.s, "source");
      auto dist = single_source_distances(g, s);
      if (test_mode) cross_check_distances(g, distance_matrix(g));
      return Answer::of_values(std::move(dist));
    }
    case ProblemTag::apsp: {
      auto mat = distance_matrix(g);
      if (test_mode) cross_check_distances(g, mat);
      std::vector<Word> flat;
      flat.reserve(std::size_t(g.n) * std::size_t(g.n));
      for (auto& row : mat) flat.insert(flat.end(), row.begin(), row.end());
      return Answer::of_values(std::move(flat));
    }
    case ProblemTag::diameter:
    case ProblemTag::radius:
    case ProblemTag::median: {
      if (g.n < 1) throw BadParams("need at least one node");
      auto mat = distance_matrix(g);
      if (test_mode) cross_check_distances(g, mat);
      if (tag == ProblemTag::diameter) {
        Word d = 0;
        for (auto& row : mat)
          for (Word x : row) d = std::max(d, x);
        return Answer::number(d);
      }
      if (tag == ProblemTag::radius) {
        Word r = std::numeric_limits<Word>::max();
        for (auto& row : mat)
          r = std::min(r, *std::max_element(row.begin(), row.end()));
        return Answer::number(r);
      }
      Word med = std::numeric_limits<Word>::max();
      for (auto& row : mat) {
        Big sum = 0;
        for (Word x : row) sum += x;
        med = std::min(med, checked_word(sum, "distance sum"));
      }
      return Answer::number(med);
    }
    case ProblemTag::betweenness: {
      auto bc = betweenness_values(g);
      if (test_mode && g.n <= 7 && bc != betweenness_by_enumeration(g))
        throw Error("centrality disagrees with path enumeration");
      std::vector<Word> items;
      items.reserve(bc.size() * 2);
      for (const Rat& r : bc) {
        items.push_back(r.num);
        items.push_back(r.den);
      }
      return Answer::of_values(std::move(items));
    }
    case ProblemTag::msf:
      undirected_only();
      return msf_answer(g, test_mode);
    case ProblemTag::mincut: {
      undirected_only();
      auto [value, side] = stoer_wagner(g);
      if (crossing_weight(g, side) != value)
        throw Error("cut partition does not realize the cut value");
      if (test_mode && g.n <= 10 &&
          mincut_by_partition_scan(g).first != value)
        throw Error("cut value disagrees with the partition scan");
      return Answer::of_partition(value, std::move(side));
    }
    default: break;
  }
  throw WrongTag("unhandled problem tag");
}

Answer oracle(ProblemTag tag, const SuccessorList& sl, bool test_mode) {
  (void)test_mode;
  if (!takes_successors(tag)) throw WrongTag("problem expects a graph");
  auto pos = path_positions(sl);
  if (tag == ProblemTag::list_ranking) return Answer::of_values(std::move(pos));
  if (sl.a < 0 || sl.a >= sl.n || sl.b < 0 || sl.b >= sl.n)
    throw BadParams("order query needs both nodes set");
  return Answer::yes_no(pos[std::size_t(sl.a)] < pos[std::size_t(sl.b)]);
}

}  // namespace mpc
