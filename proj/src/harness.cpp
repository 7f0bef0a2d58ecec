#include "mpc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>
#include <variant>

namespace mpc {

Meta meta_of(const GraphInstance& g) {
  Meta meta;
  meta.n = g.n;
  meta.m = Word(g.m());
  meta.directed = g.directed;
  meta.weighted = g.weighted;
  meta.max_weight = g.max_weight;
  meta.a = g.s;
  meta.b = g.t;
  meta.k = g.k;
  return meta;
}

Meta meta_of(const SuccessorList& sl) {
  Meta meta;
  meta.n = sl.n;
  meta.a = sl.a;
  meta.b = sl.b;
  return meta;
}

Meta meta_of(const Instance& inst) {
  return std::visit([](const auto& x) { return meta_of(x); }, inst);
}

void push_sub_header(std::vector<Word>& out, Word n, Word m, bool directed,
                     Word max_weight, Word qa, Word qb, Word qk) {
  out.insert(out.end(),
             {n, m, Word(directed ? 1 : 0), max_weight, qa, qb, qk});
}

GraphInstance decode_sub_graph(std::span<const Word> window, bool weighted) {
  if (window.size() < sub_graph_header_words)
    throw Error("sub window shorter than a graph header");
  GraphInstance g;
  g.n = window[0];
  const Word m = window[1];
  if (m < 0 || window.size() != sub_graph_words(m))
    throw Error("sub window length does not match its header");
  g.directed = window[2] != 0;
  g.weighted = weighted;
  g.max_weight = window[3];
  g.s = window[4];
  g.t = window[5];
  g.k = window[6];
  g.edges.reserve(std::size_t(m));
  for (Word i = 0; i < m; ++i) {
    const std::size_t base = sub_graph_header_words + 3 * std::size_t(i);
    g.edges.push_back({window[base], window[base + 1], window[base + 2]});
  }
  validate(g);
  return g;
}

SuccessorList decode_sub_ord(std::span<const Word> window) {
  if (window.size() < sub_ord_header_words)
    throw Error("sub window shorter than a successor header");
  SuccessorList sl;
  sl.n = window[0];
  sl.a = window[1];
  sl.b = window[2];
  if (sl.n < 0 || window.size() != sub_ord_words(sl.n))
    throw Error("sub window length does not match its header");
  sl.succ.assign(std::size_t(sl.n), sl.n);
  for (Word i = 0; i < sl.n; ++i) {
    const std::size_t base = sub_ord_header_words + 2 * std::size_t(i);
    const Word node = window[base];
    if (node < 0 || node >= sl.n)
      throw Error("successor record names a node out of range");
    sl.succ[std::size_t(node)] = window[base + 1];
  }
  validate(sl);
  return sl;
}

std::uint64_t answer_machines(ProblemTag tag, Word sub_nodes) {
  switch (tag) {
    case ProblemTag::betweenness:
      return std::uint64_t(sub_nodes);
    case ProblemTag::cc_labels:
      return std::uint64_t(sub_nodes) + 1;
    default:
      return 1;
  }
}

std::uint64_t replicate_demand(const MpcConfig& cfg, std::uint64_t copies,
                               std::uint64_t block, std::uint64_t apps) {
  const std::uint64_t s = cfg.words_per_machine;
  // Each application provisions a destination generation plus either a
  // fan-out helper tier or a pass-through mirror, both at most one
  // generation plus s machines wide.
  return s * block * (2 * (apps + 1) * copies + apps * (s + 2) + 2);
}

std::uint64_t pack_demand(const MpcConfig& cfg, std::uint64_t sources,
                          std::uint64_t capacity_words) {
  const std::uint64_t s = cfg.words_per_machine;
  return capacity_words + s + 2 * s * ceil_div(sources, s - 1) + 64 * s;
}

std::uint64_t spawn_demand(const MpcConfig& cfg, std::uint64_t count) {
  const std::uint64_t s = cfg.words_per_machine;
  return s * (count + 2 * ceil_div(count, s - 1) + 64);
}

std::uint64_t reduce_demand(const MpcConfig& cfg, std::uint64_t groups,
                            std::uint64_t per_group) {
  const std::uint64_t s = cfg.words_per_machine;
  return s * (2 * groups * ceil_div(per_group, s) + groups + 64);
}

std::vector<const Reduction*> all_reductions() {
  std::vector<const Reduction*> all = conn_reductions();
  const auto& path = path_reductions();
  all.insert(all.end(), path.begin(), path.end());
  return all;
}

const Reduction* find_reduction(const std::string& name) {
  for (const Reduction* r : all_reductions())
    if (r->name() == name) return r;
  return nullptr;
}

namespace {

std::vector<Word> solver_key(ProblemTag tag, const Instance& inst) {
  std::vector<Word> key{Word(tag)};
  if (const auto* g = std::get_if<GraphInstance>(&inst)) {
    key.insert(key.end(), {Word(g->directed ? 1 : 0), Word(g->weighted ? 1 : 0),
                           g->max_weight, g->s, g->t, g->k, g->n, Word(g->m())});
    for (const Edge& e : g->edges) {
      key.push_back(e.u);
      key.push_back(e.v);
      key.push_back(e.w);
    }
  } else {
    const auto& sl = std::get<SuccessorList>(inst);
    key.insert(key.end(), {sl.n, sl.a, sl.b});
    key.insert(key.end(), sl.succ.begin(), sl.succ.end());
  }
  return key;
}

Answer solve_by_oracle(ProblemTag tag, const Instance& inst) {
  return std::visit([&](const auto& x) { return oracle(tag, x); }, inst);
}

const Reduction* chain_for(ProblemTag tag) {
  switch (tag) {
    case ProblemTag::cc_labels:
      return find_reduction("cc-via-stconn");
    case ProblemTag::st_connectivity:
      return find_reduction("stconn-to-bipartiteness");
    case ProblemTag::bipartiteness:
      return find_reduction("bipartiteness-to-stconn");
    case ProblemTag::ord:
      return find_reduction("ord-to-cycles");
    case ProblemTag::shortest_path:
      return find_reduction("sp-to-diameter");
    case ProblemTag::st_reachability:
      return find_reduction("streach-to-sp");
    default:
      return nullptr;
  }
}

void poke_answer(Engine& eng, const SubInstance& sub, Word sub_nodes,
                 const Answer& ans) {
  if (sub.answer.count != answer_machines(sub.tag, sub_nodes))
    throw Error("answer range does not fit the sub's answer shape");
  switch (sub.tag) {
    case ProblemTag::betweenness: {
      if (ans.kind != AnswerKind::values ||
          ans.items.size() != 2 * std::size_t(sub_nodes))
        throw Error("centrality answer has the wrong shape");
      for (Word v = 0; v < sub_nodes; ++v) {
        const Word pair[2] = {ans.items[2 * std::size_t(v)],
                              ans.items[2 * std::size_t(v) + 1]};
        eng.poke(sub.answer.first + std::uint64_t(v), pair);
      }
      break;
    }
    case ProblemTag::cc_labels: {
      if (ans.kind != AnswerKind::labels ||
          ans.items.size() != std::size_t(sub_nodes))
        throw Error("label answer has the wrong shape");
      const Word count[1] = {ans.value};
      eng.poke(sub.answer.first, count);
      for (Word v = 0; v < sub_nodes; ++v) {
        const Word label[1] = {ans.items[std::size_t(v)]};
        eng.poke(sub.answer.first + 1 + std::uint64_t(v), label);
      }
      break;
    }
    default: {
      const Word value[1] = {ans.value};
      eng.poke(sub.answer.first, value);
    }
  }
}

RunResult run_once(const Reduction& red, const Instance& inst,
                   const Meta& meta, const RunOptions& opt, Solver& solver,
                   std::uint64_t seed) {
  const std::uint64_t n_words = std::max<std::uint64_t>(model_size(meta), 1);
  const MpcConfig base = MpcConfig::make(n_words, opt.epsilon, 0.0);
  const std::uint64_t demand = red.demand(meta, base);
  MpcConfig cfg = MpcConfig::for_demand(n_words, opt.epsilon, demand);
  if (cfg.gamma < opt.min_gamma)
    cfg = MpcConfig::make(n_words, opt.epsilon, opt.min_gamma);
  Engine eng(cfg, seed);
  const MachineRange input = std::visit(
      [&](const auto& x) { return distribute(eng, x, opt.dist, seed); }, inst);

  const std::uint64_t before_transform = eng.rounds();
  TransformResult tr = red.transform(eng, input, meta);
  RunResult res;
  res.rounds_transform = eng.rounds() - before_transform;
  res.sub_count = tr.subs.size();
  res.sub_nodes = tr.sub_nodes;
  res.sub_edges = tr.sub_edges;
  res.sub_weight = tr.sub_weight;
  res.demand_words = demand;

  std::map<MachineId, std::vector<Word>> streams;
  std::map<MachineId, std::uint64_t> cursors;
  for (const SubInstance& sub : tr.subs) {
    auto it = streams.find(sub.data.first);
    if (it == streams.end())
      it = streams.emplace(sub.data.first, eng.peek_range(sub.data)).first;
    const std::vector<Word>& words = it->second;
    const bool successor_shaped = takes_successors(sub.tag);
    std::uint64_t offset = sub.offset;
    std::uint64_t length = sub.length;
    if (length == 0) {
      offset = cursors[sub.data.first];
      const std::uint64_t head =
          successor_shaped ? sub_ord_header_words : sub_graph_header_words;
      if (offset + head > words.size())
        throw Error("sub stream ended inside a header");
      length = successor_shaped ? sub_ord_words(words[offset])
                                : sub_graph_words(words[offset + 1]);
      cursors[sub.data.first] = offset + length;
    }
    if (offset + length > words.size())
      throw Error("sub window exceeds the packed stream");
    const std::span<const Word> window(words.data() + offset, length);
    Instance posed;
    Word sub_nodes = 0;
    if (successor_shaped) {
      SuccessorList sl = decode_sub_ord(window);
      sub_nodes = sl.n;
      posed = std::move(sl);
    } else {
      GraphInstance g = decode_sub_graph(window, sub.weighted);
      sub_nodes = g.n;
      posed = std::move(g);
    }
    poke_answer(eng, sub, sub_nodes, solver.solve(sub.tag, posed));
  }

  const std::uint64_t before_extract = eng.rounds();
  res.answer = red.extract(eng, tr, meta);
  res.rounds_extract = eng.rounds() - before_extract;
  red.assert_growth(tr, meta, demand);
  res.cost = eng.report();
  return res;
}

}  // namespace

Answer OracleSolver::solve(ProblemTag tag, const Instance& inst) {
  auto key = solver_key(tag, inst);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Answer a = solve_by_oracle(tag, inst);
  memo_.emplace(std::move(key), a);
  return a;
}

Answer ChainedSolver::solve(ProblemTag tag, const Instance& inst) {
  auto key = solver_key(tag, inst);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Meta meta = meta_of(inst);
  const Reduction* red = chain_for(tag);
  bool chain =
      red != nullptr && meta.n >= 2 && meta.n <= 12 && red->applicable(meta);
  Answer a;
  if (chain) {
    RunOptions opt;
    opt.seed = seed_;
    OracleSolver inner;
    a = run_reduction(*red, inst, opt, inner).answer;
  } else {
    a = solve_by_oracle(tag, inst);
  }
  memo_.emplace(std::move(key), a);
  return a;
}

RunResult run_reduction(const Reduction& red, const Instance& inst,
                        const RunOptions& opt, Solver& solver) {
  Meta meta = meta_of(inst);
  meta.trials = opt.trials;
  if (!red.applicable(meta))
    throw BadParams("instance shape not accepted by " + red.name());
  std::visit([](const auto& x) { validate(x); }, inst);
  for (int attempt = 0;; ++attempt) {
    try {
      RunResult r =
          run_once(red, inst, meta, opt, solver, opt.seed + std::uint64_t(attempt));
      r.retries_used = attempt;
      return r;
    } catch (const UniquenessFailure&) {
      if (attempt >= opt.retries) throw;
    }
  }
}

bool answers_match(ProblemTag source, const Instance& inst, const Answer& got,
                   const Answer& want) {
  if (source != ProblemTag::mincut) return got == want;
  if (got.kind != AnswerKind::partition || want.kind != AnswerKind::partition)
    return false;
  if (got.value != want.value) return false;
  const auto* g = std::get_if<GraphInstance>(&inst);
  if (g == nullptr || got.items.size() != std::size_t(g->n)) return false;
  bool any0 = false;
  bool any1 = false;
  for (Word b : got.items) {
    if (b != 0 && b != 1) return false;
    (b != 0 ? any1 : any0) = true;
  }
  if (!any0 || !any1) return false;
  return crossing_weight(*g, got.items) == got.value;
}

std::string answer_to_string(const Answer& a) {
  std::ostringstream out;
  auto join = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < a.items.size(); i += step) {
      if (i > begin) out << ',';
      out << a.items[i];
      for (std::size_t j = 1; j < step; ++j) out << ':' << a.items[i + j];
    }
  };
  switch (a.kind) {
    case AnswerKind::boolean:
      return a.value != 0 ? "yes" : "no";
    case AnswerKind::integer:
      out << "number:" << a.value;
      break;
    case AnswerKind::labels:
      out << "count:" << a.value << ";labels:";
      join(0, 1);
      break;
    case AnswerKind::values:
      out << "values:";
      join(0, 1);
      break;
    case AnswerKind::edge_set:
      out << "total:" << a.value << ";edges:";
      join(0, 3);
      break;
    case AnswerKind::partition:
      out << "cut:" << a.value << ";side:";
      join(0, 1);
      break;
  }
  return out.str();
}

namespace {

double unit_draw(std::uint64_t x) {
  return double(x >> 11) / double(std::uint64_t(1) << 53);
}

/// Size draw biased toward small instances (cube of a uniform draw).
Word draw_size(std::uint64_t seed, Word lo, Word hi) {
  const double u = unit_draw(mix64(seed, 0xa1));
  const double c = u * u * u;
  const Word n = lo + Word(double(hi - lo + 1) * c);
  return std::min(n, hi);
}

Word draw_in(std::uint64_t seed, std::uint64_t salt, Word lo, Word hi) {
  if (hi <= lo) return lo;
  return lo + Word(mix64(seed, salt) % std::uint64_t(hi - lo + 1));
}

/// Connected-leaning unweighted simple graph under a degree cap: a random
/// spanning tree over a seeded node order plus extra non-repeating edges.
GraphInstance capped_sparse_graph(std::uint64_t seed, Word n, Word extra,
                                  Word degree_cap, bool keep_connected) {
  GraphInstance g;
  g.n = n;
  std::vector<Word> deg(std::size_t(n), 0);
  std::vector<std::pair<Word, Word>> seen;
  auto add = [&](Word u, Word v) {
    const Word lo = std::min(u, v);
    const Word hi = std::max(u, v);
    if (lo == hi) return false;
    if (deg[std::size_t(lo)] >= degree_cap || deg[std::size_t(hi)] >= degree_cap)
      return false;
    if (std::find(seen.begin(), seen.end(), std::make_pair(lo, hi)) !=
        seen.end())
      return false;
    seen.emplace_back(lo, hi);
    ++deg[std::size_t(lo)];
    ++deg[std::size_t(hi)];
    g.edges.push_back({lo, hi, 1});
    return true;
  };
  if (keep_connected) {
    for (Word v = 1; v < n; ++v) {
      for (std::uint64_t t = 0;; ++t) {
        const Word u = draw_in(seed, 0x500 + 31 * std::uint64_t(v) + t, 0, v - 1);
        if (add(u, v)) break;
        if (t > 64) {
          add(v - 1, v);
          break;
        }
      }
    }
  }
  for (Word e = 0; extra > 0 && e < 8 * extra; ++e) {
    if (Word(g.m()) >= (keep_connected ? n - 1 + extra : extra)) break;
    const Word u = draw_in(seed, 0x900 + 2 * std::uint64_t(e), 0, n - 1);
    const Word v = draw_in(seed, 0x901 + 2 * std::uint64_t(e), 0, n - 1);
    add(u, v);
  }
  validate(g);
  return g;
}

/// Query endpoints drawn uniformly; may coincide, which stays a legal query.
void draw_query(std::uint64_t seed, Word n, Word& s, Word& t) {
  s = draw_in(seed, 0xd1, 0, n - 1);
  t = draw_in(seed, 0xd2, 0, n - 1);
}

}  // namespace

Instance sample_instance(const Reduction& red, std::uint64_t seed, Word n_lo,
                         Word n_hi) {
  const std::string name = red.name();
  const Word n = std::max<Word>(draw_size(seed, n_lo, n_hi), 2);

  if (name == "ord-to-cycles") {
    GenParams params;
    params.n = std::max<Word>(n, 4);
    SuccessorList sl = generate_successors(params, mix64(seed, 0x10));
    std::vector<Word> order;
    Word source = 0;
    std::vector<char> has_pred(std::size_t(sl.n), 0);
    for (Word v = 0; v < sl.n; ++v)
      if (sl.succ[std::size_t(v)] < sl.n) has_pred[std::size_t(sl.succ[v])] = 1;
    for (Word v = 0; v < sl.n; ++v)
      if (!has_pred[std::size_t(v)]) source = v;
    for (Word v = source; v != sl.n; v = sl.succ[std::size_t(v)])
      order.push_back(v);
    const Word interior = Word(order.size()) - 2;
    const Word pa = 1 + draw_in(seed, 0x11, 0, interior - 1);
    Word pb = 1 + draw_in(seed, 0x12, 0, interior - 2);
    if (pb >= pa) ++pb;
    sl.a = order[std::size_t(pa)];
    sl.b = order[std::size_t(pb)];
    return sl;
  }

  if (name == "list-ranking-via-ord") {
    GenParams params;
    params.n = n;
    return generate_successors(params, mix64(seed, 0x20));
  }

  if (name == "cc-via-stconn" || name == "stconn-to-bipartiteness") {
    GraphInstance g;
    switch (mix64(seed, 0x30) % 4) {
      case 0: {
        GenParams params;
        params.n = n;
        params.p = std::min(1.0, 1.4 / double(n));
        g = generate_graph(Family::gnp, params, mix64(seed, 0x31));
        break;
      }
      case 1: {
        GenParams params;
        params.n = n;
        params.m = std::max<Word>(1, n + Word(mix64(seed, 0x32) % 8) - 3);
        params.min_weight = 1;
        params.max_weight = 1;
        g = generate_graph(Family::gnm_weighted, params, mix64(seed, 0x33));
        g.weighted = false;
        g.max_weight = 1;
        break;
      }
      case 2: {
        GenParams params;
        params.rows = std::max<Word>(2, n / 4);
        params.cols = 3;
        g = generate_graph(Family::grid, params, mix64(seed, 0x34));
        break;
      }
      default: {
        GenParams params;
        params.n = std::max<Word>(n, 3);
        g = generate_graph(Family::one_cycle, params, mix64(seed, 0x35));
        break;
      }
    }
    if (name == "stconn-to-bipartiteness") draw_query(seed, g.n, g.s, g.t);
    return g;
  }

  if (name == "bipartiteness-to-stconn") {
    switch (mix64(seed, 0x40) % 3) {
      case 0: {
        GenParams params;
        params.n = n;
        params.m = n + Word(mix64(seed, 0x41) % std::uint64_t(n));
        return generate_graph(Family::random_bipartite, params,
                              mix64(seed, 0x42));
      }
      case 1: {
        GenParams params;
        params.n = std::max<Word>(n, 3);
        return generate_graph(Family::one_cycle, params, mix64(seed, 0x43));
      }
      default: {
        GenParams params;
        params.n = n;
        params.p = std::min(1.0, 1.6 / double(n));
        return generate_graph(Family::gnp, params, mix64(seed, 0x44));
      }
    }
  }

  if (name == "msf-via-stconn") {
    GenParams params;
    params.n = n;
    params.m = std::max<Word>(1, Word(std::uint64_t(n) * 3 / 2));
    params.min_weight = 1;
    params.max_weight = 1 + Word(mix64(seed, 0x50) % 9);
    return generate_graph(Family::gnm_weighted, params, mix64(seed, 0x51));
  }

  if (name == "mincut-via-cc") {
    const Word nn = std::clamp<Word>(n, 4, 16);
    const Word cap = 6;
    const Word extra =
        std::min<Word>(Word(mix64(seed, 0x60) % std::uint64_t(nn)),
                       std::min<Word>(2 * nn, 24) - (nn - 1));
    const bool connected = mix64(seed, 0x61) % 10 != 0;
    return capped_sparse_graph(mix64(seed, 0x62), nn, extra, cap, connected);
  }

  if (name == "streach-to-sp") {
    GenParams params;
    params.n = n;
    params.directed = true;
    params.p = std::min(1.0, 1.6 / double(n));
    GraphInstance g = generate_graph(Family::gnp, params, mix64(seed, 0x70));
    draw_query(seed, g.n, g.s, g.t);
    return g;
  }

  if (name == "sp-to-streach") {
    GenParams params;
    params.n = n;
    params.p = std::min(1.0, 1.5 / double(n));
    GraphInstance g = generate_graph(Family::gnp, params, mix64(seed, 0x80));
    draw_query(seed, g.n, g.s, g.t);
    return g;
  }

  if (name == "sp-to-diameter" || name == "sp-to-radius" ||
      name == "sp-to-median" || name == "apsp-via-sp") {
    GenParams params;
    params.n = n;
    params.directed = mix64(seed, 0x90) % 3 == 0;
    const bool weighted = mix64(seed, 0x91) % 2 == 0;
    GraphInstance g;
    if (weighted) {
      params.m = std::max<Word>(1, n + Word(mix64(seed, 0x92) % 8) - 2);
      params.min_weight = 1;
      params.max_weight = 1 + Word(mix64(seed, 0x93) % 7);
      g = generate_graph(Family::gnm_weighted, params, mix64(seed, 0x94));
    } else {
      params.p = std::min(1.0, 1.5 / double(n));
      g = generate_graph(Family::gnp, params, mix64(seed, 0x95));
    }
    if (name != "apsp-via-sp") draw_query(seed, g.n, g.s, g.t);
    return g;
  }

  if (name == "sp-to-betweenness") {
    for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
      const std::uint64_t draw = mix64(seed, 0xb0 + attempt);
      GraphInstance g;
      if (draw % 3 == 0) {
        GenParams params;
        params.n = n;
        params.p = std::min(1.0, 1.4 / double(n));
        params.directed = draw % 6 == 0;
        g = generate_graph(Family::gnp, params, mix64(seed, 0xb1 + attempt));
      } else {
        GenParams params;
        params.n = n;
        params.m = std::min<Word>(std::max<Word>(1, n + Word(draw % 16) - 4),
                                  3 * n);
        params.min_weight = 1;
        params.max_weight = 1 + Word(mix64(seed, 0xb2 + attempt) % 4);
        params.degree_cap = 6;
        params.directed = draw % 7 == 0;
        g = generate_graph(Family::gnm_weighted, params,
                           mix64(seed, 0xb3 + attempt));
      }
      bool capped = true;
      std::vector<Word> deg(std::size_t(g.n), 0);
      for (const Edge& e : g.edges) {
        ++deg[std::size_t(e.u)];
        ++deg[std::size_t(e.v)];
      }
      for (Word d : deg) capped = capped && d <= 6;
      if (!capped) continue;
      draw_query(seed, g.n, g.s, g.t);
      if (g.s == g.t) continue;
      if (centrality_run_clean(g, seed)) return g;
    }
    throw BadParams("no clean centrality instance found for this seed");
  }

  throw BadParams("no sampler for reduction '" + name + "'");
}

std::uint64_t Report::pass_count() const {
  std::uint64_t pass = 0;
  for (const TrialRecord& r : records) pass += r.match ? 1 : 0;
  return pass;
}

std::string Report::render() const {
  std::ostringstream out;
  for (const auto& [k, v] : config) out << "config." << k << " = " << v << "\n";
  std::map<std::uint64_t, std::uint64_t> hist;
  for (const TrialRecord& r : records) {
    const std::string p = "trial." + std::to_string(r.index) + ".";
    out << p << "n = " << r.n << "\n";
    out << p << "m = " << r.m << "\n";
    out << p << "dist = " << to_string(r.dist) << "\n";
    out << p << "seed = " << r.seed << "\n";
    if (r.error.empty()) {
      out << p << "rounds_transform = " << r.run.rounds_transform << "\n";
      out << p << "rounds_extract = " << r.run.rounds_extract << "\n";
      out << p << "subs = " << r.run.sub_count << "\n";
      out << r.run.cost.to_kv(p + "cost.");
      out << p << "answer = " << r.answer << "\n";
      out << p << "oracle = " << r.oracle_answer << "\n";
      ++hist[r.run.rounds_transform + r.run.rounds_extract];
    } else {
      out << p << "error = " << r.error << "\n";
    }
    out << p << "match = " << (r.match ? 1 : 0) << "\n";
  }
  out << "summary.trials = " << records.size() << "\n";
  out << "summary.pass = " << pass_count() << "\n";
  for (const auto& [rounds, count] : hist)
    out << "summary.rounds." << rounds << " = " << count << "\n";
  return out.str();
}

Report verify_reduction(const Reduction& red, const VerifySpec& spec,
                        Solver& solver) {
  Report rep;
  std::ostringstream eps;
  eps << spec.opt.epsilon;
  rep.config = {{"reduction", red.name()},
                {"source", to_string(red.source())},
                {"target", to_string(red.target())},
                {"epsilon", eps.str()},
                {"solver", solver.name()},
                {"trials", std::to_string(spec.trials)},
                {"n_lo", std::to_string(spec.n_lo)},
                {"n_hi", std::to_string(spec.n_hi)},
                {"seed", std::to_string(spec.opt.seed)}};
  for (std::uint64_t i = 0; i < spec.trials; ++i) {
    TrialRecord rec;
    rec.index = i;
    RunOptions opt = spec.opt;
    opt.seed = spec.opt.seed + i * 7919;
    if (spec.both_dists && i % 2 == 1) opt.dist = DistMode::shuffle;
    rec.seed = opt.seed;
    rec.dist = opt.dist;
    try {
      const Instance inst = sample_instance(red, opt.seed, spec.n_lo, spec.n_hi);
      const Meta meta = meta_of(inst);
      rec.n = meta.n;
      rec.m = meta.m;
      const Answer want = solve_by_oracle(red.source(), inst);
      rec.run = run_reduction(red, inst, opt, solver);
      rec.answer = answer_to_string(rec.run.answer);
      rec.oracle_answer = answer_to_string(want);
      rec.match = answers_match(red.source(), inst, rec.run.answer, want);
    } catch (const Error& e) {
      rec.error = e.what();
      rec.match = false;
    }
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace mpc
