#include "mpc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>
#include <sstream>

namespace mpc {
namespace {

std::mt19937_64 seeded(std::uint64_t seed) {
  return std::mt19937_64(mix64(seed, 0x6772617068ull));
}

Word uniform(std::mt19937_64& rng, Word lo, Word hi) {
  return std::uniform_int_distribution<Word>(lo, hi)(rng);
}

/// Random node labeling so structure never correlates with id order.
std::vector<Word> label_permutation(Word n, std::mt19937_64& rng) {
  std::vector<Word> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

GraphInstance cycles_from_lengths(const std::vector<Word>& lengths,
                                  std::mt19937_64& rng) {
  Word n = 0;
  for (Word len : lengths) {
    if (len < 1) throw BadParams("cycle length must be at least 1");
    n += len;
  }
  if (n == 0) throw BadParams("no cycles requested");
  if (n > max_nodes) throw BadParams("instance too large");
  auto perm = label_permutation(n, rng);
  GraphInstance g;
  g.n = n;
  Word base = 0;
  for (Word len : lengths) {
    for (Word i = 0; i < len; ++i) {
      Word u = perm[base + i];
      Word v = perm[base + (i + 1) % len];
      if (len == 2 && i == 1) std::swap(u, v);
      g.edges.push_back({u, v, 1});
    }
    base += len;
  }
  validate(g);
  return g;
}

GraphInstance gen_gnp(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 1 || p.n > max_nodes) throw BadParams("gnp: bad n");
  if (p.p < 0.0 || p.p > 1.0) throw BadParams("gnp: p outside [0, 1]");
  GraphInstance g;
  g.n = p.n;
  g.directed = p.directed;
  std::bernoulli_distribution coin(p.p);
  for (Word u = 0; u < p.n; ++u)
    for (Word v = p.directed ? Word(0) : u + 1; v < p.n; ++v) {
      if (u == v) continue;
      if (coin(rng)) g.edges.push_back({u, v, 1});
    }
  validate(g);
  return g;
}

GraphInstance gen_gnm(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 2 || p.n > max_nodes) throw BadParams("gnm: need n >= 2");
  if (p.m < 0) throw BadParams("gnm: bad m");
  if (p.min_weight < 0 || p.max_weight < p.min_weight)
    throw BadParams("gnm: bad weight range");
  if (p.degree_cap > 0 && p.m > p.degree_cap * p.n / 2)
    throw BadParams("gnm: m unreachable under degree cap");
  GraphInstance g;
  g.n = p.n;
  g.directed = p.directed;
  g.weighted = true;
  g.max_weight = p.max_weight;
  std::vector<Word> deg(p.n, 0);
  std::uint64_t attempts = 0;
  while (Word(g.edges.size()) < p.m) {
    if (++attempts > 1000 * std::uint64_t(p.m) + 1000)
      throw PromiseViolation("gnm: degree cap kept rejecting samples");
    Word u = uniform(rng, 0, p.n - 1);
    Word v = uniform(rng, 0, p.n - 2);
    if (v >= u) ++v;
    if (p.degree_cap > 0 &&
        (deg[u] >= p.degree_cap || deg[v] >= p.degree_cap))
      continue;
    Word w = uniform(rng, p.min_weight, p.max_weight);
    g.edges.push_back({u, v, w});
    ++deg[u];
    ++deg[v];
  }
  validate(g);
  return g;
}

GraphInstance gen_grid(const GenParams& p, std::mt19937_64& rng) {
  if (p.rows < 1 || p.cols < 1) throw BadParams("grid: need rows, cols >= 1");
  if (p.rows * p.cols > max_nodes) throw BadParams("grid too large");
  if (p.weighted && (p.min_weight < 0 || p.max_weight < p.min_weight))
    throw BadParams("grid: bad weight range");
  GraphInstance g;
  g.n = p.rows * p.cols;
  g.weighted = p.weighted;
  g.max_weight = p.weighted ? p.max_weight : 1;
  auto id = [&](Word r, Word c) { return r * p.cols + c; };
  auto weight = [&] {
    return p.weighted ? uniform(rng, p.min_weight, p.max_weight) : Word(1);
  };
  for (Word r = 0; r < p.rows; ++r)
    for (Word c = 0; c < p.cols; ++c) {
      if (c + 1 < p.cols) g.edges.push_back({id(r, c), id(r, c + 1), weight()});
      if (r + 1 < p.rows) g.edges.push_back({id(r, c), id(r + 1, c), weight()});
    }
  validate(g);
  return g;
}

GraphInstance gen_bipartite(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 2 || p.n > max_nodes) throw BadParams("bipartite: need n >= 2");
  if (p.m < 0) throw BadParams("bipartite: bad m");
  std::vector<Word> side(p.n);
  for (Word i = 0; i < p.n; ++i) side[i] = Word(rng() & 1);
  side[0] = 0;
  side[p.n - 1] = 1;
  std::vector<Word> left, right;
  for (Word i = 0; i < p.n; ++i) (side[i] == 0 ? left : right).push_back(i);
  GraphInstance g;
  g.n = p.n;
  for (Word e = 0; e < p.m; ++e) {
    Word u = left[std::size_t(uniform(rng, 0, Word(left.size()) - 1))];
    Word v = right[std::size_t(uniform(rng, 0, Word(right.size()) - 1))];
    g.edges.push_back({u, v, 1});
  }
  validate(g);
  return g;
}

SuccessorList gen_successor_path(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 1 || p.n > max_nodes) throw BadParams("successor_path: bad n");
  auto perm = label_permutation(p.n, rng);
  SuccessorList sl;
  sl.n = p.n;
  sl.succ.assign(p.n, p.n);
  for (Word i = 0; i + 1 < p.n; ++i) sl.succ[perm[i]] = perm[i + 1];
  validate(sl);
  validate_path(sl);
  return sl;
}

/// Line-oriented integer scanner with 1-based line numbers for errors.
struct LineReader {
  std::istringstream in;
  std::size_t line = 0;

  explicit LineReader(const std::string& text) : in(text) {}

  /// Next non inner whitespace line split into tokens; empty at EOF.
  std::vector<std::string> next() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line;
      std::vector<std::string> toks;
      std::istringstream ls(raw);
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    return {};
  }
};

Word parse_word(const std::string& tok, std::size_t line) {
  Word out = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  return out;
}

}  // namespace

const char* to_string(AnswerKind k) {
  switch (k) {
    case AnswerKind::boolean: return "boolean";
    case AnswerKind::integer: return "integer";
    case AnswerKind::labels: return "labels";
    case AnswerKind::values: return "values";
    case AnswerKind::edge_set: return "edge_set";
    case AnswerKind::partition: return "partition";
  }
  return "?";
}

const char* to_string(Family f) {
  switch (f) {
    case Family::one_cycle: return "one-cycle";
    case Family::two_cycles: return "two-cycles";
    case Family::union_of_cycles: return "union-of-cycles";
    case Family::successor_path: return "successor-path";
    case Family::gnp: return "gnp";
    case Family::gnm_weighted: return "gnm-weighted";
    case Family::grid: return "grid";
    case Family::random_bipartite: return "random-bipartite";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family f :
       {Family::one_cycle, Family::two_cycles, Family::union_of_cycles,
        Family::successor_path, Family::gnp, Family::gnm_weighted,
        Family::grid, Family::random_bipartite})
    if (name == to_string(f)) return f;
  throw BadParams("unknown family '" + name + "'");
}

const char* to_string(DistMode d) {
  return d == DistMode::round_robin ? "round-robin" : "shuffle";
}

Instance generate(Family f, const GenParams& params, std::uint64_t seed) {
  auto rng = seeded(seed);
  switch (f) {
    case Family::one_cycle:
      if (params.n < 3) throw BadParams("one_cycle: need n >= 3");
      return cycles_from_lengths({params.n}, rng);
    case Family::two_cycles:
      if (params.split < 1 || params.split >= params.n)
        throw BadParams("two_cycles: split outside [1, n-1]");
      return cycles_from_lengths({params.split, params.n - params.split}, rng);
    case Family::union_of_cycles:
      return cycles_from_lengths(params.lengths, rng);
    case Family::successor_path: return gen_successor_path(params, rng);
    case Family::gnp: return gen_gnp(params, rng);
    case Family::gnm_weighted: return gen_gnm(params, rng);
    case Family::grid: return gen_grid(params, rng);
    case Family::random_bipartite: return gen_bipartite(params, rng);
  }
  throw BadParams("unknown family");
}

GraphInstance generate_graph(Family f, const GenParams& params,
                             std::uint64_t seed) {
  Instance inst = generate(f, params, seed);
  if (auto* g = std::get_if<GraphInstance>(&inst)) return std::move(*g);
  throw BadParams("family does not produce a graph");
}

SuccessorList generate_successors(const GenParams& params,
                                  std::uint64_t seed) {
  return std::get<SuccessorList>(
      generate(Family::successor_path, params, seed));
}

void validate(const GraphInstance& g) {
  if (g.n < 0 || g.n > max_nodes)
    throw RangeError("node count " + std::to_string(g.n) + " out of range");
  if (g.max_weight < 0) throw RangeError("negative weight bound");
  for (const Edge& e : g.edges) {
    if (e.u < 0 || e.u >= g.n || e.v < 0 || e.v >= g.n)
      throw RangeError("edge endpoint out of range");
    if (e.w < 0) throw NegativeWeight("edge weight below zero");
    if (e.w > g.max_weight)
      throw RangeError("edge weight above the declared bound");
    if (!g.weighted && e.w != 1)
      throw RangeError("unweighted instance with a non unit weight");
  }
  if (g.s != -1 && (g.s < 0 || g.s >= g.n)) throw RangeError("bad source id");
  if (g.t != -1 && (g.t < 0 || g.t >= g.n)) throw RangeError("bad target id");
}

void validate(const SuccessorList& sl) {
  if (sl.n < 1 || sl.n > max_nodes)
    throw RangeError("node count " + std::to_string(sl.n) + " out of range");
  if (Word(sl.succ.size()) != sl.n)
    throw RangeError("successor array length mismatch");
  for (Word s : sl.succ)
    if (s < 0 || s > sl.n) throw RangeError("successor id out of range");
  for (Word q : {sl.a, sl.b})
    if (q != -1 && (q < 0 || q >= sl.n))
      throw RangeError("query node out of range");
}

void validate_path(const SuccessorList& sl) {
  validate(sl);
  std::vector<Word> indeg(sl.n, 0);
  Word sinks = 0;
  for (Word i = 0; i < sl.n; ++i) {
    if (sl.succ[i] == sl.n) {
      ++sinks;
    } else if (++indeg[sl.succ[i]] > 1) {
      throw PromiseViolation("node with two predecessors");
    }
  }
  if (sinks != 1) throw PromiseViolation("path needs exactly one sink");
  Word source = -1;
  for (Word i = 0; i < sl.n; ++i)
    if (indeg[i] == 0) {
      if (source != -1) throw PromiseViolation("path needs a single source");
      source = i;
    }
  if (source == -1) throw PromiseViolation("no source node");
  Word seen = 0;
  for (Word cur = source; cur != sl.n; cur = sl.succ[cur]) ++seen;
  if (seen != sl.n) throw PromiseViolation("walk does not cover every node");
}

GraphInstance canonical(GraphInstance g) {
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

GraphInstance load_graph(const std::string& text) {
  LineReader rd(text);
  auto head = rd.next();
  if (head.size() != 4)
    throw ParseError(rd.line ? rd.line : 1, "header must be 'n m D W'");
  GraphInstance g;
  g.n = parse_word(head[0], rd.line);
  Word m = parse_word(head[1], rd.line);
  Word d = parse_word(head[2], rd.line);
  Word w = parse_word(head[3], rd.line);
  if (m < 0) throw ParseError(rd.line, "negative edge count");
  if (d != 0 && d != 1) throw ParseError(rd.line, "D flag must be 0 or 1");
  if (w != 0 && w != 1) throw ParseError(rd.line, "W flag must be 0 or 1");
  g.directed = d == 1;
  g.weighted = w == 1;
  const std::size_t want = g.weighted ? 3 : 2;
  Word seen_max = g.weighted ? 0 : 1;
  for (Word i = 0; i < m; ++i) {
    auto toks = rd.next();
    if (toks.empty()) throw ParseError(rd.line + 1, "missing edge line");
    if (toks.size() != want)
      throw ParseError(rd.line, g.weighted ? "edge line must be 'u v w'"
                                           : "edge line must be 'u v'");
    Edge e;
    e.u = parse_word(toks[0], rd.line);
    e.v = parse_word(toks[1], rd.line);
    e.w = g.weighted ? parse_word(toks[2], rd.line) : 1;
    if (e.u < 0 || e.u >= g.n || e.v < 0 || e.v >= g.n)
      throw RangeError("line " + std::to_string(rd.line) +
                       ": node id outside [0, n)");
    if (e.w < 0)
      throw NegativeWeight("line " + std::to_string(rd.line) +
                           ": negative weight");
    seen_max = std::max(seen_max, e.w);
    g.edges.push_back(e);
  }
  if (!rd.next().empty())
    throw ParseError(rd.line, "content after the last edge");
  g.max_weight = std::max<Word>(seen_max, 1);
  validate(g);
  return g;
}

std::string save_graph(const GraphInstance& g) {
  GraphInstance c = canonical(g);
  std::ostringstream out;
  out << c.n << ' ' << c.m() << ' ' << (c.directed ? 1 : 0) << ' '
      << (c.weighted ? 1 : 0) << '\n';
  for (const Edge& e : c.edges) {
    out << e.u << ' ' << e.v;
    if (c.weighted) out << ' ' << e.w;
    out << '\n';
  }
  return out.str();
}

SuccessorList load_successors(const std::string& text) {
  LineReader rd(text);
  auto head = rd.next();
  if (head.size() != 1)
    throw ParseError(rd.line ? rd.line : 1, "header must be 'n'");
  SuccessorList sl;
  sl.n = parse_word(head[0], rd.line);
  if (sl.n < 1) throw ParseError(rd.line, "need at least one node");
  sl.succ.assign(std::size_t(sl.n), -1);
  std::vector<bool> seen(std::size_t(sl.n), false);
  for (Word i = 0; i < sl.n; ++i) {
    auto toks = rd.next();
    if (toks.empty()) throw ParseError(rd.line + 1, "missing successor line");
    if (toks.size() != 2) throw ParseError(rd.line, "line must be 'i s_i'");
    Word node = parse_word(toks[0], rd.line);
    Word nxt = parse_word(toks[1], rd.line);
    if (node < 0 || node >= sl.n)
      throw RangeError("line " + std::to_string(rd.line) +
                       ": node id outside [0, n)");
    if (seen[std::size_t(node)])
      throw ParseError(rd.line, "node listed twice");
    seen[std::size_t(node)] = true;
    if (nxt == no_successor) {
      sl.succ[std::size_t(node)] = sl.n;
    } else if (nxt < 0 || nxt >= sl.n) {
      throw RangeError("line " + std::to_string(rd.line) +
                       ": successor outside [0, n)");
    } else {
      sl.succ[std::size_t(node)] = nxt;
    }
  }
  if (!rd.next().empty())
    throw ParseError(rd.line, "content after the last node");
  validate(sl);
  return sl;
}

std::string save_successors(const SuccessorList& sl) {
  std::ostringstream out;
  out << sl.n << '\n';
  for (Word i = 0; i < sl.n; ++i)
    out << i << ' ' << (sl.succ[std::size_t(i)] == sl.n ? no_successor
                                                        : sl.succ[std::size_t(i)])
        << '\n';
  return out.str();
}

std::vector<Word> encode(const GraphInstance& g) {
  std::vector<Word> out;
  out.reserve(2 + 3 * g.edges.size());
  out.push_back(g.n);
  out.push_back(g.m());
  for (const Edge& e : g.edges) {
    out.push_back(e.u);
    out.push_back(e.v);
    out.push_back(e.w);
  }
  return out;
}

std::vector<Word> encode(const SuccessorList& sl) {
  std::vector<Word> out;
  out.reserve(1 + 2 * sl.succ.size());
  out.push_back(sl.n);
  for (Word i = 0; i < sl.n; ++i) {
    out.push_back(i);
    out.push_back(sl.succ[std::size_t(i)]);
  }
  return out;
}

GraphInstance decode_graph(std::span<const Word> words, bool directed,
                           bool weighted) {
  if (words.size() < 2 || (words.size() - 2) % 3 != 0)
    throw ParseError(1, "encoded graph length is not 2 + 3m");
  GraphInstance g;
  g.n = words[0];
  g.directed = directed;
  g.weighted = weighted;
  std::uint64_t m = (words.size() - 2) / 3;
  if (words[1] != Word(m))
    throw ParseError(1, "header edge count disagrees with the payload");
  Word seen_max = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    Edge e{words[2 + 3 * i], words[3 + 3 * i], words[4 + 3 * i]};
    seen_max = std::max(seen_max, e.w);
    g.edges.push_back(e);
  }
  g.max_weight = seen_max;
  validate(g);
  return g;
}

SuccessorList decode_successors(std::span<const Word> words) {
  if (words.empty() || (words.size() - 1) % 2 != 0)
    throw ParseError(1, "encoded successor list length is not 1 + 2n");
  SuccessorList sl;
  sl.n = words[0];
  if (sl.n < 1 || std::uint64_t(sl.n) != (words.size() - 1) / 2)
    throw ParseError(1, "header node count disagrees with the payload");
  sl.succ.assign(std::size_t(sl.n), -1);
  std::vector<bool> seen(std::size_t(sl.n), false);
  for (Word i = 0; i < sl.n; ++i) {
    Word node = words[1 + 2 * i];
    Word nxt = words[2 + 2 * i];
    if (node < 0 || node >= sl.n || seen[std::size_t(node)])
      throw ParseError(1, "bad or repeated node id in payload");
    seen[std::size_t(node)] = true;
    sl.succ[std::size_t(node)] = nxt;
  }
  validate(sl);
  return sl;
}

MachineRange distribute_words(Engine& eng, std::span<const Word> words,
                              std::uint64_t header_words,
                              std::uint64_t record_words, DistMode mode,
                              std::uint64_t seed) {
  if (words.size() < header_words ||
      (words.size() - header_words) % record_words != 0)
    throw BadParams("distribute: word count does not match the record shape");
  const std::uint64_t s = eng.config().words_per_machine;
  const std::uint64_t fill = s - 2;  // headroom: one annotation word, one routing offset
  if (header_words > fill || record_words > fill)
    throw BadParams("distribute: record larger than a machine");
  const std::uint64_t nrec = (words.size() - header_words) / record_words;

  std::vector<std::uint64_t> order(nrec);
  std::iota(order.begin(), order.end(), 0);
  if (mode == DistMode::shuffle) {
    std::mt19937_64 rng(mix64(seed, 0x73687566ull));
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<std::vector<Word>> loads;
  loads.emplace_back(words.begin(), words.begin() + header_words);
  for (std::uint64_t r : order) {
    auto rec = words.subspan(header_words + r * record_words, record_words);
    if (loads.back().size() + record_words > fill) loads.emplace_back();
    loads.back().insert(loads.back().end(), rec.begin(), rec.end());
  }

  MachineRange region = eng.provision_machines(loads.size());
  for (std::uint64_t i = 0; i < loads.size(); ++i)
    eng.poke(region.first + i, loads[i]);
  return region;
}

MachineRange distribute(Engine& eng, const GraphInstance& g, DistMode mode,
                        std::uint64_t seed) {
  auto words = encode(g);
  return distribute_words(eng, words, graph_header_words, graph_record_words,
                          mode, seed);
}

MachineRange distribute(Engine& eng, const SuccessorList& sl, DistMode mode,
                        std::uint64_t seed) {
  auto words = encode(sl);
  return distribute_words(eng, words, successor_header_words,
                          successor_record_words, mode, seed);
}

}  // namespace mpc
