#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mpc/reduction.hpp"

namespace mpc {

/// Answers posed sub-instances. Implementations must be deterministic so
/// reruns of a seeded trial reproduce bit for bit.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string name() const = 0;
  virtual Answer solve(ProblemTag tag, const Instance& inst) = 0;
};

/// Solves every sub directly with the reference algorithms, memoized on the
/// full posed instance: grids of identical subs cost one real solve.
class OracleSolver : public Solver {
 public:
  std::string name() const override { return "oracle"; }
  Answer solve(ProblemTag tag, const Instance& inst) override;

 private:
  std::map<std::vector<Word>, Answer> memo_;
};

/// Routes small subs through a second registered reduction (whose own subs
/// are answered by the reference algorithms) and the rest directly.
/// Exercises two-level composition end to end.
class ChainedSolver : public Solver {
 public:
  explicit ChainedSolver(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "chained"; }
  Answer solve(ProblemTag tag, const Instance& inst) override;

 private:
  std::uint64_t seed_ = 1;
  std::map<std::vector<Word>, Answer> memo_;
};

struct RunOptions {
  double epsilon = 0.5;
  double min_gamma = 0.0;
  DistMode dist = DistMode::round_robin;
  std::uint64_t seed = 1;
  Word trials = 0;  ///< contraction trial count; 0 lets the reduction pick
  int retries = 8;  ///< reruns allowed after a uniqueness failure
};

struct RunResult {
  Answer answer;
  std::uint64_t rounds_transform = 0;
  std::uint64_t rounds_extract = 0;
  std::uint64_t sub_count = 0;
  Word sub_nodes = 0;
  Word sub_edges = 0;
  Word sub_weight = 0;
  std::uint64_t demand_words = 0;
  int retries_used = 0;
  CostReport cost;
};

/// Full pipeline on a fresh engine: distribute, transform, solve every sub,
/// poke the answers back, extract, and re-check the growth bounds. Retries
/// with stepped seeds on UniquenessFailure, rethrowing after the budget.
RunResult run_reduction(const Reduction& red, const Instance& inst,
                        const RunOptions& opt, Solver& solver);

/// Whether `got` is an acceptable answer next to the reference `want`.
/// Exact equality everywhere except cuts, where any bipartition realizing
/// the optimal weight passes.
bool answers_match(ProblemTag source, const Instance& inst, const Answer& got,
                   const Answer& want);

std::string answer_to_string(const Answer& a);

/// Deterministic per-reduction instance sampler used by the command line
/// and the acceptance suite. Draws the family, size, and query from the
/// seed, honoring the reduction's preconditions; the same seed must be
/// used for the run itself.
Instance sample_instance(const Reduction& red, std::uint64_t seed, Word n_lo,
                         Word n_hi);

/// One verification trial: instance shape, the run's costs, both answers.
struct TrialRecord {
  std::uint64_t index = 0;
  Word n = 0;
  Word m = 0;
  DistMode dist = DistMode::round_robin;
  std::uint64_t seed = 0;
  RunResult run;
  std::string answer;
  std::string oracle_answer;
  bool match = false;
  std::string error;  ///< error type and message; empty on a clean run
};

/// Flat, stably keyed text report: config echo, one block per trial, and a
/// pass count plus total-round histogram at the end.
struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<TrialRecord> records;

  std::uint64_t pass_count() const;
  std::string render() const;
};

struct VerifySpec {
  std::uint64_t trials = 20;
  Word n_lo = 4;
  Word n_hi = 32;
  bool both_dists = true;  ///< alternate record order between trials
  RunOptions opt;
};

/// Samples, runs, and scores `trials` instances against the reference
/// answers. Run errors are captured per trial, never thrown.
Report verify_reduction(const Reduction& red, const VerifySpec& spec,
                        Solver& solver);

}  // namespace mpc
