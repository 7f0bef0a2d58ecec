#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mpc/base.hpp"
#include "mpc/config.hpp"

namespace mpc {

class Engine;

/// Contiguous machine range [first, first + count).
struct MachineRange {
  MachineId first = 0;
  std::uint64_t count = 0;
  MachineId end() const { return first + count; }
  bool contains(MachineId m) const { return m >= first && m < end(); }
};

/// One delivered payload; words sit at [begin, begin + count) of the
/// recipient's memory.
struct InboxEntry {
  MachineId sender = 0;
  std::uint32_t begin = 0;
  std::uint32_t count = 0;
};

/// Resource accounting for one engine run. All quantities are words except
/// rounds and machines_used. A run that would breach a budget aborts with
/// BudgetViolation instead of reporting through this struct.
struct CostReport {
  std::uint64_t rounds = 0;
  std::uint64_t max_sent = 0;
  std::uint64_t max_received = 0;
  std::uint64_t machines_used = 0;
  std::uint64_t total_words = 0;  ///< peak live words, summed over machines

  /// Flat `key = value` lines, one per field, stable order.
  std::string to_kv(const std::string& prefix = "cost.") const;
};

/// Per-machine view handed to a step function: local memory, the payloads
/// that arrived since this machine last ran, and a send/randomness interface.
class MachineIo {
 public:
  MachineId id;
  std::vector<Word>& memory;
  std::span<const InboxEntry> inbox;

  std::span<const Word> payload(const InboxEntry& e) const {
    return std::span<const Word>(memory).subspan(e.begin, e.count);
  }

  /// Queues words for `dest`; visible there next round. Throws
  /// MalformedProgram on an out-of-range address and BudgetViolation once
  /// this machine's outgoing total for the round exceeds s.
  void send(MachineId dest, std::span<const Word> words);
  void send(MachineId dest, Word w) { send(dest, std::span<const Word>(&w, 1)); }

  /// Deterministic per-(seed, machine, round, call) 64-bit stream.
  std::uint64_t rng();

 private:
  friend class Engine;
  MachineIo(Engine& e, MachineId m, std::vector<Word>& mem,
            std::span<const InboxEntry> in)
      : id(m), memory(mem), inbox(in), eng_(e) {}
  Engine& eng_;
  std::uint64_t sent_ = 0;
  std::uint64_t draws_ = 0;
};

using StepFn = std::function<void(MachineIo&)>;

/// In-flight payload, used by deliver_round and the engine's staging area.
struct Parcel {
  MachineId dest = 0;
  MachineId sender = 0;
  std::uint64_t seq = 0;  ///< emission order within the sender's round
  std::vector<Word> words;
};

/// Groups parcels by recipient, ordered canonically by (sender, emission
/// order). Throws BudgetViolation(receive) if any recipient's total exceeds
/// `words_per_machine`. `round` only labels the violation report.
std::map<MachineId, std::vector<Parcel>> deliver_round(
    std::vector<Parcel> parcels, std::uint64_t words_per_machine,
    std::uint64_t round);

/// Synchronous-round executor. Machines are materialized lazily: one exists
/// once it holds words or has mail in flight, and a step function runs on
/// exactly the live machines. Rounds count communication barriers, so a step
/// in which nobody sends is free.
class Engine {
 public:
  enum class ExecOrder { ascending, descending };

  Engine(MpcConfig cfg, std::uint64_t seed);

  const MpcConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }

  /// Reserves ceil(demand_words / s) fresh machines; contiguous, never
  /// recycled. Throws OutOfMemory once cumulative demand passes p*s.
  MachineRange provision(std::uint64_t demand_words);

  /// Reserves `count` fresh machines directly.
  MachineRange provision_machines(std::uint64_t count);

  /// Runs one superstep over every live machine, then delivers. Increments
  /// the round counter only if at least one word was sent.
  void step(const StepFn& fn);

  /// Like step() but only machines inside `ranges` execute. Machines outside
  /// keep pending inbox metadata until they next run.
  void step_on(std::span<const MachineRange> ranges, const StepFn& fn);

  /// Host-side write outside round accounting; used to load input and to
  /// inject a solver's output at the reduction boundary.
  void poke(MachineId m, std::span<const Word> words);

  /// Host-side read of a machine's memory.
  std::vector<Word> peek(MachineId m) const;

  /// Concatenated peek over a range, skipping untouched machines.
  std::vector<Word> peek_range(MachineRange r) const;

  /// All nonempty memories, keyed by machine id.
  std::map<MachineId, std::vector<Word>> snapshot() const;

  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t live_words() const { return live_words_; }
  CostReport report() const;

  void set_exec_order(ExecOrder o) { order_ = o; }

 private:
  struct Mach {
    std::vector<Word> memory;
    std::vector<InboxEntry> fresh;
  };

  friend class MachineIo;
  void stage(MachineId dest, MachineId sender, std::uint64_t seq,
             std::span<const Word> words);
  void run_machine(MachineId id, Mach& m, const StepFn& fn);
  void deliver();

  MpcConfig cfg_;
  std::uint64_t seed_;
  ExecOrder order_ = ExecOrder::ascending;
  std::map<MachineId, Mach> machines_;
  std::vector<Parcel> staging_;
  MachineId next_free_ = 0;
  std::uint64_t provisioned_words_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t step_index_ = 0;
  std::uint64_t live_words_ = 0;
  std::uint64_t peak_words_ = 0;
  std::uint64_t max_sent_ = 0;
  std::uint64_t max_received_ = 0;
};

/// Runs `steps` over `input` (word vectors loaded into machines 0, 1, ...)
/// under `cfg` and returns the nonempty final memories with the cost report.
std::pair<std::map<MachineId, std::vector<Word>>, CostReport> run_program(
    std::span<const StepFn> steps, const std::vector<std::vector<Word>>& input,
    MpcConfig cfg, std::uint64_t seed = 0);

}  // namespace mpc
