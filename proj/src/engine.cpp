#include "mpc/engine.hpp"

#include <algorithm>
#include <cassert>

namespace mpc {

std::string CostReport::to_kv(const std::string& prefix) const {
  std::string out;
  auto emit = [&](const char* k, std::uint64_t v) {
    out += prefix;
    out += k;
    out += " = ";
    out += std::to_string(v);
    out += '\n';
  };
  emit("rounds", rounds);
  emit("max_sent", max_sent);
  emit("max_received", max_received);
  emit("machines_used", machines_used);
  emit("total_words", total_words);
  return out;
}

void MachineIo::send(MachineId dest, std::span<const Word> words) {
  if (dest >= eng_.config().machine_cap)
    throw MalformedProgram("send to machine " + std::to_string(dest) +
                           " beyond cap " +
                           std::to_string(eng_.config().machine_cap));
  sent_ += words.size();
  if (sent_ > eng_.config().words_per_machine)
    throw BudgetViolation(id, eng_.rounds() + 1, Resource::send, sent_,
                          eng_.config().words_per_machine);
  eng_.stage(dest, id, sent_, words);
}

std::uint64_t MachineIo::rng() {
  return mix64(mix64(eng_.seed(), id), eng_.step_index_, ++draws_);
}

std::map<MachineId, std::vector<Parcel>> deliver_round(
    std::vector<Parcel> parcels, std::uint64_t words_per_machine,
    std::uint64_t round) {
  std::stable_sort(parcels.begin(), parcels.end(),
                   [](const Parcel& a, const Parcel& b) {
                     if (a.dest != b.dest) return a.dest < b.dest;
                     if (a.sender != b.sender) return a.sender < b.sender;
                     return a.seq < b.seq;
                   });
  std::map<MachineId, std::vector<Parcel>> inboxes;
  MachineId cur = 0;
  std::uint64_t volume = 0;
  for (auto& p : parcels) {
    if (inboxes.empty() || p.dest != cur) {
      cur = p.dest;
      volume = 0;
    }
    volume += p.words.size();
    if (volume > words_per_machine)
      throw BudgetViolation(cur, round, Resource::receive, volume,
                            words_per_machine);
    inboxes[cur].push_back(std::move(p));
  }
  return inboxes;
}

Engine::Engine(MpcConfig cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {
  if (cfg_.words_per_machine == 0 || cfg_.machine_cap == 0)
    throw BadParams("engine: config not initialized");
}

MachineRange Engine::provision(std::uint64_t demand_words) {
  std::uint64_t count =
      (demand_words + cfg_.words_per_machine - 1) / cfg_.words_per_machine;
  return provision_machines(count);
}

MachineRange Engine::provision_machines(std::uint64_t count) {
  provisioned_words_ += count * cfg_.words_per_machine;
  if (next_free_ + count > cfg_.machine_cap)
    throw OutOfMemory("provision: cumulative demand " +
                      std::to_string(provisioned_words_) + " words exceeds " +
                      std::to_string(cfg_.total_word_budget()));
  MachineRange r{next_free_, count};
  next_free_ += count;
  return r;
}

void Engine::stage(MachineId dest, MachineId sender, std::uint64_t seq,
                   std::span<const Word> words) {
  Parcel p;
  p.dest = dest;
  p.sender = sender;
  p.seq = seq;
  p.words.assign(words.begin(), words.end());
  staging_.push_back(std::move(p));
}

void Engine::run_machine(MachineId id, Mach& m, const StepFn& fn) {
  MachineIo io(*this, id, m.memory, m.fresh);
  std::size_t before = m.memory.size();
  fn(io);
  std::size_t after = m.memory.size();
  live_words_ += after;
  live_words_ -= before;
  max_sent_ = std::max(max_sent_, io.sent_);
  if (after > cfg_.words_per_machine)
    throw BudgetViolation(id, rounds_ + 1, Resource::memory, after,
                          cfg_.words_per_machine);
  m.fresh.clear();
}

void Engine::step(const StepFn& fn) {
  ++step_index_;
  if (order_ == ExecOrder::ascending) {
    for (auto& [id, m] : machines_)
      if (!m.memory.empty() || !m.fresh.empty()) run_machine(id, m, fn);
  } else {
    for (auto it = machines_.rbegin(); it != machines_.rend(); ++it)
      if (!it->second.memory.empty() || !it->second.fresh.empty())
        run_machine(it->first, it->second, fn);
  }
  deliver();
}

void Engine::step_on(std::span<const MachineRange> ranges, const StepFn& fn) {
  ++step_index_;
  auto visit_range = [&](const MachineRange& r) {
    for (auto it = machines_.lower_bound(r.first);
         it != machines_.end() && it->first < r.end(); ++it)
      if (!it->second.memory.empty() || !it->second.fresh.empty())
        run_machine(it->first, it->second, fn);
  };
  if (order_ == ExecOrder::ascending) {
    for (const auto& r : ranges) visit_range(r);
  } else {
    for (auto rit = ranges.rbegin(); rit != ranges.rend(); ++rit) {
      std::vector<std::pair<MachineId, Mach*>> hits;
      for (auto it = machines_.lower_bound(rit->first);
           it != machines_.end() && it->first < rit->end(); ++it)
        hits.emplace_back(it->first, &it->second);
      for (auto h = hits.rbegin(); h != hits.rend(); ++h)
        if (!h->second->memory.empty() || !h->second->fresh.empty())
          run_machine(h->first, *h->second, fn);
    }
  }
  deliver();
}

void Engine::deliver() {
  peak_words_ = std::max(peak_words_, live_words_);
  if (staging_.empty()) return;
  std::vector<Parcel> parcels;
  parcels.swap(staging_);
  auto inboxes = deliver_round(std::move(parcels), cfg_.words_per_machine,
                               rounds_ + 1);
  ++rounds_;
  for (auto& [dest, msgs] : inboxes) {
    Mach& m = machines_[dest];
    std::uint64_t got = 0;
    for (auto& p : msgs) {
      InboxEntry e;
      e.sender = p.sender;
      e.begin = static_cast<std::uint32_t>(m.memory.size());
      e.count = static_cast<std::uint32_t>(p.words.size());
      m.memory.insert(m.memory.end(), p.words.begin(), p.words.end());
      m.fresh.push_back(e);
      got += p.words.size();
    }
    live_words_ += got;
    max_received_ = std::max(max_received_, got);
    if (m.memory.size() > cfg_.words_per_machine)
      throw BudgetViolation(dest, rounds_, Resource::memory, m.memory.size(),
                            cfg_.words_per_machine);
  }
  peak_words_ = std::max(peak_words_, live_words_);
}

void Engine::poke(MachineId m, std::span<const Word> words) {
  if (m >= cfg_.machine_cap)
    throw MalformedProgram("poke beyond machine cap");
  Mach& mm = machines_[m];
  live_words_ += words.size();
  live_words_ -= mm.memory.size();
  mm.memory.assign(words.begin(), words.end());
  if (mm.memory.size() > cfg_.words_per_machine)
    throw BudgetViolation(m, rounds_, Resource::memory, mm.memory.size(),
                          cfg_.words_per_machine);
  peak_words_ = std::max(peak_words_, live_words_);
}

std::vector<Word> Engine::peek(MachineId m) const {
  auto it = machines_.find(m);
  if (it == machines_.end()) return {};
  return it->second.memory;
}

std::map<MachineId, std::vector<Word>> Engine::snapshot() const {
  std::map<MachineId, std::vector<Word>> out;
  for (const auto& [id, m] : machines_)
    if (!m.memory.empty()) out.emplace(id, m.memory);
  return out;
}

std::vector<Word> Engine::peek_range(MachineRange r) const {
  std::vector<Word> out;
  for (auto it = machines_.lower_bound(r.first);
       it != machines_.end() && it->first < r.end(); ++it)
    out.insert(out.end(), it->second.memory.begin(), it->second.memory.end());
  return out;
}

CostReport Engine::report() const {
  CostReport c;
  c.rounds = rounds_;
  c.max_sent = max_sent_;
  c.max_received = max_received_;
  c.machines_used = machines_.size();
  c.total_words = std::max(peak_words_, live_words_);
  return c;
}

std::pair<std::map<MachineId, std::vector<Word>>, CostReport> run_program(
    std::span<const StepFn> steps, const std::vector<std::vector<Word>>& input,
    MpcConfig cfg, std::uint64_t seed) {
  Engine eng(cfg, seed);
  eng.provision_machines(input.size());
  for (std::size_t i = 0; i < input.size(); ++i)
    eng.poke(static_cast<MachineId>(i), input[i]);
  for (const auto& fn : steps) eng.step(fn);
  return {eng.snapshot(), eng.report()};
}

}  // namespace mpc
