#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mpc {

/// One machine word. Holds a node id, an edge weight, or a counter; weights
/// are bounded polynomially by instance size so a single word always fits.
using Word = std::int64_t;

/// Dense machine address in [0, p).
using MachineId = std::uint64_t;

/// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-round resource that a machine can exhaust.
enum class Resource { send, receive, memory };

inline const char* to_string(Resource r) {
  switch (r) {
    case Resource::send: return "send";
    case Resource::receive: return "receive";
    case Resource::memory: return "memory";
  }
  return "?";
}

/// A machine exceeded its per-round word budget. The run is aborted; the
/// offending machine, round, and quantities are reported.
struct BudgetViolation : Error {
  MachineId machine;
  std::uint64_t round;
  Resource kind;
  std::uint64_t amount;
  std::uint64_t limit;

  BudgetViolation(MachineId m, std::uint64_t rnd, Resource k, std::uint64_t amt,
                  std::uint64_t lim)
      : Error("budget violation: machine " + std::to_string(m) + " round " +
              std::to_string(rnd) + " " + to_string(k) + " " +
              std::to_string(amt) + " > " + std::to_string(lim)),
        machine(m), round(rnd), kind(k), amount(amt), limit(lim) {}
};

/// A program addressed a machine outside [0, p) or was otherwise ill-formed.
struct MalformedProgram : Error {
  using Error::Error;
};

/// Cumulative provisioning demand exceeded the p*s word budget.
struct OutOfMemory : Error {
  using Error::Error;
};

/// Caller-supplied parameters violate a documented precondition.
struct BadParams : Error {
  using Error::Error;
};

/// Text input could not be parsed; carries the 1-based offending line.
struct ParseError : Error {
  std::size_t line;
  ParseError(std::size_t ln, const std::string& what)
      : Error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

/// A parsed value is outside its declared domain (node id, weight, ...).
struct RangeError : Error {
  using Error::Error;
};

/// An instance failed the promise its problem family guarantees.
struct PromiseViolation : Error {
  using Error::Error;
};

/// A solver or verifier was handed an instance of the wrong problem.
struct WrongTag : Error {
  using Error::Error;
};

struct NegativeWeight : Error {
  using Error::Error;
};

/// Re-randomization kept producing ambiguous shortest paths.
struct UniquenessFailure : Error {
  using Error::Error;
};

struct CyclicCircuit : Error {
  using Error::Error;
};

struct FanInViolation : Error {
  using Error::Error;
};

struct DanglingInput : Error {
  using Error::Error;
};

/// splitmix64; the engine's only randomness primitive.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b) ^ c);
}

}  // namespace mpc
