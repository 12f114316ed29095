#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace bjns {

// Input that violates a documented precondition (bad shapes, out-of-range
// arguments, malformed files). The CLI maps this to exit code 2.
class InvalidArgument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric state that should be impossible when the preconditions hold
// (stale cache versions, non-positive mixture precision). Exit code 3.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degenerate numeric input, e.g. a zero sample variance handed to the
// diagonal sampler. Exit code 3.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few retained draws for the requested summary.
class NotEnoughSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upper-triangle edges are enumerated row-major: (0,1),(0,2),...,(0,p-1),
// (1,2),...,(p-2,p-1). All per-edge arrays use this order.
inline int edge_count(int p) { return p * (p - 1) / 2; }

inline int edge_index(int i, int j, int p) {
  return i * p - i * (i + 1) / 2 + (j - i - 1);
}

struct Edge {
  int i;
  int j;
};

inline Edge edge_at(int idx, int p) {
  int i = 0;
  int row_len = p - 1;
  while (idx >= row_len) {
    idx -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + idx};
}

// splitmix64; used to derive independent RNG streams from one user seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Stream splitting: every chain / worker / generator derives its own RNG as
// make_rng(seed, tag, index). Streams with distinct (tag, index) never
// collide regardless of thread scheduling, which is what makes the parallel
// paths reproducible.
enum class StreamTag : std::uint64_t {
  kChain = 1,
  kSimulate = 2,
  kScreenJob = 3,
  kTest = 4,
};

inline Rng make_rng(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
  s = splitmix64(s ^ splitmix64(index));
  return Rng(s);
}

}  // namespace bjns
