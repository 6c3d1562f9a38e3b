/*******************************************************************************
 * Basic types, assertion macros and seeded randomness shared by all modules.
 *
 * @file:   definitions.hpp
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

// Heavy checks recompute edge-cuts from scratch after incremental updates.
// They are O(m) per check and meant for test builds only.
#ifdef SCML_HEAVY_ASSERTIONS
#define SCML_HEAVY_ASSERT(cond, msg)                                                         \
  do {                                                                                       \
    if (!(cond)) {                                                                           \
      std::fprintf(stderr, "%s:%d: heavy assertion failed: %s (%s)\n", __FILE__, __LINE__, \
                   #cond, msg);                                                              \
      std::abort();                                                                          \
    }                                                                                        \
  } while (0)
#else
#define SCML_HEAVY_ASSERT(cond, msg) \
  do {                               \
  } while (0)
#endif

namespace scml {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;
using EdgeIndex = std::uint64_t;
using EdgeWeight = double;
using NodeWeight = double;

constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();
constexpr ClusterId kInvalidCluster = std::numeric_limits<ClusterId>::max();

using Rng = std::mt19937_64;

/// splitmix64 finalizer. Used to derive independent seeds from one master seed
/// and a stream counter, so that every randomized component is reproducible.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(master ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline std::size_t uniform_index(Rng &rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

inline double uniform_real(Rng &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

class InvalidInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace scml
