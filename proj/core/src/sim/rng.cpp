#include "manet/sim/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace manet::sim {

std::string_view to_string(StreamId id) {
  switch (id) {
    case StreamId::mobility:
      return "mobility";
    case StreamId::traffic:
      return "traffic";
    case StreamId::protocol_jitter:
      return "protocol-jitter";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, StreamId id)
    : RngStream(seed, id, splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(id)))) {}

RngStream::RngStream(std::uint64_t seed, StreamId id, std::uint64_t mixed_seed)
    : seed_(seed), id_(id), mixed_seed_(mixed_seed), engine_(mixed_seed) {}

RngStream RngStream::fork(std::uint64_t salt) const {
  return RngStream(seed_, id_, splitmix64(mixed_seed_ ^ splitmix64(salt + 0x5851f42d4c957f2dULL)));
}

std::uint64_t RngStream::next_u64() {
  ++draws_;
  return engine_();
}

double RngStream::uniform() {
  // 53 high bits -> [0, 1) on the double grid.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::uniform_positive(double hi) { return hi * (1.0 - uniform()); }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
  // Lemire-style rejection keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

double RngStream::normal(double mean, double stddev) {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace manet::sim
