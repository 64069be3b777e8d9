#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace manet::sim {

/// Purpose label of a random stream. Each purpose gets its own engine so that
/// changing, say, the traffic load never shifts the mobility draws.
enum class StreamId : std::uint64_t {
  mobility = 1,
  traffic = 2,
  protocol_jitter = 3,
};

std::string_view to_string(StreamId id);

/// Seeded pseudo-random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard,
/// with distribution transforms implemented here rather than through
/// <random>'s distributions (those are implementation-defined). A given
/// (seed, stream, draw index) therefore yields the same value on every
/// platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id);

  /// Derives an independent child stream, e.g. one per node.
  [[nodiscard]] RngStream fork(std::uint64_t salt) const;

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] StreamId id() const { return id_; }
  [[nodiscard]] std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform on (0, hi].
  double uniform_positive(double hi);
  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Gaussian via Box-Muller; consumes exactly two raw draws.
  double normal(double mean, double stddev);

 private:
  RngStream(std::uint64_t seed, StreamId id, std::uint64_t mixed_seed);

  std::uint64_t seed_;
  StreamId id_;
  std::uint64_t mixed_seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace manet::sim
