#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hestoncal {

// What a substream is used for. Part of the stream identity, so two phases
// of the same cycle/unit never share draws.
enum class Phase : std::uint8_t {
  Simulate = 0,
  Propagate = 1,
  JumpFlag = 2,
  JumpSize = 3,
  Resample = 4,
  PosteriorDraw = 5,
};

struct StreamKey {
  std::uint32_t cycle = 0;
  Phase phase = Phase::Simulate;
  std::uint32_t unit = 0;  // particle index or time step

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure; exposed for
/// known-answer testing.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Sequential view of one keyed substream.
///
/// The 64-bit seed is the Philox key, the stream key and a block index form
/// the counter. Constructing the same (seed, key) twice restarts the same
/// sequence; nothing is shared between instances, so streams can be used
/// from any thread. Satisfies UniformRandomBitGenerator.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, StreamKey key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Standard normal (Box-Muller on consecutive uniform pairs).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// Inverse gamma with density proportional to x^(-a-1) exp(-b/x).
  double inverse_gamma(double a, double b);

  const StreamKey& key() const { return key_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> philox_key_;
  StreamKey key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Seeded factory of keyed substreams plus the bulk draw operations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  CounterStream stream(StreamKey key) const { return {seed_, key}; }

  std::vector<double> draw_standard_normal(StreamKey key, std::size_t count) const;
  std::vector<double> draw_uniform(StreamKey key, std::size_t count) const;
  /// Throws ParameterError unless 0 <= p < 1.
  std::vector<std::uint8_t> draw_bernoulli(StreamKey key, double p, std::size_t count) const;
  /// Throws ParameterError unless a > 0 and b > 0.
  double draw_inverse_gamma(StreamKey key, double a, double b) const;

 private:
  std::uint64_t seed_;
};

}  // namespace hestoncal
