#include "hestoncal/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hestoncal/errors.hpp"

namespace hestoncal {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

CounterStream::CounterStream(std::uint64_t seed, StreamKey key)
    : philox_key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      key_(key) {}

void CounterStream::refill() {
  // counter = (block lo, unit, cycle, phase:8 | block hi:24)
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_), key_.unit, key_.cycle,
      (static_cast<std::uint32_t>(key_.phase) << 24) |
          static_cast<std::uint32_t>((block_ >> 32) & 0x00FFFFFFu)};
  const auto out = philox4x32(ctr, philox_key_);
  buffer_[0] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  buffer_[1] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  buffered_ = 2;
  ++block_;
}

CounterStream::result_type CounterStream::operator()() {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double CounterStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double CounterStream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(*this);
}

double CounterStream::inverse_gamma(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ParameterError("inverse gamma needs a > 0 and b > 0");
  }
  return b / gamma(a);
}

std::vector<double> RandomSource::draw_standard_normal(StreamKey key, std::size_t count) const {
  auto s = stream(key);
  std::vector<double> out(count);
  for (auto& x : out) x = s.normal();
  return out;
}

std::vector<double> RandomSource::draw_uniform(StreamKey key, std::size_t count) const {
  auto s = stream(key);
  std::vector<double> out(count);
  for (auto& x : out) x = s.uniform();
  return out;
}

std::vector<std::uint8_t> RandomSource::draw_bernoulli(StreamKey key, double p,
                                                       std::size_t count) const {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ParameterError("bernoulli probability must lie in [0, 1), got " + std::to_string(p));
  }
  auto s = stream(key);
  std::vector<std::uint8_t> out(count);
  for (auto& x : out) x = s.bernoulli(p) ? 1 : 0;
  return out;
}

double RandomSource::draw_inverse_gamma(StreamKey key, double a, double b) const {
  auto s = stream(key);
  return s.inverse_gamma(a, b);
}

}  // namespace hestoncal
