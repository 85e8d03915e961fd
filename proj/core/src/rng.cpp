#include "hjhomog/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hjhomog {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view purpose,
                     std::uint64_t k1, std::uint64_t k2) {
  std::uint64_t x = seed;
  x ^= rotl(fnv1a(purpose), 13);
  x ^= rotl(k1, 29) ^ rotl(k2, 47);
  // Run the mixer a few times so nearby keys decorrelate fully.
  splitmix64(x);
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

int RngStream::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
  if (mean > 256.0) throw std::invalid_argument("poisson: mean too large");
  if (mean == 0.0) return 0;
  // Knuth: count exponential inter-arrival gaps until they exceed the mean.
  const double limit = std::exp(-mean);
  double prod = 1.0;
  int k = -1;
  do {
    prod *= uniform01();
    ++k;
  } while (prod > limit);
  return k;
}

}  // namespace hjhomog
