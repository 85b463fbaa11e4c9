#include "herman/rng.hpp"

namespace herman {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::keyed(std::uint64_t seed, const std::string& key, std::uint64_t index) {
  std::uint64_t h = fnv1a64(key);
  h = fnv1a64(&seed, sizeof(seed), h);
  h = fnv1a64(&index, sizeof(index), h);
  // Warm one round so nearby keys do not yield nearby states.
  return Rng(splitmix64(h));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::uniform_index(std::size_t n) {
  // Rejection sampling keeps the draw unbiased for any n.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return static_cast<std::size_t>(r % n);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t basis) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s, std::uint64_t basis) {
  return fnv1a64(s.data(), s.size(), basis);
}

}  // namespace herman
