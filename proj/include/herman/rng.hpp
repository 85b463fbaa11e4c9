#ifndef HERMAN_RNG_HPP
#define HERMAN_RNG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace herman {

// Deterministic counter-based generator (splitmix64 over a keyed counter).
// Unlike std:: distributions, every draw is bit-stable across platforms and
// compilers, which the reproducibility contracts of this project rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream keyed by (seed, string key, index), so results do not
  // depend on the order in which records are processed.
  static Rng keyed(std::uint64_t seed, const std::string& key, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = uniform_index(i + 1);
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a, used for config hashes and rng key derivation.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(const std::string& s, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace herman

#endif
