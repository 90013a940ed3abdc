#ifndef MAPFORGE_RNG_HPP
#define MAPFORGE_RNG_HPP

#include <cstdint>
#include <random>

#include "mapforge/rational.hpp"

namespace mapforge {

// Seeded PRNG with self-contained bounded draws, so that a given seed yields
// the same stream on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, n), n >= 1, by rejection on the top range.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  int pm1() { return below(2) == 0 ? 1 : -1; }

  // Uniform on [0, n) for arbitrary-precision n >= 1.
  BigInt below_big(const BigInt& n) {
    if (n <= 1) return 0;
    const unsigned bits = boost::multiprecision::msb(n) + 1;
    const unsigned words = (bits + 63) / 64;
    while (true) {
      BigInt x = 0;
      for (unsigned i = 0; i < words; ++i) {
        x <<= 64;
        x |= BigInt(gen_());
      }
      x >>= words * 64 - bits;
      if (x < n) return x;
    }
  }

  // Exact Bernoulli: true with probability p.
  bool bernoulli(const BigRat& p) {
    BigInt num = boost::multiprecision::numerator(p);
    BigInt den = boost::multiprecision::denominator(p);
    if (num <= 0) return false;
    if (num >= den) return true;
    return below_big(den) < num;
  }

  // Independent stream for the index-th sample of a batch.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mapforge

#endif
