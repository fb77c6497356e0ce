#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random primitives. Every draw is a pure function of a 64-bit
// key, so values attached to structural positions (grid nodes, replica
// indices) stay fixed no matter in which order they are generated.
namespace dcs::rng {

inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += golden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(mix(a, b) ^ c);
}

// uniform in [0,1)
inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// uniform in (0,1]
inline double to_unit_open(std::uint64_t x) {
  return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

// standard normal from a single key (Box-Muller, cosine branch)
inline double gaussian(std::uint64_t key) {
  const double u1 = to_unit_open(splitmix64(key));
  const double u2 = to_unit(splitmix64(key ^ 0x5851f42d4c957f2dULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

// independent stream seed for replica i of a base seed
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return mix(seed, stream ^ 0xd1342543de82ef95ULL);
}

// A tiny sequential generator for code that wants a stream rather than
// keyed draws (Poisson counts, uniform point clouds).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(splitmix64(seed)) {}

  std::uint64_t next() {
    state_ += golden;
    return splitmix64(state_);
  }
  double uniform() { return to_unit(next()); }
  double uniform_open() { return to_unit_open(next()); }
  double exponential() { return -std::log(uniform_open()); }

  // inversion-free Poisson via exponential interarrivals; mean values used
  // here are modest (tens), so the loop is fine
  long poisson(double mean) {
    long k = 0;
    double acc = exponential();
    while (acc < mean) {
      ++k;
      acc += exponential();
    }
    return k;
  }

 private:
  std::uint64_t state_;
};

}  // namespace dcs::rng
