#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace maxavg {

std::uint64_t splitmix64(std::uint64_t x);

// Stream seed for (master, label, index); independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

// mt19937_64 with explicit conversions, so draws match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t bits() { return engine_(); }
  double uniform();                 // [0, 1)
  long integer(long lo, long hi);   // inclusive
  double normal();
  bool coin(double p = 0.5) { return uniform() < p; }
  int sign() { return coin() ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace maxavg
