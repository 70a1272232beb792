#pragma once

#include "maxavg/discrete_averaging.hpp"

#include <cstdint>
#include <vector>

namespace maxavg {

struct NormReport {
  ExponentTuple exponents;
  double ratio = 0;
  std::vector<Signal> inputs;   // witnesses of the best trial
  std::uint64_t seed = 0;
  std::size_t best_trial = 0;
  std::vector<double> trial_ratios;
  std::vector<int> trial_family;
  bool window_exact = false;
};

struct SearchOptions {
  long radius = 64;
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  std::size_t local_steps = 8;
};

// Trial t uses family t % 4: signed indicators, lacunary combs, deltas, Gaussian chirps.
std::vector<Signal> trial_inputs(std::size_t rows, long radius, std::uint64_t seed, std::size_t trial);

// The ratio ||T* f||_{p'} / prod ||f_i||_{p_i} on the evaluation window.
double norm_ratio(const IntMatrix& a, const std::vector<Signal>& inputs, const ExponentTuple& exponents,
                  bool* exact = nullptr);

NormReport norm_search(const IntMatrix& a, const ExponentTuple& exponents, const SearchOptions& options);

}  // namespace maxavg
