#pragma once

#include "maxavg/random.hpp"
#include "maxavg/tf/packets.hpp"
#include "maxavg/tf/trees.hpp"

#include <cstdint>
#include <vector>

namespace maxavg::tf {

// ---- Bessel -------------------------------------------------------------

struct BesselRatios {
  double synthesis = 0;  // ||sum a_P psi_P||^2 / ||a||^2
  double analysis = 0;   // sum |<f, psi_P>|^2 / ||f||^2
};
double synthesis_ratio(const std::vector<Spectrum>& packets, const std::vector<Complex>& a, const SampleGrid& grid);
double analysis_ratio(const std::vector<Spectrum>& packets, const SampledFunction& f);

std::vector<std::vector<Complex>> gram_matrix(const std::vector<Spectrum>& packets, const SampleGrid& grid);

struct FrameBounds {
  double synthesis_sup = 0;  // top eigenvalue of the Gram matrix, iterated on coefficients
  double analysis_sup = 0;   // top eigenvalue of the frame operator, iterated on functions
  int synthesis_iterations = 0, analysis_iterations = 0;
  double relative_gap() const;
};
FrameBounds frame_bounds(const std::vector<Spectrum>& packets, const SampleGrid& grid, std::uint64_t seed,
                         int max_iterations = 500, double tolerance = 1e-10);

// ---- Radamacher-Menshov ---------------------------------------------------

struct RmResult {
  std::size_t count = 0;
  double b_emp = 0;          // max over sign patterns of ||sum eps_l f_l||
  double maximal = 0;        // || sup_{L'} |sum_{l <= L'} f_l| ||
  std::size_t patterns = 0;  // sign patterns tried
  std::vector<double> block_energy;  // per dyadic level, sum over blocks of ||f_I||^2
  double ratio() const;      // maximal / (b_emp log(2 + L))
  bool blocks_ok() const;    // every block_energy <= b_emp^2 (1 + 1e-9)
};
// Patterns: every Walsh pattern that is constant on the dyadic blocks of each level, plus `random_patterns` draws.
RmResult rm_maximal(const std::vector<SampledFunction>& f, std::size_t random_patterns, std::uint64_t seed);

// L functions with pairwise disjoint spectral supports and random amplitudes, unit norm each when `unit`.
std::vector<SampledFunction> orthogonal_family(const SampleGrid& grid, std::size_t count, std::uint64_t seed,
                                               bool unit = false);

// ---- projection maximal -------------------------------------------------

struct ProjectionResult {
  double ratio = 0;  // || sup_k |Pi_k f| || / ||f||
  std::size_t centres = 0, scales = 0;
};
// Pi_k keeps frequencies within C0 2^{-k} of some centre (sharp mask on DFT bins).
ProjectionResult projection_maximal(const SampledFunction& f, const std::vector<double>& centres,
                                    const std::vector<long>& scales, double c0);

// ---- size estimate -------------------------------------------------------

// int_a^b chi_I^N for even N, chi_I(x) = (1 + (x - c)^2 / |I|^2)^{-1/2}.
double chi_power_integral(double centre, double length, int n, double a, double b);

struct IntervalUnion {
  std::vector<std::pair<double, double>> parts;  // disjoint [lo, hi)
  double measure() const;
  bool contains(double x) const;
};

struct SizeEstimate {
  double lhs = 0, rhs = 0;
  DyadicInterval witness;
  double ratio() const { return rhs > 0 ? lhs / rhs : 0; }
};
// Time convexification of the collection: dyadic I with I_s ⊆ I ⊆ I_s' for some s, s'.
std::vector<DyadicInterval> time_convexification(const std::vector<Multitile>& s);
// lhs = size_j from the given coefficients, rhs = |E|^{1/2} sup_I |I|^{-1} int_E chi_I^N.
SizeEstimate size_estimate_check(const std::vector<Multitile>& s, const CoefficientTable& coef, int j,
                                 const IntervalUnion& e, int n_decay, const RankOneParams& params);

}  // namespace maxavg::tf
