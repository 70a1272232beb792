#pragma once

#include "maxavg/tf/forest.hpp"
#include "maxavg/tf/inequalities.hpp"
#include "maxavg/tf/trees.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maxavg::tf {

// c = (1, -2, 1), a = (0, 117, 60): slack 6.48 at C0 = 32, C1 = 42.
FrequencyLaw default_law();

// |I_s|^{1/2} times a uniform draw: magnitudes of the same order as real packet coefficients.
CoefficientTable synthetic_coefficients(const std::vector<Multitile>& s, std::uint64_t seed);

struct SplitInstance {
  RankOneInstance instance;
  CoefficientTable coef;
  int j = 0, m = 0;
  SplitResult result;
  SplitAudit audit;
};
SplitInstance split_instance(std::uint64_t seed, std::size_t count = 200);

// Small sampled tree: top at time [0, 1), members at finer scales under it in coordinate `index`,
// coefficients |<f_k, psi_{s,k}>| from band-limited noise.
struct SampledTree {
  std::vector<Multitile> tiles;
  MultitileTree tree;
  CoefficientTable coef;
  RankOneParams params;
};
SampledTree sampled_tree(std::uint64_t seed, std::size_t members = 20);

// Random multitiles with sampled coefficients of f = |E|^{-1/2} 1_E e^{2 pi i b x}.
struct SizeCase {
  std::vector<Multitile> tiles;
  CoefficientTable coef;
  IntervalUnion e;
  int j = 0;
  RankOneParams params;
};
SizeCase size_case(std::uint64_t seed, std::size_t count = 50);
constexpr int kDefaultDecay = 4;

struct StandardMeasurements {
  std::uint64_t seed = 0;
  // forest and Bessel
  std::size_t forest_trees = 0, forest_tiles = 0;
  long multiplicity = 0;
  Rational bmo = 0;
  bool bmo_ok = false, l1_ok = false, forest_ok = false;
  double synthesis_sup = 0, analysis_sup = 0, duality_gap = 0;
  double bessel = 0;  // sqrt(synthesis_sup) / log(2 + M)
  // stopping time on |<f, psi_P>|^2
  double msum = 0, sumest_min = 0, sumest_max = 0;
  bool stopping_partition = false, stopping_carleson = false;
  // Radamacher-Menshov, ratio = maximal / (B log(2 + L))
  std::vector<long> rm_lengths;
  std::vector<double> rm_ratio;
  bool rm_blocks = false;
  // projection maximal, value = ratio / log(2 + J)^2
  std::vector<long> projection_centres;
  std::vector<double> projection_value;
  // single tree bound, worst lhs / rhs
  std::size_t trees_checked = 0;
  double tree_worst = 0;
  bool tree_ok = false;
  // size estimate lhs / rhs
  double size_ratio = 0;
};
StandardMeasurements measure_standard(std::uint64_t seed);

constexpr int kFixtureVersion = 1;

struct Fixtures {
  int version = kFixtureVersion;
  std::string bump_version;
  std::vector<std::uint64_t> seeds;
  // observed maxima (or ranges) over the calibration seeds
  double bessel_max = 0, rm_max = 0, projection_max = 0, size_max = 0;
  double sumest_min = 0, sumest_max = 0, msum_min = 0, msum_max = 0;
  // constants: twice the observed maxima; bands: observed range widened by a factor 2 each way
  double bessel_c1 = 0, rm_c2 = 0, projection_c3 = 0, size_c4 = 0;
  double sumest_lo = 0, sumest_hi = 0, msum_lo = 0, msum_hi = 0;
};
Fixtures calibrate_fixtures(const std::vector<StandardMeasurements>& runs);

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0, bound = 0;
};
std::vector<Verdict> check_measurements(const StandardMeasurements& m, const Fixtures& f);

}  // namespace maxavg::tf
