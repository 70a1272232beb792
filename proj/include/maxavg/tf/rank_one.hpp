#pragma once

#include "maxavg/tf/tiles.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maxavg::tf {

// Indices are 0-based. j_first[j], j_second[j] are the two lacunary coordinates attached to j.
struct RankOneParams {
  int C0 = 32;
  int C1 = 42;
  std::vector<int> j_first, j_second;
  std::vector<int> eps_first, eps_second;
  Rational c_lo{1, 4}, c_hi{4};

  std::size_t n() const { return j_first.size(); }
  void validate() const;
  // t = 0 or 1
  int lacunary_index(int j, int t) const { return t == 0 ? j_first[j] : j_second[j]; }
  int lacunary_sign(int j, int t) const { return t == 0 ? eps_first[j] : eps_second[j]; }
  // Is j one of j_1(i), j_2(i); sign returned through eps.
  bool separates(int i, int j, int* eps = nullptr) const;
};

enum class RankOneBullet { ScaleSeparation = 1, SingleFrequency = 2, NearbyFrequencies = 3, Lacunarity = 4 };

struct RankOneViolation {
  std::size_t first, second;
  RankOneBullet bullet;
  int coordinate;
  std::string witness;
};

std::vector<RankOneViolation> rank_one_check(const std::vector<Multitile>& s, const RankOneParams& params);

// Frequency law l_j = c_j l_0 + a_j with integer c_j (c_0 = 1, a_0 = 0).
struct FrequencyLaw {
  std::vector<long> c;
  std::vector<long> a;
  std::size_t n() const { return c.size(); }
  void validate() const;
  // centre offset in units of the frequency width: centre_j - c_j centre_0
  Rational delta(int j) const;
  // D_{k,j} = delta_k - (c_k/c_j) delta_j
  Rational cross_offset(int k, int j) const;
};

// Lacunary maps, signs, and the smallest slack against the rank-one bands; slack < 0 means the law cannot work.
struct LawAssessment {
  RankOneParams params;
  double slack = 0;
};
LawAssessment assess_law(const FrequencyLaw& law, int C0, int C1);
// Search offsets a_j in [-radius, radius] for the largest slack.
LawAssessment find_rank_one_law(std::vector<long> c, int C0, int C1, long radius, FrequencyLaw* out);

struct GeneratorOptions {
  std::size_t count = 200;
  std::uint64_t seed = 1;
  int levels = 3;
  std::size_t max_clusters = 8;
  bool validate = true;
};

struct RankOneInstance {
  FrequencyLaw law;
  RankOneParams params;
  std::vector<Multitile> tiles;
  std::vector<int> cluster_index;  // tree coordinate each cluster was built around, -1 for stray tiles
};

// Clusters of nested multitiles on scales 0, C1, 2 C1; throws if the output fails rank_one_check.
RankOneInstance generate_rank_one(const FrequencyLaw& law, int C0, int C1, const GeneratorOptions& options);

}  // namespace maxavg::tf
