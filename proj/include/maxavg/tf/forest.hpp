#pragma once

#include "maxavg/tf/tiles.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace maxavg::tf {

struct LacunaryParams {
  int C0 = 8;
  Rational c_lo{1, 4}, c_hi{4};
};

// Tiles are indices into the pool of the owning forest.
struct LacunaryTree {
  std::vector<std::size_t> tiles;
  DyadicInterval interval;
  Rational xi;
};

struct Forest {
  std::vector<Tile> pool;
  std::vector<LacunaryTree> trees;
  LacunaryParams params;
};

std::vector<std::string> lacunary_tree_check(const std::vector<Tile>& pool, const LacunaryTree& tree,
                                             const LacunaryParams& params);
bool strongly_disjoint(const std::vector<Tile>& pool, const LacunaryTree& a, const LacunaryTree& b);
// Tree checks plus pairwise strong disjointness.
std::vector<std::string> forest_check(const Forest& forest);

struct ForestOptions {
  std::size_t trees = 6;
  long coarsest_tree_scale = -2;  // tree intervals have length between 2^2 and 2^0
  long finest_tree_scale = 0;
  long finest_tile_scale = 4;
  long span_log2 = 2;  // tree intervals lie in [0, 2^span_log2)
  long xi_range = 64;  // centres are k/2 with |k/2| <= xi_range
  double scale_fill = 0.7;
  std::size_t per_scale = 4;
  std::size_t attempts = 200;
  std::uint64_t seed = 1;
};
Forest generate_forest(const ForestOptions& options, const LacunaryParams& params = {});

// Piecewise constant, values[c] on [breaks[c], breaks[c+1]).
struct StepFunction {
  std::vector<Rational> breaks;
  std::vector<long> values;
  Rational l1() const;
  long sup() const;
};
StepFunction counting_function(const std::vector<DyadicInterval>& intervals);
StepFunction counting_function(const Forest& forest);
// Pointwise f <= g on the union of both break sets.
bool dominated(const StepFunction& f, const StepFunction& g);

struct BmoValue {
  Rational value;
  DyadicInterval witness;
};
BmoValue forest_bmo(const std::vector<DyadicInterval>& intervals);
BmoValue forest_bmo(const Forest& forest);

std::vector<DyadicInterval> heavy_intervals(const std::vector<DyadicInterval>& intervals, const DyadicInterval& i0,
                                            long threshold);

// Largest sum_{P in T, I_P in I} |a_P|^2 / |I| over dyadic I inside the tree interval.
double carleson_ratio(const std::vector<Tile>& pool, const LacunaryTree& tree, const std::vector<double>& energy,
                      DyadicInterval* witness = nullptr);

struct StoppingResult {
  std::vector<LacunaryTree> heavy;  // F_1
  std::vector<LacunaryTree> light;  // F_2
  double heavy_mass = 0;            // sum of |a_P|^2 over F_1
  Rational heavy_length = 0;        // sum of |I_T| over F_1
  int level = 0;
  // heavy_mass / (2^{2m} heavy_length), inside (1/4, 1] whenever F_1 is nonempty
  double sumest_ratio() const;
};
// energy[p] = |a_p|^2 for pool tile p.
StoppingResult stopping_time(const std::vector<Tile>& pool, const std::vector<LacunaryTree>& trees,
                             const std::vector<double>& energy, int m);

struct IteratedStopping {
  int top = 0;
  std::vector<int> levels;                         // m for each layer, decreasing
  std::vector<std::vector<LacunaryTree>> layers;   // F_m
  std::vector<std::size_t> zero_set;               // tiles with a_P = 0
  double total_energy = 0;
  // sum_m 2^{2m} sum |I_T| / sum |a_P|^2, inside [1, 4) when some a_P != 0
  double msum_ratio = 0;
};
IteratedStopping iterated_stopping(const std::vector<Tile>& pool, const std::vector<LacunaryTree>& trees,
                                   const std::vector<double>& energy);
// Every tile of the trees appears exactly once across layers and zero set.
bool stopping_partition_ok(const std::vector<LacunaryTree>& trees, const IteratedStopping& result);

}  // namespace maxavg::tf
