#pragma once

#include "maxavg/tf/forest.hpp"

#include <optional>
#include <vector>

namespace maxavg::tf {

// J' in grid d with A·I ⊆ J' ⊆ 3A·I, shortest length first, then lowest grid.
// Some intervals have none (I = [672, 704), A = 6); then the grid interval containing A·I
// with the least dilation about its centre is returned, which always fits inside 4A·I.
DyadicInterval a_enlargement(const DyadicInterval& interval, long a);
bool is_a_enlargement(const DyadicInterval& interval, long a, const DyadicInterval& candidate);
bool has_regular_enlargement(const DyadicInterval& interval, long a);
// Smallest c with candidate ⊆ c·(A·I); candidate must contain A·I.
Rational enlargement_dilation(const DyadicInterval& interval, long a, const DyadicInterval& candidate);

struct SparseFamily {
  int grid = 0;                       // grid of every enlargement in the family
  std::vector<std::size_t> members;   // indices into the input list
};

// Pigeonholes by scale mod 100A, position mod (100A+1) and enlargement grid.
std::vector<SparseFamily> sparsify(const std::vector<DyadicInterval>& intervals, long a);
std::size_t sparsify_family_bound(long a);  // 3·100A·(100A+1)
// Problems with properties (i)–(iii) for the listed intervals.
std::vector<std::string> sparse_check(const std::vector<DyadicInterval>& intervals, const SparseFamily& family,
                                      long a);

// Layer j holds the maximal intervals left after removing layers 1..j-1; returns indices.
std::vector<std::vector<std::size_t>> layer_intervals(const std::vector<DyadicInterval>& intervals);
std::vector<std::string> layer_check(const std::vector<DyadicInterval>& intervals,
                                     const std::vector<std::vector<std::size_t>>& layers);

// Restriction of a forest to one sparse family of tile time intervals, cut into subtrees at
// maximal intervals so that every tree interval lies in the family.
struct SparseForest {
  int grid = 0;
  std::vector<LacunaryTree> trees;
};
std::vector<SparseForest> sparse_subforests(const Forest& forest, long a);

struct TileLayering {
  std::vector<DyadicInterval> intervals;              // tree intervals
  std::vector<DyadicInterval> enlarged;               // their A-enlargements
  std::vector<std::vector<std::size_t>> layers;       // induced layers of intervals
  // For every tile: intervals I with P in P_I, and with P in P_{<I}.
  std::vector<std::vector<std::size_t>> exact, below;
  std::vector<std::size_t> tiles;                     // pool indices, aligned with exact/below
  bool partition_ok() const;
};
TileLayering layer_tiles(const std::vector<Tile>& pool, const SparseForest& forest, long a);

}  // namespace maxavg::tf
