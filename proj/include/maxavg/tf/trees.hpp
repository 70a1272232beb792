#pragma once

#include "maxavg/tf/rank_one.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace maxavg::tf {

// Magnitudes |<f_j, phi_{s,j}>| indexed [multitile][coordinate].
using CoefficientTable = std::vector<std::vector<double>>;

// Members and top are indices into an ambient multitile collection.
struct MultitileTree {
  std::vector<std::size_t> members;
  std::size_t top = 0;
  int index = 0;
};

bool is_tree(const std::vector<Multitile>& s, const MultitileTree& tree);
bool is_j_separated(const MultitileTree& tree, int j, const RankOneParams& params, int* eps = nullptr);
// Properties (i)-(iii) for every lacunary coordinate of the tree; empty when all hold.
std::vector<std::string> tree_geometry_check(const std::vector<Multitile>& s, const MultitileTree& tree,
                                             const RankOneParams& params);

// Precomputed s_i <= T_i relation and time containment for one collection.
class TreeOrder {
 public:
  explicit TreeOrder(const std::vector<Multitile>& s);
  bool le(int i, std::size_t s, std::size_t t) const { return le_[i][s * count_ + t] != 0; }
  bool time_within(std::size_t s, std::size_t t) const { return within_[s * count_ + t] != 0; }
  std::size_t size() const { return count_; }
  double length(std::size_t s) const { return length_[s]; }

 private:
  std::size_t count_;
  std::vector<std::vector<char>> le_;
  std::vector<char> within_;
  std::vector<double> length_;
};

struct SizeValue {
  double size = 0;
  bool found = false;
  std::size_t top = 0;
  int index = -1;
};

// sup over j-separated trees drawn from `alive` members of s, with tops from `tops` or from the alive
// members themselves (a singleton is always a tree).
SizeValue tree_size(const TreeOrder& order, const CoefficientTable& coef, const std::vector<char>& alive,
                    const std::vector<char>& tops, int j, const RankOneParams& params);
// Same quantity, computed straight from tile_le without the cached order.
double tree_size_direct(const std::vector<Multitile>& s, const CoefficientTable& coef, const std::vector<char>& alive,
                        const std::vector<char>& tops, int j, const RankOneParams& params);

struct SingleTreeBound {
  double lhs = 0, rhs = 0;
  bool holds() const { return lhs <= rhs * (1 + 1e-9) + 1e-300; }
};
SingleTreeBound single_tree_bound_check(const std::vector<Multitile>& s, const MultitileTree& tree,
                                        const CoefficientTable& coef, const RankOneParams& params);

bool strongly_disjoint(const std::vector<Multitile>& s, const MultitileTree& a, const MultitileTree& b, int j);

struct SelectedTree {
  MultitileTree tree;
  int eps = 0;
  int step = 3;           // 3 for a selected tree, 4 for its companion
  double size = 0;
  Rational key;           // oriented centre of the top's index tile, see split_by_size
  std::size_t order = 0;  // selection round
};

struct SplitResult {
  int j = 0, m = 0;
  std::vector<SelectedTree> forest;
  std::vector<std::size_t> remainder;
  double initial_size = 0, final_size = 0;
};

// Steps 0-4 of the size splitting. Within a class (i, eps) the selected top maximises
// sigma * centre(T_i), sigma = -(sign the rank-one condition gives coordinate i when j meets).
SplitResult split_by_size(const std::vector<Multitile>& s, int j, int m, const CoefficientTable& coef,
                          const RankOneParams& params);
// Smallest m with size_j(S') <= 2^{m+1}.
int split_exponent(double size);

struct SplitAudit {
  bool partition = false;
  bool remainder_small = false;
  double remainder_size = 0;
  bool disjoint = false;
  bool monotone = false;
  bool sign_condition = false;
  std::vector<std::string> problems;
  bool ok() const { return partition && remainder_small && disjoint && monotone && sign_condition; }
};
SplitAudit audit_split(const std::vector<Multitile>& s, const SplitResult& result, const CoefficientTable& coef,
                       const RankOneParams& params);

}  // namespace maxavg::tf
