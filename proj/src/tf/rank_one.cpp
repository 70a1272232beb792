#include "maxavg/tf/rank_one.hpp"

#include "maxavg/parallel.hpp"
#include "maxavg/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace maxavg::tf {

void RankOneParams::validate() const {
  std::size_t n = j_first.size();
  if (C0 < 8) throw std::invalid_argument("C0 must be at least 8");
  if (C1 <= C0) throw std::invalid_argument("C1 must exceed C0");
  if (j_second.size() != n || eps_first.size() != n || eps_second.size() != n)
    throw std::invalid_argument("rank-one index maps have inconsistent lengths");
  for (std::size_t j = 0; j < n; ++j) {
    int a = j_first[j], b = j_second[j];
    if (a < 0 || b < 0 || a >= static_cast<int>(n) || b >= static_cast<int>(n) || a == b || a == static_cast<int>(j) ||
        b == static_cast<int>(j))
      throw std::invalid_argument("lacunary indices must be distinct and differ from j");
    if (std::abs(eps_first[j]) != 1 || std::abs(eps_second[j]) != 1)
      throw std::invalid_argument("lacunary signs must be +1 or -1");
  }
  if (!(c_lo > 0 && c_lo <= c_hi)) throw std::invalid_argument("need 0 < c_lo <= c_hi");
}

bool RankOneParams::separates(int i, int j, int* eps) const {
  for (int t = 0; t < 2; ++t) {
    if (lacunary_index(i, t) == j) {
      if (eps) *eps = lacunary_sign(i, t);
      return true;
    }
  }
  return false;
}

namespace {

struct Cached {
  long fscale;  // frequency scale, |w| = 2^-fscale
  Rational width;
  std::vector<Span> w, w10;
};

std::vector<Cached> cache(const std::vector<Multitile>& s) {
  std::vector<Cached> out(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    out[a].fscale = s[a][0].freq.scale();
    out[a].width = s[a][0].freq.length();
    for (const auto& t : s[a].tiles) {
      out[a].w.push_back(t.freq.span());
      out[a].w10.push_back(t.freq.span().dilate(10));
    }
  }
  return out;
}

std::string pair_text(std::size_t a, std::size_t b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

std::vector<RankOneViolation> rank_one_check(const std::vector<Multitile>& s, const RankOneParams& params) {
  params.validate();
  std::size_t n = params.n();
  for (const auto& m : s)
    if (m.n() != n) throw std::invalid_argument("multitile arity differs from the rank-one parameters");
  auto c = cache(s);
  Rational near_bound = params.c_hi * params.C0;
  Rational lac_lo = params.c_lo * params.C0;
  std::vector<std::vector<RankOneViolation>> found(s.size());

  parallel_for(s.size(), [&](std::size_t a) {
    auto& out = found[a];
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b) continue;
      const Cached& x = c[a];
      const Cached& y = c[b];
      if (a < b) {
        long gap = std::labs(x.fscale - y.fscale);
        if (gap > 0 && gap < params.C1)
          out.push_back({a, b, RankOneBullet::ScaleSeparation, -1,
                         "frequency scales differ by " + std::to_string(gap) + " < C1"});
        for (std::size_t j = 0; j < n; ++j) {
          if (!(s[a][j].freq.span().lo == s[b][j].freq.span().lo && x.width == y.width)) continue;
          for (std::size_t k = 0; k < n; ++k) {
            if (x.w[k].lo != y.w[k].lo || x.width != y.width) {
              out.push_back({a, b, RankOneBullet::SingleFrequency, static_cast<int>(k),
                             "coordinate " + std::to_string(j) + " agrees but " + std::to_string(k) + " does not"});
              break;
            }
          }
          break;
        }
      }
      // s = a is the longer (or equal) time interval, s' = b
      if (x.fscale < y.fscale) continue;
      bool longer = x.fscale > y.fscale;
      Rational wide = y.width;  // |I_s'|^-1
      for (std::size_t j = 0; j < n; ++j) {
        if (!closed_meet(x.w10[j], y.w10[j])) continue;
        for (std::size_t k = 0; k < n; ++k) {
          Rational d = distance(x.w[k], y.w[k]);
          if (d > near_bound * wide)
            out.push_back({a, b, RankOneBullet::NearbyFrequencies, static_cast<int>(k),
                           "meet at " + std::to_string(j) + ", distance " + to_string(d / wide) + " widths"});
        }
        if (!longer) continue;
        for (int t = 0; t < 2; ++t) {
          int k = params.lacunary_index(static_cast<int>(j), t);
          int eps = params.lacunary_sign(static_cast<int>(j), t);
          Rational d = distance(x.w[k], y.w[k]);
          std::string where = pair_text(a, b) + " j=" + std::to_string(j) + " t=" + std::to_string(t);
          if (d < lac_lo * wide || d > near_bound * wide)
            out.push_back({a, b, RankOneBullet::Lacunarity, k, where + ": distance " + to_string(d / wide) + " widths"});
          else if (closed_meet(x.w10[k], y.w10[k]))
            out.push_back({a, b, RankOneBullet::Lacunarity, k, where + ": 10-dilates meet"});
          else {
            bool ok = eps > 0 ? (y.w10[k].lo >= x.w10[k].hi) : (y.w10[k].hi <= x.w10[k].lo);
            if (!ok) out.push_back({a, b, RankOneBullet::Lacunarity, k, where + ": wrong side"});
          }
        }
      }
    }
  });
  std::vector<RankOneViolation> all;
  for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
  return all;
}

void FrequencyLaw::validate() const {
  if (c.size() < 3 || a.size() != c.size()) throw std::invalid_argument("frequency law needs n >= 3 matching coefficients");
  if (c[0] != 1 || a[0] != 0) throw std::invalid_argument("frequency law must be normalised to c_0 = 1, a_0 = 0");
  for (long v : c)
    if (v == 0) throw std::invalid_argument("frequency law coefficients must be nonzero");
}

Rational FrequencyLaw::delta(int j) const { return frac(a[j], 3) + frac(1 - c[j], 2); }

Rational FrequencyLaw::cross_offset(int k, int j) const { return delta(k) - frac(c[k], c[j]) * delta(j); }

namespace {

// Slack (in frequency widths) of the lacunary coordinate k attached to j, and of the nearby bound.
struct PairSlack {
  double lacunary;
  double nearby;
};

PairSlack pair_slack(double d, double rho, int C0) {
  double mag = std::fabs(d) * (1 - 1e-9);
  double reach = 5.01 * rho;
  double lower = mag - reach - 0.51 - C0 / 4.0;
  double apart = mag - reach - 5.01;
  double upper = 4.0 * C0 - (std::fabs(d) + reach);
  double same_scale = 4.0 * C0 - (10.02 * rho + 1);
  return {std::min({lower, apart, upper}), std::min(upper, same_scale)};
}

LawAssessment assess_doubles(const std::vector<double>& delta, const std::vector<long>& c, int C0, int C1) {
  std::size_t n = c.size();
  LawAssessment out;
  out.params.C0 = C0;
  out.params.C1 = C1;
  out.params.j_first.assign(n, -1);
  out.params.j_second.assign(n, -1);
  out.params.eps_first.assign(n, 1);
  out.params.eps_second.assign(n, 1);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::pair<double, int>> lac;
    std::vector<int> sign(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      double rho = std::fabs(static_cast<double>(c[k]) / static_cast<double>(c[j]));
      double d = delta[k] - static_cast<double>(c[k]) / static_cast<double>(c[j]) * delta[j];
      PairSlack ps = pair_slack(d, rho, C0);
      worst = std::min(worst, ps.nearby);
      lac.push_back({ps.lacunary, static_cast<int>(k)});
      sign[k] = d >= 0 ? 1 : -1;
    }
    std::stable_sort(lac.begin(), lac.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    worst = std::min({worst, lac[0].first, lac[1].first});
    int k1 = std::min(lac[0].second, lac[1].second), k2 = std::max(lac[0].second, lac[1].second);
    out.params.j_first[j] = k1;
    out.params.j_second[j] = k2;
    out.params.eps_first[j] = sign[k1];
    out.params.eps_second[j] = sign[k2];
  }
  out.slack = worst;
  return out;
}

}  // namespace

LawAssessment assess_law(const FrequencyLaw& law, int C0, int C1) {
  law.validate();
  std::vector<double> delta;
  for (std::size_t j = 0; j < law.n(); ++j) delta.push_back(to_double(law.delta(static_cast<int>(j))));
  return assess_doubles(delta, law.c, C0, C1);
}

LawAssessment find_rank_one_law(std::vector<long> c, int C0, int C1, long radius, FrequencyLaw* out) {
  FrequencyLaw law{c, std::vector<long>(c.size(), 0)};
  law.validate();
  if (radius < 0) throw std::invalid_argument("search radius must be nonnegative");
  std::size_t n = c.size();
  std::vector<long> best_a = law.a, cur(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> delta(n);
  delta[0] = 0;
  // odometer over a_1..a_{n-1}
  for (std::size_t j = 1; j < n; ++j) cur[j] = -radius;
  while (true) {
    for (std::size_t j = 1; j < n; ++j) delta[j] = cur[j] / 3.0 + (1 - c[j]) / 2.0;
    double s = assess_doubles(delta, c, C0, C1).slack;
    if (s > best) {
      best = s;
      best_a = cur;
    }
    std::size_t j = 1;
    while (j < n && cur[j] == radius) cur[j++] = -radius;
    if (j == n) break;
    ++cur[j];
  }
  law.a = best_a;
  if (out) *out = law;
  return assess_law(law, C0, C1);
}

namespace {

mpz_class random_below_pow2(Rng& rng, long bits) {
  mpz_class v = 0;
  long have = 0;
  while (have < bits) {
    mpz_class chunk(static_cast<unsigned long>(rng.bits() >> 32));
    v = (v << 32) + chunk;
    have += 32;
  }
  mpz_class mask = (mpz_class(1) << bits) - 1;
  return v & mask;
}

mpz_class round_rational(const Rational& q) {
  Rational shifted = q + Rational(1, 2);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return r;
}

Multitile law_multitile(const FrequencyLaw& law, long k, const mpz_class& u, const mpz_class& time_pos) {
  std::vector<Tile> tiles;
  DyadicInterval time(0, -k, time_pos);
  for (std::size_t j = 0; j < law.n(); ++j) {
    mpz_class l = law.c[j] * u + law.a[j];
    tiles.push_back(Tile::make(time, third_frequency(k, l)));
  }
  return Multitile::make(std::move(tiles));
}

// l_0 parameter at time length 2^k whose coordinate i is centred nearest to x
mpz_class aligned_parameter(const FrequencyLaw& law, int i, long k, const Rational& x) {
  Rational l_i = 3 * (x * pow2(k) - Rational(1, 2));
  return round_rational((l_i - law.a[i]) / law.c[i]);
}

}  // namespace

RankOneInstance generate_rank_one(const FrequencyLaw& law, int C0, int C1, const GeneratorOptions& options) {
  LawAssessment assessment = assess_law(law, C0, C1);
  if (assessment.slack < 0) throw std::invalid_argument("inconsistent coefficient law: offsets do not give rank-one bands");
  if (options.count == 0) throw std::invalid_argument("count must be positive");
  if (options.levels < 1) throw std::invalid_argument("need at least one scale level");
  RankOneInstance inst;
  inst.law = law;
  inst.params = assessment.params;
  Rng rng(derive_seed(options.seed, "rank-one"));
  int n = static_cast<int>(law.n());
  int levels = options.levels;
  std::size_t clusters = std::max<std::size_t>(1, std::min(options.max_clusters, options.count / 20 + 1));
  if (levels == 1) clusters = options.count;
  std::set<long> used_tops;
  std::size_t remaining = options.count;

  for (std::size_t cl = 0; cl < clusters && remaining > 0; ++cl) {
    std::size_t budget = remaining / (clusters - cl);
    if (cl + 1 == clusters) budget = remaining;
    if (budget == 0) continue;
    remaining -= budget;
    int i = static_cast<int>(rng.integer(0, n - 1));
    long top_pos;
    do top_pos = rng.integer(0, 4 * static_cast<long>(clusters) + 3);
    while (!used_tops.insert(top_pos).second);
    mpz_class u0 = rng.integer(-600, 600);
    // centre of coordinate i at the finest level
    Rational x = Rational(law.c[i] * u0 + law.a[i]) / 3 + Rational(1, 2);

    // tree of time intervals: one top, then children drawn inside their parent
    std::vector<std::vector<mpz_class>> per_level(levels);
    per_level[levels - 1].push_back(mpz_class(top_pos));
    std::size_t left = budget - 1;
    for (int level = levels - 2; level >= 0 && left > 0; --level) {
      const auto& parents = per_level[level + 1];
      std::size_t want = level == 0 ? left : std::min<std::size_t>(left, std::min<std::size_t>(3 * parents.size(), left / 4 + 1));
      std::set<mpz_class> seen;
      for (std::size_t c = 0; c < want; ++c) {
        const mpz_class& parent = parents[c % parents.size()];
        mpz_class pos;
        do pos = (parent << C1) + random_below_pow2(rng, C1);
        while (!seen.insert(pos).second);
        per_level[level].push_back(pos);
      }
      left -= want;
    }
    for (int level = levels - 1; level >= 0; --level) {
      long k = static_cast<long>(level) * C1;
      mpz_class u = level == 0 ? u0 : aligned_parameter(law, i, k, x);
      for (const auto& pos : per_level[level]) {
        inst.tiles.push_back(law_multitile(law, k, u, pos));
        inst.cluster_index.push_back(i);
      }
    }
    if (left > 0) remaining += left;  // single level: nothing below the top
  }

  if (!options.validate) return inst;
  auto violations = rank_one_check(inst.tiles, inst.params);
  if (!violations.empty())
    throw std::runtime_error("generated set is not rank one: " + violations.front().witness);
  return inst;
}

}  // namespace maxavg::tf
