#include "maxavg/norm_search.hpp"

#include "maxavg/parallel.hpp"
#include "maxavg/random.hpp"

#include <cmath>
#include <stdexcept>

namespace maxavg {

std::vector<Signal> trial_inputs(std::size_t rows, long radius, std::uint64_t seed, std::size_t trial) {
  if (radius < 1) throw std::invalid_argument("support radius must be >= 1");
  Rng rng(derive_seed(seed, "trial", trial));
  const std::size_t width = static_cast<std::size_t>(2 * radius + 1);
  std::vector<Signal> out;
  for (std::size_t i = 0; i < rows; ++i) {
    Signal f{-radius, std::vector<double>(width, 0.0)};
    switch (trial % 4) {
      case 0: {
        double density = 0.05 + 0.9 * rng.uniform();
        for (auto& v : f.values)
          if (rng.coin(density)) v = rng.sign();
        break;
      }
      case 1: {
        long offset = rng.integer(-radius / 4, radius / 4);
        for (long g = 1; g <= radius; g *= 2) {
          for (long s : {-g, g}) {
            long t = offset + s;
            if (t >= -radius && t <= radius && rng.coin(0.8)) f.values[static_cast<std::size_t>(t + radius)] = 1.0;
          }
        }
        f.values[static_cast<std::size_t>(offset + radius)] = 1.0;
        break;
      }
      case 2:
        f.values[static_cast<std::size_t>(rng.integer(-radius, radius) + radius)] = 1.0;
        break;
      default: {
        double centre = (2 * rng.uniform() - 1) * radius / 2;
        double sigma = 1 + rng.uniform() * radius / 2.0;
        double chirp = rng.uniform() * 0.05, freq = rng.uniform() * M_PI;
        for (long t = -radius; t <= radius; ++t) {
          double u = (t - centre) / sigma;
          f.values[static_cast<std::size_t>(t + radius)] = std::exp(-0.5 * u * u) * std::cos(chirp * t * t + freq * t);
        }
      }
    }
    if (f.is_zero()) f.values[static_cast<std::size_t>(radius)] = 1.0;
    out.push_back(std::move(f));
  }
  return out;
}

double norm_ratio(const IntMatrix& a, const std::vector<Signal>& inputs, const ExponentTuple& exponents, bool* exact) {
  EvaluationWindow w = evaluation_window(a, inputs);
  if (exact) *exact = w.exact;
  return operator_ratio(maximal_operator(a, inputs, w.lo, w.hi), inputs, exponents);
}

NormReport norm_search(const IntMatrix& a, const ExponentTuple& exponents, const SearchOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("need at least one trial");
  if (exponents.size() != a.size()) throw std::invalid_argument("exponent tuple has wrong dimension");
  const std::size_t rows = a.size();
  std::vector<double> ratios(options.trials);
  std::vector<std::vector<Signal>> best_inputs(options.trials);
  std::vector<char> exact(options.trials, 1);

  parallel_for(options.trials, [&](std::size_t t) {
    auto inputs = trial_inputs(rows, options.radius, options.seed, t);
    bool ex = true;
    double best = norm_ratio(a, inputs, exponents, &ex);
    bool all_exact = ex;
    Rng rng(derive_seed(options.seed, "perturb", t));
    for (std::size_t step = 0; step < options.local_steps; ++step) {
      auto candidate = inputs;
      auto& f = candidate[static_cast<std::size_t>(rng.integer(0, static_cast<long>(rows) - 1))];
      auto& v = f.values[static_cast<std::size_t>(rng.integer(0, static_cast<long>(f.values.size()) - 1))];
      v = rng.coin(0.5) ? v * (1.0 + 0.5 * rng.normal()) : static_cast<double>(rng.sign());
      if (candidate[0].is_zero()) continue;
      double r = norm_ratio(a, candidate, exponents, &ex);
      all_exact = all_exact && ex;
      if (r > best) {
        best = r;
        inputs = std::move(candidate);
      }
    }
    ratios[t] = best;
    best_inputs[t] = std::move(inputs);
    exact[t] = all_exact ? 1 : 0;
  });

  NormReport rep{exponents, ratios[0], {}, options.seed, 0, ratios, {}, true};
  for (std::size_t t = 0; t < options.trials; ++t) {
    rep.trial_family.push_back(static_cast<int>(t % 4));
    rep.window_exact = rep.window_exact && exact[t];
    if (ratios[t] > rep.ratio) {
      rep.ratio = ratios[t];
      rep.best_trial = t;
    }
  }
  rep.inputs = best_inputs[rep.best_trial];
  return rep;
}

}  // namespace maxavg
