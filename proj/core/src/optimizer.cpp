#include "msfa/optimizer.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "msfa/forward_model.hpp"
#include "msfa/rng.hpp"

namespace msfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_interior(const SensitivityMatrix& s) {
  for (double v : s.values)
    if (!(v > 0.0 && v < 1.0)) return false;
  return true;
}

double smoothness_penalty(const SensitivityMatrix& s) {
  const int L = s.grid.count;
  double acc = 0.0;
  for (int k = 0; k < s.num_filters; ++k)
    for (int i = 1; i + 1 < L; ++i) {
      const double d = s.at(k, i + 1) - 2.0 * s.at(k, i) + s.at(k, i - 1);
      acc += d * d;
    }
  return acc;
}

void add_smoothness_gradient(const SensitivityMatrix& s, double weight,
                             std::vector<double>& g) {
  const int L = s.grid.count;
  for (int k = 0; k < s.num_filters; ++k)
    for (int i = 1; i + 1 < L; ++i) {
      const double d = s.at(k, i + 1) - 2.0 * s.at(k, i) + s.at(k, i - 1);
      g[static_cast<size_t>(k) * L + i + 1] += 2.0 * weight * d;
      g[static_cast<size_t>(k) * L + i] -= 4.0 * weight * d;
      g[static_cast<size_t>(k) * L + i - 1] += 2.0 * weight * d;
    }
}

double barrier_value(const SensitivityMatrix& s) {
  double acc = 0.0;
  for (double v : s.values) {
    if (!(v > 0.0 && v < 1.0)) return -kInf;
    acc += std::log(v) + std::log(1.0 - v);
  }
  return acc;
}

void add_barrier_gradient(const SensitivityMatrix& s, double weight,
                          std::vector<double>& g) {
  for (size_t i = 0; i < s.values.size(); ++i) {
    const double v = s.values[i];
    g[i] += -weight * (1.0 / v - 1.0 / (1.0 - v));
  }
}

}  // namespace

double reconstruction_mse(const std::vector<MultispectralImage>& training,
                          const FilterArrayPattern& pattern,
                          const SensitivityMatrix& sens,
                          const OptimizerConfig& cfg) {
  const WienerModel model =
      wiener_train(training, pattern, sens, cfg.noise_sigma, cfg.seed,
                   cfg.window_tiles, cfg.ridge);
  const int L = sens.grid.count;
  double acc = 0.0;
  size_t n = 0;
  for (size_t img = 0; img < training.size(); ++img) {
    const MultispectralImage& truth = training[img];
    const MosaickedImage y = mosaic_apply(truth, pattern, sens,
                                          {cfg.noise_sigma, cfg.seed + img});
    const MultispectralImage rec = wiener_apply(model, y, sens.grid);
    const size_t pixels = truth.pixels();
    if (cfg.subsample_pixels > 0 &&
        static_cast<size_t>(cfg.subsample_pixels) < pixels) {
      for (int j = 0; j < cfg.subsample_pixels; ++j) {
        const size_t px = rng::hash(cfg.seed, 1000 + img, j) % pixels;
        const int r = static_cast<int>(px) / truth.width;
        const int c = static_cast<int>(px) % truth.width;
        for (int b = 0; b < L; ++b) {
          const double d = rec.at(r, c, b) - truth.at(r, c, b);
          acc += d * d;
          ++n;
        }
      }
    } else {
      for (size_t i = 0; i < truth.data.size(); ++i) {
        const double d = rec.data[i] - truth.data[i];
        acc += d * d;
        ++n;
      }
    }
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

SensitivityMatrix random_init_sensitivity(int num_filters,
                                          const SpectralGrid& grid,
                                          std::uint64_t seed) {
  if (num_filters < 1)
    throw InvalidArgument("random_init_sensitivity: K must be >= 1");
  SensitivityMatrix s(num_filters, grid);
  for (int k = 0; k < num_filters; ++k)
    for (int i = 0; i < grid.count; ++i)
      s.at(k, i) = 0.05 + 0.90 * rng::uniform(seed, k, i);
  return s;
}

OptimizationResult optimize_sensitivity(
    const std::vector<MultispectralImage>& training,
    const FilterArrayPattern& pattern, const SensitivityMatrix& init,
    const OptimizerConfig& cfg) {
  if (training.empty())
    throw InvalidArgument("optimize_sensitivity: empty training set");
  if (!strictly_interior(init))
    throw InvalidArgument(
        "optimize_sensitivity: init must be strictly inside (0, 1)");

  SensitivityMatrix cur = init;
  double mse_cur = reconstruction_mse(training, pattern, cur, cfg);
  if (!std::isfinite(mse_cur))
    throw NumericalError("optimize_sensitivity: non-finite objective at init");

  OptimizationResult out;
  double barrier_w = cfg.barrier_init;
  const size_t dim = cur.values.size();

  for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
    if (iter > 0 && cfg.barrier_halve_every > 0 &&
        iter % cfg.barrier_halve_every == 0)
      barrier_w *= 0.5;

    const double j_cur = mse_cur +
                         cfg.smoothness_weight * smoothness_penalty(cur) -
                         barrier_w * barrier_value(cur);

    // forward finite differences on the MSE term, analytic for the rest
    std::vector<double> grad(dim, 0.0);
    for (size_t e = 0; e < dim; ++e) {
      SensitivityMatrix probe = cur;
      double h = cfg.fd_step;
      if (probe.values[e] + h >= 1.0) h = -h;  // stay interior
      probe.values[e] += h;
      const double mse_probe = reconstruction_mse(training, pattern, probe, cfg);
      grad[e] = (mse_probe - mse_cur) / h;
    }
    add_smoothness_gradient(cur, cfg.smoothness_weight, grad);
    add_barrier_gradient(cur, barrier_w, grad);

    bool accepted = false;
    double step = cfg.gradient_step;
    SensitivityMatrix best = cur;
    double best_mse = mse_cur, best_j = j_cur;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, step *= cfg.backtrack_factor) {
      SensitivityMatrix trial = cur;
      bool feasible = true;
      for (size_t e = 0; e < dim; ++e) {
        trial.values[e] -= step * grad[e];
        if (!(trial.values[e] > 0.0 && trial.values[e] < 1.0)) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      const double mse_trial = reconstruction_mse(training, pattern, trial, cfg);
      if (!std::isfinite(mse_trial)) continue;
      const double j_trial = mse_trial +
                             cfg.smoothness_weight * smoothness_penalty(trial) -
                             barrier_w * barrier_value(trial);
      if (j_trial <= j_cur && mse_trial <= mse_cur) {
        best = std::move(trial);
        best_mse = mse_trial;
        best_j = j_trial;
        accepted = true;
        break;
      }
    }

    out.trace.records.push_back(
        {iter, accepted ? best_mse : mse_cur, barrier_w, step, accepted});
    if (accepted) {
      cur = std::move(best);
      const double rel = std::abs(j_cur - best_j) /
                         std::max(1e-300, std::abs(j_cur));
      mse_cur = best_mse;
      if (rel < cfg.stop_tol) break;
    }
  }

  out.sensitivity = cur;
  out.model = wiener_train(training, pattern, cur, cfg.noise_sigma, cfg.seed,
                           cfg.window_tiles, cfg.ridge);
  return out;
}

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace) {
  out << "iter,objective,barrier_weight,step,accepted\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", r.iter,
                  r.objective, r.barrier_weight, r.step, r.accepted ? 1 : 0);
    out << buf;
  }
}

}  // namespace msfa
