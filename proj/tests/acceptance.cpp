// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
// argv[1] must be the path to the command-line binary (used by criterion 11).

#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "msfa/basis.hpp"
#include "msfa/colorimetry.hpp"
#include "msfa/demosaic_classic.hpp"
#include "msfa/forward_model.hpp"
#include "msfa/io.hpp"
#include "msfa/metrics.hpp"
#include "msfa/optimizer.hpp"
#include "msfa/pattern.hpp"
#include "msfa/rng.hpp"
#include "msfa/stokes_recovery.hpp"
#include "msfa/synth.hpp"
#include "msfa/vtv.hpp"
#include "msfa/wiener.hpp"

using namespace msfa;

namespace {

int g_failures = 0;

void report(int number, bool ok, const std::string& what,
            const std::string& detail = "") {
  std::cout << "criterion " << number << ": " << (ok ? "PASS" : "FAIL") << " - "
            << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

void run_criterion(int number, const std::string& what,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(number, ok, what, detail);
}

MultispectralImage random_cube(int h, int w, const SpectralGrid& g,
                               std::uint64_t seed) {
  MultispectralImage img(h, w, g);
  for (size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = rng::uniform(seed, i);
  return img;
}

SensitivityMatrix random_sens(int k, const SpectralGrid& g, std::uint64_t seed) {
  SensitivityMatrix s(k, g);
  for (size_t i = 0; i < s.values.size(); ++i)
    s.values[i] = rng::uniform(seed, i);
  return s;
}

FilterArrayPattern random_tile(int th, int tw, int K, std::uint64_t seed) {
  FilterArrayPattern p;
  p.tile_height = th;
  p.tile_width = tw;
  p.num_filters = K;
  p.cells.resize(static_cast<size_t>(th) * tw);
  for (int i = 0; i < th * tw; ++i)
    p.cells[i] = i < K ? i : static_cast<int>(rng::hash(seed, 7, i) % K);
  return p;
}

// ---------------------------------------------------------------- criterion 1

bool adjoint_identity(std::string& detail) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int h = 2 + static_cast<int>(rng::hash(s, 1) % 15);
    const int w = 2 + static_cast<int>(rng::hash(s, 2) % 15);
    const int L = 1 + static_cast<int>(rng::hash(s, 3) % 8);
    const int th = 1 + static_cast<int>(rng::hash(s, 4) % 4);
    const int tw = 1 + static_cast<int>(rng::hash(s, 5) % 4);
    const int K = 1 + static_cast<int>(rng::hash(s, 6) % (th * tw));
    const SpectralGrid g{420, 10, L};
    const auto p = random_tile(th, tw, K, s);
    const auto sens = random_sens(K, g, s + 500);
    const auto x = random_cube(h, w, g, s + 1000);
    MosaickedImage y(h, w);
    for (size_t i = 0; i < y.data.size(); ++i)
      y.data[i] = rng::uniform(s + 2000, i);

    const auto mx = mosaic_apply(x, p, sens);
    const auto mty = mosaic_adjoint(y, p, sens);
    double lhs = 0.0, rhs = 0.0;
    for (size_t i = 0; i < mx.data.size(); ++i) lhs += mx.data[i] * y.data[i];
    for (size_t i = 0; i < x.data.size(); ++i) rhs += x.data[i] * mty.data[i];
    const double rel = std::abs(lhs - rhs) /
                       std::max(1e-300, std::max(std::abs(lhs), std::abs(rhs)));
    worst = std::max(worst, rel);
  }
  detail = "worst relative mismatch " + std::to_string(worst);
  return worst <= 1e-10;
}

// ---------------------------------------------------------------- criterion 2

bool operator_matrix_equivalence(std::string& detail) {
  double worst = 0.0;
  {
    const SpectralGrid g{420, 10, 3};
    const auto p = random_tile(2, 2, 4, 3);
    const auto sens = random_sens(4, g, 4);
    const auto x = random_cube(4, 4, g, 5);
    const auto y = mosaic_apply(x, p, sens);
    const Eigen::MatrixXd m = build_system_matrix(p, sens, 4, 4);
    const Eigen::Map<const Eigen::VectorXd> xv(x.data.data(), x.data.size());
    const Eigen::VectorXd my = m * xv;
    for (size_t i = 0; i < y.data.size(); ++i)
      worst = std::max(worst, std::abs(my[static_cast<Eigen::Index>(i)] -
                                       y.data[i]));
  }
  {
    const SpectralGrid g{420, 10, 3};
    const auto p = random_tile(2, 2, 4, 6);
    PolarizedFilterBank bank(4, g);
    for (int k = 0; k < 4; ++k) {
      bank.orientation_deg[k] = 45.0 * k;
      for (int b = 0; b < 3; ++b) {
        bank.t_te[k * 3 + b] = 0.2 + 0.6 * rng::uniform(7, k, b, 0);
        bank.t_tm[k * 3 + b] = 0.1 + 0.4 * rng::uniform(7, k, b, 1);
      }
    }
    StokesCube s(4, 4, g);
    for (size_t i = 0; i < s.s0.data.size(); ++i) {
      s.s0.data[i] = 1.0 + rng::uniform(8, i);
      s.s1.data[i] = 0.4 * (rng::uniform(9, i) - 0.5);
      s.s2.data[i] = 0.4 * (rng::uniform(10, i) - 0.5);
    }
    const auto y = polarized_mosaic(s, bank, p);
    const Eigen::MatrixXd m = polarized_system_matrix(bank, p, 4, 4);
    Eigen::VectorXd sv(3 * s.s0.data.size());
    const size_t n = s.s0.data.size();
    for (size_t i = 0; i < n; ++i) {
      sv[static_cast<Eigen::Index>(i)] = s.s0.data[i];
      sv[static_cast<Eigen::Index>(n + i)] = s.s1.data[i];
      sv[static_cast<Eigen::Index>(2 * n + i)] = s.s2.data[i];
    }
    const Eigen::VectorXd my = m * sv;
    for (size_t i = 0; i < y.data.size(); ++i)
      worst = std::max(worst, std::abs(my[static_cast<Eigen::Index>(i)] -
                                       y.data[i]));
  }
  detail = "worst absolute mismatch " + std::to_string(worst);
  return worst <= 1e-12;
}

// ---------------------------------------------------------------- criterion 3

bool wiener_oracle(std::string& detail) {
  const SpectralGrid g{420, 10, 6};
  FilterArrayPattern p;
  p.tile_height = p.tile_width = 2;
  p.num_filters = 4;
  p.cells = {0, 1, 2, 3};
  const auto sens = random_sens(4, g, 30);
  std::vector<MultispectralImage> training;
  for (int i = 0; i < 4; ++i)
    training.push_back(synth_cube(12, 12, g, 3, 1.5, 3000 + i));

  const int window_tiles = 3, th = 2, tw = 2;
  const double noise_sigma = 0.01, ridge = 1e-6;
  const std::uint64_t noise_seed = 77;
  const auto model = wiener_train(training, p, sens, noise_sigma, noise_seed,
                                  window_tiles, ridge);

  // independent solve: explicit design per phase, direct inverse
  const int wh = window_tiles * th, ww = window_tiles * tw;
  const int D = wh * ww, L = g.count, half = (window_tiles - 1) / 2;
  std::vector<std::vector<Eigen::VectorXd>> ys(4), xs(4);
  for (size_t i = 0; i < training.size(); ++i) {
    const auto y =
        mosaic_apply(training[i], p, sens, {noise_sigma, noise_seed + i});
    for (int r = 0; r < y.height; ++r)
      for (int c = 0; c < y.width; ++c) {
        Eigen::VectorXd w(D);
        int idx = 0;
        const int r0 = r - (r % th) - half * th;
        const int c0 = c - (c % tw) - half * tw;
        for (int dr = 0; dr < wh; ++dr)
          for (int dc = 0; dc < ww; ++dc) {
            const int rr = ((r0 + dr) % y.height + y.height) % y.height;
            const int cc = ((c0 + dc) % y.width + y.width) % y.width;
            w[idx++] = y.at(rr, cc);
          }
        Eigen::VectorXd x(L);
        for (int b = 0; b < L; ++b) x[b] = training[i].at(r, c, b);
        const int phase = (r % th) * tw + (c % tw);
        ys[phase].push_back(w);
        xs[phase].push_back(x);
      }
  }
  double worst = 0.0;
  for (int phase = 0; phase < 4; ++phase) {
    const int n = static_cast<int>(ys[phase].size());
    Eigen::MatrixXd Y(D, n), X(L, n);
    for (int j = 0; j < n; ++j) {
      Y.col(j) = ys[phase][j];
      X.col(j) = xs[phase][j];
    }
    Eigen::MatrixXd gram = Y * Y.transpose();
    gram.diagonal().array() += ridge;
    const Eigen::MatrixXd oracle = X * Y.transpose() * gram.inverse();
    worst = std::max(worst,
                     (model.matrices[phase] - oracle).norm() / oracle.norm());
  }
  detail = "worst relative Frobenius " + std::to_string(worst);
  return worst <= 1e-6;
}

// ---------------------------------------------------------------- criterion 4

double annd_block_bruteforce(const FilterArrayPattern& p, int band) {
  const int th = p.tile_height, tw = p.tile_width;
  double acc = 0.0;
  for (int r = 0; r < th; ++r)
    for (int c = 0; c < tw; ++c) {
      double best = 1e300;
      for (int br = -1; br <= 1; ++br)
        for (int bc = -1; bc <= 1; ++bc)
          for (int r2 = 0; r2 < th; ++r2)
            for (int c2 = 0; c2 < tw; ++c2)
              if (p.cell(r2, c2) == band) {
                const double dr = r - (r2 + br * th);
                const double dc = c - (c2 + bc * tw);
                best = std::min(best, dr * dr + dc * dc);
              }
      acc += std::sqrt(best);
    }
  return acc / p.tile_area();
}

bool annd_oracle(std::string& detail) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int th = 1 + static_cast<int>(rng::hash(s, 11) % 6);
    const int tw = 1 + static_cast<int>(rng::hash(s, 12) % 6);
    const int K =
        1 + static_cast<int>(rng::hash(s, 13) % static_cast<std::uint64_t>(th * tw));
    const auto p = random_tile(th, tw, K, s + 40);
    const auto rep = annd(p);
    double overall = 0.0;
    for (int k = 0; k < K; ++k) {
      const double b = annd_block_bruteforce(p, k);
      worst = std::max(worst, std::abs(rep.per_band[k] - b));
      overall += b;
    }
    worst = std::max(worst, std::abs(rep.overall - overall / K));
  }
  FilterArrayPattern quad{2, 2, 4, {0, 1, 2, 3}};
  const double expect = (2.0 + std::sqrt(2.0)) / 4.0;
  worst = std::max(worst, std::abs(annd(quad).overall - expect));
  detail = "worst mismatch " + std::to_string(worst);
  return worst <= 1e-12;
}

// ---------------------------------------------------------------- criterion 5

// Exhaustive search over fixed-count assignments with first-occurrence
// canonical labeling; per-band nearest distances from a precomputed toroidal
// table.
double exhaustive_optimum(int th, int tw, int K, const std::vector<int>& counts) {
  const int area = th * tw;
  std::vector<std::vector<double>> dist(area, std::vector<double>(area));
  for (int i = 0; i < area; ++i)
    for (int j = 0; j < area; ++j) {
      int dr = std::abs(i / tw - j / tw), dc = std::abs(i % tw - j % tw);
      dr = std::min(dr, th - dr);
      dc = std::min(dc, tw - dc);
      dist[i][j] = std::sqrt(static_cast<double>(dr * dr + dc * dc));
    }
  std::vector<int> cells(area, -1), remaining = counts;
  std::vector<std::vector<int>> members(K);
  double best = 1e300;
  auto evaluate = [&] {
    double overall = 0.0;
    for (int k = 0; k < K; ++k) {
      double acc = 0.0;
      for (int i = 0; i < area; ++i) {
        double m = 1e300;
        for (int j : members[k]) m = std::min(m, dist[i][j]);
        acc += m;
      }
      overall += acc / area;
    }
    best = std::min(best, overall / K);
  };
  auto rec = [&](auto&& self, int cell, int used) -> void {
    if (cell == area) {
      evaluate();
      return;
    }
    for (int k = 0; k < K && k <= used; ++k) {
      if (remaining[k] == 0) continue;
      --remaining[k];
      cells[cell] = k;
      members[k].push_back(cell);
      self(self, cell + 1, std::max(used, k + 1));
      members[k].pop_back();
      ++remaining[k];
    }
    cells[cell] = -1;
  };
  rec(rec, 0, 0);
  return best;
}

bool annealing_optimality(std::string& detail) {
  AnnealSchedule sched;

  const double opt2 = exhaustive_optimum(2, 2, 2, {2, 2});
  const auto p2 = optimize_pattern(2, 2, 2, std::vector<int>{2, 2}, sched, 1);
  const double got2 = annd(p2).overall;

  const double opt4 = exhaustive_optimum(4, 4, 4, {4, 4, 4, 4});
  const auto p4 =
      optimize_pattern(4, 4, 4, std::vector<int>{4, 4, 4, 4}, sched, 1);
  const double got4 = annd(p4).overall;

  detail = "2x2: annealed " + std::to_string(got2) + " vs optimum " +
           std::to_string(opt2) + "; 4x4: annealed " + std::to_string(got4) +
           " vs optimum " + std::to_string(opt4);
  return std::abs(got2 - opt2) <= 1e-12 && std::abs(got4 - opt4) <= 1e-12;
}

// ---------------------------------------------------------------- criterion 6

bool joint_optimization(std::string& detail) {
  const SpectralGrid g{420, 10, 16};
  FilterArrayPattern p;
  p.tile_height = p.tile_width = 4;
  p.num_filters = 16;
  p.cells.resize(16);
  std::iota(p.cells.begin(), p.cells.end(), 0);

  std::vector<MultispectralImage> cubes;
  for (int i = 0; i < 20; ++i)
    cubes.push_back(synth_cube(32, 32, g, 4, 3.0, 9000 + i));
  const std::vector<MultispectralImage> train(cubes.begin(), cubes.begin() + 16);
  const std::vector<MultispectralImage> held(cubes.begin() + 16, cubes.end());

  // MSE-dominated configuration: with the default barrier weight the barrier
  // gradient (~0.19 near the 0.05 bound) dwarfs the MSE gradient and the dual
  // acceptance test rejects every step
  OptimizerConfig cfg;
  cfg.max_outer_iters = 20;
  cfg.window_tiles = 1;
  cfg.ridge = 1e-6;
  cfg.seed = 7;
  cfg.noise_sigma = 0.02;
  cfg.barrier_init = 1e-8;
  cfg.smoothness_weight = 0.0;
  cfg.gradient_step = 100.0;

  const auto init = random_init_sensitivity(16, g, 7);

  // (b) forward differences (the step the optimizer descends along) against a
  // central-difference oracle at 10 seeded coordinates
  const double base = reconstruction_mse(train, p, init, cfg);
  const double h = cfg.fd_step;
  Eigen::VectorXd fwd(10), cen(10);
  for (int j = 0; j < 10; ++j) {
    const size_t coord = rng::hash(42, j) % init.values.size();
    SensitivityMatrix plus = init, minus = init;
    plus.values[coord] += h;
    minus.values[coord] -= h;
    const double fp = reconstruction_mse(train, p, plus, cfg);
    const double fm = reconstruction_mse(train, p, minus, cfg);
    fwd[j] = (fp - base) / h;
    cen[j] = (fp - fm) / (2.0 * h);
  }
  const double grad_rel = (fwd - cen).norm() / cen.norm();

  // (a) full run with the exact trace assertion
  const auto result = optimize_sensitivity(train, p, init, cfg);
  bool monotone = !result.trace.records.empty();
  for (size_t i = 1; i < result.trace.records.size(); ++i)
    if (result.trace.records[i].objective >
        result.trace.records[i - 1].objective)
      monotone = false;

  // (c) held-out PSNR against the random initialization
  auto held_out_psnr = [&](const SensitivityMatrix& sens) {
    const auto model = wiener_train(train, p, sens, cfg.noise_sigma, cfg.seed,
                                    cfg.window_tiles, cfg.ridge);
    double acc = 0.0;
    size_t n = 0;
    for (const auto& cube : held) {
      const auto rec = wiener_apply(
          model, mosaic_apply(cube, p, sens, {cfg.noise_sigma, cfg.seed}), g);
      for (size_t i = 0; i < cube.data.size(); ++i) {
        const double d = rec.data[i] - cube.data[i];
        acc += d * d;
        ++n;
      }
    }
    return 10.0 * std::log10(1.0 / (acc / n));
  };
  const double psnr_init = held_out_psnr(init);
  const double psnr_opt = held_out_psnr(result.sensitivity);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "grad rel %.3g, trace %s, held-out %.2f -> %.2f dB", grad_rel,
                monotone ? "non-increasing" : "INCREASED", psnr_init, psnr_opt);
  detail = buf;
  return grad_rel <= 1e-4 && monotone && psnr_opt - psnr_init >= 0.5;
}

// ---------------------------------------------------------------- criterion 7

bool vtv_checks(std::string& detail) {
  // fixed point on a constant scene
  const SpectralGrid g{420, 10, 3};
  FilterArrayPattern p13{1, 3, 3, {0, 1, 2}};
  SensitivityMatrix delta3(3, g);
  for (int k = 0; k < 3; ++k) delta3.at(k, k) = 1.0;
  MultispectralImage flat(9, 9, g);
  for (double& v : flat.data) v = 0.6;
  VtvConfig cfg;
  cfg.lambda = 0.05;
  cfg.max_iters = 1000;
  const auto res = demosaic_vtv(mosaic_apply(flat, p13, delta3), p13, delta3, cfg);
  const double flat_err = rmse(flat, res.x);

  // objective non-increasing after iteration 10 on a textured scene
  const SpectralGrid g4{420, 10, 4};
  FilterArrayPattern p22{2, 2, 4, {0, 1, 2, 3}};
  SensitivityMatrix delta4(4, g4);
  for (int k = 0; k < 4; ++k) delta4.at(k, k) = 1.0;

  MultispectralImage piecewise(16, 16, g4);
  const double levels[4][4] = {{0.2, 0.4, 0.7, 0.5},
                               {0.8, 0.3, 0.2, 0.6},
                               {0.5, 0.9, 0.4, 0.3},
                               {0.3, 0.5, 0.8, 0.9}};
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      for (int b = 0; b < 4; ++b)
        piecewise.at(r, c, b) = levels[2 * (r / 8) + (c / 8)][b];
  const auto y = mosaic_apply(piecewise, p22, delta4, {0.02, 11});

  VtvConfig cfg2;
  cfg2.lambda = 0.02;
  cfg2.max_iters = 400;
  const auto res2 = demosaic_vtv(y, p22, delta4, cfg2);
  bool monotone = true;
  for (size_t i = 11; i < res2.objective_trace.size(); ++i)
    if (res2.objective_trace[i] > res2.objective_trace[i - 1]) monotone = false;

  const auto sampling = band_sampling_identity(p22, 4);
  const double psnr_vtv = psnr(piecewise, res2.x);
  const double psnr_bil = psnr(piecewise, demosaic_bilinear(y, sampling, g4));

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "constant rmse %.2g, trace %s, vtv %.2f dB vs bilinear %.2f dB",
                flat_err, monotone ? "non-increasing" : "INCREASED", psnr_vtv,
                psnr_bil);
  detail = buf;
  return flat_err <= 1e-6 && monotone && psnr_vtv >= psnr_bil;
}

// ---------------------------------------------------------------- criterion 8

bool classic_checks(std::string& detail) {
  const SpectralGrid g{420, 10, 4};
  FilterArrayPattern p{2, 2, 4, {0, 1, 2, 3}};
  SensitivityMatrix delta(4, g);
  for (int k = 0; k < 4; ++k) delta.at(k, k) = 1.0;
  const auto sampling = band_sampling_identity(p, 4);

  MultispectralImage flat(8, 8, g);
  for (double& v : flat.data) v = 0.37;
  const auto yflat = mosaic_apply(flat, p, delta);

  const auto cube = random_cube(8, 8, g, 808);
  const auto y = mosaic_apply(cube, p, delta);
  MosaickedImage yt(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) yt.at(r, c) = y.at((r + 2) % 8, (c + 2) % 8);

  double flat_err = 0.0, sample_err = 0.0, shift_err = 0.0;
  for (auto method :
       {+[](const MosaickedImage& m, const BandSampling& s, const SpectralGrid& gr) {
          return demosaic_bilinear(m, s, gr);
        },
        +[](const MosaickedImage& m, const BandSampling& s, const SpectralGrid& gr) {
          return demosaic_interband(m, s, gr, 1.0);
        },
        +[](const MosaickedImage& m, const BandSampling& s, const SpectralGrid& gr) {
          return demosaic_ppi(m, s, gr, 0);
        }}) {
    const auto rf = method(yflat, sampling, g);
    for (double v : rf.data) flat_err = std::max(flat_err, std::abs(v - 0.37));

    const auto rec = method(y, sampling, g);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c)
        sample_err = std::max(
            sample_err, std::abs(rec.at(r, c, p.filter_at(r, c)) - y.at(r, c)));

    const auto rect = method(yt, sampling, g);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c)
        for (int b = 0; b < 4; ++b)
          shift_err = std::max(shift_err,
                               std::abs(rect.at(r, c, b) -
                                        rec.at((r + 2) % 8, (c + 2) % 8, b)));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "constant %.2g, samples %.2g, translation %.2g", flat_err,
                sample_err, shift_err);
  detail = buf;
  return flat_err <= 1e-9 && sample_err == 0.0 && shift_err <= 1e-12;
}

// ---------------------------------------------------------------- criterion 9

bool polarization_checks(std::string& detail) {
  const auto preset = preset_pattern("fig7-pol16");
  const auto& bank = *preset.bank;
  const auto& p = preset.pattern;
  const SpectralGrid g = bank.grid;
  const int B = 4;
  const Eigen::MatrixXd phi = spectral_basis(g, B);

  // (i) unpolarized constant scene: equal responses across orientations of a
  // pitch row, and (ii) theta / theta+90 pairs sum identically even when
  // polarized
  StokesCube unpol(4, 4, g);
  const Eigen::VectorXd s0 = phi * Eigen::VectorXd::Ones(B);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < g.count; ++b) unpol.s0.at(r, c, b) = s0[b];
  const auto y_unpol = polarized_mosaic(unpol, bank, p);
  double spread = 0.0;
  for (int row = 0; row < 4; ++row)
    for (int col = 1; col < 4; ++col)
      spread = std::max(spread,
                        std::abs(y_unpol.at(row, col) - y_unpol.at(row, 0)));

  StokesCube pol = unpol;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < g.count; ++b) {
        pol.s1.at(r, c, b) = 0.5 * s0[b];
        pol.s2.at(r, c, b) = 0.3 * s0[b];
      }
  const auto y_pol = polarized_mosaic(pol, bank, p);
  double pair_err = 0.0;
  for (int row = 0; row < 4; ++row) {
    const double a = y_pol.at(row, 0) + y_pol.at(row, 2);   // 0 + 90
    const double b = y_pol.at(row, 1) + y_pol.at(row, 3);   // 45 + 135
    pair_err = std::max(pair_err, std::abs(a - b));
    pair_err = std::max(pair_err,
                        std::abs(a - (y_unpol.at(row, 0) + y_unpol.at(row, 2))));
  }

  // (iii) tile-constant smooth-basis scene against the per-tile LS oracle
  StokesCube scene(8, 8, g);
  Eigen::MatrixXd coeffs(4, 3 * B);  // one coefficient row per tile
  for (int t = 0; t < 4; ++t)
    for (int j = 0; j < 3 * B; ++j) {
      const double u = rng::uniform(33, t, j);
      coeffs(t, j) = j < B ? 1.0 + 0.3 * u : 0.25 * (u - 0.5);
    }
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      const int t = 2 * (r / 4) + (c / 4);
      const Eigen::VectorXd v0 = phi * coeffs.row(t).segment(0, B).transpose();
      const Eigen::VectorXd v1 = phi * coeffs.row(t).segment(B, B).transpose();
      const Eigen::VectorXd v2 = phi * coeffs.row(t).segment(2 * B, B).transpose();
      for (int b = 0; b < g.count; ++b) {
        scene.s0.at(r, c, b) = v0[b];
        scene.s1.at(r, c, b) = v1[b];
        scene.s2.at(r, c, b) = v2[b];
      }
    }
  const auto y = polarized_mosaic(scene, bank, p);
  StokesRecoveryParams params;
  params.basis_dim = B;
  params.cone_project = false;
  const auto rec = recover_stokes(y, bank, p, StokesMethod::kRidge, params);

  // oracle design: push unit-coefficient constant scenes through the forward
  // model and keep one tile of the response
  Eigen::MatrixXd design(16, 3 * B);
  for (int comp = 0; comp < 3; ++comp)
    for (int j = 0; j < B; ++j) {
      StokesCube basis_scene(4, 4, g);
      const Eigen::VectorXd v = phi.col(j);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          for (int b = 0; b < g.count; ++b)
            (comp == 0   ? basis_scene.s0
             : comp == 1 ? basis_scene.s1
                         : basis_scene.s2)
                .at(r, c, b) = v[b];
      const auto col = polarized_mosaic(basis_scene, bank, p);
      for (int i = 0; i < 16; ++i) design(i, comp * B + j) = col.data[i];
    }
  double err2 = 0.0, ref2 = 0.0;
  for (int r0 = 0; r0 < 8; r0 += 4)
    for (int c0 = 0; c0 < 8; c0 += 4) {
      Eigen::VectorXd rhs(16);
      for (int tr = 0; tr < 4; ++tr)
        for (int tc = 0; tc < 4; ++tc)
          rhs[tr * 4 + tc] = y.at(r0 + tr, c0 + tc);
      const Eigen::VectorXd a =
          design.colPivHouseholderQr().solve(rhs);
      const Eigen::VectorXd v0 = phi * a.segment(0, B);
      const Eigen::VectorXd v1 = phi * a.segment(B, B);
      const Eigen::VectorXd v2 = phi * a.segment(2 * B, B);
      for (int b = 0; b < g.count; ++b) {
        const double d0 = rec.s0.at(r0, c0, b) - v0[b];
        const double d1 = rec.s1.at(r0, c0, b) - v1[b];
        const double d2 = rec.s2.at(r0, c0, b) - v2[b];
        err2 += d0 * d0 + d1 * d1 + d2 * d2;
        ref2 += v0[b] * v0[b] + v1[b] * v1[b] + v2[b] * v2[b];
      }
    }
  const double rel_rmse = std::sqrt(err2 / ref2);

  // (iv) the projected recovery always satisfies the cone
  bool cone_ok = true;
  for (std::uint64_t s = 0; s < 5; ++s) {
    MosaickedImage noise(8, 8);
    for (size_t i = 0; i < noise.data.size(); ++i)
      noise.data[i] = rng::uniform(900 + s, i) - 0.2;
    const auto out = recover_stokes(noise, bank, p, StokesMethod::kRidge,
                                    StokesRecoveryParams{});
    if (!validate(out).empty()) cone_ok = false;
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "orientation spread %.2g, pair identity %.2g, oracle rel rmse "
                "%.2g, cone %s",
                spread, pair_err, rel_rmse, cone_ok ? "ok" : "VIOLATED");
  detail = buf;
  return spread <= 1e-12 && pair_err <= 1e-12 && rel_rmse < 1e-3 && cone_ok;
}

// --------------------------------------------------------------- criterion 10

bool colorimetry_checks(std::string& detail) {
  const auto& ill = d65_illuminant();
  const auto& cmf = cie1931_cmf();
  const std::vector<double> one(31, 1.0);
  const auto white = xyz_to_srgb(spectrum_to_xyz(one, ill, cmf));
  const double white_err = std::max(
      {std::abs(white.r - 1.0), std::abs(white.g - 1.0), std::abs(white.b - 1.0)});

  double gamma_err = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    const double v = i / 4096.0;
    gamma_err = std::max(gamma_err, std::abs(srgb_decode(srgb_encode(v)) - v));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "white off by %.2g, gamma round trip %.2g",
                white_err, gamma_err);
  detail = buf;
  return white_err <= 1.0 / 255.0 && gamma_err <= 1e-12;
}

// --------------------------------------------------------------- criterion 11

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool run_cli(const std::string& cli, const std::string& args,
             const std::filesystem::path& stdout_file) {
  const std::string cmd =
      cli + " " + args + " > " + stdout_file.string() + " 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool cli_reproducibility(const std::string& cli, std::string& detail) {
  if (cli.empty()) {
    detail = "no CLI path given on the command line";
    return false;
  }
  const std::filesystem::path root =
      std::filesystem::temp_directory_path() /
      ("msfa_accept_" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);

  // shared fixtures the commands need
  const std::filesystem::path fixtures = root / "fixtures";
  std::filesystem::create_directories(fixtures);
  {
    SensitivityMatrix sens(4, {420, 10, 8});
    for (size_t i = 0; i < sens.values.size(); ++i)
      sens.values[i] = 0.1 + 0.8 * rng::uniform(5, i);
    save_sensitivity_csv(fixtures / "sens.csv", sens);
    FilterArrayPattern p{2, 2, 4, {0, 1, 2, 3}};
    save_pattern_text(fixtures / "pattern.txt", p);
    save_text(fixtures / "exp.json", R"({
      "seed": 3,
      "input": {"synth": {"height": 8, "width": 8, "bands": 4, "basis_dim": 2,
                          "smoothness": 1.0}},
      "pattern": {"preset": "bayer"},
      "sensitivity": {"delta": true},
      "method": "bilinear",
      "output_dir": "out"
    })");
  }

  // every command once per pass, all file outputs inside the pass directory
  auto one_pass = [&](const std::filesystem::path& dir) -> bool {
    std::filesystem::create_directories(dir);
    const std::string d = dir.string() + "/";
    const std::string fx = fixtures.string() + "/";
    int step = 0;
    auto cli_step = [&](const std::string& args) {
      return run_cli(cli, args, dir / ("stdout" + std::to_string(step++) + ".txt"));
    };
    bool ok = true;
    ok &= cli_step("--seed 3 synth --out " + d + "cube.msic --height 8 --width 8"
                   " --bands 8 --basis-dim 3 --smoothness 1.5");
    ok &= cli_step("--seed 3 synth --stokes --dop 0.4 --aolp-deg 20 --out " + d +
                   "stokes.msic --height 8 --width 8 --bands 31");
    ok &= cli_step("--seed 4 mosaic --cube " + d + "cube.msic --pattern " + fx +
                   "pattern.txt --sens " + fx + "sens.csv --sigma 0.01 --out " +
                   d + "mosaic.msic");
    ok &= cli_step("--seed 4 demosaic --mosaic " + d + "mosaic.msic --pattern " +
                   fx + "pattern.txt --method bilinear --bands 4 --out " + d +
                   "bil.msic");
    ok &= cli_step("--seed 4 demosaic --mosaic " + d + "mosaic.msic --pattern " +
                   fx + "pattern.txt --method vtv --sens " + fx +
                   "sens.csv --bands 8 --max-iters 40 --out " + d + "vtv.msic");
    ok &= cli_step("--seed 4 train-wiener --train " + d + "cube.msic --pattern " +
                   fx + "pattern.txt --sens " + fx + "sens.csv --window-tiles 1"
                   " --out " + d + "model.wien");
    ok &= cli_step("--seed 4 demosaic --mosaic " + d + "mosaic.msic --pattern " +
                   fx + "pattern.txt --method wiener --model " + d +
                   "model.wien --bands 8 --out " + d + "wien.msic");
    ok &= cli_step("--seed 5 optimize-sens --train " + d + "cube.msic --pattern " +
                   fx + "pattern.txt --iters 2 --window-tiles 1 --out-sens " + d +
                   "opt_sens.csv --out-model " + d + "opt.wien --out-trace " + d +
                   "trace.csv");
    ok &= cli_step("--seed 6 optimize-pattern --tile-h 4 --tile-w 4"
                   " --num-filters 4 --max-moves 2000 --restarts 1 --out " + d +
                   "opt_pattern.txt");
    ok &= cli_step("annd --pattern " + fx + "pattern.txt");
    ok &= cli_step("render --cube " + d + "cube.msic --out " + d + "cube.png");
    ok &= cli_step("swatches --sens " + fx + "sens.csv --size 8 --out " + d +
                   "swatches.png");
    ok &= cli_step("metrics --reference " + d + "cube.msic --test " + d +
                   "wien.msic");
    ok &= cli_step("--seed 7 simulate-pol --stokes " + d +
                   "stokes.msic --sigma 0.005 --out " + d + "polmosaic.msic");
    ok &= cli_step("--seed 7 recover-pol --mosaic " + d +
                   "polmosaic.msic --basis-dim 4 --out " + d +
                   "rec_stokes.msic --out-s0 " + d + "rec_s0.msic");
    {
      // the experiment runner resolves outputs relative to the spec file
      std::filesystem::create_directories(dir / "exp");
      std::filesystem::copy_file(fixtures / "exp.json", dir / "exp" / "exp.json");
      ok &= cli_step("run --spec " + (dir / "exp" / "exp.json").string());
    }
    return ok;
  };

  const auto dir_a = root / "a", dir_b = root / "b";
  if (!one_pass(dir_a) || !one_pass(dir_b)) {
    detail = "a command exited nonzero (see " + root.string() + ")";
    return false;
  }

  // byte-compare everything the two passes produced
  std::vector<std::filesystem::path> rel;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir_a))
    if (entry.is_regular_file())
      rel.push_back(std::filesystem::relative(entry.path(), dir_a));
  std::sort(rel.begin(), rel.end());
  size_t compared = 0;
  for (const auto& r : rel) {
    if (!std::filesystem::exists(dir_b / r)) {
      detail = "missing in second pass: " + r.string();
      return false;
    }
    // the captured stdout echoes output paths, which differ only by the pass
    // directory; neutralize that prefix before the byte comparison
    auto normalized = [](std::string bytes, const std::string& prefix) {
      for (size_t pos; (pos = bytes.find(prefix)) != std::string::npos;)
        bytes.replace(pos, prefix.size(), "@DIR@");
      return bytes;
    };
    if (normalized(slurp(dir_a / r), dir_a.string()) !=
        normalized(slurp(dir_b / r), dir_b.string())) {
      detail = "bytes differ: " + r.string();
      return false;
    }
    ++compared;
  }
  std::filesystem::remove_all(root);
  detail = std::to_string(compared) + " files byte-identical across reruns";
  return compared > 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run_criterion(1, "adjoint identity over 100 seeded instances", adjoint_identity);
  run_criterion(2, "operators match their dense system matrices",
                operator_matrix_equivalence);
  run_criterion(3, "Wiener training matches the normal-equations oracle",
                wiener_oracle);
  run_criterion(4, "ANND equals brute force and the closed-form 2x2 value",
                annd_oracle);
  run_criterion(5, "annealed patterns reach the exhaustive optimum",
                annealing_optimality);
  run_criterion(6, "joint sensitivity optimization (trace, gradient, held-out)",
                joint_optimization);
  run_criterion(7, "VTV fixed point, monotone trace, and PSNR vs bilinear",
                vtv_checks);
  run_criterion(8, "classic demosaickers: exactness and equivariance",
                classic_checks);
  run_criterion(9, "polarized model identities and Stokes recovery oracle",
                polarization_checks);
  run_criterion(10, "colorimetry white point and gamma round trip",
                colorimetry_checks);
  run_criterion(11, "CLI byte-reproducibility across reruns",
                [&](std::string& detail) { return cli_reproducibility(cli, detail); });

  if (g_failures != 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
