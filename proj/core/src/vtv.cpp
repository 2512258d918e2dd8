#include "msfa/vtv.hpp"

#include <cmath>

#include "msfa/forward_model.hpp"

namespace msfa {

namespace {

// Forward differences with periodic wrap, all bands of one pixel stacked.
// grad layout: [pixel][band][axis], axis 0 = down, 1 = right.
void apply_gradient(const MultispectralImage& x, std::vector<double>& g) {
  const int H = x.height, W = x.width, L = x.grid.count;
  for (int r = 0; r < H; ++r) {
    const int rn = (r + 1) % H;
    for (int c = 0; c < W; ++c) {
      const int cn = (c + 1) % W;
      const size_t base = (static_cast<size_t>(r) * W + c) * L * 2;
      for (int b = 0; b < L; ++b) {
        g[base + 2 * b] = x.at(rn, c, b) - x.at(r, c, b);
        g[base + 2 * b + 1] = x.at(r, cn, b) - x.at(r, c, b);
      }
    }
  }
}

// Adjoint of apply_gradient (negative divergence).
void apply_gradient_adjoint(const std::vector<double>& g,
                            MultispectralImage& out) {
  const int H = out.height, W = out.width, L = out.grid.count;
  std::fill(out.data.begin(), out.data.end(), 0.0);
  for (int r = 0; r < H; ++r) {
    const int rn = (r + 1) % H;
    for (int c = 0; c < W; ++c) {
      const int cn = (c + 1) % W;
      const size_t base = (static_cast<size_t>(r) * W + c) * L * 2;
      for (int b = 0; b < L; ++b) {
        const double gd = g[base + 2 * b], gr = g[base + 2 * b + 1];
        out.at(rn, c, b) += gd;
        out.at(r, c, b) -= gd + gr;
        out.at(r, cn, b) += gr;
      }
    }
  }
}

double data_residual_sq(const MultispectralImage& x, const MosaickedImage& y,
                        const FilterArrayPattern& pattern,
                        const SensitivityMatrix& sens) {
  double acc = 0.0;
  const int L = x.grid.count;
  for (int r = 0; r < x.height; ++r)
    for (int c = 0; c < x.width; ++c) {
      const double* s = sens.row(pattern.filter_at(r, c));
      double v = -y.at(r, c);
      for (int b = 0; b < L; ++b) v += s[b] * x.at(r, c, b);
      acc += v * v;
    }
  return acc;
}

}  // namespace

double vtv_value(const MultispectralImage& x) {
  const int H = x.height, W = x.width, L = x.grid.count;
  double acc = 0.0;
  for (int r = 0; r < H; ++r) {
    const int rn = (r + 1) % H;
    for (int c = 0; c < W; ++c) {
      const int cn = (c + 1) % W;
      double f = 0.0;
      for (int b = 0; b < L; ++b) {
        const double gd = x.at(rn, c, b) - x.at(r, c, b);
        const double gr = x.at(r, cn, b) - x.at(r, c, b);
        f += gd * gd + gr * gr;
      }
      acc += std::sqrt(f);
    }
  }
  return acc;
}

VtvResult demosaic_vtv(const MosaickedImage& y, const FilterArrayPattern& pattern,
                       const SensitivityMatrix& sens, const VtvConfig& cfg) {
  if (!(cfg.lambda > 0.0))
    throw InvalidArgument("demosaic_vtv: lambda must be > 0");
  if (cfg.primal_step * cfg.dual_step * 8.0 > 1.0 + 1e-12)
    throw InvalidArgument(
        "demosaic_vtv: primal_step * dual_step * 8 must be <= 1");

  const int H = y.height, W = y.width, L = sens.grid.count;
  const double tau = cfg.primal_step, sigma = cfg.dual_step;

  // per-pixel Sherman-Morrison factors for (I + tau s s^T)^-1
  std::vector<double> snorm(pattern.tile_area());
  for (int tr = 0; tr < pattern.tile_height; ++tr)
    for (int tc = 0; tc < pattern.tile_width; ++tc) {
      const double* s = sens.row(pattern.cell(tr, tc));
      double n = 0.0;
      for (int b = 0; b < L; ++b) n += s[b] * s[b];
      snorm[tr * pattern.tile_width + tc] = n;
    }

  MultispectralImage x = mosaic_adjoint(y, pattern, sens);
  MultispectralImage xbar = x, xnew(H, W, sens.grid), div(H, W, sens.grid);
  std::vector<double> dual(static_cast<size_t>(H) * W * L * 2, 0.0);
  std::vector<double> grad(dual.size(), 0.0);

  VtvResult res;
  res.x = x;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // dual ascent + projection onto the per-pixel Frobenius ball of radius lambda
    apply_gradient(xbar, grad);
    for (size_t px = 0; px < static_cast<size_t>(H) * W; ++px) {
      const size_t base = px * L * 2;
      double norm2 = 0.0;
      for (int j = 0; j < 2 * L; ++j) {
        dual[base + j] += sigma * grad[base + j];
        norm2 += dual[base + j] * dual[base + j];
      }
      const double norm = std::sqrt(norm2);
      if (norm > cfg.lambda) {
        const double scale = cfg.lambda / norm;
        for (int j = 0; j < 2 * L; ++j) dual[base + j] *= scale;
      }
    }

    // primal descent + exact prox of the quadratic data term
    apply_gradient_adjoint(dual, div);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c) {
        const int phase = (r % pattern.tile_height) * pattern.tile_width +
                          (c % pattern.tile_width);
        const double* s = sens.row(pattern.filter_at(r, c));
        double dot = 0.0;
        for (int b = 0; b < L; ++b) {
          const double v = x.at(r, c, b) - tau * div.at(r, c, b) +
                           tau * s[b] * y.at(r, c);
          xnew.at(r, c, b) = v;
          dot += s[b] * v;
        }
        const double factor = tau * dot / (1.0 + tau * snorm[phase]);
        for (int b = 0; b < L; ++b) xnew.at(r, c, b) -= factor * s[b];
      }

    double delta2 = 0.0, norm2 = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) {
      const double d = xnew.data[i] - x.data[i];
      delta2 += d * d;
      norm2 += x.data[i] * x.data[i];
      if (!std::isfinite(xnew.data[i]))
        throw NumericalError("demosaic_vtv: non-finite iterate at iteration " +
                             std::to_string(iter));
      xbar.data[i] = 2.0 * xnew.data[i] - x.data[i];
    }
    x.data.swap(xnew.data);
    res.iterations = iter + 1;
    res.objective_trace.push_back(
        cfg.lambda * vtv_value(x) + 0.5 * data_residual_sq(x, y, pattern, sens));
    if (norm2 > 0.0 && std::sqrt(delta2 / norm2) < cfg.stop_tol) break;
  }

  res.x = x;
  res.objective = res.objective_trace.empty()
                      ? cfg.lambda * vtv_value(x) +
                            0.5 * data_residual_sq(x, y, pattern, sens)
                      : res.objective_trace.back();
  res.residual = std::sqrt(data_residual_sq(x, y, pattern, sens));
  return res;
}

}  // namespace msfa
