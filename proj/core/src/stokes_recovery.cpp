#include "msfa/stokes_recovery.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "msfa/basis.hpp"
#include "msfa/wiener.hpp"

namespace msfa {

namespace {

constexpr double kPi = 3.14159265358979323846;

StokesCube recover_ridge(const MosaickedImage& y, const PolarizedFilterBank& bank,
                         const FilterArrayPattern& pattern,
                         const StokesRecoveryParams& params) {
  const int th = pattern.tile_height, tw = pattern.tile_width;
  if (y.height % th != 0 || y.width % tw != 0)
    throw InvalidArgument("recover_stokes: mosaic dimensions must be a "
                          "multiple of the tile size");
  const int L = bank.grid.count, B = params.basis_dim;
  const Eigen::MatrixXd phi = spectral_basis(bank.grid, B);

  // one shared per-tile design matrix: tile_area equations, 3B unknowns
  Eigen::MatrixXd m(pattern.tile_area(), 3 * B);
  for (int tr = 0; tr < th; ++tr) {
    for (int tc = 0; tc < tw; ++tc) {
      const int k = pattern.cell(tr, tc);
      const double theta = bank.orientation_deg[k] * kPi / 180.0;
      const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
      Eigen::RowVectorXd tsum(L), tdif(L);
      for (int i = 0; i < L; ++i) {
        tsum[i] = 0.5 * (bank.te(k, i) + bank.tm(k, i));
        tdif[i] = 0.5 * (bank.te(k, i) - bank.tm(k, i));
      }
      const int row = tr * tw + tc;
      m.block(row, 0, 1, B) = tsum * phi;
      m.block(row, B, 1, B) = c2 * (tdif * phi);
      m.block(row, 2 * B, 1, B) = s2 * (tdif * phi);
    }
  }
  Eigen::MatrixXd normal = m.transpose() * m;
  normal.diagonal().array() += params.ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success ||
      (params.ridge == 0.0 &&
       Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() < 3 * B))
    throw NumericalError("recover_stokes: singular per-tile system with zero ridge");

  StokesCube out(y.height, y.width, bank.grid);
  Eigen::VectorXd rhs(pattern.tile_area());
  for (int r0 = 0; r0 < y.height; r0 += th) {
    for (int c0 = 0; c0 < y.width; c0 += tw) {
      for (int tr = 0; tr < th; ++tr)
        for (int tc = 0; tc < tw; ++tc)
          rhs[tr * tw + tc] = y.at(r0 + tr, c0 + tc);
      const Eigen::VectorXd a = ldlt.solve(m.transpose() * rhs);
      const Eigen::VectorXd v0 = phi * a.segment(0, B);
      const Eigen::VectorXd v1 = phi * a.segment(B, B);
      const Eigen::VectorXd v2 = phi * a.segment(2 * B, B);
      for (int tr = 0; tr < th; ++tr)
        for (int tc = 0; tc < tw; ++tc)
          for (int b = 0; b < L; ++b) {
            out.s0.at(r0 + tr, c0 + tc, b) = v0[b];
            out.s1.at(r0 + tr, c0 + tc, b) = v1[b];
            out.s2.at(r0 + tr, c0 + tc, b) = v2[b];
          }
    }
  }
  return out;
}

}  // namespace

void project_stokes_cone(StokesCube& s) {
  for (size_t i = 0; i < s.s0.data.size(); ++i) {
    double& a = s.s0.data[i];
    double& b = s.s1.data[i];
    double& c = s.s2.data[i];
    if (a < 0.0) a = 0.0;
    const double lin = std::sqrt(b * b + c * c);
    if (lin > a) {
      const double scale = lin > 0.0 ? a / lin : 0.0;
      b *= scale;
      c *= scale;
    }
  }
}

StokesCube recover_stokes(const MosaickedImage& y,
                          const PolarizedFilterBank& bank,
                          const FilterArrayPattern& pattern,
                          StokesMethod method,
                          const StokesRecoveryParams& params) {
  if (pattern.num_filters != bank.num_filters)
    throw InvalidArgument("recover_stokes: pattern/bank filter counts differ");
  StokesCube out;
  if (method == StokesMethod::kRidge) {
    out = recover_ridge(y, bank, pattern, params);
  } else {
    if (params.training == nullptr || params.training->empty())
      throw InvalidArgument("recover_stokes: trained-wiener needs a training set");
    const WienerModel model = wiener_train_stokes(
        *params.training, pattern, bank, params.noise_sigma, params.seed,
        params.window_tiles, params.ridge);
    out = wiener_apply_stokes(model, y, bank.grid);
  }
  if (params.cone_project) project_stokes_cone(out);
  return out;
}

MultispectralImage recover_spectrum_nonpolarized(
    const MosaickedImage& y, const PolarizedFilterBank& bank,
    const FilterArrayPattern& pattern, const StokesRecoveryParams& params) {
  return recover_stokes(y, bank, pattern, StokesMethod::kRidge, params).s0;
}

}  // namespace msfa
