#include "msfa/wiener.hpp"

#include <Eigen/Cholesky>
#include <functional>
#include <istream>
#include <ostream>

#include "msfa/forward_model.hpp"

namespace msfa {

namespace {

// Gathers the tile-aligned window around (r,c) into `w`, periodic boundaries.
// The window covers window_tiles x window_tiles tiles with (r,c)'s tile in
// the center, so the mosaic layout inside the window is identical for every
// pixel of the same phase.
void gather_window(const MosaickedImage& y, const WienerModel& geom, int r,
                   int c, Eigen::VectorXd& w) {
  const int th = geom.tile_height, tw = geom.tile_width;
  const int half = (geom.window_tiles - 1) / 2;
  const int r0 = r - (r % th) - half * th;
  const int c0 = c - (c % tw) - half * tw;
  int idx = 0;
  for (int dr = 0; dr < geom.window_height(); ++dr) {
    int rr = (r0 + dr) % y.height;
    if (rr < 0) rr += y.height;
    for (int dc = 0; dc < geom.window_width(); ++dc) {
      int cc = (c0 + dc) % y.width;
      if (cc < 0) cc += y.width;
      w[idx++] = y.at(rr, cc);
    }
  }
}

WienerModel train_generic(
    const std::vector<MosaickedImage>& mosaics,
    const std::function<void(int img, int r, int c, Eigen::VectorXd&)>& target,
    int output_dim, const FilterArrayPattern& pattern, int window_tiles,
    double ridge) {
  if (window_tiles < 1 || window_tiles % 2 == 0)
    throw InvalidArgument("wiener_train: window_tiles must be odd and >= 1");
  if (ridge < 0.0) throw InvalidArgument("wiener_train: ridge must be >= 0");

  WienerModel model;
  model.tile_height = pattern.tile_height;
  model.tile_width = pattern.tile_width;
  model.window_tiles = window_tiles;
  model.output_dim = output_dim;
  model.ridge = ridge;

  const int D = model.window_dim();
  const int phases = pattern.tile_area();
  std::vector<Eigen::MatrixXd> gram(phases, Eigen::MatrixXd::Zero(D, D));
  std::vector<Eigen::MatrixXd> cross(phases,
                                     Eigen::MatrixXd::Zero(output_dim, D));
  std::vector<long> pairs(phases, 0);

  Eigen::VectorXd w(D), x(output_dim);
  for (size_t img = 0; img < mosaics.size(); ++img) {
    const MosaickedImage& y = mosaics[img];
    for (int r = 0; r < y.height; ++r) {
      for (int c = 0; c < y.width; ++c) {
        const int p = (r % pattern.tile_height) * pattern.tile_width +
                      (c % pattern.tile_width);
        gather_window(y, model, r, c, w);
        target(static_cast<int>(img), r, c, x);
        gram[p].selfadjointView<Eigen::Lower>().rankUpdate(w);
        cross[p].noalias() += x * w.transpose();
        ++pairs[p];
      }
    }
  }

  model.matrices.resize(phases);
  for (int p = 0; p < phases; ++p) {
    if (ridge == 0.0 && pairs[p] < D)
      throw NumericalError("wiener_train: phase " + std::to_string(p) +
                           " has " + std::to_string(pairs[p]) +
                           " pairs for window dimension " + std::to_string(D) +
                           " with ridge 0 (singular system)");
    Eigen::MatrixXd g = gram[p].selfadjointView<Eigen::Lower>();
    g.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success)
      throw NumericalError("wiener_train: singular normal equations at phase " +
                           std::to_string(p));
    model.matrices[p] = ldlt.solve(cross[p].transpose()).transpose();
  }
  return model;
}

void check_apply(const WienerModel& model, const MosaickedImage& y) {
  if (y.height % model.tile_height != 0 || y.width % model.tile_width != 0)
    throw InvalidArgument("wiener_apply: mosaic dimensions must be a multiple "
                          "of the tile size");
  if (model.matrices.size() !=
      static_cast<size_t>(model.tile_height) * model.tile_width)
    throw InvalidArgument("wiener_apply: model is missing phase matrices");
}

}  // namespace

WienerModel wiener_train(const std::vector<MultispectralImage>& training,
                         const FilterArrayPattern& pattern,
                         const SensitivityMatrix& sens, double noise_sigma,
                         std::uint64_t noise_seed, int window_tiles,
                         double ridge) {
  if (training.empty()) throw InvalidArgument("wiener_train: empty training set");
  const SpectralGrid grid = training.front().grid;
  for (const auto& t : training)
    if (!(t.grid == grid))
      throw InvalidArgument("wiener_train: training cubes must share one grid");

  std::vector<MosaickedImage> mosaics;
  mosaics.reserve(training.size());
  for (size_t i = 0; i < training.size(); ++i)
    mosaics.push_back(mosaic_apply(training[i], pattern, sens,
                                   {noise_sigma, noise_seed + i}));

  auto target = [&](int img, int r, int c, Eigen::VectorXd& x) {
    for (int b = 0; b < grid.count; ++b) x[b] = training[img].at(r, c, b);
  };
  return train_generic(mosaics, target, grid.count, pattern, window_tiles,
                       ridge);
}

WienerModel wiener_train_stokes(const std::vector<StokesCube>& training,
                                const FilterArrayPattern& pattern,
                                const PolarizedFilterBank& bank,
                                double noise_sigma, std::uint64_t noise_seed,
                                int window_tiles, double ridge) {
  if (training.empty())
    throw InvalidArgument("wiener_train_stokes: empty training set");
  const SpectralGrid grid = training.front().grid;
  const int L = grid.count;

  std::vector<MosaickedImage> mosaics;
  mosaics.reserve(training.size());
  for (size_t i = 0; i < training.size(); ++i)
    mosaics.push_back(polarized_mosaic(training[i], bank, pattern,
                                       {noise_sigma, noise_seed + i}));

  auto target = [&](int img, int r, int c, Eigen::VectorXd& x) {
    const StokesCube& s = training[img];
    for (int b = 0; b < L; ++b) {
      x[b] = s.s0.at(r, c, b);
      x[L + b] = s.s1.at(r, c, b);
      x[2 * L + b] = s.s2.at(r, c, b);
    }
  };
  return train_generic(mosaics, target, 3 * L, pattern, window_tiles, ridge);
}

MultispectralImage wiener_apply(const WienerModel& model,
                                const MosaickedImage& y,
                                const SpectralGrid& grid) {
  check_apply(model, y);
  if (model.output_dim != grid.count)
    throw InvalidArgument("wiener_apply: model output dimension != band count");
  MultispectralImage out(y.height, y.width, grid);
  Eigen::VectorXd w(model.window_dim());
  for (int r = 0; r < y.height; ++r) {
    for (int c = 0; c < y.width; ++c) {
      const int p = (r % model.tile_height) * model.tile_width +
                    (c % model.tile_width);
      gather_window(y, model, r, c, w);
      const Eigen::VectorXd x = model.matrices[p] * w;
      for (int b = 0; b < grid.count; ++b) out.at(r, c, b) = x[b];
    }
  }
  return out;
}

StokesCube wiener_apply_stokes(const WienerModel& model,
                               const MosaickedImage& y,
                               const SpectralGrid& grid) {
  check_apply(model, y);
  const int L = grid.count;
  if (model.output_dim != 3 * L)
    throw InvalidArgument("wiener_apply_stokes: model output dimension != 3L");
  StokesCube out(y.height, y.width, grid);
  Eigen::VectorXd w(model.window_dim());
  for (int r = 0; r < y.height; ++r) {
    for (int c = 0; c < y.width; ++c) {
      const int p = (r % model.tile_height) * model.tile_width +
                    (c % model.tile_width);
      gather_window(y, model, r, c, w);
      const Eigen::VectorXd x = model.matrices[p] * w;
      for (int b = 0; b < L; ++b) {
        out.s0.at(r, c, b) = x[b];
        out.s1.at(r, c, b) = x[L + b];
        out.s2.at(r, c, b) = x[2 * L + b];
      }
    }
  }
  return out;
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("wiener model: truncated stream");
  return v;
}

}  // namespace

void write_wiener_model(std::ostream& out, const WienerModel& model) {
  out.write("WIEN1", 5);
  put<std::int32_t>(out, model.tile_height);
  put<std::int32_t>(out, model.tile_width);
  put<std::int32_t>(out, model.window_tiles);
  put<std::int32_t>(out, model.output_dim);
  put<double>(out, model.ridge);
  for (const auto& m : model.matrices)
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) put<double>(out, m(r, c));
}

WienerModel read_wiener_model(std::istream& in) {
  char magic[5];
  in.read(magic, 5);
  if (!in || std::string(magic, 5) != "WIEN1")
    throw FormatError("wiener model: bad magic at byte 0");
  WienerModel model;
  model.tile_height = get<std::int32_t>(in);
  model.tile_width = get<std::int32_t>(in);
  model.window_tiles = get<std::int32_t>(in);
  model.output_dim = get<std::int32_t>(in);
  model.ridge = get<double>(in);
  if (model.tile_height < 1 || model.tile_width < 1 || model.window_tiles < 1 ||
      model.output_dim < 1)
    throw FormatError("wiener model: malformed header");
  const int phases = model.tile_height * model.tile_width;
  const int D = model.window_dim();
  model.matrices.resize(phases);
  for (int p = 0; p < phases; ++p) {
    model.matrices[p].resize(model.output_dim, D);
    for (int r = 0; r < model.output_dim; ++r)
      for (int c = 0; c < D; ++c) model.matrices[p](r, c) = get<double>(in);
  }
  return model;
}

}  // namespace msfa
