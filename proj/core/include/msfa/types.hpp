#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace msfa {

// Thrown when inputs violate a documented precondition (shape/grid mismatch,
// malformed pattern, bad configuration).
class InvalidArgument : public std::runtime_error {
 public:
  explicit InvalidArgument(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a solver or iteration fails numerically (singular system,
// divergence, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on malformed files (bad magic, truncated payload, bad CSV).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Uniform wavelength axis: wavelength(i) = start_nm + i * step_nm.
struct SpectralGrid {
  double start_nm = 420.0;
  double step_nm = 10.0;
  int count = 31;

  double wavelength(int i) const { return start_nm + i * step_nm; }
  bool operator==(const SpectralGrid&) const = default;
};

// Full-resolution spectral cube. Band-major planes: all of band 0, then
// band 1, ... so demosaickers can work one plane at a time.
struct MultispectralImage {
  int height = 0;
  int width = 0;
  SpectralGrid grid;
  std::vector<double> data;  // size height*width*grid.count

  MultispectralImage() = default;
  MultispectralImage(int h, int w, SpectralGrid g)
      : height(h), width(w), grid(g),
        data(static_cast<size_t>(h) * w * g.count, 0.0) {}

  double& at(int r, int c, int b) {
    return data[(static_cast<size_t>(b) * height + r) * width + c];
  }
  double at(int r, int c, int b) const {
    return data[(static_cast<size_t>(b) * height + r) * width + c];
  }
  double* band_plane(int b) {
    return data.data() + static_cast<size_t>(b) * height * width;
  }
  const double* band_plane(int b) const {
    return data.data() + static_cast<size_t>(b) * height * width;
  }
  size_t pixels() const { return static_cast<size_t>(height) * width; }
};

// Raw single-value-per-pixel capture.
struct MosaickedImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // size height*width, row-major

  MosaickedImage() = default;
  MosaickedImage(int h, int w)
      : height(h), width(w), data(static_cast<size_t>(h) * w, 0.0) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * width + c]; }
  double at(int r, int c) const {
    return data[static_cast<size_t>(r) * width + c];
  }
};

// Periodic tile of filter indices. Pixel (r,c) uses cell
// (r mod tile_height, c mod tile_width).
struct FilterArrayPattern {
  int tile_height = 0;
  int tile_width = 0;
  int num_filters = 0;
  std::vector<int> cells;  // size tile_height*tile_width, row-major

  int cell(int tr, int tc) const { return cells[tr * tile_width + tc]; }
  int filter_at(int r, int c) const {
    return cells[(r % tile_height) * tile_width + (c % tile_width)];
  }
  int tile_area() const { return tile_height * tile_width; }
};

// K filters x L wavelengths transmittance table, row-major per filter.
struct SensitivityMatrix {
  int num_filters = 0;
  SpectralGrid grid;
  std::vector<double> values;  // size num_filters*grid.count

  SensitivityMatrix() = default;
  SensitivityMatrix(int k, SpectralGrid g)
      : num_filters(k), grid(g),
        values(static_cast<size_t>(k) * g.count, 0.0) {}

  double& at(int filter, int band) {
    return values[static_cast<size_t>(filter) * grid.count + band];
  }
  double at(int filter, int band) const {
    return values[static_cast<size_t>(filter) * grid.count + band];
  }
  const double* row(int filter) const {
    return values.data() + static_cast<size_t>(filter) * grid.count;
  }
};

// Per-pixel per-band linear polarization state (S0, S1, S2).
struct StokesCube {
  int height = 0;
  int width = 0;
  SpectralGrid grid;
  MultispectralImage s0, s1, s2;

  StokesCube() = default;
  StokesCube(int h, int w, SpectralGrid g)
      : height(h), width(w), grid(g), s0(h, w, g), s1(h, w, g), s2(h, w, g) {}
};

// Diattenuating filter bank: per-filter TE/TM transmittance curves plus the
// analyzer orientation, for the photonic-crystal polarization array.
struct PolarizedFilterBank {
  int num_filters = 0;
  SpectralGrid grid;
  std::vector<double> t_te;  // K x L row-major
  std::vector<double> t_tm;  // K x L row-major
  std::vector<double> orientation_deg;  // per filter, mod 180

  PolarizedFilterBank() = default;
  PolarizedFilterBank(int k, SpectralGrid g)
      : num_filters(k), grid(g),
        t_te(static_cast<size_t>(k) * g.count, 0.0),
        t_tm(static_cast<size_t>(k) * g.count, 0.0),
        orientation_deg(k, 0.0) {}

  double te(int filter, int band) const {
    return t_te[static_cast<size_t>(filter) * grid.count + band];
  }
  double tm(int filter, int band) const {
    return t_tm[static_cast<size_t>(filter) * grid.count + band];
  }
};

// Additive white Gaussian noise, counter-based so results are independent of
// pixel traversal order.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Invariant checks. Each returns the list of violated invariants; empty means
// valid. Pure reporting, inputs are never mutated.
std::vector<std::string> validate(const SpectralGrid& g);
std::vector<std::string> validate(const MultispectralImage& img);
std::vector<std::string> validate(const MosaickedImage& img);
std::vector<std::string> validate(const FilterArrayPattern& p);
std::vector<std::string> validate(const SensitivityMatrix& s);
std::vector<std::string> validate(const StokesCube& s);
std::vector<std::string> validate(const PolarizedFilterBank& b);

}  // namespace msfa
