#include "msfa/types.hpp"

#include <algorithm>
#include <cmath>

namespace msfa {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

bool all_in_unit(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return x >= 0.0 && x <= 1.0; });
}

}  // namespace

std::vector<std::string> validate(const SpectralGrid& g) {
  std::vector<std::string> out;
  if (!(g.step_nm > 0.0)) out.push_back("SpectralGrid: step_nm must be > 0");
  if (g.count < 1) out.push_back("SpectralGrid: count must be >= 1");
  if (!std::isfinite(g.start_nm)) out.push_back("SpectralGrid: start_nm not finite");
  return out;
}

std::vector<std::string> validate(const MultispectralImage& img) {
  std::vector<std::string> out = validate(img.grid);
  if (img.height < 0 || img.width < 0)
    out.push_back("MultispectralImage: negative dimensions");
  const size_t expect =
      static_cast<size_t>(img.height) * img.width * img.grid.count;
  if (img.data.size() != expect)
    out.push_back("MultispectralImage: data length " +
                  std::to_string(img.data.size()) + " != height*width*bands " +
                  std::to_string(expect));
  if (!all_finite(img.data))
    out.push_back("MultispectralImage: non-finite value present");
  else if (std::any_of(img.data.begin(), img.data.end(),
                       [](double x) { return x < 0.0; }))
    out.push_back("MultispectralImage: negative value present");
  return out;
}

std::vector<std::string> validate(const MosaickedImage& img) {
  std::vector<std::string> out;
  const size_t expect = static_cast<size_t>(img.height) * img.width;
  if (img.data.size() != expect)
    out.push_back("MosaickedImage: data length mismatch");
  if (!all_finite(img.data))
    out.push_back("MosaickedImage: non-finite value present");
  return out;
}

std::vector<std::string> validate(const FilterArrayPattern& p) {
  std::vector<std::string> out;
  if (p.tile_height < 1 || p.tile_width < 1) {
    out.push_back("FilterArrayPattern: tile dimensions must be >= 1");
    return out;
  }
  if (p.num_filters < 1)
    out.push_back("FilterArrayPattern: num_filters must be >= 1");
  if (static_cast<int>(p.cells.size()) != p.tile_area()) {
    out.push_back("FilterArrayPattern: cell count != tile area");
    return out;
  }
  std::vector<bool> seen(std::max(p.num_filters, 0), false);
  for (int i = 0; i < p.tile_area(); ++i) {
    const int k = p.cells[i];
    if (k < 0 || k >= p.num_filters) {
      out.push_back("FilterArrayPattern: cell " + std::to_string(i) +
                    " has index " + std::to_string(k) + " outside [0, " +
                    std::to_string(p.num_filters) + ")");
    } else {
      seen[k] = true;
    }
  }
  for (int k = 0; k < p.num_filters; ++k)
    if (!seen[k])
      out.push_back("FilterArrayPattern: filter " + std::to_string(k) +
                    " appears in no cell");
  return out;
}

std::vector<std::string> validate(const SensitivityMatrix& s) {
  std::vector<std::string> out = validate(s.grid);
  if (s.values.size() !=
      static_cast<size_t>(s.num_filters) * s.grid.count)
    out.push_back("SensitivityMatrix: value count != K*L");
  if (!all_finite(s.values) || !all_in_unit(s.values))
    out.push_back("SensitivityMatrix: entries must lie in [0, 1]");
  return out;
}

std::vector<std::string> validate(const StokesCube& s) {
  std::vector<std::string> out = validate(s.grid);
  const size_t expect =
      static_cast<size_t>(s.height) * s.width * s.grid.count;
  if (s.s0.data.size() != expect || s.s1.data.size() != expect ||
      s.s2.data.size() != expect)
    out.push_back("StokesCube: component size mismatch");
  else {
    bool neg_s0 = false, cone = false;
    for (size_t i = 0; i < expect; ++i) {
      const double a = s.s0.data[i], b = s.s1.data[i], c = s.s2.data[i];
      if (!(a >= 0.0)) neg_s0 = true;
      if (b * b + c * c > a * a * (1.0 + 1e-12)) cone = true;
    }
    if (neg_s0) out.push_back("StokesCube: s0 must be >= 0 everywhere");
    if (cone)
      out.push_back("StokesCube: s1^2 + s2^2 > s0^2 at some site (DOP > 1)");
  }
  return out;
}

std::vector<std::string> validate(const PolarizedFilterBank& b) {
  std::vector<std::string> out = validate(b.grid);
  const size_t expect = static_cast<size_t>(b.num_filters) * b.grid.count;
  if (b.t_te.size() != expect || b.t_tm.size() != expect)
    out.push_back("PolarizedFilterBank: table size != K*L");
  if (!all_finite(b.t_te) || !all_in_unit(b.t_te))
    out.push_back("PolarizedFilterBank: t_te entries must lie in [0, 1]");
  if (!all_finite(b.t_tm) || !all_in_unit(b.t_tm))
    out.push_back("PolarizedFilterBank: t_tm entries must lie in [0, 1]");
  if (static_cast<int>(b.orientation_deg.size()) != b.num_filters)
    out.push_back("PolarizedFilterBank: one orientation per filter required");
  return out;
}

}  // namespace msfa
