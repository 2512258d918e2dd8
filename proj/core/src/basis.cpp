#include "msfa/basis.hpp"

#include <cmath>

namespace msfa {

Eigen::MatrixXd spectral_basis(const SpectralGrid& grid, int dim) {
  const int L = grid.count;
  if (dim < 1 || dim > L)
    throw InvalidArgument("spectral_basis: need 1 <= dim <= band count");
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(L, dim);
  if (dim == 1) {
    phi.setOnes();
    return phi;
  }
  const double spacing = static_cast<double>(L - 1) / (dim - 1);
  for (int j = 0; j < dim; ++j) {
    const double center = j * spacing;
    for (int i = 0; i < L; ++i) {
      const double d = std::abs(i - center);
      if (d < spacing)
        phi(i, j) = 0.5 * (1.0 + std::cos(3.14159265358979323846 * d / spacing));
    }
  }
  return phi;
}

}  // namespace msfa
