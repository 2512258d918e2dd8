#include <doctest.h>

#include <cmath>
#include <limits>

#include "msfa/metrics.hpp"
#include "msfa/types.hpp"
#include "test_util.hpp"

using namespace msfa;
using namespace msfa::testutil;

TEST_CASE("validate accepts a well-formed pattern") {
  FilterArrayPattern p{2, 2, 4, {0, 1, 2, 3}};
  CHECK(validate(p).empty());
}

TEST_CASE("validate names an out-of-range cell index") {
  FilterArrayPattern p{2, 2, 4, {0, 1, 2, 4}};
  const auto report = validate(p);
  REQUIRE(!report.empty());
  CHECK(report.front().find("outside") != std::string::npos);
}

TEST_CASE("validate flags dead filters") {
  FilterArrayPattern p{2, 2, 4, {0, 1, 2, 2}};
  const auto report = validate(p);
  REQUIRE(!report.empty());
  CHECK(report.front().find("no cell") != std::string::npos);
}

TEST_CASE("validate flags a DOP cone violation") {
  StokesCube s(1, 1, {420, 10, 1});
  s.s0.at(0, 0, 0) = 1.0;
  s.s1.at(0, 0, 0) = 1.0;
  s.s2.at(0, 0, 0) = 1.0;  // s1^2+s2^2 = 2 s0^2
  const auto report = validate(s);
  REQUIRE(!report.empty());
  CHECK(report.front().find("DOP") != std::string::npos);
}

TEST_CASE("validate is pure") {
  FilterArrayPattern p{2, 2, 4, {0, 1, 2, 4}};
  CHECK(validate(p) == validate(p));
}

TEST_CASE("psnr of identical cubes is the +infinity sentinel") {
  const SpectralGrid g{420, 10, 4};
  const auto a = random_cube(3, 5, g, 7);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
}

TEST_CASE("psnr of uniform 0.1 error at peak 1 is 20 dB") {
  const SpectralGrid g{420, 10, 3};
  MultispectralImage a(4, 4, g), b(4, 4, g);
  for (double& v : b.data) v = 0.1;
  CHECK(psnr(a, b, 1.0) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("psnr matches a brute-force double loop") {
  const SpectralGrid g{420, 10, 6};
  const auto a = random_cube(5, 7, g, 11);
  const auto b = random_cube(5, 7, g, 12);
  double acc = 0.0;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 7; ++c)
      for (int band = 0; band < 6; ++band) {
        const double d = a.at(r, c, band) - b.at(r, c, band);
        acc += d * d;
      }
  const double mse = acc / (5.0 * 7.0 * 6.0);
  CHECK(psnr(a, b, 1.0) ==
        doctest::Approx(10.0 * std::log10(1.0 / mse)).epsilon(1e-12));
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(mse)).epsilon(1e-12));
}

TEST_CASE("psnr decreases strictly along the segment toward another cube") {
  const SpectralGrid g{420, 10, 4};
  const auto x = random_cube(4, 4, g, 21);
  const auto y = random_cube(4, 4, g, 22);
  double prev = std::numeric_limits<double>::infinity();
  for (double c : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    MultispectralImage z = x;
    for (size_t i = 0; i < z.data.size(); ++i)
      z.data[i] = x.data[i] + c * (y.data[i] - x.data[i]);
    const double p = psnr(x, z);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("spectral_angle is zero for identical and scaled cubes") {
  const SpectralGrid g{420, 10, 5};
  const auto a = random_cube(3, 3, g, 5);
  MultispectralImage b = a;
  for (double& v : b.data) v *= 2.0;
  CHECK(spectral_angle(a, a) < 1e-6);
  CHECK(spectral_angle(a, b) < 1e-6);
  CHECK(rmse(a, a) == 0.0);
}

TEST_CASE("spectral_angle matches a brute-force per-pixel loop") {
  const SpectralGrid g{420, 10, 6};
  const auto a = random_cube(4, 5, g, 31);
  const auto b = random_cube(4, 5, g, 32);
  double acc = 0.0;
  int n = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 5; ++c) {
      double dot = 0, na = 0, nb = 0;
      for (int band = 0; band < 6; ++band) {
        dot += a.at(r, c, band) * b.at(r, c, band);
        na += a.at(r, c, band) * a.at(r, c, band);
        nb += b.at(r, c, band) * b.at(r, c, band);
      }
      acc += std::acos(dot / std::sqrt(na * nb));
      ++n;
    }
  CHECK(spectral_angle(a, b) == doctest::Approx(acc / n).epsilon(1e-12));
}

TEST_CASE("spectral_angle skips pixels where both spectra vanish") {
  const SpectralGrid g{420, 10, 3};
  MultispectralImage a(1, 2, g), b(1, 2, g);
  for (int band = 0; band < 3; ++band) {
    a.at(0, 0, band) = 1.0;
    b.at(0, 0, band) = 2.0;
  }
  // pixel (0,1) zero in both: ignored
  CHECK(spectral_angle(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metric shape mismatch raises") {
  const SpectralGrid g{420, 10, 3};
  MultispectralImage a(2, 2, g), b(2, 3, g);
  CHECK_THROWS_AS((void)psnr(a, b), InvalidArgument);
  CHECK_THROWS_AS((void)rmse(a, b), InvalidArgument);
  CHECK_THROWS_AS((void)spectral_angle(a, b), InvalidArgument);
}
