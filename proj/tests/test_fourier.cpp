#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apvm/fourier.hpp"

using namespace apvm;
namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> random_signal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}
}  // namespace

TEST_CASE("constant signal transforms to its mean") {
  std::vector<double> u(16, 3.0);
  auto line = forward_x(u, 2.0 * pi);
  CHECK(line.coeff(0).real() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(line.coeff(0).imag()) < 1e-14);
  for (long j = 1; j <= 8; ++j) {
    CHECK(std::abs(line.coeff(j)) < 1e-14);
    if (j < 8) CHECK(std::abs(line.coeff(-j)) < 1e-14);
  }
}

TEST_CASE("single harmonic sin(kx) lands on modes +-1") {
  const std::size_t n = 32;
  const double L = 2.0 * pi;
  std::vector<double> u(n);
  for (std::size_t m = 0; m < n; ++m) u[m] = std::sin(2.0 * pi * m / n);
  auto line = forward_x(u, L);
  // sin(kx) = (e^{ikx} - e^{-ikx}) / (2i) -> coeff(+1) = -i/2, coeff(-1) = +i/2
  CHECK(std::abs(line.coeff(1) - cdouble(0.0, -0.5)) < 1e-13);
  CHECK(std::abs(line.coeff(-1) - cdouble(0.0, 0.5)) < 1e-13);
  for (long j = 2; j < 16; ++j) {
    CHECK(std::abs(line.coeff(j)) < 1e-13);
    CHECK(std::abs(line.coeff(-j)) < 1e-13);
  }
}

TEST_CASE("wavenumber bookkeeping") {
  CHECK(wavenumber(0, 17.0) == 0.0);
  CHECK(wavenumber(1, 2.0 * pi) == doctest::Approx(1.0).epsilon(1e-15));
  // the Weibel fundamental: L = 2*pi/1.25 gives k = 1.25
  CHECK(wavenumber(1, 2.0 * pi / 1.25) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(wavenumber(-3, 2.0 * pi) == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("round trip reproduces a random real signal") {
  auto u = random_signal(64, 1234);
  auto back = inverse_x(forward_x(u, 5.0));
  double scale = 0.0, err = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    scale = std::max(scale, std::abs(u[m]));
    err = std::max(err, std::abs(u[m] - back[m]));
  }
  CHECK(err < 1e-12 * scale);
}

TEST_CASE("inverse of trivial spectra") {
  spectral_line line;
  line.length = 2.0 * pi;
  line.coeffs.assign(16, cdouble(0.0, 0.0));
  for (double v : inverse_x(line)) CHECK(v == 0.0);
  line.coeff(0) = 1.0;
  for (double v : inverse_x(line)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Parseval fixes the normalization") {
  const double L = 3.7;
  auto u = random_signal(128, 77);
  auto line = forward_x(u, L);
  const double dx = L / static_cast<double>(u.size());
  double phys = 0.0;
  for (double v : u) phys += v * v * dx;
  double spec = 0.0;
  for (const auto& c : line.coeffs) spec += std::norm(c);
  spec *= L;
  CHECK(phys == doctest::Approx(spec).epsilon(1e-10));
}

TEST_CASE("linearity") {
  auto u = random_signal(32, 5);
  auto v = random_signal(32, 6);
  const double a = 1.7, b = -0.3;
  std::vector<double> w(32);
  for (std::size_t m = 0; m < 32; ++m) w[m] = a * u[m] + b * v[m];
  auto lu = forward_x(u, 1.0), lv = forward_x(v, 1.0), lw = forward_x(w, 1.0);
  for (std::size_t m = 0; m < 32; ++m)
    CHECK(std::abs(lw.coeffs[m] - (a * lu.coeffs[m] + b * lv.coeffs[m])) < 1e-14);
}

TEST_CASE("non-power-of-two size is a configuration error") {
  std::vector<double> u(48, 1.0);
  CHECK_THROWS_AS(forward_x(u, 1.0), config_error);
  CHECK_THROWS_AS(forward_x(std::vector<double>{1.0}, 1.0), config_error);
}

TEST_CASE("broken Hermitian symmetry is detected") {
  auto line = forward_x(random_signal(32, 9), 1.0);
  line.coeff(3) += cdouble(0.1, 0.2);  // corrupt one side only
  CHECK_THROWS_AS(inverse_x(line), internal_error);
}

TEST_CASE("batched row transform matches the 1-d path") {
  const std::size_t n = 16, width = 5;
  std::vector<cdouble> data(n * width);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& z : data) z = {u(rng), u(rng)};
  auto cols = data;
  batch_fft fft(n);
  fft.forward_rows(data.data(), width);
  for (std::size_t w = 0; w < width; ++w) {
    std::vector<cdouble> one(n);
    for (std::size_t m = 0; m < n; ++m) one[m] = cols[m * width + w];
    fft.forward_rows(one.data(), 1);
    for (std::size_t m = 0; m < n; ++m) CHECK(std::abs(one[m] - data[m * width + w]) < 1e-12);
  }
  // unnormalized inverse undoes forward up to n
  fft.inverse_rows(data.data(), width);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(std::abs(data[i] / static_cast<double>(n) - cols[i]) < 1e-12);
}
