#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "apvm/errors.hpp"

namespace apvm {

using cdouble = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// k_j = 2*pi*j / L
inline double wavenumber(long j, double length) {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / length;
}

// Radix-2 DIT transform applied along the slow axis of a row-major (n x width)
// complex array. Butterflies stream whole rows, so batched transforms of many
// momentum columns stay contiguous. Unnormalized in both directions.
class batch_fft {
 public:
  explicit batch_fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw config_error("fft size must be a power of two >= 2");
    tw_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      tw_[j] = {std::cos(ang), std::sin(ang)};
    }
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
  }

  std::size_t size() const { return n_; }

  void forward_rows(cdouble* data, std::size_t width) const {
    transform(data, width, width, false);
  }
  void inverse_rows(cdouble* data, std::size_t width) const {
    transform(data, width, width, true);
  }
  // rows may live further apart than their width (a column slice of a wider array)
  void forward_rows(cdouble* data, std::size_t width, std::size_t stride) const {
    transform(data, width, stride, false);
  }
  void inverse_rows(cdouble* data, std::size_t width, std::size_t stride) const {
    transform(data, width, stride, true);
  }

 private:
  void transform(cdouble* data, std::size_t width, std::size_t stride, bool inverse) const {
    auto* d = reinterpret_cast<double*>(data);
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i])
        std::swap_ranges(d + 2 * stride * i, d + 2 * stride * i + 2 * width,
                         d + 2 * stride * rev_[i]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2, step = n_ / len;
      for (std::size_t base = 0; base < n_; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const cdouble w = tw_[j * step];
          const double wr = w.real(), wi = inverse ? -w.imag() : w.imag();
          double* a = d + 2 * stride * (base + j);
          double* b = d + 2 * stride * (base + j + half);
          for (std::size_t m = 0; m < 2 * width; m += 2) {
            const double br = b[m], bi = b[m + 1];
            const double tr = wr * br - wi * bi;
            const double ti = wr * bi + wi * br;
            b[m] = a[m] - tr;
            b[m + 1] = a[m + 1] - ti;
            a[m] += tr;
            a[m + 1] += ti;
          }
        }
      }
    }
  }

  std::size_t n_;
  std::vector<cdouble> tw_;
  std::vector<std::size_t> rev_;
};

// Fourier coefficients of a real periodic signal, stored in FFT order
// (m = 0..n-1 maps to mode j = m for m <= n/2, else m - n), normalized so
// that coeff(0) is the mean of the samples.
struct spectral_line {
  std::vector<cdouble> coeffs;
  double length = 0.0;

  std::size_t size() const { return coeffs.size(); }

  long mode_of(std::size_t m) const {
    const long n = static_cast<long>(coeffs.size());
    const long j = static_cast<long>(m);
    return j <= n / 2 ? j : j - n;
  }

  // j in {-n/2+1, ..., n/2}
  cdouble coeff(long j) const {
    const long n = static_cast<long>(coeffs.size());
    return coeffs[static_cast<std::size_t>(j >= 0 ? j : j + n)];
  }
  cdouble& coeff(long j) {
    const long n = static_cast<long>(coeffs.size());
    return coeffs[static_cast<std::size_t>(j >= 0 ? j : j + n)];
  }

  double wavenumber_at(std::size_t m) const { return apvm::wavenumber(mode_of(m), length); }
};

inline spectral_line forward_x(const std::vector<double>& samples, double length) {
  if (length <= 0.0) throw config_error("domain length must be positive");
  if (!is_power_of_two(samples.size()))
    throw config_error("number of x samples must be a power of two");
  const std::size_t n = samples.size();
  spectral_line line;
  line.length = length;
  line.coeffs.assign(samples.begin(), samples.end());
  batch_fft fft(n);
  fft.forward_rows(line.coeffs.data(), 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : line.coeffs) c *= scale;
  return line;
}

// Real samples from a (nearly) Hermitian spectrum. The spectrum is
// symmetrized first; an asymmetry beyond 1e-10 (relative to the largest
// coefficient) indicates a corrupted state.
inline std::vector<double> inverse_x(const spectral_line& line) {
  const std::size_t n = line.coeffs.size();
  if (!is_power_of_two(n)) throw config_error("spectrum size must be a power of two");
  double scale = 1.0;
  for (const auto& c : line.coeffs) scale = std::max(scale, std::abs(c));
  std::vector<cdouble> c(line.coeffs);
  double asym = 0.0;
  for (std::size_t j = 1; j < n / 2; ++j) {
    const cdouble a = c[j], b = std::conj(c[n - j]);
    asym = std::max(asym, std::abs(a - b));
    const cdouble avg = 0.5 * (a + b);
    c[j] = avg;
    c[n - j] = std::conj(avg);
  }
  asym = std::max(asym, std::abs(c[0].imag()));
  asym = std::max(asym, std::abs(c[n / 2].imag()));
  if (asym > 1e-10 * scale)
    throw internal_error("spectrum is not Hermitian within tolerance");
  c[0] = c[0].real();
  c[n / 2] = c[n / 2].real();
  batch_fft fft(n);
  fft.inverse_rows(c.data(), 1);
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) out[m] = c[m].real();
  return out;
}

}  // namespace apvm
