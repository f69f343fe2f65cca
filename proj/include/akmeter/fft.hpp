#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace akmeter {

using cdouble = std::complex<double>;

bool is_power_of_two(std::size_t n);

// Iterative radix-2 FFT, power-of-two lengths only, in place, unnormalized:
//   forward:  X[k] = sum_m x[m] exp(-2*pi*i*k*m/n)
//   inverse:  X[k] = sum_m x[m] exp(+2*pi*i*k*m/n)
// Twiddles and the bit-reversal permutation are precomputed per length.
class Fft {
  public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(std::span<cdouble> a) const { transform(a, false); }
    void inverse(std::span<cdouble> a) const { transform(a, true); }

  private:
    void transform(std::span<cdouble> a, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cdouble> roots_;  // exp(-2*pi*i*k/n), k < n/2
};

// Shared plan cache (thread safe, plans are immutable once built).
const Fft& fft_plan(std::size_t n);

void fft_forward(std::span<cdouble> a);
void fft_inverse(std::span<cdouble> a);

// Band-limited 2x upsampling by spectral zero padding. Input length n
// (power of two), output length 2n on the half-step lattice with the same
// origin. Exact for lattice-representable spectra; the Nyquist bin is split
// symmetrically.
std::vector<cdouble> upsample2x(std::span<const cdouble> a);

}  // namespace akmeter
