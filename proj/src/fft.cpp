#include "akmeter/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace akmeter {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Fft: length must be a power of two");
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        }
        bitrev_[i] = r;
    }
    roots_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * double(k) / double(n);
        roots_[k] = cdouble(std::cos(ang), std::sin(ang));
    }
}

void Fft::transform(std::span<cdouble> a, bool inverse) const {
    if (a.size() != n_) {
        throw std::invalid_argument("Fft: buffer length mismatch");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (j > i) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cdouble w = roots_[k * step];
                if (inverse) w = std::conj(w);
                const cdouble u = a[start + k];
                const cdouble t = w * a[start + k + half];
                a[start + k] = u + t;
                a[start + k + half] = u - t;
            }
        }
    }
}

const Fft& fft_plan(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, Fft> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(n);
    if (it == plans.end()) {
        it = plans.emplace(n, Fft(n)).first;
    }
    return it->second;
}

void fft_forward(std::span<cdouble> a) { fft_plan(a.size()).forward(a); }
void fft_inverse(std::span<cdouble> a) { fft_plan(a.size()).inverse(a); }

std::vector<cdouble> upsample2x(std::span<const cdouble> a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("upsample2x: length must be a power of two");
    }
    std::vector<cdouble> spec(a.begin(), a.end());
    fft_forward(spec);
    std::vector<cdouble> pad(2 * n, cdouble{0.0, 0.0});
    // Frequencies 0..n/2-1 stay, negative ones move to the top; the Nyquist
    // bin is shared half-and-half so real inputs stay real.
    for (std::size_t k = 0; k < n / 2; ++k) pad[k] = spec[k];
    for (std::size_t k = n / 2 + 1; k < n; ++k) pad[k + n] = spec[k];
    pad[n / 2] = 0.5 * spec[n / 2];
    pad[2 * n - n / 2] = 0.5 * spec[n / 2];
    fft_inverse(pad);
    const double scale = 1.0 / double(n);  // 2x samples, forward was unnormalized
    for (auto& v : pad) v *= scale;
    return pad;
}

}  // namespace akmeter
