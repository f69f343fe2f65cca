#pragma once

// Test-only oracles, independent of the library's FFT paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "akmeter/apparatus.hpp"
#include "akmeter/grid.hpp"

namespace oracle {

using akmeter::cdouble;
using akmeter::GridSpec1D;
using akmeter::GridSpec2D;
using akmeter::WaveFunction1D;
using akmeter::WaveFunction2D;

// Direct quadrature Fourier transform at an arbitrary momentum value:
// h^(-1/2) sum_m exp(-i p x_m / hbar) psi_m dx. O(n) per point, no FFT.
inline cdouble fourier_quadrature(const WaveFunction1D& w, double p) {
    cdouble s{0.0, 0.0};
    for (std::size_t m = 0; m < w.grid.n; ++m) {
        const double ang = -p * w.grid.x(m) / w.grid.hbar;
        s += std::polar(1.0, ang) * w.amps[m];
    }
    return s * (w.grid.dx / std::sqrt(2.0 * std::numbers::pi * w.grid.hbar));
}

// Wigner value at one phase-space point by direct Riemann quadrature over y,
// sampling psi analytically (callable), fully independent of the grid code.
template <typename Psi>
double wigner_quadrature(Psi&& psi, double x, double p, double hbar, double y_half_range,
                         int samples) {
    const double dy = 2.0 * y_half_range / samples;
    cdouble s{0.0, 0.0};
    for (int i = 0; i < samples; ++i) {
        const double y = -y_half_range + (i + 0.5) * dy;
        s += std::polar(1.0, p * y / hbar) * psi(x - 0.5 * y) * std::conj(psi(x + 0.5 * y));
    }
    return (s * dy).real() / (2.0 * std::numbers::pi * hbar);
}

// 4th-order central finite difference for (-i hbar d/d axis) expectations on a
// 2-D state; order 1 or 2. Interior-only stencil (boundary rows are ~0).
inline double fd_derivative_expectation(const WaveFunction2D& w, int axis, int order) {
    const std::size_t n1 = w.grid.axis1.n;
    const std::size_t n2 = w.grid.axis2.n;
    const double d = (axis == 0) ? w.grid.axis1.dx : w.grid.axis2.dx;
    const double hbar = w.grid.axis1.hbar;
    auto amp = [&](long i1, long i2) -> cdouble {
        if (i1 < 0 || i2 < 0 || i1 >= long(n1) || i2 >= long(n2)) return {0.0, 0.0};
        return w.at(std::size_t(i1), std::size_t(i2));
    };
    cdouble acc{0.0, 0.0};
    for (long i1 = 0; i1 < long(n1); ++i1) {
        for (long i2 = 0; i2 < long(n2); ++i2) {
            const long di1 = (axis == 0) ? 1 : 0;
            const long di2 = (axis == 0) ? 0 : 1;
            cdouble der;
            if (order == 1) {
                der = (-amp(i1 + 2 * di1, i2 + 2 * di2) + 8.0 * amp(i1 + di1, i2 + di2) -
                       8.0 * amp(i1 - di1, i2 - di2) + amp(i1 - 2 * di1, i2 - 2 * di2)) /
                      (12.0 * d);
                der *= cdouble(0.0, -hbar);
            } else {
                der = (-amp(i1 + 2 * di1, i2 + 2 * di2) + 16.0 * amp(i1 + di1, i2 + di2) -
                       30.0 * amp(i1, i2) + 16.0 * amp(i1 - di1, i2 - di2) -
                       amp(i1 - 2 * di1, i2 - 2 * di2)) /
                      (12.0 * d * d);
                der *= -hbar * hbar;
            }
            acc += std::conj(amp(i1, i2)) * der;
        }
    }
    return (acc * (w.grid.axis1.dx * w.grid.axis2.dx)).real();
}

// --- deterministic pseudo-random smooth states -----------------------------------

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t idx) {
    return double(splitmix64(seed * 0x9e3779b97f4a7c15ULL + idx) >> 11) * 0x1.0p-53;
}

struct PacketRanges {
    double max_center = 2.2;
    double width_lo = 0.8;
    double width_hi = 1.6;
    double max_momentum = 1.2;
};

// Random mixture of 2..4 displaced Gaussian packets with mild complex phases.
inline WaveFunction1D random_smooth_state_1d(const GridSpec1D& grid, std::uint64_t seed) {
    WaveFunction1D w;
    w.grid = grid;
    w.amps.assign(grid.n, cdouble{0.0, 0.0});
    const int packets = 2 + int(uniform01(seed, 0) * 3.0);
    for (int k = 0; k < packets; ++k) {
        const double c = -2.2 + 4.4 * uniform01(seed, 10 + 7 * k);
        const double wd = 0.8 + 0.8 * uniform01(seed, 11 + 7 * k);
        const double mom = -1.2 + 2.4 * uniform01(seed, 12 + 7 * k);
        const double re = -1.0 + 2.0 * uniform01(seed, 13 + 7 * k);
        const double im = -1.0 + 2.0 * uniform01(seed, 14 + 7 * k);
        const cdouble coef{re, im};
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            const double g = std::exp(-0.5 * (x - c) * (x - c) / (wd * wd));
            w.amps[i] += coef * std::polar(g, mom * x / grid.hbar);
        }
    }
    return akmeter::normalize(std::move(w));
}

inline WaveFunction2D random_smooth_state_2d(const GridSpec1D& grid, std::uint64_t seed,
                                             const PacketRanges& pr = {}) {
    WaveFunction2D w;
    w.grid = GridSpec2D{grid, grid, "eps_xi", "eps_xf"};
    w.amps.assign(grid.n * grid.n, cdouble{0.0, 0.0});
    const int packets = 2 + int(uniform01(seed, 1) * 3.0);
    const double wspan = pr.width_hi - pr.width_lo;
    for (int k = 0; k < packets; ++k) {
        const double c1 = pr.max_center * (2.0 * uniform01(seed, 20 + 11 * k) - 1.0);
        const double c2 = pr.max_center * (2.0 * uniform01(seed, 21 + 11 * k) - 1.0);
        const double w1 = pr.width_lo + wspan * uniform01(seed, 22 + 11 * k);
        const double w2 = pr.width_lo + wspan * uniform01(seed, 23 + 11 * k);
        const double m1 = pr.max_momentum * (2.0 * uniform01(seed, 24 + 11 * k) - 1.0);
        const double m2 = pr.max_momentum * (2.0 * uniform01(seed, 25 + 11 * k) - 1.0);
        const cdouble coef{-1.0 + 2.0 * uniform01(seed, 26 + 11 * k),
                           -1.0 + 2.0 * uniform01(seed, 27 + 11 * k)};
        for (std::size_t i1 = 0; i1 < grid.n; ++i1) {
            const double e1 = grid.x(i1);
            const double g1 = std::exp(-0.5 * (e1 - c1) * (e1 - c1) / (w1 * w1));
            for (std::size_t i2 = 0; i2 < grid.n; ++i2) {
                const double e2 = grid.x(i2);
                const double g2 = std::exp(-0.5 * (e2 - c2) * (e2 - c2) / (w2 * w2));
                w.amps[i1 * grid.n + i2] +=
                    coef * std::polar(g1 * g2, (m1 * e1 + m2 * e2) / grid.hbar);
            }
        }
    }
    return akmeter::normalize(std::move(w));
}

// Upper-tail chi-square critical value by the Wilson-Hilferty approximation.
inline double chi_square_critical(double dof, double z_upper) {
    const double t = 2.0 / (9.0 * dof);
    const double c = 1.0 - t + z_upper * std::sqrt(t);
    return dof * c * c * c;
}

}  // namespace oracle
