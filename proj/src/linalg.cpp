#include "akmeter/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace akmeter {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction of a real symmetric matrix to tridiagonal form,
// eigenvalues-only variant (accumulation of transforms skipped).
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e) {
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
                    e[j] = g / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = A(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) {
                        A(j, k) -= f * e[k] + g * A(i, k);
                    }
                }
            }
        } else {
            e[i] = A(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = A(i, i);
}

// Implicit-shift QL on a tridiagonal matrix (diagonal d, subdiagonal e).
void tql_eigenvalues(std::vector<double>& d, std::vector<double>& e, std::size_t n) {
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    // Off-diagonals negligible against the whole tridiagonal are deflated
    // outright; a neighbor-relative test alone never fires in the noise
    // rows left behind by reducing a numerically rank-deficient matrix.
    double anorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    const double floor_eps = 2.3e-16 * anorm + 1e-300;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= floor_eps || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter > 64) {
                    throw std::runtime_error("tql_eigenvalues: no convergence");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> m, std::size_t n) {
    if (m.size() != n * n) {
        throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
    }
    // Normalize to unit scale first; tiny matrices otherwise run the QL
    // rotations in the denormal range.
    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) {
        if (!std::isfinite(scale)) {
            throw std::invalid_argument("symmetric_eigenvalues: non-finite entries");
        }
        return std::vector<double>(n, 0.0);
    }
    const double inv = 1.0 / scale;
    for (double& v : m) v *= inv;
    std::vector<double> d, e;
    tridiagonalize(m, n, d, e);
    tql_eigenvalues(d, e, n);
    std::sort(d.begin(), d.end());
    for (double& v : d) v *= scale;
    return d;
}

std::vector<double> hermitian_eigenvalues(std::span<const std::complex<double>> m,
                                          std::size_t n) {
    if (m.size() != n * n) {
        throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
    }
    const std::size_t N = 2 * n;
    std::vector<double> big(N * N, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // Hermitize on the way in; roundoff-scale defects in the input
            // would otherwise feed the symmetric solver an asymmetric matrix.
            const std::complex<double> h =
                0.5 * (m[i * n + j] + std::conj(m[j * n + i]));
            const double re = h.real();
            const double im = h.imag();
            big[i * N + j] = re;
            big[(i + n) * N + (j + n)] = re;
            big[i * N + (j + n)] = -im;
            big[(i + n) * N + j] = im;
        }
    }
    std::vector<double> all = symmetric_eigenvalues(std::move(big), N);
    // Spectrum comes doubled; take every second of the sorted list.
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
    return out;
}

}  // namespace akmeter
