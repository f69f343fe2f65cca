#include "akmeter/apparatus.hpp"

#include <cmath>
#include <numbers>

namespace akmeter {

namespace {

constexpr double kPi = std::numbers::pi;

void require_normalized(const WaveFunction2D& w, const char* where) {
    if (std::abs(norm_squared(w) - 1.0) > 1e-6) {
        throw std::invalid_argument(std::string(where) + ": state not normalized");
    }
}

WaveFunction2D apply_coordinate(const WaveFunction2D& w,
                                double (*f)(double, double)) {
    WaveFunction2D out = w;
    for (std::size_t i1 = 0; i1 < w.grid.axis1.n; ++i1) {
        const double e1 = w.grid.axis1.x(i1);
        for (std::size_t i2 = 0; i2 < w.grid.axis2.n; ++i2) {
            out.at(i1, i2) *= f(e1, w.grid.axis2.x(i2));
        }
    }
    return out;
}

// Multiply in the 2-D Fourier representation; g receives the standard
// conjugate variables (k_i, k_f) of (eps_Xi, eps_Xf).
WaveFunction2D apply_fourier(const WaveFunction2D& w, double (*g)(double, double)) {
    WaveFunction2D t = to_momentum_rep_axis(to_momentum_rep_axis(w, 0), 1);
    for (std::size_t i1 = 0; i1 < t.grid.axis1.n; ++i1) {
        const double k1 = t.grid.axis1.x(i1);
        for (std::size_t i2 = 0; i2 < t.grid.axis2.n; ++i2) {
            t.at(i1, i2) *= g(k1, t.grid.axis2.x(i2));
        }
    }
    return to_position_rep_axis(to_position_rep_axis(t, 0), 1);
}

}  // namespace

WaveFunction2D apply_error_operator(const WaveFunction2D& w, ErrorOp op) {
    switch (op) {
        case ErrorOp::EpsXi:
            return apply_coordinate(w, [](double ei, double) { return ei; });
        case ErrorOp::EpsXf:
            return apply_coordinate(w, [](double, double ef) { return ef; });
        case ErrorOp::DeltaX:
            return apply_coordinate(w, [](double ei, double ef) { return ei - ef; });
        case ErrorOp::EpsX:
            return apply_coordinate(w, [](double ei, double ef) { return 0.5 * (ei + ef); });
        case ErrorOp::EpsPi:
            return apply_fourier(w, [](double ki, double) { return -ki; });
        case ErrorOp::EpsPf:
            return apply_fourier(w, [](double, double kf) { return kf; });
        case ErrorOp::DeltaP:
            return apply_fourier(w, [](double ki, double kf) { return -ki - kf; });
        case ErrorOp::EpsP:
            return apply_fourier(w, [](double ki, double kf) { return 0.5 * (kf - ki); });
    }
    throw std::invalid_argument("apply_error_operator: unknown operator");
}

cdouble braket(const WaveFunction2D& a, const WaveFunction2D& b) {
    if (!same_grid(a.grid.axis1, b.grid.axis1) || !same_grid(a.grid.axis2, b.grid.axis2)) {
        throw GridMismatch("braket: lattices differ");
    }
    cdouble s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s * (a.grid.axis1.dx * a.grid.axis2.dx);
}

WaveFunction1D gaussian_packet(const GridSpec1D& grid, double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
    WaveFunction1D w;
    w.grid = grid;
    w.amps.resize(grid.n);
    const double amp = std::pow(kPi * width * width, -0.25);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double d = grid.x(i) - center;
        w.amps[i] = amp * std::exp(-0.5 * d * d / (width * width));
    }
    return w;
}

double recommended_half_width(double lambda_i, double lambda_f, double lambda, double eta) {
    double w = 0.0;
    if (lambda_i > 0.0) w = std::max(w, 8.0 * lambda_i);
    if (lambda_f > 0.0) w = std::max(w, 8.0 * lambda_f);
    if (lambda > 0.0) w = std::max(w, 8.0 * lambda * std::exp(0.5 * eta));
    return w;
}

ApparatusState make_retrodictively_optimal(double lambda_i, const WaveFunction1D& phi_f) {
    if (!(lambda_i > 0.0)) {
        throw std::invalid_argument("make_retrodictively_optimal: lambda_i must be positive");
    }
    const GridSpec1D& g = phi_f.grid;
    const WaveFunction1D gi = gaussian_packet(g, 0.0, lambda_i);
    ApparatusState ap;
    ap.wf.grid = GridSpec2D{g, g, "eps_xi", "eps_xf"};
    ap.wf.amps.resize(g.n * g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t f = 0; f < g.n; ++f) {
            ap.wf.at(i, f) = gi.amps[i] * phi_f.amps[f];
        }
    }
    ap.wf = normalize(std::move(ap.wf));
    require_boundary_decay(ap.wf, "make_retrodictively_optimal");
    return ap;
}

ApparatusState make_predictively_optimal(double lambda_f, const WaveFunction1D& phi_i) {
    if (!(lambda_f > 0.0)) {
        throw std::invalid_argument("make_predictively_optimal: lambda_f must be positive");
    }
    const GridSpec1D& g = phi_i.grid;
    const WaveFunction1D gf = gaussian_packet(g, 0.0, lambda_f);
    ApparatusState ap;
    ap.wf.grid = GridSpec2D{g, g, "eps_xi", "eps_xf"};
    ap.wf.amps.resize(g.n * g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t f = 0; f < g.n; ++f) {
            ap.wf.at(i, f) = phi_i.amps[i] * gf.amps[f];
        }
    }
    ap.wf = normalize(std::move(ap.wf));
    require_boundary_decay(ap.wf, "make_predictively_optimal");
    return ap;
}

ApparatusState make_completely_optimal(double lambda_i, double lambda_f,
                                       const GridSpec1D& grid) {
    return make_retrodictively_optimal(lambda_i, gaussian_packet(grid, 0.0, lambda_f));
}

ApparatusState make_minimally_disturbing(double lambda, double eta, const GridSpec1D& grid) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("make_minimally_disturbing: lambda must be positive");
    }
    if (eta < 0.0) {
        throw std::invalid_argument("make_minimally_disturbing: eta must be >= 0");
    }
    const double c = std::cosh(eta);
    const double s = std::sinh(eta);
    const double l2 = lambda * lambda;
    ApparatusState ap;
    ap.wf.grid = GridSpec2D{grid, grid, "eps_xi", "eps_xf"};
    ap.wf.amps.resize(grid.n * grid.n);
    const double amp = 1.0 / (std::sqrt(kPi) * lambda);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double ei = grid.x(i);
        for (std::size_t f = 0; f < grid.n; ++f) {
            const double ef = grid.x(f);
            ap.wf.at(i, f) =
                amp * std::exp(-(c * ei * ei - 2.0 * s * ei * ef + c * ef * ef) / (2.0 * l2));
        }
    }
    ap.wf = normalize(std::move(ap.wf));
    require_boundary_decay(ap.wf, "make_minimally_disturbing");
    return ap;
}

ApparatusState make_apparatus_from_amplitudes(const GridSpec2D& grid,
                                              std::vector<cdouble> amps) {
    grid.validate();
    if (amps.size() != grid.size()) {
        throw GridMismatch("make_apparatus_from_amplitudes: amplitude count");
    }
    ApparatusState ap;
    ap.wf.grid = grid;
    ap.wf.amps = std::move(amps);
    ap.wf = normalize(std::move(ap.wf));
    require_boundary_decay(ap.wf, "make_apparatus_from_amplitudes");
    return ap;
}

ErrorReport error_report(const ApparatusState& ap) {
    require_normalized(ap.wf, "error_report");
    require_boundary_decay(ap.wf, "error_report");
    const WaveFunction2D& w = ap.wf;
    const double hbar = w.grid.axis1.hbar;

    double m_i = 0, m_f = 0, m_ii = 0, m_ff = 0, m_if = 0;
    for (std::size_t i1 = 0; i1 < w.grid.axis1.n; ++i1) {
        const double ei = w.grid.axis1.x(i1);
        for (std::size_t i2 = 0; i2 < w.grid.axis2.n; ++i2) {
            const double ef = w.grid.axis2.x(i2);
            const double p = std::norm(w.at(i1, i2));
            m_i += ei * p;
            m_f += ef * p;
            m_ii += ei * ei * p;
            m_ff += ef * ef * p;
            m_if += ei * ef * p;
        }
    }
    const double cell = w.grid.axis1.dx * w.grid.axis2.dx;
    m_i *= cell;
    m_f *= cell;
    m_ii *= cell;
    m_ff *= cell;
    m_if *= cell;

    const WaveFunction2D t = to_momentum_rep_axis(to_momentum_rep_axis(w, 0), 1);
    double k_i = 0, k_f = 0, k_ii = 0, k_ff = 0, k_if = 0;
    for (std::size_t i1 = 0; i1 < t.grid.axis1.n; ++i1) {
        const double ki = t.grid.axis1.x(i1);
        for (std::size_t i2 = 0; i2 < t.grid.axis2.n; ++i2) {
            const double kf = t.grid.axis2.x(i2);
            const double p = std::norm(t.at(i1, i2));
            k_i += ki * p;
            k_f += kf * p;
            k_ii += ki * ki * p;
            k_ff += kf * kf * p;
            k_if += ki * kf * p;
        }
    }
    const double kcell = t.grid.axis1.dx * t.grid.axis2.dx;
    k_i *= kcell;
    k_f *= kcell;
    k_ii *= kcell;
    k_ff *= kcell;
    k_if *= kcell;

    ErrorReport r;
    r.hbar = hbar;
    r.dei_x = std::sqrt(std::max(0.0, m_ii));
    r.def_x = std::sqrt(std::max(0.0, m_ff));
    r.dd_x = std::sqrt(std::max(0.0, m_ii + m_ff - 2.0 * m_if));
    // eps_Pi acts as -k_i, eps_Pf as +k_f in the Fourier representation.
    r.dei_p = std::sqrt(std::max(0.0, k_ii));
    r.def_p = std::sqrt(std::max(0.0, k_ff));
    r.dd_p = std::sqrt(std::max(0.0, k_ii + k_ff + 2.0 * k_if));
    r.cross_term_x = 0.5 * (m_ii - m_ff);
    r.cross_term_p = 0.5 * (k_ii - k_ff);
    r.mean_ei_x = m_i;
    r.mean_ef_x = m_f;
    r.mean_d_x = m_i - m_f;
    r.mean_ei_p = -k_i;
    r.mean_ef_p = k_f;
    r.mean_d_p = -k_i - k_f;

    const double floor = 0.5 * hbar - 1e-9 * hbar;
    const double products[6] = {r.dei_x * r.dei_p, r.def_x * r.def_p, r.dei_x * r.dd_p,
                                r.def_x * r.dd_p,  r.dei_p * r.dd_x, r.def_p * r.dd_x};
    for (double p : products) {
        if (p < floor) {
            throw Error("error_report: uncertainty product below hbar/2; grid unusable");
        }
    }
    return r;
}

WaveFunction2D to_muX_piP_rep(const ApparatusState& ap) {
    const WaveFunction2D& w = ap.wf;
    const GridSpec1D& g = w.grid.axis1;
    if (!same_grid(g, w.grid.axis2)) {
        throw InterpolationError("to_muX_piP_rep: eps axes must share one lattice");
    }
    if (!g.is_centered()) {
        throw InterpolationError("to_muX_piP_rep: lattice must be centered for exact remap");
    }
    const std::size_t n = g.n;
    GridSpec1D pi_grid;
    pi_grid.n = n;
    pi_grid.dx = 2.0 * g.dx;
    pi_grid.x_min = 2.0 * g.x_min;
    pi_grid.hbar = g.hbar;
    WaveFunction2D out;
    out.grid = GridSpec2D{g, pi_grid, "mu_x", "pi_p"};
    out.amps.assign(n * n, cdouble{0.0, 0.0});
    const long half = long(n) / 2;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const long m1 = long(j) + long(k) - half;  // eps_Xi = mu_X + pi_P/2
            const long m2 = long(j) - long(k) + half;  // eps_Xf = mu_X - pi_P/2
            if (m1 >= 0 && m1 < long(n) && m2 >= 0 && m2 < long(n)) {
                out.at(j, k) = w.at(std::size_t(m1), std::size_t(m2));
            }
        }
    }
    const double n2 = norm_squared(out);
    if (std::abs(n2 - norm_squared(w)) > 1e-8) {
        throw InterpolationError("to_muX_piP_rep: remap lost more norm than tolerated");
    }
    return out;
}

WaveFunction2D to_pointer_rep(const ApparatusState& ap) {
    WaveFunction2D mid = to_muX_piP_rep(ap);
    WaveFunction2D out = to_position_rep_axis(mid, 1);
    out.grid.name1 = "mu_x";
    out.grid.name2 = "mu_p";
    return out;
}

std::pair<WaveFunction1D, WaveFunction1D> apparatus_factors(const ApparatusState& ap) {
    require_normalized(ap.wf, "apparatus_factors");
    const WaveFunction2D& w = ap.wf;
    const std::size_t n1 = w.grid.axis1.n;
    const std::size_t n2 = w.grid.axis2.n;
    const double d1 = w.grid.axis1.dx;
    const double d2 = w.grid.axis2.dx;

    // rho_i = Tr_f |phi><phi|; its dominant eigenvector is phi_i when the
    // state factorizes. Power iteration from the strongest row.
    std::vector<cdouble> rho(n1 * n1, cdouble{});
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n1; ++b) {
            cdouble s{0.0, 0.0};
            for (std::size_t f = 0; f < n2; ++f) s += w.at(a, f) * std::conj(w.at(b, f));
            rho[a * n1 + b] = s * d2;
        }
    }
    std::size_t start = 0;
    double best = -1.0;
    for (std::size_t a = 0; a < n1; ++a) {
        const double diag = rho[a * n1 + a].real();
        if (diag > best) {
            best = diag;
            start = a;
        }
    }
    std::vector<cdouble> v(n1);
    for (std::size_t a = 0; a < n1; ++a) v[a] = rho[a * n1 + start];
    std::vector<cdouble> nv(n1);
    for (int iter = 0; iter < 200; ++iter) {
        for (std::size_t a = 0; a < n1; ++a) {
            cdouble s{0.0, 0.0};
            for (std::size_t b = 0; b < n1; ++b) s += rho[a * n1 + b] * v[b];
            nv[a] = s * d1;
        }
        double nrm = 0.0;
        for (const auto& c : nv) nrm += std::norm(c);
        nrm = std::sqrt(nrm * d1);
        if (!(nrm > 0.0)) throw NotFactorized("apparatus_factors: degenerate reduced state");
        double delta = 0.0;
        for (std::size_t a = 0; a < n1; ++a) {
            nv[a] /= nrm;
            delta = std::max(delta, std::abs(nv[a] - v[a]));
        }
        v.swap(nv);
        if (delta < 1e-14) break;
    }
    // Fix the free phase: largest component real positive.
    std::size_t imax = 0;
    for (std::size_t a = 1; a < n1; ++a) {
        if (std::abs(v[a]) > std::abs(v[imax])) imax = a;
    }
    const cdouble ph = std::abs(v[imax]) > 0 ? std::conj(v[imax]) / std::abs(v[imax])
                                             : cdouble{1.0, 0.0};
    for (auto& c : v) c *= ph;

    WaveFunction1D phi_i{w.grid.axis1, v};
    WaveFunction1D phi_f{w.grid.axis2, std::vector<cdouble>(n2)};
    for (std::size_t f = 0; f < n2; ++f) {
        cdouble s{0.0, 0.0};
        for (std::size_t a = 0; a < n1; ++a) s += std::conj(v[a]) * w.at(a, f);
        phi_f.amps[f] = s * d1;
    }
    double resid = 0.0;
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t f = 0; f < n2; ++f) {
            resid += std::norm(w.at(a, f) - phi_i.amps[a] * phi_f.amps[f]);
        }
    }
    resid = std::sqrt(resid * d1 * d2);
    if (resid > 1e-6) {
        throw NotFactorized("apparatus_factors: product-form residual " +
                            std::to_string(resid));
    }
    return {std::move(phi_i), normalize(std::move(phi_f))};
}

}  // namespace akmeter
