#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "displacemon/core.hpp"
#include "displacemon/hilbert.hpp"
#include "displacemon/quadrature.hpp"

namespace displacemon::phasespace {

using hilbert::DensityMatrix;
using hilbert::MechState;

namespace detail {

// Closed-form Fock matrix elements of D(alpha) via log-factorial prefactors
// and the generalized-Laguerre recurrence, filled one diagonal at a time.
// <m|D|n> = sqrt(n!/m!) alpha^{m-n} e^{-|a|^2/2} L_n^{(m-n)}(|a|^2), m >= n.
inline Mat displacement_elements(int dim, cxd alpha) {
    Mat d(dim, dim);
    const double x = std::norm(alpha);
    const double gauss = std::exp(-0.5 * x);
    for (int off = 0; off < dim; ++off) {
        // Upper branch: m = n + off; lower branch mirrors with (-conj(alpha)).
        cxd pref_up = gauss;   // sqrt(n!/m!) alpha^off at n = 0
        cxd pref_lo = gauss;
        for (int k = 1; k <= off; ++k) {
            pref_up *= alpha / std::sqrt(static_cast<double>(k));
            pref_lo *= -std::conj(alpha) / std::sqrt(static_cast<double>(k));
        }
        double lag_prev = 0.0, lag = 1.0; // L_0^{(off)} = 1
        for (int n = 0; n + off < dim; ++n) {
            if (n > 0) {
                const double next =
                    ((2.0 * n - 1.0 + off - x) * lag - (n - 1.0 + off) * lag_prev) / n;
                lag_prev = lag;
                lag = next;
                const double scale = std::sqrt(static_cast<double>(n) /
                                               static_cast<double>(n + off));
                pref_up *= scale;
                pref_lo *= scale;
            }
            d(n + off, n) = pref_up * lag;
            if (off > 0) d(n, n + off) = pref_lo * lag;
        }
    }
    return d;
}

} // namespace detail

// chi(eta) = Tr[D(eta) rho]; chi(0) = weight, |chi| <= weight.
inline cxd characteristic(const DensityMatrix& rho, cxd eta) {
    if (std::norm(eta) >= rho.dim() / 8.0)
        throw TruncationRisk("characteristic: |eta|^2 >= dim/8");
    const Mat d = detail::displacement_elements(rho.dim(), eta);
    return (d * rho.matrix).trace();
}

inline cxd characteristic(const MechState& psi, cxd eta) {
    if (std::norm(eta) >= psi.dim() / 8.0)
        throw TruncationRisk("characteristic: |eta|^2 >= dim/8");
    const Mat d = detail::displacement_elements(psi.dim(), eta);
    return psi.amplitudes.adjoint() * (d * psi.amplitudes);
}

struct MarginalCurve {
    RealVec x;
    RealVec values;
    double theta = 0.0;

    double dx() const { return x[1] - x[0]; }
    double integral() const {
        double s = 0.0;
        for (int i = 0; i < values.size(); ++i) s += values[i];
        s -= 0.5 * (values[0] + values[values.size() - 1]);
        return s * dx();
    }
};

namespace detail {

inline void check_grid_span(double lo, double hi, double mean, double var,
                            const char* what) {
    const double sd = std::sqrt(std::max(var, 0.0));
    if (mean - 5.0 * sd < lo || mean + 5.0 * sd > hi)
        throw GridTooSmall(std::string(what) + ": grid must span 5 standard deviations");
}

template <typename State>
void marginal_span_guard(const State& rotated, const RealVec& x_grid) {
    const auto m = hilbert::quadrature_moments(rotated);
    check_grid_span(x_grid[0], x_grid[x_grid.size() - 1], m.mean_x, m.var_x, "marginal");
}

} // namespace detail

// P(x; theta) = diagonal of R(theta) rho R(theta)† in the x representation.
inline MarginalCurve marginal(const DensityMatrix& rho, double theta, const RealVec& x_grid) {
    const DensityMatrix rot = hilbert::apply_rotation(rho, theta);
    detail::marginal_span_guard(rot, x_grid);
    MarginalCurve curve;
    curve.x = x_grid;
    curve.theta = theta;
    curve.values.resize(x_grid.size());
    const RealMat psi = quadrature::position_wavefunctions(rho.dim(), x_grid);
    const Mat t = psi.cast<cxd>() * rot.matrix; // rows: grid, cols: Fock
    for (int i = 0; i < x_grid.size(); ++i) {
        const cxd v = t.row(i) * psi.row(i).transpose().cast<cxd>();
        curve.values[i] = v.real();
    }
    return curve;
}

inline MarginalCurve marginal(const MechState& psi_in, double theta, const RealVec& x_grid) {
    const MechState rot = hilbert::apply_rotation(psi_in, theta);
    detail::marginal_span_guard(rot, x_grid);
    MarginalCurve curve;
    curve.x = x_grid;
    curve.theta = theta;
    curve.values.resize(x_grid.size());
    const RealMat psi = quadrature::position_wavefunctions(rot.dim(), x_grid);
    const Vec amp_x = psi.cast<cxd>() * rot.amplitudes;
    for (int i = 0; i < x_grid.size(); ++i) curve.values[i] = std::norm(amp_x[i]);
    return curve;
}

struct WignerGrid {
    RealVec x;
    RealVec p;
    RealMat values; // rows: x axis, cols: p axis
    std::string convention = "int W dx dp = weight; vacuum W(0,0) = 1/2pi";

    double dx() const { return x[1] - x[0]; }
    double dp() const { return p[1] - p[0]; }
    double min_value() const { return values.minCoeff(); }
    double integral() const {
        double s = values.sum();
        s -= 0.5 * (values.row(0).sum() + values.row(values.rows() - 1).sum());
        s -= 0.5 * (values.col(0).sum() + values.col(values.cols() - 1).sum());
        return s * dx() * dp();
    }
};

struct GridSpec {
    double x_min = -24.0, x_max = 24.0;
    int nx = 512;
    double p_min = -24.0, p_max = 24.0;
    int np = 512;
};

namespace detail {

template <typename State>
void wigner_span_guard(const State& state, const GridSpec& spec) {
    const auto m = hilbert::quadrature_moments(state);
    check_grid_span(spec.x_min, spec.x_max, m.mean_x, m.var_x, "wigner x axis");
    check_grid_span(spec.p_min, spec.p_max, m.mean_p, m.var_p, "wigner p axis");
}

// W(x,p) = (1/2pi) Int dy <x+y|rho|x-y> e^{-ipy}, evaluated per pure
// component on a y lattice with the x-grid spacing, then pushed onto the
// requested p axis by direct Fourier sum.
inline RealMat wigner_from_components(const std::vector<Vec>& components,
                                      const std::vector<double>& weights,
                                      const GridSpec& spec, int n_levels) {
    const RealVec x_grid = quadrature::uniform_grid(spec.x_min, spec.x_max, spec.nx);
    const double dx = x_grid[1] - x_grid[0];
    const double half_span = 0.5 * (spec.x_max - spec.x_min);
    const int n_half = static_cast<int>(std::ceil(half_span / dx));
    const int ny = 2 * n_half + 1;

    // Wavefunctions on the extended lattice covering x +- y.
    const RealVec ext = quadrature::uniform_grid(spec.x_min - n_half * dx,
                                                 spec.x_max + n_half * dx,
                                                 spec.nx + 2 * n_half);
    const RealMat basis = quadrature::position_wavefunctions(n_levels, ext);

    Mat kernel = Mat::Zero(spec.nx, ny); // (x index, y index)
    for (std::size_t c = 0; c < components.size(); ++c) {
        const Vec amp_ext = basis.cast<cxd>() * components[c];
        for (int i = 0; i < spec.nx; ++i) {
            const int center = i + n_half;
            for (int j = 0; j < ny; ++j) {
                const int off = j - n_half;
                kernel(i, j) += weights[c] * amp_ext[center + off] *
                                std::conj(amp_ext[center - off]);
            }
        }
    }

    const RealVec p_grid = quadrature::uniform_grid(spec.p_min, spec.p_max, spec.np);
    Mat fourier(ny, spec.np);
    for (int j = 0; j < ny; ++j) {
        const double y = (j - n_half) * dx;
        for (int k = 0; k < spec.np; ++k)
            fourier(j, k) = std::exp(cxd(0.0, -p_grid[k] * y));
    }
    const Mat w = kernel * fourier * (dx / (2.0 * pi));
    return w.real();
}

} // namespace detail

inline WignerGrid wigner(const MechState& psi, const GridSpec& spec) {
    detail::wigner_span_guard(psi, spec);
    WignerGrid grid;
    grid.x = quadrature::uniform_grid(spec.x_min, spec.x_max, spec.nx);
    grid.p = quadrature::uniform_grid(spec.p_min, spec.p_max, spec.np);
    grid.values = detail::wigner_from_components({psi.amplitudes}, {1.0}, spec, psi.dim());
    return grid;
}

inline WignerGrid wigner(const DensityMatrix& rho, const GridSpec& spec) {
    detail::wigner_span_guard(rho, spec);
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix);
    std::vector<Vec> components;
    std::vector<double> weights;
    const double cutoff = 1e-14 * std::max(rho.weight, 1e-300);
    for (int k = 0; k < rho.dim(); ++k) {
        const double w = es.eigenvalues()[k];
        if (w > cutoff) {
            components.push_back(es.eigenvectors().col(k));
            weights.push_back(w);
        }
    }
    WignerGrid grid;
    grid.x = quadrature::uniform_grid(spec.x_min, spec.x_max, spec.nx);
    grid.p = quadrature::uniform_grid(spec.p_min, spec.p_max, spec.np);
    grid.values = detail::wigner_from_components(components, weights, spec, rho.dim());
    return grid;
}

struct SpectralPeak {
    double wave_number = 0.0;
    double magnitude = 0.0;
};

struct WavenumberSpectrum {
    RealVec k;
    RealVec magnitude;
    std::vector<SpectralPeak> peaks;
};

// Cosine-transform magnitude of a marginal with local-maximum extraction
// above floor_frac of the zero-frequency component; parabolic interpolation
// refines peak positions below the k-grid spacing.
inline WavenumberSpectrum wavenumber_spectrum(const MarginalCurve& curve,
                                              double floor_frac = 0.01,
                                              double k_max = 0.0) {
    const double dx = curve.dx();
    if (k_max <= 0.0) k_max = 2.0 * pi / (8.0 * dx); // 8 samples per fringe
    if (2.0 * pi / k_max < 8.0 * dx * (1.0 - 1e-12))
        throw UnderResolved("wavenumber_spectrum: fewer than 8 samples per fringe at k_max");
    const int nk = std::max(256, 8 * static_cast<int>(curve.x.size()));
    WavenumberSpectrum spec;
    spec.k = quadrature::uniform_grid(0.0, k_max, nk);
    spec.magnitude.resize(nk);
    for (int m = 0; m < nk; ++m) {
        cxd acc = 0.0;
        for (int i = 0; i < curve.x.size(); ++i)
            acc += curve.values[i] * std::exp(cxd(0.0, -spec.k[m] * curve.x[i]));
        spec.magnitude[m] = std::abs(acc) * dx;
    }
    const double floor = floor_frac * spec.magnitude[0];
    const double dk = spec.k[1] - spec.k[0];
    // Skip the zero-frequency lobe: start after the first local minimum.
    int start = 1;
    while (start + 1 < nk && spec.magnitude[start + 1] < spec.magnitude[start]) ++start;
    for (int m = start + 1; m + 1 < nk; ++m) {
        const double y0 = spec.magnitude[m - 1], y1 = spec.magnitude[m],
                     y2 = spec.magnitude[m + 1];
        if (y1 > floor && y1 >= y0 && y1 > y2) {
            const double denom = y0 - 2.0 * y1 + y2;
            const double shift = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
            spec.peaks.push_back({spec.k[m] + shift * dk,
                                  y1 - 0.25 * (y0 - y2) * shift});
        }
    }
    std::sort(spec.peaks.begin(), spec.peaks.end(),
              [](const SpectralPeak& a, const SpectralPeak& b) {
                  return a.wave_number < b.wave_number;
              });
    return spec;
}

// Classical checkerboard of Appendix-type form:
// P(x,p) = (1/N) exp(-(x^2+p^2)/2 sigma^2) cos^2(alpha x) cos^2(alpha p).
struct ClassicalCheckerboard {
    double sigma = 0.0;
    double alpha = 0.0;

    void validate() const {
        if (sigma <= 0.0)
            throw SimError("ClassicalCheckerboard: sigma must be positive");
    }

    double density_unnormalized(double x, double p) const {
        const double cx = std::cos(alpha * x);
        const double cp = std::cos(alpha * p);
        return std::exp(-(x * x + p * p) / (2.0 * sigma * sigma)) * cx * cx * cp * cp;
    }

    // Gaussian-mixture Fourier factor of one checkerboard axis (unnormalized).
    double axis_transform(double u) const {
        const double s2 = sigma * sigma;
        auto g = [&](double v) { return std::exp(-0.5 * s2 * v * v); };
        return 0.5 * g(u) + 0.25 * (g(u - 2.0 * alpha) + g(u + 2.0 * alpha));
    }

    double normalization() const {
        // 2-D trapezoid over +-8 sigma (the open question asks for numerics).
        const int n = 2001;
        const double span = 8.0 * sigma;
        const double h = 2.0 * span / (n - 1);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = -span + i * h;
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p = -span + j * h;
                double v = density_unnormalized(x, p);
                if (j == 0 || j == n - 1) v *= 0.5;
                row += v;
            }
            if (i == 0 || i == n - 1) row *= 0.5;
            total += row;
        }
        return total * h * h;
    }
};

// Rotated classical marginal by 1-D quadrature across the rotated axis.
inline MarginalCurve classical_marginal(const ClassicalCheckerboard& cb, double theta,
                                        const RealVec& x_grid) {
    cb.validate();
    MarginalCurve curve;
    curve.x = x_grid;
    curve.theta = theta;
    curve.values.resize(x_grid.size());
    const int np = 4001;
    const double span = 8.0 * cb.sigma;
    const double h = 2.0 * span / (np - 1);
    const double c = std::cos(theta), s = std::sin(theta);
    double total = 0.0;
    for (int i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        double acc = 0.0;
        for (int j = 0; j < np; ++j) {
            const double p = -span + j * h;
            double v = cb.density_unnormalized(x * c + p * s, p * c - x * s);
            if (j == 0 || j == np - 1) v *= 0.5;
            acc += v;
        }
        curve.values[i] = acc * h;
        total += curve.values[i];
    }
    const double dx = curve.dx();
    total = (total - 0.5 * (curve.values[0] + curve.values[curve.values.size() - 1])) * dx;
    curve.values /= total;
    return curve;
}

// Closed-form classical readout probability: the separable Gaussian Fourier
// factors of the rotated checkerboard evaluated at wave number 2 alpha3.
inline double classical_pplus(const ClassicalCheckerboard& cb, double alpha3, double phi,
                              double theta) {
    cb.validate();
    const double f0 = cb.axis_transform(0.0);
    const double vis = cb.axis_transform(2.0 * alpha3 * std::cos(theta)) *
                       cb.axis_transform(2.0 * alpha3 * std::sin(theta)) / (f0 * f0);
    return 0.5 + 0.5 * vis * std::cos(phi);
}

// Same quantity by direct 2-D quadrature of cos^2 against the checkerboard.
inline double classical_pplus_quadrature(const ClassicalCheckerboard& cb, double alpha3,
                                         double phi, double theta) {
    cb.validate();
    const int n = 3001;
    const double span = 8.0 * cb.sigma;
    const double h = 2.0 * span / (n - 1);
    const double c = std::cos(theta), s = std::sin(theta);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -span + i * h;
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double p = -span + j * h;
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            const double rho = cb.density_unnormalized(x, p) * wi * wj;
            const double probe = std::cos(alpha3 * (x * c - p * s) + 0.5 * phi);
            num += rho * probe * probe;
            den += rho;
        }
    }
    return num / den;
}

} // namespace displacemon::phasespace
