#pragma once

#include <cmath>

#include "displacemon/core.hpp"

namespace displacemon::quadrature {

// Position-representation wavefunctions for the x = a + a† scaling
// (vacuum variance <x^2> = 1): psi_n(x) = 2^{-1/4} h_n(x/sqrt(2)) where
// h_n are the orthonormal Hermite functions. Stable upward recurrence.
inline RealVec hermite_column(int n_levels, double x) {
    RealVec psi(n_levels);
    const double q = x / std::sqrt(2.0);
    double h_prev = 0.0;
    double h = std::pow(pi, -0.25) * std::exp(-0.5 * q * q);
    psi[0] = std::pow(2.0, -0.25) * h;
    for (int n = 1; n < n_levels; ++n) {
        const double h_next = q * std::sqrt(2.0 / n) * h - std::sqrt((n - 1.0) / n) * h_prev;
        h_prev = h;
        h = h_next;
        psi[n] = std::pow(2.0, -0.25) * h;
    }
    return psi;
}

// Rows: grid points, columns: Fock levels.
inline RealMat position_wavefunctions(int n_levels, const RealVec& x_grid) {
    RealMat out(x_grid.size(), n_levels);
    for (int i = 0; i < x_grid.size(); ++i)
        out.row(i) = hermite_column(n_levels, x_grid[i]).transpose();
    return out;
}

inline RealVec uniform_grid(double lo, double hi, int n) {
    if (n < 2 || hi <= lo) throw SimError("uniform_grid: bad range");
    RealVec g(n);
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + step * i;
    return g;
}

struct GaussHermiteRule {
    RealVec nodes;   // roots of H_n, for weight exp(-s^2)
    RealVec weights; // sum(weights) = sqrt(pi)
};

// Golub-Welsch: eigen-decompose the Jacobi matrix of the Hermite weight.
inline GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw SimError("gauss_hermite: need at least one node");
    RealMat jacobi = RealMat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMat> es(jacobi);
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    const double mu0 = std::sqrt(pi);
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace displacemon::quadrature
