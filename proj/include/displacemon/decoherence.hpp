#pragma once

#include <cmath>
#include <cstdint>

#include "displacemon/core.hpp"
#include "displacemon/hilbert.hpp"
#include "displacemon/phasespace.hpp"
#include "displacemon/protocol.hpp"
#include "displacemon/quadrature.hpp"
#include "displacemon/rng.hpp"

namespace displacemon::decoherence {

using hilbert::DensityMatrix;
using hilbert::FockSpace;
using protocol::Outcome;

struct DephasingSpec {
    double gamma = 0.0;      // 1/s, qubit dephasing rate
    double exposure = 0.0;   // s, time the coherence is exposed
    int n_traj = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (gamma < 0.0 || exposure < 0.0 || n_traj < 1)
            throw SimError("DephasingSpec: gamma, t >= 0 and n_traj >= 1 required");
    }
    double gamma_t() const { return gamma * exposure; }
};

struct ThermalAddSpec {
    double n_prime = 0.0;      // mean phonons added
    int quadrature_points = 31;

    void validate() const {
        if (n_prime < 0.0) throw SimError("ThermalAddSpec: n_prime must be >= 0");
        if (quadrature_points < 3)
            throw SimError("ThermalAddSpec: need at least 3 quadrature nodes");
    }
};

// Conditional grating under qubit dephasing: the coherent term carries
// weight e^{-gamma t}, the rest is an incoherent mixture of the two kicks:
//   rho' = e^{-gt} Y rho Y† + (1 - e^{-gt})/4 [D† rho D + D rho D†].
inline std::pair<DensityMatrix, double> dephased_grating_analytic(
    const DensityMatrix& rho, const FockSpace& space, cxd alpha, double phi,
    Outcome outcome, double gamma_t) {
    if (gamma_t < 0.0) throw SimError("dephased_grating_analytic: gamma_t must be >= 0");
    const Mat d = hilbert::displacement(space, alpha);
    const Mat d_dag = d.adjoint();
    auto [up, um] = protocol::grating_operators(space, alpha, phi);
    const Mat& y = outcome == Outcome::Plus ? up : um;
    const double coherent = std::exp(-gamma_t);
    Mat out = coherent * (y * rho.matrix * y.adjoint());
    out.noalias() += (0.25 * (1.0 - coherent)) * (d_dag * rho.matrix * d);
    out.noalias() += (0.25 * (1.0 - coherent)) * (d * rho.matrix * d_dag);
    const double w = out.trace().real();
    return {DensityMatrix{std::move(out), w}, w / rho.weight};
}

// Readout probability with dephasing, via the characteristic function:
//   p+- = 1/2 +- (e^{-gt}/2) Re[e^{i phi} chi(2 alpha)].
inline double pplus_dephased(const DensityMatrix& rho, cxd alpha, double phi,
                             double gamma_t, Outcome outcome = Outcome::Plus) {
    const cxd chi = phasespace::characteristic(rho, 2.0 * alpha);
    const double fringe =
        0.5 * std::exp(-gamma_t) * (std::exp(cxd(0.0, phi)) * chi).real() / rho.weight;
    return outcome == Outcome::Plus ? 0.5 + fringe : 0.5 - fringe;
}

struct MonteCarloResult {
    DensityMatrix averaged;
    double probability = 0.0;
    double std_error = 0.0;
    double w_sample_mean = 0.0;     // diagnostics for the noise statistics
    double w_sample_variance = 0.0;
    cxd phase_mean = 0.0;           // empirical mean of e^{2i sqrt(g/2) W}
};

// Trajectory sampling of the stochastic dephasing unitary. Each trajectory
// draws W ~ N(0, t); the conditional state for a realisation is
//   1/4 [D† rho D + D rho D† +- (e^{i(phi+2dW)} D rho D + h.c.)],
// so the four sandwiches are shared and the average enters through the
// empirical mean of the trajectory phase.
inline MonteCarloResult dephasing_monte_carlo(const DensityMatrix& rho,
                                              const FockSpace& space, cxd alpha,
                                              double phi, Outcome outcome,
                                              const DephasingSpec& spec) {
    spec.validate();
    const Mat d = hilbert::displacement(space, alpha);
    const Mat d_dag = d.adjoint();
    const Mat a = d_dag * rho.matrix * d;
    const Mat b = d * rho.matrix * d_dag;
    const Mat c = d * rho.matrix * d;
    const double tr_ab = (a.trace() + b.trace()).real();
    const cxd tr_c = c.trace();
    const double sign = outcome == Outcome::Plus ? 1.0 : -1.0;
    const double noise_scale = std::sqrt(0.5 * spec.gamma);

    double sum_p = 0.0, sum_p2 = 0.0, sum_w = 0.0, sum_w2 = 0.0;
    cxd sum_phase = 0.0;
    for (int k = 0; k < spec.n_traj; ++k) {
        const double w_k = std::sqrt(spec.exposure) * rng::standard_normal(spec.seed, k);
        const cxd phase = std::exp(cxd(0.0, phi + 2.0 * noise_scale * w_k));
        const double p_k =
            0.25 * (tr_ab + sign * 2.0 * (phase * tr_c).real()) / rho.weight;
        sum_p += p_k;
        sum_p2 += p_k * p_k;
        sum_w += w_k;
        sum_w2 += w_k * w_k;
        sum_phase += std::exp(cxd(0.0, 2.0 * noise_scale * w_k));
    }
    const double n = spec.n_traj;
    MonteCarloResult result;
    result.probability = sum_p / n;
    const double var_p = std::max(0.0, sum_p2 / n - result.probability * result.probability);
    result.std_error = std::sqrt(var_p / n);
    result.w_sample_mean = sum_w / n;
    result.w_sample_variance = std::max(0.0, sum_w2 / n - result.w_sample_mean * result.w_sample_mean);
    result.phase_mean = sum_phase / n;

    const cxd m = result.phase_mean * std::exp(cxd(0.0, phi));
    Mat avg = 0.25 * (a + b);
    avg.noalias() += (0.25 * sign) * (m * c);
    avg.noalias() += (0.25 * sign) * (std::conj(m) * c.adjoint());
    result.averaged = DensityMatrix{std::move(avg), result.probability * rho.weight};
    return result;
}

// Thermal-addition channel: Gaussian mixture of displacements,
//   rho_d = Int d^2 beta e^{-|beta|^2/n'}/(pi n') D(beta) rho D†(beta),
// by tensor-product Gauss-Hermite quadrature. D(u+iv) = e^{iuv} D(u) D(iv)
// with the phase cancelling in the sandwich, so the two quadrature axes act
// as independent phase kernels in the p and x eigenbases.
inline DensityMatrix thermal_add(const DensityMatrix& rho, const FockSpace& space,
                                 const ThermalAddSpec& spec) {
    spec.validate();
    if (spec.n_prime == 0.0) return rho;
    const auto rule = quadrature::gauss_hermite(spec.quadrature_points);
    const double scale = std::sqrt(spec.n_prime);
    const double beta_max = scale * rule.nodes.cwiseAbs().maxCoeff();
    if (beta_max * beta_max >= space.dim / 8.0)
        throw TruncationRisk("thermal_add: quadrature displacement exceeds the guard");

    RealVec w = rule.weights / rule.weights.sum();

    // x eigenbasis; the p eigenbasis shares eigenvectors up to i^n row phases.
    const auto basis = hilbert::x_eigenbasis(space);
    const int N = space.dim;
    const Mat qx = basis.vectors.cast<cxd>();
    Mat qp(N, N);
    for (int r = 0; r < N; ++r) {
        const cxd ph = std::exp(cxd(0.0, 0.5 * pi * r));
        qp.row(r) = ph * qx.row(r);
    }

    auto kernel = [&](double delta) {
        double acc = 0.0;
        for (int j = 0; j < w.size(); ++j)
            acc += w[j] * std::cos(scale * rule.nodes[j] * delta);
        return acc;
    };

    // Imaginary displacements: diagonal phases in the x basis.
    Mat work = qx.adjoint() * rho.matrix * qx;
    for (int r = 0; r < N; ++r)
        for (int col = 0; col < N; ++col)
            work(r, col) *= kernel(basis.nodes[r] - basis.nodes[col]);
    work = qx * work * qx.adjoint();

    // Real displacements: diagonal phases in the p basis.
    work = qp.adjoint() * work * qp;
    for (int r = 0; r < N; ++r)
        for (int col = 0; col < N; ++col)
            work(r, col) *= kernel(basis.nodes[r] - basis.nodes[col]);
    work = qp * work * qp.adjoint();

    return DensityMatrix{std::move(work), rho.weight};
}

// Readout after thermal addition: the channel damps the characteristic
// function by e^{-n'|eta|^2}, i.e. the fringe term by e^{-4 n' |alpha3|^2}.
inline double pplus_thermal(const DensityMatrix& rho, cxd alpha3, double phi,
                            double n_prime) {
    const cxd chi = phasespace::characteristic(rho, 2.0 * alpha3);
    const double damping = std::exp(-4.0 * n_prime * std::norm(alpha3));
    return 0.5 + 0.5 * damping * (std::exp(cxd(0.0, phi)) * chi).real() / rho.weight;
}

} // namespace displacemon::decoherence
