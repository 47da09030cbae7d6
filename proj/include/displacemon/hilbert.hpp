#pragma once

#include <cmath>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "displacemon/core.hpp"

namespace displacemon::hilbert {

// Truncated Fock space: all operators produced for this space are dim x dim.
struct FockSpace {
    int dim = 256;
    double convergence_tol = 1e-9;

    explicit FockSpace(int dim_ = 256, double tol = 1e-9)
        : dim(dim_), convergence_tol(tol) {
        if (dim < 2) throw SimError("FockSpace: dim must be >= 2");
        if (tol <= 0.0) throw SimError("FockSpace: convergence_tol must be positive");
    }
};

// Pure resonator state. `norm_sq` records the weight accumulated through
// conditioning; amplitudes are kept sub-normalized until presentation.
struct MechState {
    Vec amplitudes;
    double norm_sq = 1.0;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double weight() const { return norm_sq; }
    MechState normalized() const {
        MechState out{amplitudes / std::sqrt(norm_sq), 1.0};
        return out;
    }
};

// Mixed resonator state; trace == weight (sub-normalized after conditioning).
struct DensityMatrix {
    Mat matrix;
    double weight = 1.0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Qubit (x) resonator pure state, basis order (|+> (x) Fock, |-> (x) Fock).
struct JointState {
    Vec amplitudes; // length 2*dim

    int dim() const { return static_cast<int>(amplitudes.size()) / 2; }
    auto plus_block() { return amplitudes.head(dim()); }
    auto minus_block() { return amplitudes.tail(dim()); }
    auto plus_block() const { return amplitudes.head(dim()); }
    auto minus_block() const { return amplitudes.tail(dim()); }
};

inline MechState fock_state(const FockSpace& space, int n) {
    if (n < 0 || n >= space.dim) throw SimError("fock_state: level outside truncation");
    Vec amps = Vec::Zero(space.dim);
    amps[n] = 1.0;
    return MechState{std::move(amps), 1.0};
}

inline MechState vacuum_state(const FockSpace& space) { return fock_state(space, 0); }

inline DensityMatrix to_density(const MechState& psi) {
    return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint(), psi.norm_sq};
}

struct LadderOps {
    Mat a;      // <n-1|a|n> = sqrt(n)
    Mat a_dag;
    Mat n;      // number operator
    Mat x;      // a + a†, dimensionless position
    Mat p;      // i(a† - a), dimensionless momentum
};

inline LadderOps ladder_ops(const FockSpace& space) {
    const int N = space.dim;
    Mat a = Mat::Zero(N, N);
    for (int k = 1; k < N; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    LadderOps ops;
    ops.a = a;
    ops.a_dag = a.adjoint();
    ops.n = ops.a_dag * a;
    ops.x = a + ops.a_dag;
    ops.p = iu * (ops.a_dag - a);
    return ops;
}

// D(alpha) = exp(alpha a† - alpha* a), by scaling-and-squaring of the
// (anti-Hermitian, hence exactly unitary) truncated generator.
inline Mat displacement(const FockSpace& space, cxd alpha) {
    if (std::norm(alpha) >= space.dim / 8.0)
        throw TruncationRisk("displacement: |alpha|^2 >= dim/8");
    const int N = space.dim;
    Mat gen = Mat::Zero(N, N);
    for (int k = 1; k < N; ++k) {
        const double r = std::sqrt(static_cast<double>(k));
        gen(k, k - 1) = alpha * r;       // alpha a†
        gen(k - 1, k) = -std::conj(alpha) * r; // -alpha* a
    }
    return gen.exp();
}

// R(theta) = exp(-i theta a†a); diagonal in the Fock basis.
inline Mat rotation(const FockSpace& space, double theta) {
    Vec d(space.dim);
    for (int k = 0; k < space.dim; ++k)
        d[k] = std::exp(cxd(0.0, -theta * k));
    return d.asDiagonal();
}

inline MechState apply_rotation(const MechState& psi, double theta) {
    Vec amps = psi.amplitudes;
    for (int k = 0; k < amps.size(); ++k)
        amps[k] *= std::exp(cxd(0.0, -theta * k));
    return MechState{std::move(amps), psi.norm_sq};
}

inline DensityMatrix apply_rotation(const DensityMatrix& rho, double theta) {
    const int N = rho.dim();
    Mat out(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            out(r, c) = rho.matrix(r, c) * std::exp(cxd(0.0, -theta * (r - c)));
    return DensityMatrix{std::move(out), rho.weight};
}

// Geometric distribution p_n = n̄^n / (1+n̄)^{n+1}.
inline DensityMatrix thermal_state(const FockSpace& space, double n_bar) {
    if (n_bar < 0.0) throw SimError("thermal_state: n_bar must be >= 0");
    if (n_bar >= space.dim / 20.0)
        throw TruncationRisk("thermal_state: n_bar >= dim/20");
    Mat rho = Mat::Zero(space.dim, space.dim);
    if (n_bar == 0.0) {
        rho(0, 0) = 1.0;
    } else {
        const double ratio = n_bar / (1.0 + n_bar);
        double p = 1.0 / (1.0 + n_bar);
        for (int k = 0; k < space.dim; ++k) {
            rho(k, k) = p;
            p *= ratio;
        }
    }
    return DensityMatrix{std::move(rho), 1.0};
}

// Fraction of state weight in the top 5% of Fock levels. Conditioned states
// must keep this below convergence_tol for truncated operators to be trusted.
inline double truncation_tail(const MechState& psi) {
    const int N = psi.dim();
    const int tail = std::max(1, N / 20);
    double s = 0.0;
    for (int k = N - tail; k < N; ++k) s += std::norm(psi.amplitudes[k]);
    return psi.norm_sq > 0.0 ? s / psi.norm_sq : 0.0;
}

inline double truncation_tail(const DensityMatrix& rho) {
    const int N = rho.dim();
    const int tail = std::max(1, N / 20);
    double s = 0.0;
    for (int k = N - tail; k < N; ++k) s += rho.matrix(k, k).real();
    return rho.weight > 0.0 ? s / rho.weight : 0.0;
}

template <typename State>
bool truncation_healthy(const State& state, double tol) {
    return truncation_tail(state) < tol;
}

// Spectral decomposition of the (real symmetric tridiagonal) x operator;
// nodes are the scaled Gauss-Hermite points of the truncation.
struct XBasis {
    RealVec nodes;
    RealMat vectors; // columns are x eigenvectors in the Fock basis
};

inline XBasis x_eigenbasis(const FockSpace& space) {
    RealMat x = RealMat::Zero(space.dim, space.dim);
    for (int k = 1; k < space.dim; ++k) {
        const double r = std::sqrt(static_cast<double>(k));
        x(k, k - 1) = r;
        x(k - 1, k) = r;
    }
    Eigen::SelfAdjointEigenSolver<RealMat> es(x);
    return {es.eigenvalues(), es.eigenvectors()};
}

// Conditioning on a measurement operator M: state -> M state (pure) or
// M rho M† (mixed). Returns the conditioned state (still sub-normalized)
// and the success probability relative to the incoming weight.
inline std::pair<MechState, double> condition(const MechState& psi, const Mat& op) {
    if (psi.norm_sq <= 0.0) throw ZeroProbability("condition: incoming state has zero weight");
    Vec amps = op * psi.amplitudes;
    const double w = amps.squaredNorm();
    const double prob = w / psi.norm_sq;
    if (prob < 1e-12) throw ZeroProbability("condition: outcome probability < 1e-12");
    return {MechState{std::move(amps), w}, prob};
}

inline std::pair<DensityMatrix, double> condition(const DensityMatrix& rho, const Mat& op) {
    if (rho.weight <= 0.0) throw ZeroProbability("condition: incoming state has zero weight");
    Mat m = op * rho.matrix * op.adjoint();
    const double w = m.trace().real();
    const double prob = w / rho.weight;
    if (prob < 1e-12) throw ZeroProbability("condition: outcome probability < 1e-12");
    return {DensityMatrix{std::move(m), w}, prob};
}

// Moments of the dimensionless quadratures.
inline double mean_phonons(const DensityMatrix& rho) {
    double s = 0.0;
    for (int k = 0; k < rho.dim(); ++k) s += k * rho.matrix(k, k).real();
    return s / rho.weight;
}

inline double mean_phonons(const MechState& psi) {
    double s = 0.0;
    for (int k = 0; k < psi.dim(); ++k) s += k * std::norm(psi.amplitudes[k]);
    return s / psi.norm_sq;
}

// First and second moments of x = a + a† and p = i(a† - a), from the
// tridiagonal/band structure (no operator matrices needed).
struct QuadratureMoments {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
};

inline QuadratureMoments quadrature_moments(const DensityMatrix& rho) {
    const int N = rho.dim();
    double mx = 0.0, mp = 0.0, diag = 0.0, off2 = 0.0;
    for (int n = 0; n < N; ++n) {
        diag += (2.0 * n + 1.0) * rho.matrix(n, n).real();
        if (n + 1 < N) {
            const double r = std::sqrt(n + 1.0);
            mx += 2.0 * r * rho.matrix(n, n + 1).real();
            mp += -2.0 * r * rho.matrix(n, n + 1).imag();
        }
        if (n + 2 < N)
            off2 += 2.0 * std::sqrt((n + 1.0) * (n + 2.0)) * rho.matrix(n, n + 2).real();
    }
    const double w = rho.weight;
    QuadratureMoments m;
    m.mean_x = mx / w;
    m.mean_p = mp / w;
    m.var_x = (diag + off2) / w - m.mean_x * m.mean_x;
    m.var_p = (diag - off2) / w - m.mean_p * m.mean_p;
    return m;
}

inline QuadratureMoments quadrature_moments(const MechState& psi) {
    const int N = psi.dim();
    double mx = 0.0, mp = 0.0, diag = 0.0, off2 = 0.0;
    for (int n = 0; n < N; ++n) {
        const double pop = std::norm(psi.amplitudes[n]);
        diag += (2.0 * n + 1.0) * pop;
        if (n + 1 < N) {
            const cxd c = std::conj(psi.amplitudes[n + 1]) * psi.amplitudes[n];
            const double r = std::sqrt(n + 1.0);
            mx += 2.0 * r * c.real();
            mp += -2.0 * r * c.imag();
        }
        if (n + 2 < N) {
            const cxd c2 = std::conj(psi.amplitudes[n + 2]) * psi.amplitudes[n];
            off2 += 2.0 * std::sqrt((n + 1.0) * (n + 2.0)) * c2.real();
        }
    }
    const double w = psi.norm_sq;
    QuadratureMoments m;
    m.mean_x = mx / w;
    m.mean_p = mp / w;
    m.var_x = (diag + off2) / w - m.mean_x * m.mean_x;
    m.var_p = (diag - off2) / w - m.mean_p * m.mean_p;
    return m;
}

template <typename State>
double expectation(const State& state, const Mat& op);

template <>
inline double expectation<MechState>(const MechState& psi, const Mat& op) {
    const cxd v = psi.amplitudes.adjoint() * (op * psi.amplitudes);
    return v.real() / psi.norm_sq;
}

template <>
inline double expectation<DensityMatrix>(const DensityMatrix& rho, const Mat& op) {
    return (op * rho.matrix).trace().real() / rho.weight;
}

} // namespace displacemon::hilbert
