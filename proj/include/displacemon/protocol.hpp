#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "displacemon/core.hpp"
#include "displacemon/hilbert.hpp"
#include "displacemon/phasespace.hpp"
#include "displacemon/quadrature.hpp"
#include "displacemon/rng.hpp"

namespace displacemon::protocol {

using hilbert::DensityMatrix;
using hilbert::FockSpace;
using hilbert::JointState;
using hilbert::MechState;

enum class Carrier { ModulatedAtOmega, Constant };
enum class Outcome { Plus, Minus };

// Coupling pulse lambda(t): Gaussian envelope of unit maximum and FWHM
// tau_lambda, optionally carrier-modulated at the mechanical frequency.
// Constant carrier means a rectangular lambda0 pulse of duration tau_lambda.
struct PulseEnvelope {
    double lambda0 = 0.0;     // rad/s, peak coupling
    double tau_lambda = 0.0;  // s, envelope FWHM (or duration when constant)
    Carrier carrier = Carrier::ModulatedAtOmega;
    double t_center = 0.0;    // s

    double sigma() const { return tau_lambda / (2.0 * std::sqrt(2.0 * std::log(2.0))); }
    double half_window() const {
        return carrier == Carrier::ModulatedAtOmega ? 4.0 * sigma() : 0.5 * tau_lambda;
    }
    double envelope(double t) const {
        if (carrier == Carrier::Constant)
            return std::abs(t - t_center) <= 0.5 * tau_lambda ? 1.0 : 0.0;
        const double u = t - t_center;
        return std::exp(-4.0 * std::log(2.0) * u * u / (tau_lambda * tau_lambda));
    }
    double value(double t, double omega) const {
        const double g = lambda0 * envelope(t);
        if (carrier == Carrier::Constant) return g;
        return g * std::cos((t - t_center) * omega);
    }
    // Number of carrier periods under the envelope; the modulated-frame
    // treatment needs this to be large (warn below 5).
    double modulation_periods(double omega) const {
        return tau_lambda * omega / (2.0 * pi);
    }
};

// Coherent kick amplitude: alpha = (i/2) Int e^{i Omega (t - t_center)}
// lambda(t) dt, by Simpson quadrature over the envelope window.
inline cxd pulse_alpha(const PulseEnvelope& pulse, double omega) {
    if (pulse.lambda0 == 0.0) return 0.0;
    const double w = pulse.half_window();
    const double t0 = pulse.t_center - w, t1 = pulse.t_center + w;
    int n = std::max(4000, static_cast<int>(std::ceil(50.0 * omega * (t1 - t0) / pi)));
    if (n % 2) ++n;
    const double h = (t1 - t0) / n;
    cxd acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = t0 + k * h;
        const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += weight * pulse.value(t, omega) * std::exp(cxd(0.0, omega * (t - pulse.t_center)));
    }
    return cxd(0.0, 0.5) * acc * (h / 3.0);
}

// alpha = i sqrt(pi)/(8 sqrt(ln 2)) lambda0 tau_lambda, the resonant-carrier
// limit of the quadrature above for Gaussian envelopes.
inline cxd pulse_alpha_closed_form(const PulseEnvelope& pulse) {
    return cxd(0.0, std::sqrt(pi) / (8.0 * std::sqrt(std::log(2.0))) *
                        pulse.lambda0 * pulse.tau_lambda);
}

// Conditional grating operators (the deterministic rotation is bookkept by
// the caller as free evolution):
//   Y+- = (D†(alpha) +- e^{i phi} D(alpha)) / 2.
inline std::pair<Mat, Mat> grating_operators(const FockSpace& space, cxd alpha, double phi) {
    const Mat d = hilbert::displacement(space, alpha);
    const cxd ph = std::exp(cxd(0.0, phi));
    Mat up = 0.5 * (d.adjoint() + ph * d);
    Mat um = 0.5 * (d.adjoint() - ph * d);
    return {std::move(up), std::move(um)};
}

struct GratingSpec {
    cxd alpha;
    double phi = 0.0;
    Outcome outcome = Outcome::Plus;
    bool allow_general_alpha = false;

    void validate() const {
        if (!allow_general_alpha &&
            std::abs(alpha.real()) > 1e-9 * (1.0 + std::abs(alpha)))
            throw SimError("GratingSpec: Re(alpha) must be 0 unless general alpha is enabled");
    }
};

template <typename State>
std::pair<State, double> grating(const State& state, const FockSpace& space,
                                 const GratingSpec& spec) {
    spec.validate();
    auto [up, um] = grating_operators(space, spec.alpha, spec.phi);
    return hilbert::condition(state, spec.outcome == Outcome::Plus ? up : um);
}

template <typename State>
State free_evolution(const State& state, double theta) {
    return hilbert::apply_rotation(state, theta);
}

template <typename State>
State free_evolution_time(const State& state, double tau, double omega) {
    return hilbert::apply_rotation(state, omega * tau);
}

// Joint analytic evolution operator:
//   U = R(mech_angle) e^{-i qubit_phase sigma_z / 2}
//       (D(alpha)|-><-| + D†(alpha)|+><+|),
// basis order (|+> (x) Fock, |-> (x) Fock).
inline Mat grating_unitary(const FockSpace& space, cxd alpha, double mech_angle,
                           double qubit_phase = 0.0) {
    const int N = space.dim;
    const Mat d = hilbert::displacement(space, alpha);
    const Mat r = hilbert::rotation(space, mech_angle);
    Mat u = Mat::Zero(2 * N, 2 * N);
    u.topLeftCorner(N, N) = std::exp(cxd(0.0, -0.5 * qubit_phase)) * (r * d.adjoint());
    u.bottomRightCorner(N, N) = std::exp(cxd(0.0, 0.5 * qubit_phase)) * (r * d);
    return u;
}

// Time integration of the qubit-rotating-frame Hamiltonian
//   H(t) = Omega a†a + (lambda(t)/2) x sigma_z + (g(t)/2) sigma_x.
// Internally the stiff Omega a†a diagonal is removed (mechanical interaction
// picture, reference t_start) and restored on output, so the returned state
// is the plain evolution of H(t) from t_start to t_end.
inline JointState integrate_joint(const FockSpace& space, const JointState& joint,
                                  double omega,
                                  const std::function<double(double)>& lambda_fn,
                                  const std::function<double(double)>& g_fn,
                                  double t_start, double t_end, double dt) {
    const int N = space.dim;
    if (joint.amplitudes.size() != 2 * N)
        throw SimError("integrate_joint: state does not match space");
    if (dt <= 0.0 || t_end <= t_start) throw SimError("integrate_joint: bad time span");

    std::vector<double> sqrtn(N, 0.0);
    for (int k = 1; k < N; ++k) sqrtn[k] = std::sqrt(static_cast<double>(k));

    const double norm_in = joint.amplitudes.norm();

    // dpsi = -i H_I(t) psi with H_I = (lambda/2)(a e^{-i w u} + a† e^{i w u}) sz
    //        + (g/2) sx, u = t - t_start.
    auto deriv = [&](double t, const Vec& psi, Vec& out) {
        const double lam = lambda_fn(t);
        const double g = g_fn(t);
        if (dt * std::max({omega, std::abs(lam), std::abs(g)}) >= 0.05)
            throw StepTooLarge("integrate_joint: dt too coarse for the sampled rates");
        const cxd phase = std::exp(cxd(0.0, omega * (t - t_start)));
        const cxd a_coef = 0.5 * lam * std::conj(phase); // multiplies a
        const cxd adag_coef = 0.5 * lam * phase;
        const double gh = 0.5 * g;
        for (int n = 0; n < N; ++n) {
            cxd hp = 0.0, hm = 0.0; // (H psi) on + and - blocks
            if (n + 1 < N) {
                const cxd up = a_coef * sqrtn[n + 1] * psi[n + 1];
                hp += up;
                hm -= a_coef * sqrtn[n + 1] * psi[N + n + 1];
            }
            if (n > 0) {
                hp += adag_coef * sqrtn[n] * psi[n - 1];
                hm -= adag_coef * sqrtn[n] * psi[N + n - 1];
            }
            hp += gh * psi[N + n];
            hm += gh * psi[n];
            out[n] = cxd(0.0, -1.0) * hp;
            out[N + n] = cxd(0.0, -1.0) * hm;
        }
    };

    const auto n_steps = static_cast<long>(std::ceil((t_end - t_start) / dt));
    const double h = (t_end - t_start) / n_steps;
    Vec psi = joint.amplitudes;
    Vec k1(2 * N), k2(2 * N), k3(2 * N), k4(2 * N), tmp(2 * N);
    for (long s = 0; s < n_steps; ++s) {
        const double t = t_start + s * h;
        deriv(t, psi, k1);
        tmp = psi + 0.5 * h * k1;
        deriv(t + 0.5 * h, tmp, k2);
        tmp = psi + 0.5 * h * k2;
        deriv(t + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        deriv(t + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // Undo the interaction picture: psi_lab = e^{-i Omega (t_end-t_start) n} psi_I.
    const double angle = omega * (t_end - t_start);
    for (int n = 0; n < N; ++n) {
        const cxd ph = std::exp(cxd(0.0, -angle * n));
        psi[n] *= ph;
        psi[N + n] *= ph;
    }

    if (std::abs(psi.norm() - norm_in) > 1e-8 * std::max(1.0, norm_in))
        throw NumericsError("integrate_joint: norm drift exceeds 1e-8");
    return JointState{std::move(psi)};
}

// pi burst for the cooling filter: Gaussian g(t) with FWHM tau_pi/2,
// truncated at +-3 sigma, area normalized to pi over the window.
struct CoolingPulse {
    double tau_pi = 0.0;   // s, burst duration scale
    double lambda0 = 0.0;  // rad/s, coupling parked during the burst

    double g_sigma() const {
        return 0.5 * tau_pi / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    }
    double half_window() const { return 3.0 * g_sigma(); }
    double g_peak() const {
        const double s = g_sigma();
        return pi / (s * std::sqrt(2.0 * pi) * std::erf(3.0 / std::sqrt(2.0)));
    }
    double g(double t, double t_center = 0.0) const {
        const double u = t - t_center;
        if (std::abs(u) > half_window()) return 0.0;
        return g_peak() * std::exp(-0.5 * u * u / (g_sigma() * g_sigma()));
    }
};

enum class CoolingMode { Frozen, Full };

struct FilterCurve {
    RealVec x;       // positions probed (x-operator eigenvalues)
    RealVec flip_prob; // |F(x)|^2

    double fwhm() const {
        // Width of the central window at half the peak response.
        int peak = 0;
        for (int i = 1; i < flip_prob.size(); ++i)
            if (flip_prob[i] > flip_prob[peak]) peak = i;
        const double half = 0.5 * flip_prob[peak];
        int lo = peak, hi = peak;
        while (lo > 0 && flip_prob[lo - 1] >= half) --lo;
        while (hi + 1 < flip_prob.size() && flip_prob[hi + 1] >= half) ++hi;
        return x[hi] - x[lo];
    }
};

namespace detail {

// Flip amplitude <-|U|+> of the two-level problem with static detuning
// lambda0*x and the Gaussian pi drive; fourth-order fixed-step integration.
inline cxd two_level_flip_amplitude(const CoolingPulse& pulse, double x) {
    const double w = pulse.half_window();
    const double rate = std::max(std::abs(pulse.lambda0 * x), pulse.g_peak());
    const int n_steps = std::max(2000, static_cast<int>(std::ceil(rate * 2.0 * w / 0.005)));
    const double h = 2.0 * w / n_steps;
    const double det = 0.5 * pulse.lambda0 * x;
    cxd up = 1.0, dn = 0.0; // starts in |+>
    auto rhs = [&](double t, cxd u, cxd d, cxd& du, cxd& dd) {
        const double gh = 0.5 * pulse.g(t);
        du = cxd(0.0, -1.0) * (det * u + gh * d);
        dd = cxd(0.0, -1.0) * (gh * u - det * d);
    };
    for (int s = 0; s < n_steps; ++s) {
        const double t = -w + s * h;
        cxd k1u, k1d, k2u, k2d, k3u, k3d, k4u, k4d;
        rhs(t, up, dn, k1u, k1d);
        rhs(t + 0.5 * h, up + 0.5 * h * k1u, dn + 0.5 * h * k1d, k2u, k2d);
        rhs(t + 0.5 * h, up + 0.5 * h * k2u, dn + 0.5 * h * k2d, k3u, k3d);
        rhs(t + h, up + h * k3u, dn + h * k3d, k4u, k4d);
        up += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        dn += (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return dn;
}

} // namespace detail

template <typename State>
struct CoolingFilterResult {
    FilterCurve curve;
    State state;
    double probability = 0.0;
};

// Frozen mode treats position as static across the burst and multiplies the
// state by F(x); full mode integrates the joint evolution (including the
// mechanical rotation during the burst) and conditions on the flipped qubit.
inline CoolingFilterResult<MechState> cooling_filter(const MechState& state,
                                                     const FockSpace& space,
                                                     const CoolingPulse& pulse,
                                                     CoolingMode mode, double omega,
                                                     double probe_span = 0.0);

inline CoolingFilterResult<DensityMatrix> cooling_filter(const DensityMatrix& state,
                                                         const FockSpace& space,
                                                         const CoolingPulse& pulse,
                                                         CoolingMode mode, double omega,
                                                         double probe_span = 0.0);

namespace detail {

inline FilterCurve frozen_curve(const hilbert::XBasis& basis, const CoolingPulse& pulse,
                                Vec& amplitudes) {
    const int N = basis.nodes.size();
    FilterCurve curve;
    curve.x = basis.nodes;
    curve.flip_prob.resize(N);
    amplitudes.resize(N);
    for (int k = 0; k < N; ++k) {
        const cxd f = two_level_flip_amplitude(pulse, basis.nodes[k]);
        amplitudes[k] = f;
        curve.flip_prob[k] = std::norm(f);
    }
    return curve;
}

inline Mat frozen_filter_operator(const FockSpace& space, const CoolingPulse& pulse,
                                  FilterCurve& curve) {
    const hilbert::XBasis basis = hilbert::x_eigenbasis(space);
    Vec amps;
    curve = frozen_curve(basis, pulse, amps);
    const Mat q = basis.vectors.cast<cxd>();
    return q * amps.asDiagonal() * q.adjoint();
}

inline FilterCurve full_probe_curve(const FockSpace& space, const CoolingPulse& pulse,
                                    double omega, double probe_span) {
    const hilbert::XBasis basis = hilbert::x_eigenbasis(space);
    const double w = pulse.half_window();
    const double dt = 0.01 / std::max({omega, pulse.g_peak(), std::abs(pulse.lambda0) * 8.0});
    std::vector<double> xs, ps;
    for (int k = 0; k < basis.nodes.size(); ++k) {
        const double x = basis.nodes[k];
        if (probe_span > 0.0 && std::abs(x) > probe_span) continue;
        JointState joint{Vec::Zero(2 * space.dim)};
        joint.amplitudes.head(space.dim) = basis.vectors.col(k).cast<cxd>();
        const JointState out = integrate_joint(
            space, joint, omega,
            [&](double) { return pulse.lambda0; },
            [&](double t) { return pulse.g(t); }, -w, w, dt);
        xs.push_back(x);
        ps.push_back(out.minus_block().squaredNorm());
    }
    FilterCurve curve;
    curve.x = Eigen::Map<RealVec>(xs.data(), xs.size());
    curve.flip_prob = Eigen::Map<RealVec>(ps.data(), ps.size());
    return curve;
}

} // namespace detail

inline CoolingFilterResult<MechState> cooling_filter(const MechState& state,
                                                     const FockSpace& space,
                                                     const CoolingPulse& pulse,
                                                     CoolingMode mode, double omega,
                                                     double probe_span) {
    CoolingFilterResult<MechState> result;
    if (mode == CoolingMode::Frozen) {
        const Mat f = detail::frozen_filter_operator(space, pulse, result.curve);
        auto [cond, prob] = hilbert::condition(state, f);
        result.state = std::move(cond);
        result.probability = prob;
        return result;
    }
    const double w = pulse.half_window();
    const double dt = 0.01 / std::max({omega, pulse.g_peak(), std::abs(pulse.lambda0) * 8.0});
    JointState joint{Vec::Zero(2 * space.dim)};
    joint.amplitudes.head(space.dim) = state.amplitudes;
    const JointState out = integrate_joint(
        space, joint, omega, [&](double) { return pulse.lambda0; },
        [&](double t) { return pulse.g(t); }, -w, w, dt);
    Vec cond = out.minus_block();
    const double wgt = cond.squaredNorm();
    if (wgt / state.norm_sq < 1e-12)
        throw ZeroProbability("cooling_filter: flip probability < 1e-12");
    result.state = MechState{std::move(cond), wgt};
    result.probability = wgt / state.norm_sq;
    result.curve = detail::full_probe_curve(space, pulse, omega, probe_span);
    return result;
}

inline CoolingFilterResult<DensityMatrix> cooling_filter(const DensityMatrix& state,
                                                         const FockSpace& space,
                                                         const CoolingPulse& pulse,
                                                         CoolingMode mode, double omega,
                                                         double probe_span) {
    CoolingFilterResult<DensityMatrix> result;
    if (mode == CoolingMode::Frozen) {
        const Mat f = detail::frozen_filter_operator(space, pulse, result.curve);
        auto [cond, prob] = hilbert::condition(state, f);
        result.state = std::move(cond);
        result.probability = prob;
        return result;
    }
    // Mixed-state full mode: evolve each spectral component and re-mix.
    Eigen::SelfAdjointEigenSolver<Mat> es(state.matrix);
    const double w = pulse.half_window();
    const double dt = 0.01 / std::max({omega, pulse.g_peak(), std::abs(pulse.lambda0) * 8.0});
    Mat rho_out = Mat::Zero(space.dim, space.dim);
    const double cutoff = 1e-12 * state.weight;
    for (int k = 0; k < space.dim; ++k) {
        const double wk = es.eigenvalues()[k];
        if (wk <= cutoff) continue;
        JointState joint{Vec::Zero(2 * space.dim)};
        joint.amplitudes.head(space.dim) = es.eigenvectors().col(k);
        const JointState out = integrate_joint(
            space, joint, omega, [&](double) { return pulse.lambda0; },
            [&](double t) { return pulse.g(t); }, -w, w, dt);
        rho_out.noalias() += wk * (out.minus_block() * out.minus_block().adjoint());
    }
    const double wgt = rho_out.trace().real();
    if (wgt / state.weight < 1e-12)
        throw ZeroProbability("cooling_filter: flip probability < 1e-12");
    result.state = DensityMatrix{std::move(rho_out), wgt};
    result.probability = wgt / state.weight;
    result.curve = detail::full_probe_curve(space, pulse, omega, probe_span);
    return result;
}

template <typename State>
struct CoolResult {
    State state;
    double cumulative_probability = 1.0;
    std::vector<double> step_probabilities;
    hilbert::QuadratureMoments before;
    hilbert::QuadratureMoments after;
};

// Conditioned bursts separated by quarter-period free evolution. Frozen mode
// uses exact quarter periods; full mode spaces burst centers a quarter-integer
// number of periods apart (the burst itself spans several periods).
template <typename State>
CoolResult<State> cool(const State& input, const FockSpace& space, const CoolingPulse& pulse,
                       double omega, int repetitions = 2,
                       CoolingMode mode = CoolingMode::Frozen) {
    if (repetitions < 1) throw SimError("cool: repetitions must be >= 1");
    CoolResult<State> result;
    result.before = hilbert::quadrature_moments(input);
    State state = input;
    for (int r = 0; r < repetitions; ++r) {
        if (r > 0) {
            double gap_angle = 0.5 * pi;
            if (mode == CoolingMode::Full) {
                const double window = 2.0 * pulse.half_window();
                const double period = 2.0 * pi / omega;
                const double n_periods = std::ceil(window / period) + 0.25;
                gap_angle = omega * (n_periods * period - window);
            }
            state = free_evolution(state, gap_angle);
        }
        auto filtered = cooling_filter(state, space, pulse, mode, omega);
        state = std::move(filtered.state);
        result.step_probabilities.push_back(filtered.probability);
        result.cumulative_probability *= filtered.probability;
    }
    result.after = hilbert::quadrature_moments(state);
    result.state = std::move(state);
    return result;
}

// --- Interferometer -------------------------------------------------------

struct InterferometerSpec {
    cxd alpha1;
    cxd alpha2;
    double phi1 = 0.0;
    double phi2 = 0.0;
    Outcome outcome1 = Outcome::Plus;
    Outcome outcome2 = Outcome::Plus;
    double tau1_angle = 0.5 * pi; // quarter period
    double tau2_angle = 0.0;
};

template <typename State>
struct ProtocolStep {
    std::string label;
    double probability = 1.0;
    State state;
};

template <typename State>
struct ProtocolRecord {
    std::vector<ProtocolStep<State>> steps;
    double cumulative_probability = 1.0;

    const State& final_state() const { return steps.back().state; }
};

template <typename State>
ProtocolRecord<State> interferometer(const State& initial, const FockSpace& space,
                                     const InterferometerSpec& spec) {
    ProtocolRecord<State> record;
    record.steps.push_back({"initial", 1.0, initial});

    auto [s1, p1] = grating(initial, space, GratingSpec{spec.alpha1, spec.phi1, spec.outcome1});
    record.steps.push_back({"grating1", p1, s1});
    record.cumulative_probability *= p1;

    State s2 = free_evolution(s1, spec.tau1_angle);
    record.steps.push_back({"free_evolution1", 1.0, s2});

    auto [s3, p2] = grating(s2, space, GratingSpec{spec.alpha2, spec.phi2, spec.outcome2});
    record.steps.push_back({"grating2", p2, s3});
    record.cumulative_probability *= p2;

    State s4 = free_evolution(s3, spec.tau2_angle);
    record.steps.push_back({"free_evolution2", 1.0, std::move(s4)});
    return record;
}

// --- Readout ---------------------------------------------------------------

// p+ = Tr[Y+†Y+ rho]/weight = 1/2 + Re[e^{i phi} chi(2 alpha3)] / 2.
template <typename State>
double pplus(const State& state, cxd alpha3, double phi = 0.0) {
    const cxd chi = phasespace::characteristic(state, 2.0 * alpha3);
    const double w = phasespace::characteristic(state, cxd(0.0, 0.0)).real();
    return 0.5 + 0.5 * (std::exp(cxd(0.0, phi)) * chi).real() / w;
}

// Synthetic-experiment wrapper: binomial sampling of the return probability.
template <typename State>
double sample_pplus(const State& state, cxd alpha3, double phi, int n_shots,
                    std::uint64_t seed) {
    const double p = pplus(state, alpha3, phi);
    int hits = 0;
    for (int k = 0; k < n_shots; ++k)
        if (rng::uniform01(seed, k) < p) ++hits;
    return static_cast<double>(hits) / n_shots;
}

struct PPlusMap {
    RealVec theta;   // Omega tau_2
    RealVec alpha3;  // |alpha3| values probed
    RealMat values;  // rows: theta, cols: alpha3
    std::vector<double> step_probabilities; // grating post-selection record
};

struct PPlusMapSpec {
    cxd alpha1;
    cxd alpha2;
    Outcome outcome1 = Outcome::Plus;
    Outcome outcome2 = Outcome::Plus;
    double phi_readout = 0.0;
    int n_theta = 32;      // over [0, pi]
    int n_alpha3 = 32;     // ratios over (0, 2] of |alpha2|
    double gamma_t = 0.0;  // qubit-dephasing exposure during readout
    double n_prime = 0.0;  // thermal phonons added before readout
};

// Rotation folds into the characteristic-function argument:
// chi_{R rho R†}(eta) = chi_rho(eta e^{i theta}).
template <typename State>
PPlusMap pplus_map(const State& initial, const FockSpace& space, const PPlusMapSpec& spec) {
    InterferometerSpec proto;
    proto.alpha1 = spec.alpha1;
    proto.alpha2 = spec.alpha2;
    proto.outcome1 = spec.outcome1;
    proto.outcome2 = spec.outcome2;
    const auto record = interferometer(initial, space, proto);
    const State& rho2 = record.final_state();

    PPlusMap map;
    for (const auto& step : record.steps)
        if (step.label.rfind("grating", 0) == 0)
            map.step_probabilities.push_back(step.probability);
    map.theta = quadrature::uniform_grid(0.0, pi, spec.n_theta);
    map.alpha3.resize(spec.n_alpha3);
    const double a2 = std::abs(spec.alpha2);
    for (int k = 0; k < spec.n_alpha3; ++k)
        map.alpha3[k] = a2 * 2.0 * (k + 1) / spec.n_alpha3;
    map.values.resize(spec.n_theta, spec.n_alpha3);

    const double w = phasespace::characteristic(rho2, cxd(0.0, 0.0)).real();
    const cxd phase = std::exp(cxd(0.0, spec.phi_readout));
    for (int j = 0; j < spec.n_theta; ++j) {
        const cxd rot = std::exp(cxd(0.0, map.theta[j]));
        for (int k = 0; k < spec.n_alpha3; ++k) {
            const double a3 = map.alpha3[k];
            const cxd eta = 2.0 * cxd(0.0, a3) * rot;
            const double damping =
                std::exp(-spec.gamma_t) * std::exp(-4.0 * spec.n_prime * a3 * a3);
            const cxd chi = phasespace::characteristic(rho2, eta);
            map.values(j, k) = 0.5 + 0.5 * damping * (phase * chi).real() / w;
        }
    }
    return map;
}

} // namespace displacemon::protocol
