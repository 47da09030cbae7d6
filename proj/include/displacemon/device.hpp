#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "displacemon/core.hpp"

namespace displacemon::device {

enum class BeamRegime { Tension, Rigidity };

// Suspended-nanobeam geometry. Sheet density defaults to graphene; the
// extensional rigidity scale for the rigidity regime is D * 1.09e3 Pa m.
struct MechGeometry {
    double length = 0.0;          // m
    double diameter = 0.0;        // m
    double tension = 0.0;         // N
    BeamRegime regime = BeamRegime::Tension;
    double sheet_density = 8e-7;  // kg/m^2

    void validate() const {
        if (length <= 0.0 || diameter <= 0.0)
            throw InvalidGeometry("MechGeometry: length and diameter must be positive");
        if (sheet_density <= 0.0)
            throw InvalidGeometry("MechGeometry: sheet density must be positive");
        if (regime == BeamRegime::Tension && tension <= 0.0)
            throw InvalidGeometry("MechGeometry: tension regime requires tension > 0");
    }

    double mass_per_length() const { return pi * sheet_density * diameter; }
};

struct ModeParams {
    double omega = 0.0;   // rad/s
    double x_zp = 0.0;    // m
    double beta0 = 0.0;   // geometric flux-coupling coefficient
    double mass = 0.0;    // kg
    double length = 0.0;  // m (carried along for the coupling formula)
};

// SQUID junction pair. Energies in joules; asymmetry delta in [0,2).
struct SquidParams {
    double ej0 = 0.0;        // maximum Josephson energy, J
    double ec = 0.0;         // charging energy, J
    double asymmetry = 0.0;  // delta = 2(Ic1-Ic2)/(Ic1+Ic2)
    double loop_area = 0.0;  // m^2 (flux <-> perpendicular-field conversion)
    double b_parallel = 0.0; // T, in-plane field mediating the coupling

    bool transmon_limit_ok() const { return ej0 / ec >= 20.0; }

    void validate() const {
        if (ej0 <= 0.0 || ec <= 0.0)
            throw SimError("SquidParams: EJ0 and EC must be positive");
        if (asymmetry < 0.0 || asymmetry >= 2.0)
            throw SimError("SquidParams: asymmetry must lie in [0, 2)");
    }
};

struct EnvironmentParams {
    double t_bath = 0.0; // K
    double q_m = 0.0;    // mechanical quality factor
    double t2 = 0.0;     // qubit coherence time, s

    void validate() const {
        if (t_bath <= 0.0 || q_m <= 0.0 || t2 <= 0.0)
            throw SimError("EnvironmentParams: all fields must be positive");
    }
};

struct DeviceParams {
    MechGeometry geometry;
    SquidParams squid;
    EnvironmentParams environment;
    double flux_bias = 0.0; // operating point, in units of flux quanta
};

// Fundamental flexural mode. Tension: Omega = (pi/l) sqrt(T/mu); rigidity:
// Omega = (22.4/l^2) sqrt(E D^2 / 8 mu) with E = D * 1.09e3 Pa m. Either way
// X_ZP = sqrt(hbar / 2 m Omega) with m = mu l.
inline ModeParams mechanical_mode(const MechGeometry& geom) {
    geom.validate();
    const double mu = geom.mass_per_length();
    ModeParams mode;
    mode.mass = mu * geom.length;
    mode.length = geom.length;
    if (geom.regime == BeamRegime::Tension) {
        mode.omega = (pi / geom.length) * std::sqrt(geom.tension / mu);
        mode.beta0 = 2.0 * std::sqrt(2.0) / pi;
    } else {
        const double rigidity = geom.diameter * 1.09e3;
        mode.omega = (22.4 / (geom.length * geom.length)) *
                     std::sqrt(rigidity * geom.diameter * geom.diameter / (8.0 * mu));
        mode.beta0 = 0.831;
    }
    mode.x_zp = std::sqrt(constants::hbar / (2.0 * mode.mass * mode.omega));
    return mode;
}

// EJ(flux) = EJ0 sqrt(cos^2 + (delta^2/4) sin^2) of pi*flux_ratio/2;
// reduces to EJ0 |cos| for symmetric junctions.
inline double josephson_energy(const SquidParams& squid, double flux_ratio) {
    const double u = 0.5 * pi * flux_ratio;
    const double c = std::cos(u);
    const double s = std::sin(u);
    const double d2 = 0.25 * squid.asymmetry * squid.asymmetry;
    return squid.ej0 * std::sqrt(c * c + d2 * s * s);
}

inline double qubit_frequency(double ej, double ec) {
    if (ej <= 0.0 || ec <= 0.0)
        throw SimError("qubit_frequency: energies must be positive");
    return std::sqrt(8.0 * ej * ec) / constants::hbar;
}

// d(omega_q)/d(flux_ratio), in rad/s per flux quantum. Symmetric junctions
// give the -omega_q0 (pi/2) sin(u)/sqrt|cos(u)| form, diverging at |cos|->0.
inline double qubit_frequency_flux_derivative(const SquidParams& squid, double flux_ratio) {
    const double u = 0.5 * pi * flux_ratio;
    const double c = std::cos(u);
    const double s = std::sin(u);
    const double d2 = 0.25 * squid.asymmetry * squid.asymmetry;
    const double ratio2 = c * c + d2 * s * s; // (EJ/EJ0)^2
    if (squid.asymmetry == 0.0 && std::abs(c) < 1e-6)
        throw SingularBias("coupling diverges at the symmetric-SQUID flux node");
    const double omega_q0 = qubit_frequency(squid.ej0, squid.ec);
    // omega_q = omega_q0 * ratio2^{1/4}
    const double dratio2_du = 2.0 * c * (-s) + d2 * 2.0 * s * c;
    return omega_q0 * 0.25 * std::pow(ratio2, -0.75) * dratio2_du * (0.5 * pi);
}

// lambda = X_ZP * d(omega_q)/dX with dPhi = 2 beta0 l B_par X. Signed; the
// magnitude is what device reports quote.
inline double coupling_strength(const ModeParams& mode, const SquidParams& squid,
                                double flux_ratio) {
    const double dflux_ratio_dx = 2.0 * mode.beta0 * mode.length * squid.b_parallel /
                                  constants::flux_quantum;
    return mode.x_zp * qubit_frequency_flux_derivative(squid, flux_ratio) * dflux_ratio_dx;
}

inline double bose_occupation(double t_bath, double omega) {
    const double ratio = constants::hbar * omega / (constants::k_boltzmann * t_bath);
    return 1.0 / std::expm1(ratio);
}

struct FiguresOfMerit {
    double lambda_over_omega = 0.0;    // coupling parameter, rad/s over rad/s
    double lambda_over_kappa_th = 0.0; // lambda (rad/s) over k_B T / (hbar Q)
    double t2_lambda_cyc = 0.0;        // T2 * lambda/2pi
    double n_bar = 0.0;                // Bose occupation at (T_bath, Omega)
    double kappa_th = 0.0;             // 1/s
    bool strong_coupling = false;      // lambda beats kappa_th and 1/T2
    bool ultrastrong = false;          // lambda > Omega
};

// Conventions: kappa_th is compared against lambda in rad/s, 1/T2 against
// lambda/2pi in Hz (the pair that reproduces the published thresholds).
inline FiguresOfMerit figures_of_merit(double omega, double lambda,
                                       const EnvironmentParams& env) {
    env.validate();
    FiguresOfMerit fom;
    const double lam = std::abs(lambda);
    fom.kappa_th = constants::k_boltzmann * env.t_bath / (constants::hbar * env.q_m);
    fom.lambda_over_omega = lam / omega;
    fom.lambda_over_kappa_th = lam / fom.kappa_th;
    fom.t2_lambda_cyc = env.t2 * lam / (2.0 * pi);
    fom.n_bar = bose_occupation(env.t_bath, omega);
    fom.strong_coupling = lam > fom.kappa_th && lam / (2.0 * pi) > 1.0 / env.t2;
    fom.ultrastrong = lam > omega;
    return fom;
}

inline FiguresOfMerit figures_of_merit(const ModeParams& mode, double lambda,
                                       const EnvironmentParams& env) {
    return figures_of_merit(mode.omega, lambda, env);
}

struct FluxSweepPoint {
    double flux_ratio = 0.0;
    double ej = 0.0;           // J
    double omega_q = 0.0;      // rad/s
    double lambda = 0.0;       // rad/s, signed
    double x_equiv = 0.0;      // m, displacement equivalent of the flux offset
};

// Curve for the qubit-frequency / coupling flux dependence; the displacement
// axis converts flux to position via dX/dPhi = 1/(2 beta0 l B_par).
inline std::vector<FluxSweepPoint> flux_sweep(const ModeParams& mode,
                                              const SquidParams& squid,
                                              double lo, double hi, int n_points) {
    if (n_points < 2) throw SimError("flux_sweep: need at least two points");
    if (lo >= hi || lo <= -1.0 || hi >= 1.0)
        throw SimError("flux_sweep: range must lie within (-1, 1) flux quanta");
    const double dx_dflux = constants::flux_quantum /
                            (2.0 * mode.beta0 * mode.length * squid.b_parallel);
    std::vector<FluxSweepPoint> curve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double f = lo + (hi - lo) * i / (n_points - 1);
        FluxSweepPoint& pt = curve[i];
        pt.flux_ratio = f;
        pt.ej = josephson_energy(squid, f);
        pt.omega_q = qubit_frequency(pt.ej, squid.ec);
        try {
            pt.lambda = coupling_strength(mode, squid, f);
        } catch (const SingularBias&) {
            pt.lambda = std::numeric_limits<double>::quiet_NaN();
        }
        pt.x_equiv = f * dx_dflux;
    }
    return curve;
}

} // namespace displacemon::device
