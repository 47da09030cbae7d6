#include <catch2/catch_amalgamated.hpp>

#include "displacemon/convergence.hpp"
#include "displacemon/hilbert.hpp"
#include "displacemon/phasespace.hpp"
#include "displacemon/protocol.hpp"

using namespace displacemon;
using hilbert::FockSpace;
using Catch::Approx;
namespace proto = displacemon::protocol;

TEST_CASE("dimension-doubling convergence checks", "[convergence]") {
    SECTION("vacuum observables do not move at all") {
        auto scenario = [](int dim) {
            FockSpace space(dim);
            const auto m = hilbert::quadrature_moments(hilbert::vacuum_state(space));
            return convergence::Observables{{"var_x", m.var_x}, {"var_p", m.var_p}};
        };
        const auto report = convergence::converge_check(scenario, {64, 128}, 1e-12);
        CHECK(report.passed);
        CHECK(report.max_deviation == Approx(0.0).margin(1e-15));
    }

    SECTION("compass marginal is converged by dim 128") {
        auto scenario = [](int dim) {
            FockSpace space(dim);
            auto psi = hilbert::vacuum_state(space);
            auto g1 = proto::grating(psi, space, {cxd(0.0, 1.9), 0.0, proto::Outcome::Plus});
            auto rot = proto::free_evolution(g1.first, 0.5 * pi);
            auto g2 =
                proto::grating(rot, space, {cxd(0.0, 1.9), 0.0, proto::Outcome::Plus});
            const RealVec grid = quadrature::uniform_grid(-20.0, 20.0, 201);
            const auto curve = phasespace::marginal(g2.first, 0.0, grid);
            convergence::Observables obs;
            obs["P(0)"] = curve.values[100];
            obs["P(2)"] = curve.values[120];
            obs["P(4)"] = curve.values[140];
            obs["weight"] = g2.first.weight();
            return obs;
        };
        const auto report = convergence::converge_check(scenario, {128, 256}, 1e-6);
        CHECK(report.passed);
    }

    SECTION("thermal occupation converges under dimension doubling") {
        // The geometric tail fixes the truncated mean exactly:
        // n(N) = n_bar - r^N (N + n_bar) with r = n_bar/(1+n_bar), so the
        // 128 -> 256 drift is 9.74e-9. (At dim 64 the truncation guard
        // n_bar < dim/20 already rejects n_bar = 5, and the tail would be
        // 6e-4 anyway.)
        auto scenario = [](int dim) {
            FockSpace space(dim);
            return convergence::Observables{
                {"n_bar", hilbert::mean_phonons(hilbert::thermal_state(space, 5.0))}};
        };
        const auto report = convergence::converge_check(scenario, {128, 256}, 1e-6);
        CHECK(report.passed);
        const double r = 5.0 / 6.0;
        const double expected_drift = std::pow(r, 128) * (128.0 + 5.0);
        CHECK(report.max_deviation == Approx(expected_drift).epsilon(1e-3));
        CHECK_THROWS_AS(hilbert::thermal_state(FockSpace(64), 5.0), TruncationRisk);
    }

    SECTION("dimension-dependent observables are caught") {
        auto scenario = [](int dim) {
            return convergence::Observables{{"dim", static_cast<double>(dim)}};
        };
        CHECK_THROWS_AS(convergence::converge_check(scenario, {64, 128}, 1e-6), NotConverged);
        const auto report = convergence::converge_check(scenario, {64, 128}, 1e-6, false);
        CHECK_FALSE(report.passed);
        CHECK(report.worst_observable == "dim");
    }
}
