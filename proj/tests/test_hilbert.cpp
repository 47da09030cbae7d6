#include <catch2/catch_amalgamated.hpp>

#include "displacemon/hilbert.hpp"
#include "displacemon/protocol.hpp"
#include "test_support.hpp"

using namespace displacemon;
using hilbert::FockSpace;
using Catch::Approx;

TEST_CASE("ladder operators", "[hilbert]") {
    FockSpace space(32);
    const auto ops = hilbert::ladder_ops(space);

    SECTION("a lowers |1> to |0> with unit amplitude") {
        Vec one = Vec::Zero(32);
        one[1] = 1.0;
        Vec lowered = ops.a * one;
        CHECK(std::abs(lowered[0] - cxd(1.0)) < 1e-15);
        CHECK(lowered.tail(31).norm() < 1e-15);
    }

    SECTION("vacuum x variance is 1") {
        const auto vac = hilbert::vacuum_state(space);
        CHECK(hilbert::expectation(vac, ops.x * ops.x) == Approx(1.0).margin(1e-14));
    }

    SECTION("[a, a†] is identity except the top diagonal entry") {
        Mat comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
        for (int k = 0; k < 31; ++k) CHECK(std::abs(comm(k, k) - cxd(1.0)) < 1e-13);
        CHECK(std::abs(comm(31, 31) - cxd(1.0 - 32.0)) < 1e-12);
        comm.diagonal().setZero();
        CHECK(comm.cwiseAbs().maxCoeff() < 1e-13);
    }

    SECTION("x and p are Hermitian") {
        CHECK((ops.x - ops.x.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((ops.p - ops.p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("displacement operator", "[hilbert]") {
    FockSpace space(256);

    SECTION("D(0) is the identity") {
        const Mat d = hilbert::displacement(space, 0.0);
        CHECK((d - Mat::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-14);
    }

    SECTION("vacuum overlap |<0|D(1)|0>|^2 = 1/e") {
        const Mat d = hilbert::displacement(space, 1.0);
        CHECK(std::norm(d(0, 0)) == Approx(std::exp(-1.0)).epsilon(1e-12));
    }

    SECTION("D(1.9i) D(-1.9i) = identity within 1e-9") {
        const Mat d = hilbert::displacement(space, cxd(0.0, 1.9));
        const Mat dinv = hilbert::displacement(space, cxd(0.0, -1.9));
        CHECK((d * dinv - Mat::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-9);
    }

    SECTION("truncation guard") {
        FockSpace small(16);
        CHECK_THROWS_AS(hilbert::displacement(small, cxd(0.0, 1.5)), TruncationRisk);
    }

    SECTION("matches the closed-form Fock matrix elements away from the edge") {
        FockSpace mid(128);
        for (cxd alpha : {cxd(0.7, 0.0), cxd(0.0, 1.9), cxd(-0.9, 1.2)}) {
            const Mat d = hilbert::displacement(mid, alpha);
            const Mat ref = oracle::displacement_matrix(128, alpha);
            double worst = 0.0;
            for (int m = 0; m < 80; ++m)
                for (int n = 0; n < 80; ++n)
                    worst = std::max(worst, std::abs(d(m, n) - ref(m, n)));
            CHECK(worst < 1e-11);
        }
    }

    SECTION("unitarity on truncation-healthy states") {
        const auto psi = oracle::coherent_state(space, cxd(0.4, -0.8));
        const Mat d = hilbert::displacement(space, cxd(0.0, 1.9));
        CHECK((d * psi.amplitudes).norm() == Approx(psi.amplitudes.norm()).epsilon(1e-9));
    }

    SECTION("composition D(a)D(b) = e^{i Im(a b*)} D(a+b)") {
        const std::vector<std::pair<cxd, cxd>> pairs = {
            {cxd(0.0, 1.3), cxd(0.8, 0.0)},
            {cxd(1.1, 0.4), cxd(-0.3, 0.9)},
            {cxd(0.0, 2.0), cxd(0.0, -1.2)}};
        for (const auto& [a, b] : pairs) {
            const Mat lhs = hilbert::displacement(space, a) * hilbert::displacement(space, b);
            const cxd phase = std::exp(cxd(0.0, std::imag(a * std::conj(b))));
            const Mat rhs = phase * hilbert::displacement(space, a + b);
            // Compare on the healthy sub-block.
            CHECK((lhs - rhs).topLeftCorner(200, 200).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("rotation operator", "[hilbert]") {
    FockSpace space(64);

    SECTION("R(0) and R(2pi) are the identity") {
        CHECK((hilbert::rotation(space, 0.0) - Mat::Identity(64, 64)).cwiseAbs().maxCoeff() <
              1e-15);
        CHECK((hilbert::rotation(space, 2.0 * pi) - Mat::Identity(64, 64))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }

    SECTION("quarter period maps position to momentum: R†(pi/2) x R(pi/2) = p") {
        const auto ops = hilbert::ladder_ops(space);
        const Mat r = hilbert::rotation(space, 0.5 * pi);
        CHECK((r.adjoint() * ops.x * r - ops.p).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("coherent state rotates as beta -> beta e^{-i theta}") {
        const cxd beta(0.9, 0.6);
        const double theta = 0.7;
        const auto rotated = hilbert::apply_rotation(oracle::coherent_state(space, beta), theta);
        const auto expected = oracle::coherent_state(space, beta * std::exp(cxd(0.0, -theta)));
        CHECK((rotated.amplitudes - expected.amplitudes).norm() < 1e-12);
    }

    SECTION("rotating a density matrix matches operator conjugation") {
        const auto rho = hilbert::thermal_state(space, 1.0);
        auto conditioned = hilbert::condition(rho, hilbert::displacement(space, cxd(0.0, 0.5)));
        const auto rotated = hilbert::apply_rotation(conditioned.first, 1.1);
        const Mat r = hilbert::rotation(space, 1.1);
        const Mat direct = r * conditioned.first.matrix * r.adjoint();
        CHECK((rotated.matrix - direct).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("thermal state", "[hilbert]") {
    FockSpace space(256);

    SECTION("n_bar = 0 is the ground-state projector") {
        const auto rho = hilbert::thermal_state(space, 0.0);
        CHECK(rho.matrix(0, 0).real() == Approx(1.0));
        CHECK(rho.matrix.cwiseAbs().sum() == Approx(1.0).margin(1e-15));
    }

    SECTION("n_bar = 5 populations") {
        const auto rho = hilbert::thermal_state(space, 5.0);
        CHECK(rho.matrix(0, 0).real() == Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(rho.matrix(1, 1).real() == Approx(5.0 / 36.0).epsilon(1e-12));
        CHECK(rho.matrix.trace().real() == Approx(1.0).margin(1e-9));
    }

    SECTION("moments: Tr[n rho] = n_bar and Tr[x^2 rho] = 2 n_bar + 1") {
        const auto rho = hilbert::thermal_state(space, 5.0);
        CHECK(hilbert::mean_phonons(rho) == Approx(5.0).margin(1e-6));
        const auto m = hilbert::quadrature_moments(rho);
        CHECK(m.var_x == Approx(11.0).margin(1e-6));
        CHECK(m.var_p == Approx(11.0).margin(1e-6));
    }

    SECTION("truncation guard") {
        FockSpace small(64);
        CHECK_THROWS_AS(hilbert::thermal_state(small, 4.0), TruncationRisk);
    }
}

TEST_CASE("conditioning", "[hilbert]") {
    FockSpace space(128);

    SECTION("identity operator leaves the state with probability 1") {
        const auto psi = oracle::coherent_state(space, cxd(0.0, 1.0));
        auto [out, prob] = hilbert::condition(psi, Mat::Identity(128, 128));
        CHECK(prob == Approx(1.0).margin(1e-12));
        CHECK((out.amplitudes - psi.amplitudes).norm() < 1e-14);
    }

    SECTION("ground-state projection of a thermal state succeeds with p0 = 1/6") {
        const auto rho = hilbert::thermal_state(space, 5.0);
        Mat proj = Mat::Zero(128, 128);
        proj(0, 0) = 1.0;
        auto [out, prob] = hilbert::condition(rho, proj);
        CHECK(prob == Approx(1.0 / 6.0).epsilon(1e-10));
        CHECK(out.weight == Approx(1.0 / 6.0).epsilon(1e-10));
    }

    SECTION("grating outcomes are exhaustive") {
        const auto rho = hilbert::thermal_state(space, 3.0);
        auto [up, um] = protocol::grating_operators(space, cxd(0.0, 1.1), 0.3);
        auto [outp, pp] = hilbert::condition(rho, up);
        auto [outm, pm] = hilbert::condition(rho, um);
        CHECK(pp + pm == Approx(1.0).margin(1e-9));
    }

    SECTION("vanishing outcomes raise ZeroProbability") {
        const auto vac = hilbert::vacuum_state(space);
        Mat proj = Mat::Zero(128, 128);
        proj(127, 127) = 1.0;
        CHECK_THROWS_AS(hilbert::condition(vac, proj), ZeroProbability);
    }
}

TEST_CASE("POVM completeness of the grating pair", "[hilbert]") {
    FockSpace space(256);
    for (double phi : {0.0, 0.7}) {
        auto [up, um] = protocol::grating_operators(space, cxd(0.0, 1.9), phi);
        const Mat sum = up.adjoint() * up + um.adjoint() * um;
        CHECK((sum - Mat::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("truncation health", "[hilbert]") {
    FockSpace space(64);
    CHECK(hilbert::truncation_healthy(hilbert::vacuum_state(space), 1e-9));
    CHECK_FALSE(hilbert::truncation_healthy(hilbert::fock_state(space, 63), 1e-9));
}

TEST_CASE("quadrature moments of coherent states", "[hilbert]") {
    FockSpace space(128);
    const cxd beta(0.8, -1.1);
    const auto psi = oracle::coherent_state(space, beta);
    const auto m = hilbert::quadrature_moments(psi);
    CHECK(m.mean_x == Approx(2.0 * beta.real()).margin(1e-10));
    CHECK(m.mean_p == Approx(2.0 * beta.imag()).margin(1e-10));
    CHECK(m.var_x == Approx(1.0).margin(1e-9));
    CHECK(m.var_p == Approx(1.0).margin(1e-9));

    const auto md = hilbert::quadrature_moments(hilbert::to_density(psi));
    CHECK(md.mean_x == Approx(m.mean_x).margin(1e-12));
    CHECK(md.mean_p == Approx(m.mean_p).margin(1e-12));
}

TEST_CASE("x eigenbasis reconstructs the position operator", "[hilbert]") {
    FockSpace space(48);
    const auto basis = hilbert::x_eigenbasis(space);
    const RealMat rebuilt =
        basis.vectors * basis.nodes.asDiagonal() * basis.vectors.transpose();
    const auto ops = hilbert::ladder_ops(space);
    CHECK((rebuilt.cast<cxd>() - ops.x).cwiseAbs().maxCoeff() < 1e-12);
}
