#include "doctest.h"
#include "generators.hpp"

#include "isingem/errors.hpp"
#include "isingem/models.hpp"

#include <cmath>

using namespace isingem;
using doctest::Approx;

namespace {
constexpr std::size_t D = 0, U = 1;

/// Independent check of the closed forms: Pr(x | a, b) ∝ exp(βBx + βJx(a + b)).
double local_oracle(const NNParams& p, int x, int a, int b) {
    auto w = [&](int s) { return std::exp(p.beta * (p.B * s + p.J * s * (a + b))); };
    return w(x) / (w(1) + w(-1));
}

int spin(std::size_t symbol) { return symbol == U ? 1 : -1; }
} // namespace

TEST_CASE("NN transfer matrix for J = 1, B = 0") {
    const double beta = 0.7;
    const auto ts = build_transfer(nn_ising({1.0, 0.0, beta}), beta);
    CHECK(std::exp(ts.log_v(0, 0)) == Approx(std::exp(beta)));
    CHECK(std::exp(ts.log_v(0, 1)) == Approx(std::exp(-beta)));
}

TEST_CASE("free NN spins give one state and one bit") {
    const auto a = analyze(nn_ising({0.0, 0.0, 2.0}), 2.0);
    CHECK(a.metrics.n_states == 1);
    CHECK(a.metrics.h_mu_spin == Approx(1.0));
}

TEST_CASE("closed-form local characteristics match the transfer route on the grid") {
    for (double beta : {0.1, 1.0, 10.0})
        for (double J : {-1.5, 0.0, 1.5})
            for (double B : {-3.0, 0.0, 3.0}) {
                const NNParams p{J, B, beta};
                const auto ref = nn_reference_values(p);
                const auto lc = local_characteristics(build_transfer(nn_ising(p), beta));
                for (std::size_t x : {D, U})
                    for (std::size_t a : {D, U})
                        for (std::size_t b : {D, U}) {
                            REQUIRE(std::abs(ref.local[x][a][b] - lc.at(a, x, b)) <= 1e-12);
                            REQUIRE(std::abs(ref.local[x][a][b] - local_oracle(p, spin(x), spin(a), spin(b))) <= 1e-12);
                        }
            }
}

TEST_CASE("closed-form examples") {
    const NNParams p{0.3, 0.4, 1.2};
    const auto ref = nn_reference_values(p);
    const double e = std::exp(2 * p.beta * (p.B + 2 * p.J));
    CHECK(ref.local[U][U][U] == Approx(e / (e + 1)));
    const double f = std::exp(2 * p.beta * p.B);
    CHECK(ref.local[U][D][U] == Approx(f / (f + 1)));
    CHECK(nn_reference_values({0.3, 0.0, 1.2}).local[U][D][U] == Approx(0.5));
}

TEST_CASE("the reference surd expression") {
    // At B = 0 it is e^{2βJ}/(1 + e^{2βJ}) = P(up|up).
    for (double beta : {0.1, 0.5, 1.0, 3.0, 10.0})
        for (double J : {-1.5, -0.4, 0.0, 0.7, 1.5}) {
            const NNParams p{J, 0.0, beta};
            const double x = std::exp(2 * beta * J);
            const double surd = nn_reference_values(p).up_given_up;
            REQUIRE(std::abs(surd - x / (1 + x)) <= 1e-12);
            const auto c = solve_stochastic(build_transfer(nn_ising(p), beta));
            REQUIRE(std::abs(surd - c.at(U, U)) <= 1e-10);
        }
    CHECK(nn_reference_values({0.5 * std::log(3.0), 0.0, 1.0}).up_given_up == Approx(0.75));

    // With a field it evaluates to P(down|down), i.e. P(up|up) with B reversed.
    for (double beta : {0.1, 1.0, 10.0})
        for (double J : {-1.5, 0.0, 1.5})
            for (double B : {-3.0, 3.0}) {
                const NNParams p{J, B, beta};
                const double surd = nn_reference_values(p).up_given_up;
                const auto c = solve_stochastic(build_transfer(nn_ising(p), beta));
                const auto flipped = solve_stochastic(build_transfer(nn_ising({J, -B, beta}), beta));
                REQUIRE(std::abs(surd - c.at(D, D)) <= 1e-10);
                REQUIRE(std::abs(surd - flipped.at(U, U)) <= 1e-10);
            }
}

TEST_CASE("NNN block order and couplings") {
    const auto h = nnn_ising({0.8, -0.3, 0.1, 1.0});
    CHECK(h.range() == 2);
    CHECK(h.blocks().decode(1) == std::vector<Symbol>{0, 1});
    CHECK(h.coupling(1, 1, 1) == Approx(-0.8));
    CHECK(h.coupling(2, 0, 1) == Approx(-0.3));
}

TEST_CASE("NNN ground-state phase examples") {
    CHECK(nnn_ground_state_phase({1.0, 0.0, 0.0, 1.0}) == NNNPhase::P1);
    CHECK(nnn_ground_state_phase({0.5, -1.0, 0.0, 1.0}) == NNNPhase::P4);
    CHECK(nnn_ground_state_phase({1.0, 1.0, 0.0, 1.0}) == NNNPhase::P1);
    CHECK(nnn_ground_state_phase({-1.0, 0.0, 0.0, 1.0}) == NNNPhase::P2);
    CHECK(nnn_ground_state_phase({-1.0, -1.0, 2.0, 1.0}) == NNNPhase::P3);

    const auto e = nnn_phase_energies({1.0, 0.0, 0.0, 1.0});
    CHECK(e[0] == Approx(-1.0));
    CHECK(e[1] == Approx(1.0));
    try {
        nnn_ground_state_phase({1.0, -0.5, 0.0, 1.0}); // P1 and P4 both at −1/2
        FAIL("expected PhaseBoundary");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::PhaseBoundary);
    }
}

TEST_CASE("phase energies against hand-evaluated patterns") {
    Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const double J1 = gen::uniform(rng, -2, 2), J2 = gen::uniform(rng, -2, 2), B = gen::uniform(rng, -3, 3);
        const auto e = nnn_phase_energies({J1, J2, B, 1.0});
        REQUIRE(e[0] == Approx(-J1 - J2 - std::abs(B)));
        REQUIRE(e[1] == Approx(J1 - J2));
        REQUIRE(e[2] == Approx((J1 + J2 - std::abs(B)) / 3.0));
        REQUIRE(e[3] == Approx(J2));
    }
}

TEST_CASE("ground-state machines reproduce the phase map") {
    std::size_t compared = 0, skipped = 0;
    for (int a = 0; a <= 40; ++a)
        for (int b = 0; b <= 40; ++b) {
            const NNNParams p{-2.0 + 0.1 * a, -2.0 + 0.1 * b, 0.0, kGroundStateBeta};
            NNNPhase expected;
            try {
                expected = nnn_ground_state_phase(p);
            } catch (const Error&) {
                ++skipped;
                continue;
            }
            const auto h = nnn_ising(p);
            const auto an = analyze(h, p.beta);
            for (const auto& cls : an.classes) {
                const auto phase = phase_of_period(cycle_spin_period(cls, h.blocks()));
                REQUIRE(phase.has_value());
                REQUIRE(*phase == expected);
            }
            ++compared;
        }
    CHECK(compared + skipped == 41 * 41);
    CHECK(compared > 1500);
}

TEST_CASE("phase periods") {
    CHECK(phase_of_period(1) == NNNPhase::P1);
    CHECK(phase_of_period(2) == NNNPhase::P2);
    CHECK(phase_of_period(3) == NNNPhase::P3);
    CHECK(phase_of_period(4) == NNNPhase::P4);
    CHECK_FALSE(phase_of_period(5).has_value());
}

TEST_CASE("random-walk examples") {
    const auto coin = pbrw({0.5, 0.5});
    for (double x : coin.P) CHECK(x == Approx(0.5).epsilon(1e-14));
    const auto a = analyze(pbrw_hamiltonian({0.5, 0.5}), kPBRWBeta);
    CHECK(a.metrics.h_mu_spin == Approx(1.0).epsilon(1e-14));
    CHECK(a.metrics.C_mu == 0.0);

    const auto persistent = pbrw({0.75, 0.5});
    CHECK(persistent.at(U, U) == Approx(0.75).epsilon(1e-14));
    CHECK(persistent.at(D, D) == Approx(0.75).epsilon(1e-14));

    const auto biased = analyze(pbrw_hamiltonian({0.5, 0.9}), kPBRWBeta);
    CHECK(biased.chain.at(D, U) == Approx(0.9).epsilon(1e-14));
    CHECK(biased.chain.at(U, U) == Approx(0.9).epsilon(1e-14));
    CHECK(biased.metrics.h_mu_spin == Approx(0.46900).epsilon(1e-5));

    const auto map = pbrw_parameters({0.75, 0.9});
    CHECK(map.beta == kPBRWBeta);
    CHECK(map.J == Approx(0.5 * std::log(3.0)));
    CHECK(map.B == Approx(0.5 * std::log(9.0)));
}

TEST_CASE("random-walk metrics are symmetric under r -> 1 - r") {
    for (int i = 1; i <= 21; ++i)
        for (int k = 1; k <= 21; ++k) {
            const double p = i / 22.0, r = k / 22.0;
            const auto m = analyze(pbrw_hamiltonian({p, r}), kPBRWBeta).metrics;
            const auto n = analyze(pbrw_hamiltonian({p, 1 - r}), kPBRWBeta).metrics;
            REQUIRE(std::abs(m.h_mu_spin - n.h_mu_spin) <= 1e-10);
            REQUIRE(std::abs(m.C_mu - n.C_mu) <= 1e-10);
            REQUIRE(std::abs(m.E_mu - n.E_mu) <= 1e-10);
        }
}

TEST_CASE("random-walk limits") {
    double previous = 1.0;
    for (double p : {0.9, 0.99, 0.999, 0.9999}) {
        const auto a = analyze(pbrw_hamiltonian({p, 0.5}), kPBRWBeta);
        CHECK(a.metrics.h_mu_spin < previous);
        previous = a.metrics.h_mu_spin;
    }
    CHECK(previous < 0.002);
    const auto anti = analyze(pbrw_hamiltonian({1e-4, 0.5}), kPBRWBeta);
    CHECK(anti.metrics.h_mu_spin < 0.002);
    CHECK(anti.chain.at(U, D) > 0.999);

    for (const auto& bad : {PBRWParams{0.0, 0.5}, PBRWParams{1.0, 0.5}, PBRWParams{0.5, 0.0}, PBRWParams{0.5, 1.0}}) {
        try {
            pbrw(bad);
            FAIL("expected LimitParameter");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::LimitParameter);
        }
    }
}
