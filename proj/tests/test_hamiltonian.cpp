#include "doctest.h"
#include "generators.hpp"

#include "isingem/errors.hpp"
#include "isingem/hamiltonian.hpp"
#include "isingem/models.hpp"

using namespace isingem;
using doctest::Approx;

namespace {
constexpr Symbol D = 0, U = 1;
constexpr double J = 0.7, J1 = 0.8, J2 = -0.45, B = 0.3;

BlockIndex block(const Hamiltonian& h, std::initializer_list<Symbol> s) {
    return h.blocks().encode(std::vector<Symbol>(s));
}
} // namespace

TEST_CASE("intra-block energies") {
    const auto nn = nn_ising({J, B, 1.0});
    CHECK(intra_block_energy(nn, block(nn, {U})) == Approx(-B));
    const auto nnn = nnn_ising({J1, J2, B, 1.0});
    CHECK(intra_block_energy(nnn, block(nnn, {U, U})) == Approx(-2 * B - J1));
    const auto nnn0 = nnn_ising({J1, J2, 0.0, 1.0});
    CHECK(intra_block_energy(nnn0, block(nnn0, {U, D})) == Approx(J1));
}

TEST_CASE("cross-block energies") {
    const auto nnn = nnn_ising({J1, J2, B, 1.0});
    // pairs (0,0), (1,0), (1,1) sit at distances 2, 1, 2
    CHECK(cross_block_energy(nnn, block(nnn, {U, U}), block(nnn, {U, U})) == Approx(-J1 - 2 * J2));
    const auto nn = nn_ising({J, B, 1.0});
    CHECK(cross_block_energy(nn, block(nn, {U}), block(nn, {D})) == Approx(J));
    const auto free = nnn_ising({0.0, 0.0, B, 1.0});
    for (BlockIndex a = 0; a < 4; ++a)
        for (BlockIndex b = 0; b < 4; ++b) CHECK(cross_block_energy(free, a, b) == 0.0);
}

TEST_CASE("chain energies") {
    const auto nnn = nnn_ising({J1, J2, B, 1.0});
    const std::vector<Symbol> up4{U, U, U, U};
    CHECK(chain_energy_blockwise(nnn, up4, Boundary::Open) == Approx(-4 * B - 3 * J1 - 2 * J2));
    CHECK(chain_energy_direct(nnn, up4, Boundary::Open) == Approx(-4 * B - 3 * J1 - 2 * J2));

    const auto nn0 = nn_ising({J, 0.0, 1.0});
    const std::vector<Symbol> ud{U, D};
    CHECK(chain_energy_blockwise(nn0, ud, Boundary::Open) == Approx(J));

    const auto free = nnn_ising({0.0, 0.0, B, 1.0});
    const std::vector<Symbol> up6(6, U);
    CHECK(chain_energy_blockwise(free, up6, Boundary::Open) == Approx(-6 * B));
    CHECK(chain_energy_direct(nn_ising({J, B, 1.0}), std::vector<Symbol>{U}, Boundary::Open) == Approx(-B));
}

TEST_CASE("periodic NN ring counts every bond once") {
    const auto nn = nn_ising({J, B, 1.0});
    const std::vector<Symbol> s{U, D, U, U};
    // bonds: UD, DU, UU, UU(wrap) → J + J − J − J = 0; field: −B·(1 − 1 + 1 + 1)
    CHECK(chain_energy_direct(nn, s, Boundary::Periodic) == Approx(-2 * B));
    CHECK(chain_energy_blockwise(nn, s, Boundary::Periodic) == Approx(-2 * B));
}

TEST_CASE("blockwise and direct energies agree exactly") {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto h = gen::hamiltonian(rng);
        const std::size_t n = h.range();
        const std::size_t L = n * (1 + gen::index(rng, 6));
        const auto s = gen::spins(rng, L, h.blocks().theta());
        for (Boundary bc : {Boundary::Open, Boundary::Periodic}) {
            if (bc == Boundary::Periodic && L <= n) continue;
            const double a = chain_energy_blockwise(h, s, bc);
            const double b = chain_energy_direct(h, s, bc);
            REQUIRE(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("energies do not depend on the argument order of a coupling") {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = gen::hamiltonian(rng);
        const std::size_t theta = h.blocks().theta();
        for (std::size_t d = 1; d <= h.range(); ++d)
            for (Symbol s = 0; s < theta; ++s)
                for (Symbol t = 0; t < theta; ++t) REQUIRE(h.coupling(d, s, t) == h.coupling(d, t, s));
        CHECK(h.coupling(h.range() + 1, 0, 1) == 0.0);
        // Reversing a chain maps every pair (a, b) to (b, a).
        auto s = gen::spins(rng, 3 * h.range(), theta);
        const double forward = chain_energy_direct(h, s, Boundary::Open);
        std::reverse(s.begin(), s.end());
        REQUIRE(chain_energy_direct(h, s, Boundary::Open) == Approx(forward).epsilon(1e-12));
    }
}

TEST_CASE("tabulated energies match the per-block functions") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = gen::hamiltonian(rng);
        const auto t = tabulate_block_energies(h);
        const std::size_t u = h.blocks().size();
        for (BlockIndex a = 0; a < u; ++a) {
            REQUIRE(t.intra[a] == intra_block_energy(h, a));
            for (BlockIndex b = 0; b < u; ++b) REQUIRE(t.cross[a * u + b] == cross_block_energy(h, a, b));
        }
    }
}

TEST_CASE("bad tables and chains are rejected") {
    BlockSpace s(SpinAlphabet::binary(), 1);
    CHECK_THROWS_AS(Hamiltonian(s, 0.0, {0.0, 1.0, 2.0, 0.0}), Error); // asymmetric
    CHECK_THROWS_AS(Hamiltonian(s, 0.0, {0.0, 1.0}), Error);           // wrong size
    const auto nnn = nnn_ising({J1, J2, B, 1.0});
    CHECK_THROWS_AS(chain_energy_blockwise(nnn, std::vector<Symbol>{U, U, U}, Boundary::Open), Error);
}
