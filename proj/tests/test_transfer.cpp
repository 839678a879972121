#include "doctest.h"
#include "generators.hpp"

#include "isingem/errors.hpp"
#include "isingem/models.hpp"
#include "isingem/transfer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

using namespace isingem;
using doctest::Approx;

namespace {

Eigen::MatrixXd linear_v(const TransferSystem& ts) {
    const auto u = static_cast<Eigen::Index>(ts.size());
    Eigen::MatrixXd v(u, u);
    for (Eigen::Index i = 0; i < u; ++i)
        for (Eigen::Index j = 0; j < u; ++j)
            v(i, j) = std::exp(ts.log_v(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    return v;
}

/// Independent Perron oracle: extended-precision linear-domain squaring of V/max + I.
/// Long double's exponent range keeps entries near e^-300 representable.
std::vector<long double> right_oracle(const TransferSystem& ts) {
    const std::size_t u = ts.size();
    double top = -INFINITY;
    for (std::size_t i = 0; i < u * u; ++i) top = std::max(top, ts.log_v()[i]);
    std::vector<long double> b(u * u), next(u * u);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j)
            b[i * u + j] = std::exp(static_cast<long double>(ts.log_v(i, j) - top)) + (i == j ? 1.0L : 0.0L);
    for (int k = 0; k < 2000; ++k) {
        long double m = 0;
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = 0; j < u; ++j) {
                long double acc = 0;
                for (std::size_t l = 0; l < u; ++l) acc += b[i * u + l] * b[l * u + j];
                next[i * u + j] = acc;
                m = std::max(m, acc);
            }
        for (std::size_t i = 0; i < u * u; ++i) b[i] = next[i] / m;
    }
    std::vector<long double> r(u, 0.0L);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) r[i] += b[i * u + j];
    return r;
}

} // namespace

TEST_CASE("NN transfer matrix at zero field") {
    const double beta = 0.9, J = 0.6;
    const auto ts = build_transfer(nn_ising({J, 0.0, beta}), beta);
    CHECK(ts.log_v(0, 0) == Approx(beta * J));
    CHECK(ts.log_v(0, 1) == Approx(-beta * J));
    CHECK(ts.log_v(1, 0) == Approx(-beta * J));
    CHECK(ts.log_v(1, 1) == Approx(beta * J));
}

TEST_CASE("infinite temperature gives the all-ones matrix") {
    const auto ts = build_transfer(nnn_ising({1.0, -0.5, 0.3, 0.0}), 0.0);
    for (double x : ts.log_v()) CHECK(x == 0.0);
    CHECK(std::exp(ts.log_lambda0()) == Approx(4.0));
    for (double x : ts.right()) CHECK(x == Approx(0.25));
}

TEST_CASE("Perron root of the zero-field NN chain is 2 cosh(beta J)") {
    const auto ts = build_transfer(nn_ising({1.0, 0.0, 1.0}), 1.0);
    CHECK(std::exp(ts.log_lambda0()) == Approx(2.0 * std::cosh(1.0)).epsilon(1e-14));
    CHECK(std::exp(ts.log_lambda0()) == Approx(3.08616).epsilon(1e-5));
    const auto r = ts.right();
    const auto l = ts.left();
    CHECK(r[0] == Approx(r[1]));
    CHECK(l[0] == Approx(l[1]));
}

TEST_CASE("V^20 / lambda^20 approaches |r><l|") {
    const auto ts = build_transfer(nn_ising({0.4, 0.25, 0.8}), 0.8);
    const Eigen::MatrixXd v = linear_v(ts) / std::exp(ts.log_lambda0());
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(2, 2);
    for (int k = 0; k < 20; ++k) p = p * v;
    const auto r = ts.right();
    const auto l = ts.left();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(p(i, j) - r[i] * l[j]) <= 1e-8);
}

TEST_CASE("left and right vectors are positive with unit overlap") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pt = gen::ising(rng, trial % 2 == 1);
        const auto ts = build_transfer(pt.h, pt.beta);
        double overlap = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) overlap += std::exp(ts.log_left()[i] + ts.log_right()[i]);
        REQUIRE(overlap == Approx(1.0).epsilon(1e-12));
        for (double x : ts.log_right()) REQUIRE(std::isfinite(x));
        for (double x : ts.log_left()) REQUIRE(std::isfinite(x));
        REQUIRE(ts.perron_data().residual <= 1e-12);
    }
}

TEST_CASE("Perron residual stays small up to 256 blocks") {
    Rng rng(22);
    for (std::size_t n : {3, 4, 6, 8}) {
        std::vector<double> J(n);
        for (auto& x : J) x = gen::uniform(rng, -1.0, 1.0);
        const auto h = Hamiltonian::product_form(BlockSpace(SpinAlphabet::binary(), n), 0.4, J);
        const auto ts = build_transfer(h, 0.7);
        CHECK(ts.perron_data().residual <= 1e-12);
    }
}

TEST_CASE("weakly coupled degenerate classes get the right Perron weights") {
    // Two antiferromagnetic phases coupled only through entries near e^-46 (and e^-180 at
    // higher beta): the eigen-gap is far below machine precision.
    for (const auto& p : {NNNParams{-1.2554868426373047, -0.013474402256479223, -0.94337459850325533, 18.600818095110167},
                          NNNParams{-0.73111710541687269, 0.47369791335285538, -1.3064201462562912, 88.158385132888981}}) {
        const auto ts = build_transfer(nnn_ising(p), p.beta);
        const auto oracle = right_oracle(ts);
        long double norm = 0;
        for (auto x : oracle) norm += x;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double expect = static_cast<double>(std::log(oracle[i] / norm));
            CHECK(ts.log_right()[i] == Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("partition function examples") {
    const auto ts = build_transfer(nn_ising({1.0, 0.0, 1.0}), 1.0);
    const double expect = std::pow(2 * std::cosh(1.0), 2) + std::pow(2 * std::sinh(1.0), 2);
    CHECK(std::exp(log_partition_function(ts, 2, Boundary::Periodic)) == Approx(expect).epsilon(1e-13));

    const auto none = build_transfer(nn_ising({1.0, 0.5, 0.0}), 0.0);
    CHECK(std::exp(log_partition_function(none, 3, Boundary::Periodic)) == Approx(8.0).epsilon(1e-13));
}

TEST_CASE("periodic log Z approaches N log lambda") {
    const auto ts = build_transfer(nn_ising({0.8, 0.2, 1.1}), 1.1);
    const double gap64 = log_partition_function(ts, 64, Boundary::Periodic) - 64 * ts.log_lambda0();
    const double gap8 = log_partition_function(ts, 8, Boundary::Periodic) - 8 * ts.log_lambda0();
    CHECK(std::abs(gap64) < 1e-10);
    CHECK(std::abs(gap64) < std::abs(gap8));
    CHECK(asymptotic_log_partition(ts, 64, Boundary::Periodic) == Approx(64 * ts.log_lambda0()));
}

TEST_CASE("open-chain asymptotics converge monotonically") {
    const auto nn = build_transfer(nn_ising({0.7, 0.0, 1.0}), 1.0);
    const double exact = log_partition_function(nn, 64, Boundary::Open);
    CHECK(std::abs(exact - asymptotic_log_partition(nn, 64, Boundary::Open)) <= 1e-8 * std::abs(exact));

    const auto nnn = build_transfer(nnn_ising({0.9, -0.4, 0.2, 0.8}), 0.8);
    double previous = INFINITY;
    for (std::size_t N = 2; N <= 40; N += 2) {
        const double exact_n = log_partition_function(nnn, N, Boundary::Open);
        const double gap = std::abs(exact_n - asymptotic_log_partition(nnn, N, Boundary::Open));
        // below a few ulps of log Z the gap is roundoff and no longer ordered
        CHECK(gap <= std::max(previous, 1e-14 * std::abs(exact_n)));
        previous = gap;
    }
}

TEST_CASE("trace of V^N equals the sum of eigenvalue powers") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = gen::hamiltonian(rng, 2, 4);
        if (h.blocks().size() > 16) continue;
        const double beta = gen::uniform(rng, 0.05, 1.0);
        const auto ts = build_transfer(h, beta);
        const Eigen::EigenSolver<Eigen::MatrixXd> es(linear_v(ts));
        for (std::size_t N = 1; N <= 8; ++N) {
            std::complex<double> sum = 0.0;
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
                sum += std::pow(es.eigenvalues()[k], static_cast<double>(N));
            const double z = std::exp(log_partition_function(ts, N, Boundary::Periodic));
            REQUIRE(z == Approx(sum.real()).epsilon(1e-9));
        }
    }
}

TEST_CASE("log domain survives the largest figure temperatures") {
    Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = nnn_ising({gen::uniform(rng, -1.5, 1.5), gen::uniform(rng, -1.5, 1.5),
                                  gen::uniform(rng, -3, 3), 100.0});
        const auto ts = build_transfer(h, 100.0);
        for (double x : ts.log_v()) REQUIRE(std::isfinite(x));
        REQUIRE(std::isfinite(ts.log_lambda0()));
    }
    const auto ground = build_transfer(nn_ising({1.0, 0.0, kGroundStateBeta}), kGroundStateBeta);
    CHECK(ground.log_lambda0() == Approx(kGroundStateBeta));
}

TEST_CASE("non-finite inputs are rejected") {
    CHECK_THROWS_AS(perron({0.0, NAN, 0.0, 0.0}, 2), Error);
    CHECK_THROWS_AS(perron({0.0, 0.0, 0.0}, 2), Error);
}
