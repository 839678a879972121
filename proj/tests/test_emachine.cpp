#include "doctest.h"
#include "generators.hpp"

#include "isingem/emachine.hpp"
#include "isingem/errors.hpp"
#include "isingem/models.hpp"

#include <cmath>

using namespace isingem;
using doctest::Approx;

namespace {
const double H34 = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25)); // 0.811278...
const double kBetaJ3 = 0.5 * std::log(3.0);

BlockChain with_pi(std::size_t u, std::vector<double> P) {
    BlockChain c{u, std::move(P), {}};
    c.pi = stationary(c).pi();
    return c;
}

const BlockChain& sym() {
    static const BlockChain c = with_pi(2, {0.75, 0.25, 0.25, 0.75});
    return c;
}

CausalPartition partition_of(std::vector<double> probs) {
    CausalPartition p;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        p.state_of.push_back(k);
        p.states.push_back({k});
    }
    p.probs = std::move(probs);
    return p;
}
} // namespace

TEST_CASE("partition examples") {
    const auto p = build_partition(sym());
    CHECK(p.size() == 2);
    CHECK(p.probs[0] == Approx(0.5));
    CHECK(p.probs[1] == Approx(0.5));

    const auto uniform = with_pi(4, std::vector<double>(16, 0.25));
    const auto q = build_partition(uniform);
    CHECK(q.size() == 1);
    CHECK(q.probs[0] == Approx(1.0));
    CHECK(q.states[0] == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("a non-transitive chain of near-equal rows is ambiguous") {
    const double e = 0.6 * kMergeTolerance;
    const auto c = with_pi(3, {0.5, 0.5, 0.0, 0.5 - e, 0.5 + e, 0.0, 0.5 - 2 * e, 0.5 + 2 * e, 0.0});
    try {
        build_partition(c);
        FAIL("expected PartitionAmbiguity");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::PartitionAmbiguity);
    }
}

TEST_CASE("statistical complexity examples") {
    CHECK(statistical_complexity(partition_of({0.5, 0.5})) == Approx(1.0));
    CHECK(statistical_complexity(partition_of({1.0})) == 0.0);
    CHECK(statistical_complexity(partition_of({1 / 3.0, 1 / 3.0, 1 / 3.0})) == Approx(std::log2(3.0)));
    CHECK(statistical_complexity(partition_of({1.0, 0.0})) == 0.0);
}

TEST_CASE("entropy density examples") {
    CHECK(entropy_density(sym()) == Approx(H34).epsilon(1e-14));
    CHECK(H34 == Approx(0.81128).epsilon(1e-5));
    CHECK(entropy_density(with_pi(2, {0.5, 0.5, 0.5, 0.5})) == Approx(1.0));
    CHECK(entropy_density(with_pi(3, {0, 1, 0, 0, 0, 1, 1, 0, 0})) == 0.0);
}

TEST_CASE("excess entropy examples") {
    const auto e = excess_entropy(sym(), build_partition(sym()));
    CHECK(e.E_mu == Approx(1.0 - H34).epsilon(1e-14));
    CHECK(e.E_paper == Approx(1.0 - H34).epsilon(1e-14));
    CHECK(e.E_mu == Approx(0.18872).epsilon(1e-5));

    const auto free = with_pi(2, {0.5, 0.5, 0.5, 0.5});
    const auto f = excess_entropy(free, build_partition(free));
    CHECK(std::abs(f.E_mu) <= 1e-15);
    CHECK(f.E_paper == Approx(-1.0));

    // A deterministic 3-cycle has three states and E = log2 3.
    const auto cycle = with_pi(3, {0, 1, 0, 0, 0, 1, 1, 0, 0});
    const auto m = block_metrics(cycle);
    CHECK(m.n_states == 3);
    CHECK(m.h_mu == 0.0);
    CHECK(m.E_mu == Approx(std::log2(3.0)));
}

TEST_CASE("labeled transitions of the NN machine") {
    const auto p = build_partition(sym());
    const auto t = transition_matrices(sym(), p);
    CHECK(t.states == 2);
    CHECK(t.symbols == 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t r = 0; r < 2; ++r) {
            int nonzero = 0;
            for (std::size_t q = 0; q < 2; ++q) nonzero += t.at(a, r, q) > 0.0;
            CHECK(nonzero == 1);
        }
    CHECK(t.at(1, 0, 1) == Approx(0.25));
    CHECK(t.at(1, 1, 1) == Approx(0.75));
    CHECK_NOTHROW(check_unifilar(t));

    const auto free = with_pi(4, std::vector<double>(16, 0.25));
    const auto tf = transition_matrices(free, build_partition(free));
    CHECK(tf.states == 1);
    CHECK(tf.connectivity == std::vector<double>{1.0});
    for (std::size_t a = 0; a < 4; ++a) CHECK(tf.at(a, 0, 0) == Approx(0.25));
}

TEST_CASE("a non-unifilar presentation is rejected") {
    LabeledTransitions t;
    t.states = 2;
    t.symbols = 1;
    t.labeled = {0.5, 0.5, 0.0, 1.0};
    t.connectivity = t.labeled;
    try {
        check_unifilar(t);
        FAIL("expected InternalConsistency");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InternalConsistency);
    }
}

TEST_CASE("spin machine examples") {
    const auto h = nn_ising({kBetaJ3, 0.2, 1.0});
    const auto a = analyze(h, 1.0);
    const auto s = spin_machine(h, 1.0);
    CHECK(s.h_mu_spin == Approx(a.metrics.h_mu).epsilon(1e-13));
    CHECK(s.C_mu_spin == Approx(a.metrics.C_mu).epsilon(1e-13));
    CHECK(s.E_spin == Approx(a.metrics.E_paper).epsilon(1e-13));

    const auto coin = spin_machine(nn_ising({0.0, 0.0, 1.0}), 1.0);
    CHECK(coin.h_mu_spin == Approx(1.0));
    CHECK(coin.C_mu_spin == 0.0);
    // C' − n h' inherits the merged-state divergence of C − h: −1 bit, not the mutual information 0.
    CHECK(coin.E_spin == Approx(-1.0));
    CHECK(coin.n_states_spin == 1);

    const auto nnn = nnn_ising({0.9, -0.6, 0.4, 0.7});
    const auto b = analyze(nnn, 0.7);
    CHECK(b.metrics.h_mu == Approx(2 * b.metrics.h_mu_spin).epsilon(1e-12));
}

TEST_CASE("spin transitions are unifilar with unit row sums") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = gen::hamiltonian(rng, 3, 3);
        if (h.blocks().size() > 64) continue;
        const double beta = gen::log_uniform(rng, 1e-3, 5.0);
        const auto blocks = solve_stochastic(build_transfer(h, beta));
        const auto w = window_chain(blocks, h.blocks());
        const auto part = spin_partition(w, h.blocks());
        const auto t = spin_transition_matrices(w, h.blocks(), part);
        REQUIRE_NOTHROW(check_unifilar(t));
        for (std::size_t r = 0; r < t.states; ++r) {
            double row = 0.0;
            for (std::size_t q = 0; q < t.states; ++q) row += t.connectivity[r * t.states + q];
            REQUIRE(row == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("information identities hold on random chains") {
    Rng rng(42);
    std::size_t trivial = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto pt = gen::ising(rng, trial % 2 == 1, 20.0);
        const auto a = analyze(pt.h, pt.beta);
        if (a.classes.size() != 1) continue;
        const auto& m = a.metrics;
        const double n = static_cast<double>(pt.h.range());
        REQUIRE(std::abs(m.h_mu - n * m.h_mu_spin) <= 1e-9);
        REQUIRE(m.E_mu >= -1e-12);
        REQUIRE(m.C_mu <= std::log2(static_cast<double>(m.n_states)) + 1e-12);
        REQUIRE(m.C_mu <= m.H_block + 1e-12);
        REQUIRE(m.h_mu >= 0.0);
        REQUIRE(m.h_mu <= std::log2(static_cast<double>(pt.h.blocks().size())) + 1e-12);
        if (m.n_states == pt.h.blocks().size()) {
            ++trivial;
            REQUIRE(std::abs(m.E_mu - m.E_paper) <= 1e-9);
        }
        const auto t = transition_matrices(a.chain, a.partition);
        REQUIRE_NOTHROW(check_unifilar(t));
    }
    CHECK(trivial > 50);
}

TEST_CASE("partition probabilities sum to one") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = gen::stochastic(rng, 2 + gen::index(rng, 10));
        const auto p = build_partition(c);
        double s = 0.0;
        for (double x : p.probs) s += x;
        REQUIRE(s == Approx(1.0).epsilon(1e-12));
        for (std::size_t k = 0; k < p.size(); ++k)
            for (std::size_t b : p.states[k]) REQUIRE(p.state_of[b] == k);
    }
}

TEST_CASE("ground-state machines count states by phase") {
    struct Case {
        NNNParams p;
        std::size_t states;
        double E;
    };
    for (const auto& c : {Case{{1.0, 0.0, 0.0, kGroundStateBeta}, 1, 0.0},
                          Case{{-1.0, 0.0, 0.0, kGroundStateBeta}, 1, 0.0},
                          Case{{1.0, -1.0, 0.0, kGroundStateBeta}, 2, 1.0},
                          Case{{-1.0, -1.0, 2.0, kGroundStateBeta}, 3, std::log2(3.0)}}) {
        const auto a = analyze(nnn_ising(c.p), c.p.beta);
        REQUIRE(!a.classes.empty());
        double weight = 0.0;
        for (const auto& cls : a.classes) {
            CHECK(cls.partition.size() == c.states);
            CHECK(cls.metrics.E_mu == Approx(c.E).epsilon(1e-9));
            CHECK(cls.metrics.h_mu <= 1e-9);
            weight += cls.weight;
        }
        CHECK(weight == Approx(1.0).epsilon(1e-12));
    }
}
