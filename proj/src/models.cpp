#include "isingem/models.hpp"

#include "isingem/errors.hpp"
#include "isingem/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace isingem {

namespace {

void require_finite(std::initializer_list<double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw Error(ErrorKind::NumericDomain, std::string(what) + ": non-finite parameter");
}

/// Periodic pattern of each phase, 1 = ↑, 0 = ↓.
const std::array<std::vector<Symbol>, 4>& phase_patterns() {
    static const std::array<std::vector<Symbol>, 4> patterns{{
        {1},
        {1, 0},
        {1, 1, 0},
        {1, 1, 0, 0},
    }};
    return patterns;
}

} // namespace

Hamiltonian nn_ising(const NNParams& params) {
    require_finite({params.J, params.B, params.beta}, "nn_ising");
    const double J[] = {params.J};
    return Hamiltonian::product_form(BlockSpace(SpinAlphabet::binary(), 1), params.B, J);
}

NNReference nn_reference_values(const NNParams& params) {
    const double b = params.beta, J = params.J, B = params.B;
    const double e4J = std::exp(4 * b * J);
    const double e2B = std::exp(2 * b * B);
    const double e2BJ = std::exp(2 * b * (B + 2 * J));
    constexpr int dn = 0, up = 1;

    NNReference ref;
    auto& L = ref.local;
    L[dn][dn][dn] = e4J / (e2B + e4J);
    L[dn][dn][up] = 1 / (e2B + 1);
    L[up][dn][dn] = 1 / (std::exp(4 * b * J - 2 * b * B) + 1);
    L[up][dn][up] = e2B / (e2B + 1);
    L[dn][up][dn] = 1 / (e2B + 1);
    L[dn][up][up] = 1 / (e2BJ + 1);
    L[up][up][dn] = e2B / (e2B + 1);
    L[up][up][up] = e2BJ / (e2BJ + 1);

    const double surd = std::sqrt(4 * e2B + std::exp(4 * b * (B + J)) - 2 * std::exp(2 * b * (B + 2 * J)) +
                                  std::exp(4 * b * J));
    ref.up_given_up = 2 * std::exp(2 * b * J) / (surd + std::exp(2 * b * (B + J)) + std::exp(2 * b * J));
    return ref;
}

Hamiltonian nnn_ising(const NNNParams& params) {
    require_finite({params.J1, params.J2, params.B, params.beta}, "nnn_ising");
    const double J[] = {params.J1, params.J2};
    return Hamiltonian::product_form(BlockSpace(SpinAlphabet::binary(), 2), params.B, J);
}

const char* to_string(NNNPhase phase) noexcept {
    switch (phase) {
    case NNNPhase::P1: return "P1";
    case NNNPhase::P2: return "P2";
    case NNNPhase::P3: return "P3";
    case NNNPhase::P4: return "P4";
    }
    return "?";
}

std::array<double, 4> nnn_phase_energies(const NNNParams& params) {
    const auto h = nnn_ising(params);
    // 12 spins hold a whole number of periods of every pattern.
    constexpr std::size_t L = 12;
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& pattern = phase_patterns()[k];
        std::vector<Symbol> chain(L), flipped(L);
        for (std::size_t i = 0; i < L; ++i) {
            chain[i] = pattern[i % pattern.size()];
            flipped[i] = 1 - chain[i];
        }
        out[k] = std::min(chain_energy_direct(h, chain, Boundary::Periodic),
                          chain_energy_direct(h, flipped, Boundary::Periodic)) /
                 static_cast<double>(L);
    }
    return out;
}

NNNPhase nnn_ground_state_phase(const NNNParams& params, double tie_tolerance) {
    const auto e = nnn_phase_energies(params);
    const double best = *std::min_element(e.begin(), e.end());
    std::string tied;
    std::size_t count = 0, arg = 0;
    for (std::size_t k = 0; k < 4; ++k)
        if (e[k] - best <= tie_tolerance) {
            tied += (count ? ", " : "") + std::string(to_string(static_cast<NNNPhase>(k + 1)));
            ++count;
            arg = k;
        }
    if (count > 1) throw Error(ErrorKind::PhaseBoundary, "phase boundary: " + tied + " are degenerate");
    return static_cast<NNNPhase>(arg + 1);
}

std::optional<NNNPhase> phase_of_period(std::size_t period) {
    if (period >= 1 && period <= 4) return static_cast<NNNPhase>(period);
    return std::nullopt;
}

std::size_t cycle_spin_period(const ClassMachine& machine, const BlockSpace& space) {
    const auto& chain = machine.chain;
    const std::size_t k = chain.size;
    std::vector<std::size_t> seen_at(k, k + 1);
    std::vector<std::size_t> path;
    std::size_t state = 0;
    while (seen_at[state] == k + 1) {
        seen_at[state] = path.size();
        path.push_back(state);
        std::size_t next = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (chain.at(state, j) > chain.at(state, next)) next = j;
        state = next;
    }

    std::vector<Symbol> spins;
    for (std::size_t i = seen_at[state]; i < path.size(); ++i) {
        const auto block = space.decode(static_cast<BlockIndex>(machine.blocks[path[i]]));
        spins.insert(spins.end(), block.begin(), block.end());
    }
    const std::size_t L = spins.size();
    for (std::size_t p = 1; p <= L; ++p) {
        if (L % p) continue;
        bool ok = true;
        for (std::size_t i = p; i < L && ok; ++i) ok = spins[i] == spins[i - p];
        if (ok) return p;
    }
    return L;
}

NNParams pbrw_parameters(const PBRWParams& params) {
    const auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!std::isfinite(params.p) || !std::isfinite(params.r) || params.p < 0.0 || params.p > 1.0 ||
        params.r < 0.0 || params.r > 1.0)
        throw Error(ErrorKind::InvalidParameter, "pbrw: p and r must lie in [0, 1]");
    if (!open_unit(params.p) || !open_unit(params.r))
        throw Error(ErrorKind::LimitParameter,
                    "pbrw: p or r at 0 or 1 maps to infinite couplings; use the ground-state "
                    "pathway (nn preset at large beta) instead");
    NNParams nn;
    nn.beta = kPBRWBeta;
    nn.J = 0.5 * std::log(params.p / (1.0 - params.p)) / kPBRWBeta;
    nn.B = 0.5 * std::log(params.r / (1.0 - params.r)) / kPBRWBeta;
    return nn;
}

Hamiltonian pbrw_hamiltonian(const PBRWParams& params) { return nn_ising(pbrw_parameters(params)); }

BlockChain pbrw(const PBRWParams& params) {
    return solve_stochastic(build_transfer(pbrw_hamiltonian(params), kPBRWBeta));
}

} // namespace isingem
