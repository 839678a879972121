#pragma once

#include "isingem/emachine.hpp"
#include "isingem/hamiltonian.hpp"
#include "isingem/markov_chain.hpp"

#include <array>
#include <cstddef>
#include <optional>

namespace isingem {

struct NNParams {
    double J = 0.0;
    double B = 0.0;
    double beta = 1.0;
};

struct NNNParams {
    double J1 = 0.0;
    double J2 = 0.0;
    double B = 0.0;
    double beta = 1.0;
};

/// Persistent biased random walk: repeat probability p, right-step probability r.
struct PBRWParams {
    double p = 0.5;
    double r = 0.5;
};

/// E = −B Σ s_i − J Σ s_j s_{j+1}, spins ±1, n = 1.
Hamiltonian nn_ising(const NNParams& params);

/// Closed-form NN reference values. Index 0 = ↓, 1 = ↑.
struct NNReference {
    /// local[x][a][b] = Pr(x | a, b) for the middle spin x between neighbours a and b.
    std::array<std::array<std::array<double, 2>, 2>, 2> local{};
    /// The reference surd expression labelled Pr(↑|↑).
    double up_given_up = 0.0;
};

NNReference nn_reference_values(const NNParams& params);

/// E = −B Σ s_i − J₁ Σ s_j s_{j+1} − J₂ Σ s_k s_{k+2}, n = 2, blocks ↓↓, ↓↑, ↑↓, ↑↑.
Hamiltonian nnn_ising(const NNNParams& params);

/// Ground-state orderings of the NNN chain: ↑↑↑↑, ↑↓↑↓, ↑↑↓↑↑↓, ↑↑↓↓↑↑↓↓.
enum class NNNPhase { P1 = 1, P2 = 2, P3 = 3, P4 = 4 };

const char* to_string(NNNPhase phase) noexcept;

/// Energy per spin of each candidate pattern, taking the better of the pattern and its
/// spin-flipped copy. Entry k belongs to phase P(k+1).
std::array<double, 4> nnn_phase_energies(const NNNParams& params);

/// Minimum-energy candidate; a tie within `tie_tolerance` throws PhaseBoundary.
NNNPhase nnn_ground_state_phase(const NNNParams& params, double tie_tolerance = 1e-9);

/// The phase whose pattern has spin period `period`, if any.
std::optional<NNNPhase> phase_of_period(std::size_t period);

/// Minimal spin period of the deterministic cycle a ground-state class machine runs on.
/// Follows the most probable transition from the class's first block.
std::size_t cycle_spin_period(const ClassMachine& machine, const BlockSpace& space);

/// β at which random-walk parameters are mapped onto the NN chain.
inline constexpr double kPBRWBeta = 1.0;

/// βJ = ½ ln(p/(1−p)), βB = ½ ln(r/(1−r)) at β = 1. Symbol 0 = left step, 1 = right step.
/// p or r equal to 0 or 1 throws LimitParameter.
NNParams pbrw_parameters(const PBRWParams& params);
Hamiltonian pbrw_hamiltonian(const PBRWParams& params);
BlockChain pbrw(const PBRWParams& params);

} // namespace isingem
