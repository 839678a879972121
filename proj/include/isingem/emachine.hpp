#pragma once

#include "isingem/hamiltonian.hpp"
#include "isingem/markov_chain.hpp"
#include "isingem/transfer.hpp"

#include <cstddef>
#include <vector>

namespace isingem {

/// Max-norm distance under which two rows of P are the same causal state.
inline constexpr double kMergeTolerance = 1e-9;

/// Grouping of blocks (or windows) into causal states.
struct CausalPartition {
    std::vector<std::size_t> state_of;            ///< per block
    std::vector<std::vector<std::size_t>> states; ///< blocks of each state, ascending
    std::vector<double> probs;                    ///< Pr(C) = Σ_{η∈C} π_η

    std::size_t size() const noexcept { return states.size(); }
    /// States carrying positive probability.
    std::size_t occupied() const noexcept;
};

/// All entropies are in bits.
struct MachineMetrics {
    double C_mu = 0.0;
    double h_mu = 0.0;    ///< per block
    double E_mu = 0.0;    ///< H[η] − h_μ
    double E_paper = 0.0; ///< C_μ − h_μ
    double H_block = 0.0;
    std::size_t n_states = 0;

    double C_mu_spin = 0.0;
    double h_mu_spin = 0.0; ///< per spin
    double E_spin = 0.0;    ///< C′_μ − n·h′_μ
    std::size_t n_states_spin = 0;
};

/// Rows of P equal within `tol` (max-norm) form one state. Clusters are grown by
/// union-find; a cluster holding a pair farther apart than `tol` raises PartitionAmbiguity.
CausalPartition build_partition(const BlockChain& chain, double tol = kMergeTolerance);

double statistical_complexity(const CausalPartition& partition);
double entropy_density(const BlockChain& chain);
double block_entropy(const BlockChain& chain);

struct ExcessEntropy {
    double E_mu;
    double E_paper;
};
ExcessEntropy excess_entropy(const BlockChain& chain, const CausalPartition& partition);

/// T^(a)[r][q] for every emitted symbol a, flattened [a][r][q], plus T = Σ_a T^(a).
struct LabeledTransitions {
    std::size_t states = 0;
    std::size_t symbols = 0;
    std::vector<double> labeled;
    std::vector<double> connectivity;

    double at(std::size_t symbol, std::size_t r, std::size_t q) const {
        return labeled[(symbol * states + r) * states + q];
    }
};

/// Block-emission transitions: from C_r, emitting η moves to ε(η) with Pr(η | C_r).
LabeledTransitions transition_matrices(const BlockChain& chain, const CausalPartition& partition);

/// Throws InternalConsistency if some (state, symbol) leads to more than one state.
void check_unifilar(const LabeledTransitions& transitions);

/// Spin-level states over sliding windows: windows with equal next-spin distributions whose
/// successors are again equivalent (coarsest such partition).
CausalPartition spin_partition(const BlockChain& windows, const BlockSpace& space,
                               double tol = kMergeTolerance);

/// Spin-emission transitions: from C_r, emitting s moves to the state of πw·s.
LabeledTransitions spin_transition_matrices(const BlockChain& windows, const BlockSpace& space,
                                            const CausalPartition& partition);

/// Block-level C_μ, h_μ, E_μ, E_paper, H[η] and state count of one chain.
MachineMetrics block_metrics(const BlockChain& chain, double tol = kMergeTolerance);

/// Fills the spin-level fields of `metrics` from the block chain.
void add_spin_metrics(MachineMetrics& metrics, const BlockChain& blocks, const BlockSpace& space,
                      double tol = kMergeTolerance);

/// Spin-level machine of a Hamiltonian at inverse temperature β.
MachineMetrics spin_machine(const Hamiltonian& h, double beta, double tol = kMergeTolerance);

/// A recurrent class of the block chain analysed on its own.
struct ClassMachine {
    std::vector<std::size_t> blocks; ///< global block index per local index
    double weight = 0.0;             ///< stationary mass of the class in the full chain
    BlockChain chain;                ///< restricted to the class, local indices
    CausalPartition partition;
    MachineMetrics metrics;          ///< block-level fields only
};

std::vector<ClassMachine> class_machines(const BlockChain& chain, double tol = kMergeTolerance,
                                         double edge_threshold = kEdgeThreshold);

struct AnalysisOptions {
    double merge_tolerance = kMergeTolerance;
    double edge_threshold = kEdgeThreshold;
    double consistency_tolerance = kConsistencyTolerance;
};

/// Full pipeline for one parameter point.
struct Analysis {
    double beta = 0.0;
    double log_lambda0 = 0.0;
    double max_residual = 0.0;
    BlockChain chain;
    CausalPartition partition;
    MachineMetrics metrics;             ///< ensemble (whole chain with its stationary law)
    std::vector<ClassMachine> classes;  ///< per recurrent class
};

Analysis analyze(const Hamiltonian& h, double beta, const AnalysisOptions& options = {});

/// Same pipeline starting from an already-built block chain (no transfer data).
Analysis analyze_chain(const BlockChain& chain, const BlockSpace& space,
                       const AnalysisOptions& options = {});

} // namespace isingem
