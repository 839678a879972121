#pragma once

#include "isingem/spin_lattice.hpp"
#include "isingem/transfer.hpp"

#include <cstddef>
#include <vector>

namespace isingem {

/// Default threshold above which a transition counts as an edge of the support graph.
inline constexpr double kEdgeThreshold = 1e-12;
/// Linear-domain values at or below this are exact zeros.
inline constexpr double kProbabilityFloor = 1e-300;
/// Certification bound on the local-characteristic consistency residual.
inline constexpr double kConsistencyTolerance = 1e-10;

/// Conditional block probabilities of the Markov field.
struct LocalCharacteristics {
    std::size_t size = 0;
    /// [j][i][m] = Pr(η_i | left neighbour η_j, right neighbour η_m).
    std::vector<double> interior;
    /// [i][m] = Pr(η_0 = i | η_1 = m) for the first block of an open chain.
    std::vector<double> first_block;

    double at(std::size_t j, std::size_t i, std::size_t m) const {
        return interior[(j * size + i) * size + m];
    }
};

/// Row-stochastic block transition matrix with its stationary distribution.
struct BlockChain {
    std::size_t size = 0;
    std::vector<double> P; ///< row-major, P[i][j] = Pr(next = j | current = i)
    std::vector<double> pi;

    double at(std::size_t i, std::size_t j) const { return P[i * size + j]; }
};

LocalCharacteristics local_characteristics(const TransferSystem& ts);

struct ConsistencyReport {
    double max_residual = 0.0;
    std::size_t j = 0, i = 0, m = 0; ///< worst triple
};

/// max over (j, i, m) of |Pr(η_i|η_j,η_m)·Σ_l P_jl P_lm − P_ji P_im|.
ConsistencyReport consistency_residual(const LocalCharacteristics& lc, const std::vector<double>& P);

/// Stochastic matrix recovered from the local characteristics through the Perron data:
/// P_ij = V_ij r_j / Σ_k V_ik r_k, with π_i ∝ l_i r_i. The result is certified against the
/// local-characteristic consistency relation and rejected above `tolerance`.
BlockChain solve_stochastic(const TransferSystem& ts, double tolerance = kConsistencyTolerance);

/// Same, also returning the certification report.
BlockChain solve_stochastic(const TransferSystem& ts, ConsistencyReport& report,
                            double tolerance = kConsistencyTolerance);

struct StationaryResult {
    /// Recurrent (closed) communicating classes of the support graph, ascending block order.
    std::vector<std::vector<std::size_t>> classes;
    /// One stationary vector per class, full length, zero outside the class.
    std::vector<std::vector<double>> class_pi;
    /// Class id per block, −1 for transient blocks.
    std::vector<int> class_of;

    bool irreducible() const noexcept { return classes.size() == 1; }
    /// The unique stationary vector; throws ReducibleChain if there are several classes.
    const std::vector<double>& pi() const;
};

/// Left dominant eigenvector(s) of P, computed per recurrent class by the subtraction-free
/// state-reduction (GTH) algorithm.
StationaryResult stationary(const BlockChain& chain, double edge_threshold = kEdgeThreshold);

/// Stationary vector of an irreducible row-stochastic matrix (GTH).
std::vector<double> gth_stationary(std::vector<double> P, std::size_t size);

/// Chain over sliding n-spin windows: w → shift_append(w, s) with probability
/// Σ_{η : η₀ = s} P[w][η]. Its stationary law is the block law.
BlockChain window_chain(const BlockChain& blocks, const BlockSpace& space);

BlockChain spin_window_chain(const Hamiltonian& h, double beta);

} // namespace isingem
