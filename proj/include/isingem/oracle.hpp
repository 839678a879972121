#pragma once

#include "isingem/emachine.hpp"
#include "isingem/hamiltonian.hpp"
#include "isingem/markov_chain.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace isingem {

/// Upper bound on υ^N for exhaustive enumeration.
inline constexpr std::size_t kEnumerationLimit = 10'000'000;

/// Exact Gibbs law over every sequence of N blocks. Configuration c stores block k as the
/// k-th base-υ digit counted from the most significant end.
struct GibbsEnsemble {
    std::size_t block_count = 0; ///< υ
    std::size_t length = 0;      ///< N
    double beta = 0.0;
    Boundary boundary = Boundary::Open;
    std::vector<double> probs;
    std::vector<double> log_probs; ///< kept so conditionals on vanishing contexts stay defined

    std::size_t block_at(std::size_t config, std::size_t position) const;
};

/// Weights e^{−βΛ} from the direct site-pair energy, filled in parallel.
GibbsEnsemble enumerate_gibbs(const Hamiltonian& h, double beta, std::size_t N, Boundary boundary);

/// Single-threaded reference for enumerate_gibbs.
GibbsEnsemble enumerate_gibbs_serial(const Hamiltonian& h, double beta, std::size_t N,
                                     Boundary boundary);

/// Conditionals obtained by summing the exhaustive table.
struct EnumeratedConditionals {
    std::size_t size = 0;
    std::vector<double> interior;    ///< [j][i][m] = Pr(η_pos = i | η_{pos−1} = j, η_{pos+1} = m)
    std::vector<double> first_block; ///< [i][m] = Pr(η_0 = i | η_1 = m)
    std::vector<double> one_step;    ///< [i][k] = Pr(η_{pos+1} = k | η_pos = i)
};

/// Requires 1 ≤ position ≤ N − 2.
EnumeratedConditionals conditional_from_enumeration(const GibbsEnsemble& ens, std::size_t position);

/// Pr(η_k | η_0 … η_{k−1}) from the exhaustive table, indexed by the (k+1)-block prefix code.
std::vector<double> prefix_conditional(const GibbsEnsemble& ens, std::size_t k);

/// The same conditional computed the wrong way: as a ratio of Gibbs laws of isolated chains
/// of k+1 and k blocks, as if a sub-chain were a chain of its own.
std::vector<double> naive_subchain_conditional(const Hamiltonian& h, double beta, std::size_t k);

struct QuadraticOptions {
    std::size_t max_iterations = 500;
    double tolerance = 1e-8;     ///< on the absolute factorization residual
    /// On the largest log-ratio residual among representable targets. This catches a fit
    /// that settled in a wrong basin while every absolute residual is tiny.
    double log_tolerance = 1e-9;
    /// Largest P movement that rounding-level residuals may hide. Near-decomposable chains
    /// put the information that fixes P in entries far below working precision.
    double identifiability = 1e-8;
};

/// Stochastic matrix from local characteristics alone: per (j, m) the homogeneous linear
/// system c·ΣY − Y = 0 is solved for Y(j,m) up to scale, then Y_l(j,m) ∝ P_jl P_lm is
/// factored by damped Gauss–Newton from the uniform matrix. Limited to υ ≤ 4.
BlockChain quadratic_system_solve(const LocalCharacteristics& lc, const QuadraticOptions& options = {});

/// max |c_l(j,m)·(P²)_jm − P_jl P_lm|.
double factorization_residual(const LocalCharacteristics& lc, const std::vector<double>& P);

/// 64-bit Mersenne twister; uniforms on [0, 1) from the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
    static const char* name() noexcept { return "mt19937_64"; }

private:
    std::mt19937_64 engine_;
};

/// Stationary realization of an irreducible chain, flattened to spin symbols.
/// Throws ReducibleChain when the chain has several recurrent classes.
std::vector<Symbol> sample_sequence(const BlockChain& chain, const BlockSpace& space,
                                    std::size_t length_blocks, std::uint64_t seed);

/// Realization of a single recurrent class.
std::vector<Symbol> sample_sequence(const ClassMachine& machine, const BlockSpace& space,
                                    std::size_t length_blocks, std::uint64_t seed);

struct EntropyEstimate {
    double bits = 0.0;
    double standard_error = 0.0;
};

/// Number of batches for the batch-means standard error.
inline constexpr std::size_t kEntropyBatches = 50;

/// Plug-in H[s_t | s_{t−n} … s_{t−1}] in bits. The standard error comes from batch means of
/// the per-site surprisal. Needs at least 10⁵·θⁿ spins.
EntropyEstimate empirical_entropy_rate(const std::vector<Symbol>& seq, std::size_t n, std::size_t theta);

} // namespace isingem
