#pragma once

#include "isingem/spin_lattice.hpp"

#include <span>
#include <vector>

namespace isingem {

enum class Boundary { Open, Periodic };

/// Pairwise finite-range interaction with an external field.
///
/// Couplings are a dense table Λ_d(s, s′) for site distance d = 1..n, indexed by
/// alphabet symbols. The table must be symmetric in (s, s′) for every d; distances
/// beyond the range contribute nothing. Energies are in k_B = 1 units.
class Hamiltonian {
public:
    /// `couplings` is laid out as [d−1][s][s′], size n·θ·θ.
    Hamiltonian(BlockSpace blocks, double field, std::vector<double> couplings);

    /// Λ_d(s, s′) = −J_d · s · s′, with `J[d−1]` for d = 1..n.
    static Hamiltonian product_form(BlockSpace blocks, double field, std::span<const double> J);

    const BlockSpace& blocks() const noexcept { return blocks_; }
    std::size_t range() const noexcept { return blocks_.range(); }
    double field() const noexcept { return field_; }

    /// Λ_d(s, s′); zero for d > n.
    double coupling(std::size_t distance, Symbol s, Symbol t) const;
    std::span<const double> coupling_table() const noexcept { return couplings_; }

private:
    BlockSpace blocks_;
    double field_;
    std::vector<double> couplings_;
};

/// x_η: field term plus all pairs inside the block.
double intra_block_energy(const Hamiltonian& h, BlockIndex block);

/// y_{ηη′}: pairs straddling block η and the following block η′. Not symmetric in general.
double cross_block_energy(const Hamiltonian& h, BlockIndex block, BlockIndex next);

/// Energy as Σ x + Σ y over consecutive blocks. Requires L to be a multiple of n.
double chain_energy_blockwise(const Hamiltonian& h, std::span<const Symbol> spins,
                              Boundary boundary);

/// Energy summed directly over site pairs at distance ≤ n (wrapping modulo L when periodic).
double chain_energy_direct(const Hamiltonian& h, std::span<const Symbol> spins, Boundary boundary);

/// Block energies tabulated for every block (length υ) and block pair (row-major υ×υ).
struct BlockEnergies {
    std::vector<double> intra;
    std::vector<double> cross;
};

BlockEnergies tabulate_block_energies(const Hamiltonian& h);

} // namespace isingem
