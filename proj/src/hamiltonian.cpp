#include "isingem/hamiltonian.hpp"

#include "isingem/errors.hpp"

#include <cmath>
#include <string>

namespace isingem {

Hamiltonian::Hamiltonian(BlockSpace blocks, double field, std::vector<double> couplings)
    : blocks_(std::move(blocks)), field_(field), couplings_(std::move(couplings)) {
    const std::size_t theta = blocks_.theta();
    const std::size_t n = blocks_.range();
    if (couplings_.size() != n * theta * theta)
        throw Error(ErrorKind::InvalidParameter,
                    "coupling table must have n*theta*theta = " + std::to_string(n * theta * theta) +
                        " entries, got " + std::to_string(couplings_.size()));
    if (!std::isfinite(field_)) throw Error(ErrorKind::NumericDomain, "field is not finite");
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t s = 0; s < theta; ++s)
            for (std::size_t t = 0; t < theta; ++t) {
                const double a = couplings_[(d * theta + s) * theta + t];
                const double b = couplings_[(d * theta + t) * theta + s];
                if (!std::isfinite(a)) throw Error(ErrorKind::NumericDomain, "coupling is not finite");
                if (a != b)
                    throw Error(ErrorKind::InvalidParameter,
                                "coupling table is not symmetric at distance " + std::to_string(d + 1));
            }
}

Hamiltonian Hamiltonian::product_form(BlockSpace blocks, double field, std::span<const double> J) {
    const std::size_t theta = blocks.theta();
    const std::size_t n = blocks.range();
    if (J.size() != n)
        throw Error(ErrorKind::InvalidParameter,
                    "product form needs one coupling per distance (" + std::to_string(n) + ")");
    std::vector<double> table(n * theta * theta);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t s = 0; s < theta; ++s)
            for (std::size_t t = 0; t < theta; ++t)
                table[(d * theta + s) * theta + t] =
                    -J[d] * blocks.alphabet().value(static_cast<Symbol>(s)) *
                    blocks.alphabet().value(static_cast<Symbol>(t));
    return Hamiltonian(std::move(blocks), field, std::move(table));
}

double Hamiltonian::coupling(std::size_t distance, Symbol s, Symbol t) const {
    const std::size_t theta = blocks_.theta();
    if (s >= theta || t >= theta) throw Error(ErrorKind::InvalidBlock, "symbol outside alphabet");
    if (distance == 0 || distance > range()) return 0.0;
    return couplings_[((distance - 1) * theta + s) * theta + t];
}

double intra_block_energy(const Hamiltonian& h, BlockIndex block) {
    const auto spins = h.blocks().decode(block);
    const auto& alphabet = h.blocks().alphabet();
    double field_sum = 0.0;
    for (Symbol s : spins) field_sum += alphabet.value(s);
    double energy = -h.field() * field_sum;
    for (std::size_t i = 0; i + 1 < spins.size(); ++i)
        for (std::size_t k = i + 1; k < spins.size(); ++k)
            energy += h.coupling(k - i, spins[i], spins[k]);
    return energy;
}

double cross_block_energy(const Hamiltonian& h, BlockIndex block, BlockIndex next) {
    const auto left = h.blocks().decode(block);
    const auto right = h.blocks().decode(next);
    const std::size_t n = h.range();
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k)
            energy += h.coupling((n - i) + k, left[i], right[k]);
    return energy;
}

double chain_energy_blockwise(const Hamiltonian& h, std::span<const Symbol> spins,
                              Boundary boundary) {
    const std::size_t n = h.range();
    if (spins.empty() || spins.size() % n != 0)
        throw Error(ErrorKind::InvalidLength, "chain length " + std::to_string(spins.size()) +
                                                  " is not a positive multiple of n = " +
                                                  std::to_string(n));
    const std::size_t N = spins.size() / n;
    std::vector<BlockIndex> blocks(N);
    for (std::size_t p = 0; p < N; ++p) blocks[p] = h.blocks().encode(spins.subspan(p * n, n));

    double energy = intra_block_energy(h, blocks[0]);
    for (std::size_t p = 1; p < N; ++p) {
        energy += cross_block_energy(h, blocks[p - 1], blocks[p]);
        energy += intra_block_energy(h, blocks[p]);
    }
    if (boundary == Boundary::Periodic) energy += cross_block_energy(h, blocks[N - 1], blocks[0]);
    return energy;
}

double chain_energy_direct(const Hamiltonian& h, std::span<const Symbol> spins, Boundary boundary) {
    const auto& alphabet = h.blocks().alphabet();
    const std::size_t L = spins.size();
    double field_sum = 0.0;
    for (Symbol s : spins) field_sum += alphabet.value(s);
    double energy = -h.field() * field_sum;
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t d = 1; d <= h.range(); ++d) {
            std::size_t j = i + d;
            if (j >= L) {
                if (boundary == Boundary::Open) break;
                j %= L;
            }
            energy += h.coupling(d, spins[i], spins[j]);
        }
    return energy;
}

BlockEnergies tabulate_block_energies(const Hamiltonian& h) {
    const std::size_t u = h.blocks().size();
    BlockEnergies out{std::vector<double>(u), std::vector<double>(u * u)};
    for (std::size_t i = 0; i < u; ++i) {
        out.intra[i] = intra_block_energy(h, static_cast<BlockIndex>(i));
        for (std::size_t j = 0; j < u; ++j)
            out.cross[i * u + j] =
                cross_block_energy(h, static_cast<BlockIndex>(i), static_cast<BlockIndex>(j));
    }
    return out;
}

} // namespace isingem
