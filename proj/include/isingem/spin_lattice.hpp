#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isingem {

using BlockIndex = std::uint32_t;
using Symbol = std::uint32_t;

/// Ordered finite set of real spin values; position in the list is the symbol index.
class SpinAlphabet {
public:
    explicit SpinAlphabet(std::vector<double> values);

    /// (↓ = −1, ↑ = +1).
    static SpinAlphabet binary();

    std::size_t size() const noexcept { return values_.size(); }
    double value(Symbol s) const;
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// All θⁿ blocks of n consecutive spins in lexicographic order of the alphabet.
class BlockSpace {
public:
    BlockSpace(SpinAlphabet alphabet, std::size_t range);

    const SpinAlphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t theta() const noexcept { return alphabet_.size(); }
    std::size_t range() const noexcept { return range_; }
    std::size_t size() const noexcept { return size_; }

    BlockIndex encode(std::span<const Symbol> spins) const;
    std::vector<Symbol> decode(BlockIndex index) const;

    /// Symbol at position i (0 = oldest) of a block, without allocating.
    Symbol symbol_at(BlockIndex index, std::size_t i) const;

    /// Drops the oldest spin of `block` and appends `s` (the π operator followed by s).
    BlockIndex shift_append(BlockIndex block, Symbol s) const;

private:
    void check_index(BlockIndex index) const;

    SpinAlphabet alphabet_;
    std::size_t range_;
    std::size_t size_;
};

} // namespace isingem
