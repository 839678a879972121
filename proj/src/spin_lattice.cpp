#include "isingem/spin_lattice.hpp"

#include "isingem/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace isingem {

SpinAlphabet::SpinAlphabet(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2)
        throw Error(ErrorKind::InvalidParameter, "spin alphabet needs at least two values");
    for (std::size_t i = 0; i < values_.size(); ++i)
        for (std::size_t j = i + 1; j < values_.size(); ++j)
            if (values_[i] == values_[j])
                throw Error(ErrorKind::InvalidParameter, "spin alphabet values must be distinct");
}

SpinAlphabet SpinAlphabet::binary() { return SpinAlphabet({-1.0, 1.0}); }

double SpinAlphabet::value(Symbol s) const {
    if (s >= values_.size())
        throw Error(ErrorKind::InvalidBlock, "symbol " + std::to_string(s) + " outside alphabet");
    return values_[s];
}

BlockSpace::BlockSpace(SpinAlphabet alphabet, std::size_t range)
    : alphabet_(std::move(alphabet)), range_(range), size_(1) {
    if (range_ < 1) throw Error(ErrorKind::InvalidParameter, "interaction range must be >= 1");
    const std::size_t limit = std::numeric_limits<BlockIndex>::max();
    for (std::size_t i = 0; i < range_; ++i) {
        if (size_ > limit / theta())
            throw Error(ErrorKind::InvalidParameter, "block space too large");
        size_ *= theta();
    }
}

void BlockSpace::check_index(BlockIndex index) const {
    if (index >= size_)
        throw Error(ErrorKind::InvalidBlock,
                    "block index " + std::to_string(index) + " >= " + std::to_string(size_));
}

BlockIndex BlockSpace::encode(std::span<const Symbol> spins) const {
    if (spins.size() != range_)
        throw Error(ErrorKind::InvalidBlock, "block needs exactly " + std::to_string(range_) +
                                                 " spins, got " + std::to_string(spins.size()));
    BlockIndex index = 0;
    for (Symbol s : spins) {
        if (s >= theta())
            throw Error(ErrorKind::InvalidBlock, "symbol " + std::to_string(s) + " outside alphabet");
        index = index * static_cast<BlockIndex>(theta()) + s;
    }
    return index;
}

std::vector<Symbol> BlockSpace::decode(BlockIndex index) const {
    check_index(index);
    std::vector<Symbol> spins(range_);
    for (std::size_t i = range_; i-- > 0;) {
        spins[i] = index % theta();
        index /= static_cast<BlockIndex>(theta());
    }
    return spins;
}

Symbol BlockSpace::symbol_at(BlockIndex index, std::size_t i) const {
    check_index(index);
    for (std::size_t k = range_ - 1; k > i; --k) index /= static_cast<BlockIndex>(theta());
    return index % theta();
}

BlockIndex BlockSpace::shift_append(BlockIndex block, Symbol s) const {
    check_index(block);
    if (s >= theta())
        throw Error(ErrorKind::InvalidBlock, "symbol " + std::to_string(s) + " outside alphabet");
    const auto lead = static_cast<BlockIndex>(size_ / theta());
    return (block % lead) * static_cast<BlockIndex>(theta()) + s;
}

} // namespace isingem
