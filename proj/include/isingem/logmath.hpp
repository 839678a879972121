#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace isingem::logmath {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow.
inline double add(double a, double b) noexcept {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double sum(std::span<const double> xs) noexcept {
    double hi = neg_inf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

/// x·log2(x) with the 0·log 0 = 0 convention.
inline double xlog2x(double x) noexcept {
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

} // namespace isingem::logmath
