#pragma once

#include "isingem/hamiltonian.hpp"

#include <cstddef>
#include <vector>

namespace isingem {

/// β used when a caller asks for the ground state (β → ∞). Log-domain arithmetic keeps
/// every quantity finite at this β for |J|, |B| of order one.
inline constexpr double kGroundStateBeta = 1e3;

/// Dominant eigen-data of a positive matrix given by its entrywise logarithm.
///
/// `log_right` is normalized so that Σ right = 1 and `log_left` so that ⟨left|right⟩ = 1.
struct PerronData {
    double log_lambda = 0.0;
    std::vector<double> log_left;
    std::vector<double> log_right;
    /// Collatz–Wielandt bracket width (max − min of (Wx)_i / x_i, relative) at exit,
    /// the worse of the left and right solves.
    double residual = 0.0;
    std::size_t iterations = 0;
};

struct PerronOptions {
    std::size_t dense_limit = 64;   ///< above this, power iteration only
    std::size_t max_squarings = 1100;
    std::size_t max_iterations = 100000;
    double tolerance = 1e-14;
    double accept = 1e-12;
};

/// Perron root and vectors of the υ×υ matrix exp(log_matrix) (row-major).
PerronData perron(const std::vector<double>& log_matrix, std::size_t size,
                  const PerronOptions& options = {});

/// Transfer-matrix data at one inverse temperature, stored as logarithms.
class TransferSystem {
public:
    TransferSystem(double beta, std::vector<double> log_u, std::vector<double> log_v,
                   PerronData perron_data);

    double beta() const noexcept { return beta_; }
    std::size_t size() const noexcept { return log_u_.size(); }

    const std::vector<double>& log_u() const noexcept { return log_u_; }
    const std::vector<double>& log_v() const noexcept { return log_v_; }
    double log_u(std::size_t i) const { return log_u_[i]; }
    double log_v(std::size_t i, std::size_t j) const { return log_v_[i * size() + j]; }

    double log_lambda0() const noexcept { return perron_.log_lambda; }
    const std::vector<double>& log_left() const noexcept { return perron_.log_left; }
    const std::vector<double>& log_right() const noexcept { return perron_.log_right; }
    const PerronData& perron_data() const noexcept { return perron_; }

    /// Probability-scale eigenvectors; entries may underflow at very large β.
    std::vector<double> left() const;
    std::vector<double> right() const;

    /// log M = log(⟨U|r⟩⟨l|U⟩).
    double log_normalization() const;

private:
    double beta_;
    std::vector<double> log_u_;
    std::vector<double> log_v_;
    PerronData perron_;
};

/// log U_η = −β x_η / 2 and log V_{ηη′} = −β (x_η/2 + y_{ηη′} + x_{η′}/2), plus Perron data.
TransferSystem build_transfer(const Hamiltonian& h, double beta, const PerronOptions& options = {});

/// Exact log Z for N blocks: log⟨U|V^{N−1}|U⟩ (open) or log Tr V^N (periodic).
double log_partition_function(const TransferSystem& ts, std::size_t blocks, Boundary boundary);

/// Large-N form: N log λ₀ (periodic) or log M + (N−1) log λ₀ (open).
double asymptotic_log_partition(const TransferSystem& ts, std::size_t blocks, Boundary boundary);

/// Row-major log-domain matrix product.
std::vector<double> log_matmul(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t size);

} // namespace isingem
