#include "isingem/transfer.hpp"

#include "isingem/errors.hpp"
#include "isingem/logmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

namespace isingem {

namespace {

using logmath::neg_inf;

/// Maximum cycle mean of the complete digraph with edge weights a[i][j] (Karp).
double max_cycle_mean(const std::vector<double>& a, std::size_t u) {
    std::vector<double> walk((u + 1) * u, neg_inf);
    walk[0] = 0.0;
    for (std::size_t k = 1; k <= u; ++k)
        for (std::size_t v = 0; v < u; ++v) {
            double best = neg_inf;
            for (std::size_t w = 0; w < u; ++w) {
                const double prev = walk[(k - 1) * u + w];
                if (prev != neg_inf) best = std::max(best, prev + a[w * u + v]);
            }
            walk[k * u + v] = best;
        }
    double mu = neg_inf;
    for (std::size_t v = 0; v < u; ++v) {
        const double full = walk[u * u + v];
        if (full == neg_inf) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < u; ++k) {
            const double part = walk[k * u + v];
            if (part == neg_inf) continue;
            worst = std::min(worst, (full - part) / static_cast<double>(u - k));
        }
        mu = std::max(mu, worst);
    }
    return mu;
}

/// Max-plus eigenvector φ of a − μ: a_ij − μ + φ_j ≤ φ_i with equality on at least one
/// edge per row, anchored on every critical node at once. Rescaling by exp(φ) brings every
/// entry of the matrix into (0, 1]. Anchoring on all critical classes keeps two degenerate
/// classes (as in symmetric ground states) from feeding one another after rescaling.
std::vector<double> max_plus_potential(const std::vector<double>& a, std::size_t u, double mu) {
    std::vector<double> dist(u * u);
    for (std::size_t i = 0; i < u * u; ++i) dist[i] = a[i] - mu;
    for (std::size_t k = 0; k < u; ++k)
        for (std::size_t i = 0; i < u; ++i) {
            const double ik = dist[i * u + k];
            for (std::size_t j = 0; j < u; ++j)
                dist[i * u + j] = std::max(dist[i * u + j], ik + dist[k * u + j]);
        }
    double best = neg_inf;
    for (std::size_t i = 0; i < u; ++i) best = std::max(best, dist[i * u + i]);
    const double tol = 1e-9 * std::max(1.0, std::abs(mu));
    std::vector<double> phi(u, neg_inf);
    for (std::size_t k = 0; k < u; ++k) {
        if (dist[k * u + k] < best - tol) continue;
        for (std::size_t i = 0; i < u; ++i) phi[i] = std::max(phi[i], i == k ? 0.0 : dist[i * u + k]);
    }
    return phi;
}

struct OneSided {
    double log_lambda;
    std::vector<double> log_vec;
    double bracket;
    std::size_t iterations;
};

using LogMatrix = std::vector<double>; // row-major u × u logarithms

/// log of (Wx)_i for log-scale W and x.
std::vector<double> log_apply(const LogMatrix& lw, const std::vector<double>& lx, std::size_t u) {
    std::vector<double> out(u), terms(u);
    for (std::size_t i = 0; i < u; ++i) {
        for (std::size_t j = 0; j < u; ++j) terms[j] = lw[i * u + j] + lx[j];
        out[i] = logmath::sum(terms);
    }
    return out;
}

/// Collatz–Wielandt bracket (max − min)/min of (Wx)_i / x_i, all in logs.
double log_collatz(const LogMatrix& lw, const std::vector<double>& lx, std::size_t u, double& log_lambda) {
    const auto ly = log_apply(lw, lx, u);
    double lo = std::numeric_limits<double>::infinity();
    double hi = neg_inf;
    for (std::size_t i = 0; i < u; ++i) {
        if (!std::isfinite(lx[i])) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, ly[i] - lx[i]);
        hi = std::max(hi, ly[i] - lx[i]);
    }
    log_lambda = logmath::sum(ly) - logmath::sum(lx);
    return std::expm1(hi - lo);
}

LogMatrix log_square(const LogMatrix& lb, std::size_t u) {
    LogMatrix out(u * u);
    std::vector<double> terms(u);
    double top = neg_inf;
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) {
            for (std::size_t k = 0; k < u; ++k) terms[k] = lb[i * u + k] + lb[k * u + j];
            out[i * u + j] = logmath::sum(terms);
            top = std::max(top, out[i * u + j]);
        }
    for (double& x : out) x -= top;
    return out;
}

/// Rank one entrywise: log b_ij + log b_pq = log b_iq + log b_pj within tol.
bool log_rank_one(const LogMatrix& lb, std::size_t u, double tol) {
    const auto pivot = static_cast<std::size_t>(std::max_element(lb.begin(), lb.end()) - lb.begin());
    const std::size_t p = pivot / u, q = pivot % u;
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j)
            if (std::abs(lb[i * u + j] + lb[p * u + q] - lb[i * u + q] - lb[p * u + j]) > tol) return false;
    return true;
}

/// Right Perron vector (logs) of W = exp(lw), whose rows each hold an entry ≈ 1.
OneSided scaled_perron(const LogMatrix& lw, std::size_t u, const PerronOptions& options) {
    OneSided out{0.0, std::vector<double>(u, 0.0), std::numeric_limits<double>::infinity(), 0};
    LogMatrix shifted = lw; // log(W + I)
    for (std::size_t i = 0; i < u; ++i) shifted[i * u + i] = logmath::add(shifted[i * u + i], 0.0);

    if (u <= options.dense_limit) {
        // Repeated squaring reaches (W + I)^(2^k), so weakly coupled degenerate classes (an
        // eigen-gap far below machine precision) still equilibrate after ~log2(1/gap) steps.
        // Once the power is rank one it commutes with W and its columns are the Perron vector.
        LogMatrix lb = shifted;
        for (std::size_t k = 0; k < options.max_squarings && !log_rank_one(lb, u, 1e-13); ++k) {
            lb = log_square(lb, u);
            ++out.iterations;
        }
        for (std::size_t i = 0; i < u; ++i)
            out.log_vec[i] = logmath::sum(std::span<const double>(lb).subspan(i * u, u));
    }

    // Shifted power iteration W + I polishes the vector (and is the whole solve above the
    // dense limit); the shift removes the periodic part of the spectrum that deterministic
    // cycles produce in the β → ∞ limit.
    out.bracket = log_collatz(lw, out.log_vec, u, out.log_lambda);
    std::size_t stalled = 0;
    const std::size_t budget = u <= options.dense_limit ? 64 : options.max_iterations;
    for (std::size_t it = 0; it < budget && out.bracket > options.tolerance; ++it) {
        auto next = log_apply(shifted, out.log_vec, u);
        const double top = *std::max_element(next.begin(), next.end());
        for (double& x : next) x -= top;
        double log_lambda = 0.0;
        const double bracket = log_collatz(lw, next, u, log_lambda);
        ++out.iterations;
        // Rounding floor: stop once the bracket is acceptable and no longer shrinking.
        stalled = bracket < out.bracket ? 0 : stalled + 1;
        if (bracket <= out.bracket) {
            out.log_vec = std::move(next);
            out.bracket = bracket;
            out.log_lambda = log_lambda;
        }
        if (stalled > 8 && out.bracket <= options.accept) break;
    }
    return out;
}

OneSided solve_side(const std::vector<double>& a, std::size_t u, const PerronOptions& options) {
    const double mu = max_cycle_mean(a, u);
    const auto phi = max_plus_potential(a, u, mu);
    LogMatrix lw(u * u);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) lw[i * u + j] = a[i * u + j] - mu + phi[j] - phi[i];
    auto out = scaled_perron(lw, u, options);
    out.log_lambda += mu;
    for (std::size_t i = 0; i < u; ++i) out.log_vec[i] += phi[i];
    return out;
}

} // namespace

PerronData perron(const std::vector<double>& log_matrix, std::size_t size,
                  const PerronOptions& options) {
    if (log_matrix.size() != size * size || size == 0)
        throw Error(ErrorKind::InvalidParameter, "perron: matrix shape mismatch");
    for (double x : log_matrix)
        if (!std::isfinite(x))
            throw Error(ErrorKind::NumericDomain, "perron: non-finite log entry");

    std::vector<double> transposed(size * size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) transposed[j * size + i] = log_matrix[i * size + j];

    const auto right = solve_side(log_matrix, size, options);
    const auto left = solve_side(transposed, size, options);

    PerronData out;
    out.residual = std::max(right.bracket, left.bracket);
    out.iterations = right.iterations + left.iterations;
    if (!(out.residual <= options.accept))
        throw ResidualError(ErrorKind::Convergence,
                            "Perron iteration did not converge (relative residual " +
                                std::to_string(out.residual) + ")",
                            out.residual);

    out.log_lambda = right.log_lambda;
    out.log_right = right.log_vec;
    const double rnorm = logmath::sum(out.log_right);
    for (double& x : out.log_right) x -= rnorm;

    out.log_left = left.log_vec;
    std::vector<double> overlap(size);
    for (std::size_t i = 0; i < size; ++i) overlap[i] = out.log_left[i] + out.log_right[i];
    const double lnorm = logmath::sum(overlap);
    for (double& x : out.log_left) x -= lnorm;
    return out;
}

TransferSystem::TransferSystem(double beta, std::vector<double> log_u, std::vector<double> log_v,
                               PerronData perron_data)
    : beta_(beta), log_u_(std::move(log_u)), log_v_(std::move(log_v)),
      perron_(std::move(perron_data)) {}

std::vector<double> TransferSystem::left() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = std::exp(perron_.log_left[i]);
    return out;
}

std::vector<double> TransferSystem::right() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = std::exp(perron_.log_right[i]);
    return out;
}

double TransferSystem::log_normalization() const {
    std::vector<double> ur(size()), lu(size());
    for (std::size_t i = 0; i < size(); ++i) {
        ur[i] = log_u_[i] + perron_.log_right[i];
        lu[i] = log_u_[i] + perron_.log_left[i];
    }
    return logmath::sum(ur) + logmath::sum(lu);
}

TransferSystem build_transfer(const Hamiltonian& h, double beta, const PerronOptions& options) {
    if (!std::isfinite(beta) || beta < 0.0)
        throw Error(ErrorKind::NumericDomain, "beta must be finite and >= 0");
    const auto energies = tabulate_block_energies(h);
    const std::size_t u = h.blocks().size();
    std::vector<double> log_u(u), log_v(u * u);
    for (std::size_t i = 0; i < u; ++i) {
        log_u[i] = -0.5 * beta * energies.intra[i];
        for (std::size_t j = 0; j < u; ++j)
            log_v[i * u + j] = -beta * (0.5 * energies.intra[i] + energies.cross[i * u + j] +
                                        0.5 * energies.intra[j]);
    }
    for (double x : log_v)
        if (!std::isfinite(x)) throw Error(ErrorKind::NumericDomain, "non-finite transfer weight");
    auto data = perron(log_v, u, options);
    return TransferSystem(beta, std::move(log_u), std::move(log_v), std::move(data));
}

std::vector<double> log_matmul(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t size) {
    std::vector<double> out(size * size);
    std::vector<double> terms(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            for (std::size_t k = 0; k < size; ++k) terms[k] = a[i * size + k] + b[k * size + j];
            out[i * size + j] = logmath::sum(terms);
        }
    return out;
}

double log_partition_function(const TransferSystem& ts, std::size_t blocks, Boundary boundary) {
    if (blocks < 1) throw Error(ErrorKind::InvalidLength, "partition function needs N >= 1");
    const std::size_t u = ts.size();
    std::vector<double> terms(u);
    if (boundary == Boundary::Open) {
        std::vector<double> v = ts.log_u();
        std::vector<double> next(u);
        for (std::size_t step = 1; step < blocks; ++step) {
            for (std::size_t i = 0; i < u; ++i) {
                for (std::size_t j = 0; j < u; ++j) terms[j] = ts.log_v(i, j) + v[j];
                next[i] = logmath::sum(terms);
            }
            v.swap(next);
        }
        for (std::size_t i = 0; i < u; ++i) terms[i] = ts.log_u(i) + v[i];
        return logmath::sum(terms);
    }

    // Periodic: repeated squaring of V in log domain.
    std::vector<double> result;
    std::vector<double> base = ts.log_v();
    for (std::size_t n = blocks; n > 0; n >>= 1) {
        if (n & 1U) result = result.empty() ? base : log_matmul(result, base, u);
        if (n > 1) base = log_matmul(base, base, u);
    }
    for (std::size_t i = 0; i < u; ++i) terms[i] = result[i * u + i];
    return logmath::sum(terms);
}

double asymptotic_log_partition(const TransferSystem& ts, std::size_t blocks, Boundary boundary) {
    const double n = static_cast<double>(blocks);
    if (boundary == Boundary::Periodic) return n * ts.log_lambda0();
    return ts.log_normalization() + (n - 1.0) * ts.log_lambda0();
}

} // namespace isingem
