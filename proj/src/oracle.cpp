#include "isingem/oracle.hpp"

#include "isingem/errors.hpp"
#include "isingem/logmath.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <string>

namespace isingem {

namespace {

std::string format_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::size_t checked_power(std::size_t base, std::size_t exp) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        if (total > kEnumerationLimit / base)
            throw Error(ErrorKind::EnumerationTooLarge,
                        std::to_string(base) + "^" + std::to_string(exp) + " configurations exceed the limit of " +
                            std::to_string(kEnumerationLimit));
        total *= base;
    }
    return total;
}

struct EnumerationSetup {
    std::size_t u, n, total;
    std::vector<Symbol> block_spins; ///< u × n
};

EnumerationSetup setup(const Hamiltonian& h, double beta, std::size_t N) {
    if (N < 1) throw Error(ErrorKind::InvalidLength, "enumeration needs N >= 1");
    if (!std::isfinite(beta) || beta < 0.0) throw Error(ErrorKind::NumericDomain, "beta must be finite and >= 0");
    const auto& space = h.blocks();
    EnumerationSetup s{space.size(), space.range(), checked_power(space.size(), N), {}};
    s.block_spins.resize(s.u * s.n);
    for (std::size_t b = 0; b < s.u; ++b)
        for (std::size_t i = 0; i < s.n; ++i)
            s.block_spins[b * s.n + i] = space.symbol_at(static_cast<BlockIndex>(b), i);
    return s;
}

double config_log_weight(const Hamiltonian& h, double beta, std::size_t N, Boundary boundary,
                         const EnumerationSetup& s, std::size_t config, std::vector<Symbol>& spins) {
    std::size_t rest = config;
    for (std::size_t k = N; k-- > 0;) {
        const std::size_t b = rest % s.u;
        rest /= s.u;
        std::copy_n(s.block_spins.begin() + static_cast<std::ptrdiff_t>(b * s.n), s.n,
                    spins.begin() + static_cast<std::ptrdiff_t>(k * s.n));
    }
    return -beta * chain_energy_direct(h, spins, boundary);
}

GibbsEnsemble normalize(std::vector<double> log_w, const EnumerationSetup& s, double beta, std::size_t N,
                        Boundary boundary) {
    const double norm = logmath::sum(log_w);
    for (double& x : log_w) x -= norm;
    std::vector<double> probs(log_w.size());
    std::transform(log_w.begin(), log_w.end(), probs.begin(), [](double x) { return std::exp(x); });
    return GibbsEnsemble{s.u, N, beta, boundary, std::move(probs), std::move(log_w)};
}

// Normalizes consecutive groups of `width` log-weights into probabilities; empty groups give 0.
std::vector<double> normalize_groups(const std::vector<double>& log_w, std::size_t width) {
    std::vector<double> out(log_w.size(), 0.0);
    for (std::size_t g = 0; g < log_w.size(); g += width) {
        const std::span<const double> group(log_w.data() + g, width);
        const double z = logmath::sum(group);
        if (z == logmath::neg_inf) continue;
        for (std::size_t k = 0; k < width; ++k) out[g + k] = std::exp(group[k] - z);
    }
    return out;
}

} // namespace

std::size_t GibbsEnsemble::block_at(std::size_t config, std::size_t position) const {
    for (std::size_t k = position + 1; k < length; ++k) config /= block_count;
    return config % block_count;
}

GibbsEnsemble enumerate_gibbs(const Hamiltonian& h, double beta, std::size_t N, Boundary boundary) {
    const auto s = setup(h, beta, N);
    std::vector<double> log_w(s.total);
    const auto total = static_cast<std::ptrdiff_t>(s.total);
#pragma omp parallel
    {
        std::vector<Symbol> spins(N * s.n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t c = 0; c < total; ++c)
            log_w[static_cast<std::size_t>(c)] =
                config_log_weight(h, beta, N, boundary, s, static_cast<std::size_t>(c), spins);
    }
    return normalize(std::move(log_w), s, beta, N, boundary);
}

GibbsEnsemble enumerate_gibbs_serial(const Hamiltonian& h, double beta, std::size_t N, Boundary boundary) {
    const auto s = setup(h, beta, N);
    std::vector<double> log_w(s.total);
    std::vector<Symbol> spins(N * s.n);
    for (std::size_t c = 0; c < s.total; ++c) log_w[c] = config_log_weight(h, beta, N, boundary, s, c, spins);
    return normalize(std::move(log_w), s, beta, N, boundary);
}

EnumeratedConditionals conditional_from_enumeration(const GibbsEnsemble& ens, std::size_t position) {
    if (ens.length < 3 || position < 1 || position + 2 > ens.length)
        throw Error(ErrorKind::InvalidLength, "position " + std::to_string(position) +
                                                  " is not interior to a chain of " + std::to_string(ens.length) +
                                                  " blocks");
    const std::size_t u = ens.block_count;
    // Marginals are summed in the log domain: at low temperature whole contexts underflow.
    using logmath::neg_inf;
    std::vector<double> triple(u * u * u, neg_inf), first(u * u, neg_inf), pair(u * u, neg_inf);
    for (std::size_t c = 0; c < ens.log_probs.size(); ++c) {
        const double lp = ens.log_probs[c];
        const auto j = ens.block_at(c, position - 1);
        const auto i = ens.block_at(c, position);
        const auto m = ens.block_at(c, position + 1);
        // grouped so the conditioned-on blocks are outermost
        auto& t = triple[(j * u + m) * u + i];
        t = logmath::add(t, lp);
        auto& p = pair[i * u + m];
        p = logmath::add(p, lp);
        auto& f = first[ens.block_at(c, 1) * u + ens.block_at(c, 0)];
        f = logmath::add(f, lp);
    }

    const auto by_context = normalize_groups(triple, u);
    const auto by_next = normalize_groups(first, u);
    EnumeratedConditionals out{u, std::vector<double>(u * u * u), std::vector<double>(u * u), normalize_groups(pair, u)};
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t m = 0; m < u; ++m) out.interior[(j * u + i) * u + m] = by_context[(j * u + m) * u + i];
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t m = 0; m < u; ++m) out.first_block[i * u + m] = by_next[m * u + i];
    return out;
}

std::vector<double> prefix_conditional(const GibbsEnsemble& ens, std::size_t k) {
    if (k < 1 || k >= ens.length)
        throw Error(ErrorKind::InvalidLength, "prefix conditional needs 1 <= k < N");
    const std::size_t u = ens.block_count;
    std::size_t tail = 1;
    for (std::size_t t = k + 1; t < ens.length; ++t) tail *= u;
    std::vector<double> joint(ens.log_probs.size() / tail, logmath::neg_inf);
    for (std::size_t c = 0; c < ens.log_probs.size(); ++c) joint[c / tail] = logmath::add(joint[c / tail], ens.log_probs[c]);
    return normalize_groups(joint, u);
}

std::vector<double> naive_subchain_conditional(const Hamiltonian& h, double beta, std::size_t k) {
    if (k < 1) throw Error(ErrorKind::InvalidLength, "naive conditional needs k >= 1");
    const auto longer = enumerate_gibbs_serial(h, beta, k + 1, Boundary::Open);
    const auto shorter = enumerate_gibbs_serial(h, beta, k, Boundary::Open);
    const std::size_t u = longer.block_count;
    std::vector<double> out(longer.probs.size());
    // Undefined (NaN) where the shorter chain's law underflows.
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = shorter.probs[c / u] > 0.0 ? longer.probs[c] / shorter.probs[c / u] : std::nan("");
    return out;
}

double factorization_residual(const LocalCharacteristics& lc, const std::vector<double>& P) {
    return consistency_residual(lc, P).max_residual;
}

namespace {

/// Row-softmax of θ with θ_j0 pinned to zero; θ holds the free entries row by row.
Eigen::MatrixXd softmax_rows(const Eigen::VectorXd& theta, std::size_t u) {
    Eigen::MatrixXd P(u, u);
    for (std::size_t j = 0; j < u; ++j) {
        double hi = 0.0;
        for (std::size_t l = 1; l < u; ++l) hi = std::max(hi, theta[j * (u - 1) + l - 1]);
        double z = 0.0;
        for (std::size_t l = 0; l < u; ++l) {
            const double t = l == 0 ? 0.0 : theta[j * (u - 1) + l - 1];
            P(j, l) = std::exp(t - hi);
            z += P(j, l);
        }
        P.row(j) /= z;
    }
    return P;
}

/// ∂ log P_xy / ∂θ_xq = δ_yq − P_xq, as a u² × u(u−1) matrix.
Eigen::MatrixXd log_softmax_jacobian(const Eigen::MatrixXd& P, std::size_t u) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(u * u), static_cast<Eigen::Index>(u * (u - 1)));
    for (std::size_t x = 0; x < u; ++x)
        for (std::size_t y = 0; y < u; ++y)
            for (std::size_t q1 = 1; q1 < u; ++q1)
                d(static_cast<Eigen::Index>(x * u + y), static_cast<Eigen::Index>(x * (u - 1) + q1 - 1)) =
                    (y == q1 ? 1.0 : 0.0) - P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(q1));
    return d;
}

/// log q_l(j,m) − log c_l(j,m) with q_l(j,m) = P_jl P_lm / (P²)_jm, over the triples whose
/// target is representable, and the Jacobian in θ.
void residual_and_jacobian(const Eigen::VectorXd& theta, std::size_t u, const std::vector<double>& log_target,
                           const std::vector<std::size_t>& rows, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const Eigen::MatrixXd P = softmax_rows(theta, u);
    Eigen::MatrixXd logP = P.array().log();
    // Softmax entries can underflow; rebuild their logs from θ directly.
    for (std::size_t j = 0; j < u; ++j) {
        std::vector<double> t(u);
        for (std::size_t l = 0; l < u; ++l) t[l] = l == 0 ? 0.0 : theta[static_cast<Eigen::Index>(j * (u - 1) + l - 1)];
        const double z = logmath::sum(t);
        for (std::size_t l = 0; l < u; ++l) logP(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = t[l] - z;
    }
    r.resize(static_cast<Eigen::Index>(rows.size()));
    Eigen::MatrixXd dr_da;
    if (jac) dr_da = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(u * u));
    std::vector<double> z(u), q(u);
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const std::size_t idx = rows[row];
        const std::size_t m = idx % u, l = (idx / u) % u, j = idx / (u * u);
        for (std::size_t k = 0; k < u; ++k)
            z[k] = logP(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) +
                   logP(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
        const double norm = logmath::sum(z);
        r[static_cast<Eigen::Index>(row)] = z[l] - norm - log_target[idx];
        if (!jac) continue;
        for (std::size_t k = 0; k < u; ++k) q[k] = std::exp(z[k] - norm);
        // ∂(z_l − LSE z)/∂z_k = δ_lk − q_k, with z_k = a_jk + a_km.
        for (std::size_t k = 0; k < u; ++k) {
            const double d = (l == k ? 1.0 : 0.0) - q[k];
            dr_da(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j * u + k)) += d;
            dr_da(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k * u + m)) += d;
        }
    }
    if (!jac) return;
    *jac = dr_da * log_softmax_jacobian(P, u);
}

/// Largest |ΔP| per unit of log residual over the right singular directions of the
/// residual Jacobian. Large values mean the local characteristics barely pin P down.
double sensitivity(const Eigen::VectorXd& theta, std::size_t u, const Eigen::MatrixXd& jac) {
    const Eigen::MatrixXd P = softmax_rows(theta, u);
    Eigen::MatrixXd dP = log_softmax_jacobian(P, u);
    for (std::size_t x = 0; x < u * u; ++x) dP.row(static_cast<Eigen::Index>(x)) *= P(static_cast<Eigen::Index>(x / u), static_cast<Eigen::Index>(x % u));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(u * (u - 1)); ++k) {
        const double move = (dP * svd.matrixV().col(k)).lpNorm<Eigen::Infinity>();
        const double sigma = k < sv.size() ? sv[k] : 0.0;
        if (move > 0.0) worst = std::max(worst, sigma > 0.0 ? move / sigma : std::numeric_limits<double>::infinity());
    }
    return worst;
}

} // namespace

BlockChain quadratic_system_solve(const LocalCharacteristics& lc, const QuadraticOptions& options) {
    const std::size_t u = lc.size;
    if (u < 2 || u > 4)
        throw Error(ErrorKind::InvalidParameter, "quadratic system solver handles 2 <= size <= 4 only");

    // Per (j, m) the homogeneous system c·ΣY − Y = 0 must have a one-dimensional null space;
    // every null vector is then proportional to c itself, which keeps tiny entries exact.
    std::vector<double> log_target(u * u * u, logmath::neg_inf);
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t m = 0; m < u; ++m) {
            Eigen::MatrixXd M = -Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
            double total = 0.0;
            for (std::size_t i = 0; i < u; ++i) {
                total += lc.at(j, i, m);
                for (std::size_t l = 0; l < u; ++l)
                    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) += lc.at(j, i, m);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            if (!(sv[static_cast<Eigen::Index>(u - 2)] > 1e-8))
                throw Error(ErrorKind::QuadraticSolveFailure,
                            "quadratic system: null space of the linear system is not one-dimensional at (j,m) = (" +
                                std::to_string(j) + "," + std::to_string(m) + ")");
            Eigen::VectorXd y = svd.matrixV().col(static_cast<Eigen::Index>(u - 1));
            y /= y.sum();
            for (std::size_t l = 0; l < u; ++l) {
                const double c = lc.at(j, l, m) / total;
                if (std::abs(y[static_cast<Eigen::Index>(l)] - c) > 1e-10)
                    throw Error(ErrorKind::QuadraticSolveFailure, "quadratic system: null vector disagrees with c");
                if (c > kProbabilityFloor) {
                    log_target[(j * u + l) * u + m] = std::log(c);
                    rows.push_back((j * u + l) * u + m);
                }
            }
        }

    // Levenberg–Marquardt from the uniform matrix (θ = 0), continued along tempered targets
    // c^t / Σ c^t, t → 1. The tempered targets are the local characteristics of the same
    // model at inverse temperature βt, so every stage has an exact solution and the uniform
    // matrix solves t = 0.
    double spread = 0.0;
    for (auto idx : rows) spread = std::max(spread, -log_target[idx]);
    std::vector<double> stage_target(log_target.size(), logmath::neg_inf);
    const auto temper = [&](double t) {
        for (std::size_t j = 0; j < u; ++j)
            for (std::size_t m = 0; m < u; ++m) {
                std::vector<double> terms;
                for (std::size_t l = 0; l < u; ++l)
                    if (log_target[(j * u + l) * u + m] != logmath::neg_inf)
                        terms.push_back(t * log_target[(j * u + l) * u + m]);
                const double z = logmath::sum(terms);
                for (std::size_t l = 0; l < u; ++l) {
                    const auto idx = (j * u + l) * u + m;
                    if (log_target[idx] != logmath::neg_inf) stage_target[idx] = t * log_target[idx] - z;
                }
            }
    };

    const auto free = static_cast<Eigen::Index>(u * (u - 1));
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(free);
    Eigen::VectorXd r, r_try;
    Eigen::MatrixXd J;
    double t = std::min(1.0, 1.0 / std::max(spread, 1e-300));
    for (;;) {
        temper(t);
        residual_and_jacobian(theta, u, stage_target, rows, r, &J);
        double cost = r.squaredNorm();
        double damping = 1e-3;
        // The last stage creeps along nearly flat directions when the chain is close to
        // reducible, so it gets a larger budget.
        const std::size_t budget = t >= 1.0 ? 20 * options.max_iterations : options.max_iterations;
        for (std::size_t it = 0; it < budget && r.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
            const Eigen::MatrixXd JtJ = J.transpose() * J;
            const Eigen::VectorXd g = J.transpose() * r;
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += damping * (JtJ.diagonal().array() + 1e-12);
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd trial = theta + step;
            residual_and_jacobian(trial, u, stage_target, rows, r_try, nullptr);
            const double trial_cost = r_try.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost < cost) {
                theta = trial;
                cost = trial_cost;
                residual_and_jacobian(theta, u, stage_target, rows, r, &J);
                damping = std::max(damping / 3.0, 1e-15);
                if (step.lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + theta.lpNorm<Eigen::Infinity>())) break;
            } else {
                damping *= 4.0;
                if (damping > 1e15) break;
            }
        }
        if (t >= 1.0) break;
        t = std::min(1.0, 1.5 * t);
    }
    const double log_residual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;

    const Eigen::MatrixXd P = softmax_rows(theta, u);
    BlockChain chain{u, std::vector<double>(u * u), {}};
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t l = 0; l < u; ++l) chain.P[j * u + l] = P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
    const double residual = factorization_residual(lc, chain.P);
    if (!(residual <= options.tolerance))
        throw ResidualError(ErrorKind::QuadraticSolveFailure,
                            "quadratic system: factorization residual " + std::to_string(residual) +
                                " above tolerance " + std::to_string(options.tolerance),
                            residual);
    if (!(log_residual <= options.log_tolerance))
        throw ResidualError(ErrorKind::QuadraticSolveFailure,
                            "quadratic system: relative factorization residual " + std::to_string(log_residual) +
                                " above tolerance " + std::to_string(options.log_tolerance),
                            log_residual);
    // Targets carry rounding of order ε·|log c|; what P movement can that much residual hide?
    double scale = 0.0;
    for (auto idx : rows) scale = std::max(scale, std::abs(log_target[idx]));
    const double noise = std::max(log_residual, 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + scale));
    const double spread_p = noise * sensitivity(theta, u, J);
    if (!(spread_p <= options.identifiability))
        throw ResidualError(ErrorKind::QuadraticSolveFailure,
                            "quadratic system: ill-conditioned, local characteristics fix P only to about " +
                                format_short(spread_p),
                            spread_p);
    try {
        chain.pi = gth_stationary(chain.P, u);
    } catch (const Error& e) {
        throw Error(ErrorKind::QuadraticSolveFailure, std::string("quadratic system: recovered P has no stationary law: ") + e.what());
    }
    return chain;
}

namespace {

std::size_t draw(const std::vector<double>& cdf, std::size_t offset, std::size_t size, double x) {
    for (std::size_t k = 0; k < size; ++k)
        if (x < cdf[offset + k]) return k;
    // x landed in the rounding gap above the last partial sum: take the last live entry.
    for (std::size_t k = size; k-- > 0;)
        if (cdf[offset + k] > (k ? cdf[offset + k - 1] : 0.0)) return k;
    return size - 1;
}

std::vector<Symbol> run_chain(const BlockChain& chain, const std::vector<std::size_t>& global,
                              const BlockSpace& space, std::size_t length_blocks, std::uint64_t seed) {
    const std::size_t u = chain.size;
    std::vector<double> cdf(u * u), pi_cdf(u);
    for (std::size_t i = 0; i < u; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < u; ++j) cdf[i * u + j] = (acc += chain.at(i, j));
    }
    std::partial_sum(chain.pi.begin(), chain.pi.end(), pi_cdf.begin());

    Rng rng(seed);
    std::vector<Symbol> out;
    out.reserve(length_blocks * space.range());
    if (length_blocks == 0) return out;
    std::size_t state = draw(pi_cdf, 0, u, rng.uniform());
    for (std::size_t t = 0; t < length_blocks; ++t) {
        if (t > 0) state = draw(cdf, state * u, u, rng.uniform());
        const auto block = static_cast<BlockIndex>(global[state]);
        for (std::size_t i = 0; i < space.range(); ++i) out.push_back(space.symbol_at(block, i));
    }
    return out;
}

} // namespace

std::vector<Symbol> sample_sequence(const BlockChain& chain, const BlockSpace& space, std::size_t length_blocks,
                                    std::uint64_t seed) {
    if (chain.size != space.size()) throw Error(ErrorKind::InvalidParameter, "chain size does not match block space");
    const auto st = stationary(chain);
    if (!st.irreducible())
        throw Error(ErrorKind::ReducibleChain, "chain has " + std::to_string(st.classes.size()) +
                                                   " recurrent classes; sample one class explicitly");
    std::vector<std::size_t> identity(chain.size);
    std::iota(identity.begin(), identity.end(), 0);
    BlockChain stationary_chain = chain;
    stationary_chain.pi = st.pi();
    return run_chain(stationary_chain, identity, space, length_blocks, seed);
}

std::vector<Symbol> sample_sequence(const ClassMachine& machine, const BlockSpace& space, std::size_t length_blocks,
                                    std::uint64_t seed) {
    return run_chain(machine.chain, machine.blocks, space, length_blocks, seed);
}

EntropyEstimate empirical_entropy_rate(const std::vector<Symbol>& seq, std::size_t n, std::size_t theta) {
    if (theta < 2) throw Error(ErrorKind::InvalidParameter, "alphabet needs at least two symbols");
    std::size_t contexts = 1;
    for (std::size_t k = 0; k < n; ++k) contexts *= theta;
    const double needed = 1e5 * static_cast<double>(contexts);
    if (static_cast<double>(seq.size()) < needed)
        throw Error(ErrorKind::Undersampled, "entropy estimate needs at least " + std::to_string(static_cast<std::size_t>(needed)) +
                                                 " symbols, got " + std::to_string(seq.size()));

    std::vector<std::size_t> ctx_of(seq.size(), 0);
    std::size_t ctx = 0;
    for (std::size_t t = 0; t < n; ++t) ctx = (ctx * theta + seq[t]) % contexts;
    std::vector<double> counts(contexts * theta, 0.0);
    for (std::size_t t = n; t < seq.size(); ++t) {
        if (seq[t] >= theta) throw Error(ErrorKind::InvalidParameter, "symbol outside alphabet");
        ctx_of[t] = ctx;
        counts[ctx * theta + seq[t]] += 1.0;
        ctx = n ? (ctx * theta + seq[t]) % contexts : 0;
    }
    std::vector<double> surprisal(contexts * theta, 0.0);
    for (std::size_t c = 0; c < contexts; ++c) {
        double total = 0.0;
        for (std::size_t s = 0; s < theta; ++s) total += counts[c * theta + s];
        for (std::size_t s = 0; s < theta; ++s)
            if (counts[c * theta + s] > 0.0) surprisal[c * theta + s] = -std::log2(counts[c * theta + s] / total);
    }

    const std::size_t T = seq.size() - n;
    const std::size_t per = T / kEntropyBatches;
    std::vector<double> batch(kEntropyBatches, 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < T; ++k) {
        const std::size_t t = n + k;
        const double v = surprisal[ctx_of[t] * theta + seq[t]];
        sum += v;
        const std::size_t b = std::min(k / per, kEntropyBatches - 1);
        batch[b] += v;
    }
    EntropyEstimate est;
    est.bits = sum / static_cast<double>(T);
    double mean = 0.0;
    for (std::size_t b = 0; b < kEntropyBatches; ++b) {
        const std::size_t len = b + 1 < kEntropyBatches ? per : T - per * (kEntropyBatches - 1);
        batch[b] /= static_cast<double>(len);
        mean += batch[b];
    }
    mean /= static_cast<double>(kEntropyBatches);
    double var = 0.0;
    for (double x : batch) var += (x - mean) * (x - mean);
    var /= static_cast<double>(kEntropyBatches - 1);
    est.standard_error = std::sqrt(var / static_cast<double>(kEntropyBatches));
    return est;
}

} // namespace isingem
