#include "isingem/markov_chain.hpp"

#include "isingem/errors.hpp"
#include "isingem/logmath.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace isingem {

LocalCharacteristics local_characteristics(const TransferSystem& ts) {
    const std::size_t u = ts.size();
    LocalCharacteristics lc{u, std::vector<double>(u * u * u), std::vector<double>(u * u)};
    std::vector<double> terms(u);
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t m = 0; m < u; ++m) {
            for (std::size_t k = 0; k < u; ++k) terms[k] = ts.log_v(j, k) + ts.log_v(k, m);
            const double denom = logmath::sum(terms);
            for (std::size_t i = 0; i < u; ++i)
                lc.interior[(j * u + i) * u + m] = std::exp(terms[i] - denom);
        }
    for (std::size_t m = 0; m < u; ++m) {
        for (std::size_t k = 0; k < u; ++k) terms[k] = ts.log_u(k) + ts.log_v(k, m);
        const double denom = logmath::sum(terms);
        for (std::size_t i = 0; i < u; ++i) lc.first_block[i * u + m] = std::exp(terms[i] - denom);
    }
    return lc;
}

ConsistencyReport consistency_residual(const LocalCharacteristics& lc,
                                       const std::vector<double>& P) {
    const std::size_t u = lc.size;
    std::vector<double> two_step(u * u, 0.0);
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t l = 0; l < u; ++l)
            for (std::size_t m = 0; m < u; ++m)
                two_step[j * u + m] += P[j * u + l] * P[l * u + m];

    ConsistencyReport report;
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t m = 0; m < u; ++m) {
                const double r = std::abs(lc.at(j, i, m) * two_step[j * u + m] -
                                          P[j * u + i] * P[i * u + m]);
                if (!(r <= report.max_residual)) {
                    report = {r, j, i, m};
                }
            }
    return report;
}

BlockChain solve_stochastic(const TransferSystem& ts, double tolerance) {
    ConsistencyReport report;
    return solve_stochastic(ts, report, tolerance);
}

BlockChain solve_stochastic(const TransferSystem& ts, ConsistencyReport& report,
                            double tolerance) {
    const std::size_t u = ts.size();
    const auto& log_r = ts.log_right();
    const auto& log_l = ts.log_left();
    BlockChain chain{u, std::vector<double>(u * u), std::vector<double>(u)};

    std::vector<double> terms(u);
    for (std::size_t i = 0; i < u; ++i) {
        for (std::size_t k = 0; k < u; ++k) terms[k] = ts.log_v(i, k) + log_r[k];
        const double norm = logmath::sum(terms);
        for (std::size_t j = 0; j < u; ++j) chain.P[i * u + j] = std::exp(terms[j] - norm);
    }

    for (std::size_t i = 0; i < u; ++i) terms[i] = log_l[i] + log_r[i];
    const double norm = logmath::sum(terms);
    for (std::size_t i = 0; i < u; ++i) chain.pi[i] = std::exp(terms[i] - norm);

    report = consistency_residual(local_characteristics(ts), chain.P);
    if (!(report.max_residual <= tolerance))
        throw ResidualError(ErrorKind::InversionFailure,
                            "stochastic matrix fails the local-characteristic consistency check: "
                            "residual " + std::to_string(report.max_residual) + " at (j,i,m) = (" +
                                std::to_string(report.j) + "," + std::to_string(report.i) + "," +
                                std::to_string(report.m) + ")",
                            report.max_residual);
    return chain;
}

std::vector<double> gth_stationary(std::vector<double> a, std::size_t n) {
    for (std::size_t k = n; k-- > 1;) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += a[k * n + j];
        if (!(s > 0.0))
            throw Error(ErrorKind::ReducibleChain, "state reduction hit a closed subset");
        for (std::size_t i = 0; i < k; ++i) a[i * n + k] /= s;
        for (std::size_t i = 0; i < k; ++i) {
            const double aik = a[i * n + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) a[i * n + j] += aik * a[k * n + j];
        }
    }
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) x[j] += x[i] * a[i * n + j];
    double total = 0.0;
    for (double v : x) total += v;
    for (double& v : x) v /= total;
    return x;
}

const std::vector<double>& StationaryResult::pi() const {
    if (classes.size() != 1)
        throw Error(ErrorKind::ReducibleChain,
                    "chain has " + std::to_string(classes.size()) + " recurrent classes");
    return class_pi.front();
}

namespace {

/// Strongly connected components (Tarjan), in reverse topological order.
std::vector<std::vector<std::size_t>> strong_components(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    int counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : adj[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);
    return out;
}

} // namespace

StationaryResult stationary(const BlockChain& chain, double edge_threshold) {
    const std::size_t u = chain.size;
    const double cut = std::max(edge_threshold, kProbabilityFloor);
    std::vector<std::vector<std::size_t>> adj(u);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j)
            if (chain.at(i, j) > cut) adj[i].push_back(j);

    auto comps = strong_components(adj);
    std::vector<int> comp_of(u, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (std::size_t v : comps[c]) comp_of[v] = static_cast<int>(c);

    StationaryResult result;
    result.class_of.assign(u, -1);
    std::vector<std::vector<std::size_t>> closed;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        bool is_closed = true;
        for (std::size_t v : comps[c])
            for (std::size_t w : adj[v])
                if (comp_of[w] != static_cast<int>(c)) is_closed = false;
        if (is_closed) closed.push_back(comps[c]);
    }
    std::sort(closed.begin(), closed.end());

    for (const auto& members : closed) {
        const std::size_t k = members.size();
        std::vector<double> sub(k * k);
        for (std::size_t a = 0; a < k; ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < k; ++b) {
                const double p = chain.at(members[a], members[b]);
                sub[a * k + b] = p > cut ? p : 0.0;
                row += sub[a * k + b];
            }
            for (std::size_t b = 0; b < k; ++b) sub[a * k + b] /= row;
        }
        const auto local = gth_stationary(std::move(sub), k);
        std::vector<double> full(u, 0.0);
        for (std::size_t a = 0; a < k; ++a) {
            full[members[a]] = local[a];
            result.class_of[members[a]] = static_cast<int>(result.classes.size());
        }
        result.classes.push_back(members);
        result.class_pi.push_back(std::move(full));
    }
    return result;
}

BlockChain window_chain(const BlockChain& blocks, const BlockSpace& space) {
    const std::size_t u = blocks.size;
    BlockChain out{u, std::vector<double>(u * u, 0.0), blocks.pi};
    for (std::size_t w = 0; w < u; ++w)
        for (std::size_t eta = 0; eta < u; ++eta) {
            const Symbol lead = space.symbol_at(static_cast<BlockIndex>(eta), 0);
            const auto next = space.shift_append(static_cast<BlockIndex>(w), lead);
            out.P[w * u + next] += blocks.at(w, eta);
        }
    return out;
}

BlockChain spin_window_chain(const Hamiltonian& h, double beta) {
    const auto ts = build_transfer(h, beta);
    return window_chain(solve_stochastic(ts), h.blocks());
}

} // namespace isingem
