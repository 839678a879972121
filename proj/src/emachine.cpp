#include "isingem/emachine.hpp"

#include "isingem/errors.hpp"
#include "isingem/logmath.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace isingem {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

double max_distance(const std::vector<double>& rows, std::size_t dim, std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::abs(rows[a * dim + k] - rows[b * dim + k]));
    return d;
}

/// Labels vectors (row-major, `count` × `dim`) by tolerance clustering; labels are numbered
/// in order of each cluster's smallest member.
std::vector<std::size_t> cluster_rows(const std::vector<double>& rows, std::size_t count,
                                      std::size_t dim, double tol) {
    std::vector<std::size_t> parent(count);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = a + 1; b < count; ++b)
            if (max_distance(rows, dim, a, b) <= tol) {
                const auto ra = find_root(parent, a);
                const auto rb = find_root(parent, b);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }

    std::vector<std::size_t> label(count);
    std::map<std::size_t, std::size_t> ids;
    for (std::size_t a = 0; a < count; ++a) {
        const auto root = find_root(parent, a);
        const auto [it, inserted] = ids.try_emplace(root, ids.size());
        label[a] = it->second;
    }

    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = a + 1; b < count; ++b)
            if (label[a] == label[b]) {
                const double d = max_distance(rows, dim, a, b);
                if (d > tol)
                    throw ResidualError(ErrorKind::PartitionAmbiguity,
                                        "rows " + std::to_string(a) + " and " + std::to_string(b) +
                                            " are chained into one state but differ by " +
                                            std::to_string(d),
                                        d);
            }
    return label;
}

CausalPartition make_partition(const std::vector<std::size_t>& label, const std::vector<double>& pi) {
    CausalPartition part;
    part.state_of = label;
    std::size_t n = 0;
    for (auto l : label) n = std::max(n, l + 1);
    part.states.assign(n, {});
    part.probs.assign(n, 0.0);
    for (std::size_t i = 0; i < label.size(); ++i) {
        part.states[label[i]].push_back(i);
        part.probs[label[i]] += pi[i];
    }
    return part;
}

double shannon_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) h -= logmath::xlog2x(x);
    return h;
}

/// Next-spin distribution e_w[s] of each window, row-major u × θ.
std::vector<double> emissions(const BlockChain& windows, const BlockSpace& space) {
    const std::size_t u = windows.size;
    const std::size_t theta = space.theta();
    std::vector<double> e(u * theta);
    for (std::size_t w = 0; w < u; ++w)
        for (std::size_t s = 0; s < theta; ++s)
            e[w * theta + s] =
                windows.at(w, space.shift_append(static_cast<BlockIndex>(w), static_cast<Symbol>(s)));
    return e;
}

} // namespace

std::size_t CausalPartition::occupied() const noexcept {
    return static_cast<std::size_t>(std::count_if(probs.begin(), probs.end(),
                                                  [](double p) { return p > 0.0; }));
}

CausalPartition build_partition(const BlockChain& chain, double tol) {
    return make_partition(cluster_rows(chain.P, chain.size, chain.size, tol), chain.pi);
}

double statistical_complexity(const CausalPartition& partition) {
    return shannon_bits(partition.probs);
}

double entropy_density(const BlockChain& chain) {
    double h = 0.0;
    for (std::size_t j = 0; j < chain.size; ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < chain.size; ++i) row -= logmath::xlog2x(chain.at(j, i));
        h += chain.pi[j] * row;
    }
    return h;
}

double block_entropy(const BlockChain& chain) { return shannon_bits(chain.pi); }

ExcessEntropy excess_entropy(const BlockChain& chain, const CausalPartition& partition) {
    const double h = entropy_density(chain);
    return {block_entropy(chain) - h, statistical_complexity(partition) - h};
}

LabeledTransitions transition_matrices(const BlockChain& chain, const CausalPartition& partition) {
    const std::size_t k = partition.size();
    const std::size_t u = chain.size;
    LabeledTransitions t{k, u, std::vector<double>(u * k * k, 0.0), std::vector<double>(k * k, 0.0)};
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t rep = partition.states[r].front();
        for (std::size_t eta = 0; eta < u; ++eta) {
            const double p = chain.at(rep, eta);
            if (p <= 0.0) continue;
            const std::size_t q = partition.state_of[eta];
            t.labeled[(eta * k + r) * k + q] += p;
            t.connectivity[r * k + q] += p;
        }
    }
    check_unifilar(t);
    return t;
}

void check_unifilar(const LabeledTransitions& t) {
    for (std::size_t a = 0; a < t.symbols; ++a)
        for (std::size_t r = 0; r < t.states; ++r) {
            std::size_t targets = 0;
            for (std::size_t q = 0; q < t.states; ++q)
                if (t.at(a, r, q) > 0.0) ++targets;
            if (targets > 1)
                throw Error(ErrorKind::InternalConsistency,
                            "unifilarity violated: state " + std::to_string(r) + ", symbol " +
                                std::to_string(a) + " has " + std::to_string(targets) + " successors");
        }
}

CausalPartition spin_partition(const BlockChain& windows, const BlockSpace& space, double tol) {
    const std::size_t u = windows.size;
    const std::size_t theta = space.theta();
    const auto e = emissions(windows, space);
    auto label = cluster_rows(e, u, theta, tol);

    // Refine until successors of equivalent windows are themselves equivalent.
    for (;;) {
        std::map<std::vector<long>, std::size_t> ids;
        std::vector<std::size_t> next(u);
        for (std::size_t w = 0; w < u; ++w) {
            std::vector<long> sig{static_cast<long>(label[w])};
            for (std::size_t s = 0; s < theta; ++s) {
                const bool live = e[w * theta + s] > tol;
                const auto succ = space.shift_append(static_cast<BlockIndex>(w), static_cast<Symbol>(s));
                sig.push_back(live ? static_cast<long>(label[succ]) : -1L);
            }
            const auto [it, inserted] = ids.try_emplace(std::move(sig), ids.size());
            next[w] = it->second;
        }
        const bool stable = ids.size() == (label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1);
        label.swap(next);
        if (stable) break;
    }
    return make_partition(label, windows.pi);
}

LabeledTransitions spin_transition_matrices(const BlockChain& windows, const BlockSpace& space,
                                            const CausalPartition& partition) {
    const std::size_t k = partition.size();
    const std::size_t theta = space.theta();
    LabeledTransitions t{k, theta, std::vector<double>(theta * k * k, 0.0),
                         std::vector<double>(k * k, 0.0)};
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t rep = partition.states[r].front();
        for (std::size_t s = 0; s < theta; ++s) {
            const auto succ = space.shift_append(static_cast<BlockIndex>(rep), static_cast<Symbol>(s));
            const double p = windows.at(rep, succ);
            if (p <= 0.0) continue;
            const std::size_t q = partition.state_of[succ];
            t.labeled[(s * k + r) * k + q] += p;
            t.connectivity[r * k + q] += p;
        }
    }
    check_unifilar(t);
    return t;
}

MachineMetrics block_metrics(const BlockChain& chain, double tol) {
    MachineMetrics m;
    const auto part = build_partition(chain, tol);
    m.C_mu = statistical_complexity(part);
    m.h_mu = entropy_density(chain);
    m.H_block = block_entropy(chain);
    m.E_mu = m.H_block - m.h_mu;
    m.E_paper = m.C_mu - m.h_mu;
    m.n_states = part.occupied();
    return m;
}

void add_spin_metrics(MachineMetrics& metrics, const BlockChain& blocks, const BlockSpace& space,
                      double tol) {
    const auto windows = window_chain(blocks, space);
    const auto part = spin_partition(windows, space, tol);
    const auto e = emissions(windows, space);
    const std::size_t theta = space.theta();
    double h = 0.0;
    for (std::size_t w = 0; w < windows.size; ++w) {
        double row = 0.0;
        for (std::size_t s = 0; s < theta; ++s) row -= logmath::xlog2x(e[w * theta + s]);
        h += windows.pi[w] * row;
    }
    metrics.h_mu_spin = h;
    metrics.C_mu_spin = statistical_complexity(part);
    metrics.E_spin = metrics.C_mu_spin - static_cast<double>(space.range()) * h;
    metrics.n_states_spin = part.occupied();
}

MachineMetrics spin_machine(const Hamiltonian& h, double beta, double tol) {
    const auto ts = build_transfer(h, beta);
    MachineMetrics m;
    add_spin_metrics(m, solve_stochastic(ts), h.blocks(), tol);
    return m;
}

std::vector<ClassMachine> class_machines(const BlockChain& chain, double tol, double edge_threshold) {
    const auto st = stationary(chain, edge_threshold);
    const double cut = std::max(edge_threshold, kProbabilityFloor);
    std::vector<ClassMachine> out;
    double total = 0.0;
    for (std::size_t c = 0; c < st.classes.size(); ++c) {
        const auto& members = st.classes[c];
        const std::size_t k = members.size();
        ClassMachine cm;
        cm.blocks = members;
        cm.chain = BlockChain{k, std::vector<double>(k * k, 0.0), std::vector<double>(k)};
        for (std::size_t a = 0; a < k; ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < k; ++b) {
                const double p = chain.at(members[a], members[b]);
                if (p > cut) {
                    cm.chain.P[a * k + b] = p;
                    row += p;
                }
            }
            for (std::size_t b = 0; b < k; ++b) cm.chain.P[a * k + b] /= row;
            cm.chain.pi[a] = st.class_pi[c][members[a]];
            cm.weight += chain.pi.empty() ? 0.0 : chain.pi[members[a]];
        }
        cm.partition = build_partition(cm.chain, tol);
        cm.metrics = block_metrics(cm.chain, tol);
        total += cm.weight;
        out.push_back(std::move(cm));
    }
    for (auto& cm : out) cm.weight = total > 0.0 ? cm.weight / total : 1.0 / static_cast<double>(out.size());
    return out;
}

Analysis analyze_chain(const BlockChain& chain, const BlockSpace& space, const AnalysisOptions& options) {
    if (chain.size != space.size())
        throw Error(ErrorKind::InvalidParameter, "chain size does not match block space");
    Analysis a;
    a.chain = chain;
    a.partition = build_partition(chain, options.merge_tolerance);
    a.metrics = block_metrics(chain, options.merge_tolerance);
    add_spin_metrics(a.metrics, chain, space, options.merge_tolerance);
    a.classes = class_machines(chain, options.merge_tolerance, options.edge_threshold);
    return a;
}

Analysis analyze(const Hamiltonian& h, double beta, const AnalysisOptions& options) {
    const auto ts = build_transfer(h, beta);
    ConsistencyReport report;
    const auto chain = solve_stochastic(ts, report, options.consistency_tolerance);
    auto a = analyze_chain(chain, h.blocks(), options);
    a.beta = beta;
    a.log_lambda0 = ts.log_lambda0();
    a.max_residual = report.max_residual;
    return a;
}

} // namespace isingem
