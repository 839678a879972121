#include "isingem/report.hpp"

#include "isingem/errors.hpp"
#include "isingem/markov_chain.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace isingem {

using nlohmann::json;

double entropy_scale(bool nats) noexcept { return nats ? std::log(2.0) : 1.0; }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string block_label(const BlockSpace& space, BlockIndex block) {
    const auto values = space.alphabet().values();
    const bool binary = values.size() == 2 && values[0] == -1.0 && values[1] == 1.0;
    std::string out;
    for (std::size_t i = 0; i < space.range(); ++i) {
        const Symbol s = space.symbol_at(block, i);
        if (binary) {
            out += s ? "↑" : "↓";
        } else {
            if (i) out += ",";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", values[s]);
            out += buf;
        }
    }
    return out;
}

std::vector<std::string> csv_header(const ModelSpec& model) {
    std::vector<std::string> h{"index"};
    for (const auto& n : model.parameter_names()) h.push_back(n);
    for (const char* c : {"log_lambda0", "C_mu", "h_mu", "E_mu", "E_paper", "C_mu_spin", "h_mu_spin", "E_spin",
                          "n_states", "n_classes", "max_residual", "status"})
        h.emplace_back(c);
    return h;
}

void write_csv(std::ostream& out, const ModelSpec& model, const std::vector<SweepRecord>& records, bool nats) {
    const auto header = csv_header(model);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    const double k = entropy_scale(nats);
    const auto names = model.parameter_names();
    for (const auto& r : records) {
        out << r.index;
        for (const auto& n : names) out << ',' << format_double(r.params.at(n));
        const auto& m = r.metrics;
        for (double x : {r.log_lambda0, k * m.C_mu, k * m.h_mu, k * m.E_mu, k * m.E_paper, k * m.C_mu_spin,
                         k * m.h_mu_spin, k * m.E_spin})
            out << ',' << format_double(x);
        out << ',' << m.n_states << ',' << r.n_classes << ',' << format_double(r.max_residual) << ',' << r.status
            << '\n';
    }
}

json metrics_json(const Analysis& a, const BlockSpace& space, bool nats) {
    const double k = entropy_scale(nats);
    const auto& m = a.metrics;
    json doc{{"units", nats ? "nats" : "bits"},
             {"beta", a.beta},
             {"log_lambda0", a.log_lambda0},
             {"C_mu", k * m.C_mu},
             {"h_mu", k * m.h_mu},
             {"E_mu", k * m.E_mu},
             {"E_paper", k * m.E_paper},
             {"H_block", k * m.H_block},
             {"C_mu_spin", k * m.C_mu_spin},
             {"h_mu_spin", k * m.h_mu_spin},
             {"E_spin", k * m.E_spin},
             {"n_states", m.n_states},
             {"n_states_spin", m.n_states_spin},
             {"n_classes", a.classes.size()},
             {"max_residual", a.max_residual}};
    // The two excess-entropy readings part ways once distinct blocks share a causal state.
    doc["E_paper_diverges"] = std::abs(m.E_mu - m.E_paper) > 1e-9;

    json blocks = json::array();
    for (std::size_t b = 0; b < space.size(); ++b) blocks.push_back(block_label(space, static_cast<BlockIndex>(b)));
    doc["blocks"] = blocks;
    json P = json::array();
    for (std::size_t i = 0; i < a.chain.size; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.chain.size; ++j) row.push_back(a.chain.at(i, j));
        P.push_back(row);
    }
    doc["stochastic_matrix"] = P;
    doc["stationary"] = a.chain.pi;

    json classes = json::array();
    for (const auto& c : a.classes) {
        json labels = json::array();
        for (auto b : c.blocks) labels.push_back(block_label(space, static_cast<BlockIndex>(b)));
        classes.push_back({{"blocks", labels},
                           {"weight", c.weight},
                           {"C_mu", k * c.metrics.C_mu},
                           {"h_mu", k * c.metrics.h_mu},
                           {"E_mu", k * c.metrics.E_mu},
                           {"E_paper", k * c.metrics.E_paper},
                           {"n_states", c.metrics.n_states}});
    }
    doc["classes"] = classes;
    return doc;
}

void write_machine_dot(std::ostream& out, const Analysis& a, const BlockSpace& space, bool spin_level) {
    CausalPartition part;
    LabeledTransitions t;
    std::vector<std::string> symbols;
    if (spin_level) {
        const auto windows = window_chain(a.chain, space);
        part = spin_partition(windows, space);
        t = spin_transition_matrices(windows, space, part);
        BlockSpace single(space.alphabet(), 1);
        for (std::size_t s = 0; s < space.theta(); ++s) symbols.push_back(block_label(single, static_cast<BlockIndex>(s)));
    } else {
        part = a.partition;
        t = transition_matrices(a.chain, part);
        for (std::size_t b = 0; b < space.size(); ++b) symbols.push_back(block_label(space, static_cast<BlockIndex>(b)));
    }

    const BlockChain graph{t.states, t.connectivity, part.probs};
    const auto st = stationary(graph);
    char buf[64];
    for (std::size_t c = 0; c < st.classes.size(); ++c) {
        out << "digraph " << (spin_level ? "spin" : "block") << "_machine_" << c << " {\n";
        out << "  rankdir=LR;\n";
        for (auto r : st.classes[c]) {
            std::snprintf(buf, sizeof buf, "%.6g", part.probs[r]);
            out << "  C" << r << " [label=\"C" << r << "\\nPr=" << buf << "\"];\n";
        }
        for (auto r : st.classes[c])
            for (std::size_t sym = 0; sym < t.symbols; ++sym)
                for (std::size_t q = 0; q < t.states; ++q) {
                    const double p = t.at(sym, r, q);
                    if (!(p > kEdgeThreshold)) continue;
                    std::snprintf(buf, sizeof buf, "%.6g", p);
                    out << "  C" << r << " -> C" << q << " [label=\"" << symbols[sym] << " | " << buf << "\"];\n";
                }
        out << "}\n";
    }
}

void write_sequence(std::ostream& out, const std::vector<Symbol>& spins, const json& metadata) {
    out << "# " << metadata.dump() << '\n';
    static const char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string line;
    line.reserve(spins.size() + 1);
    for (Symbol s : spins) {
        if (s >= 36) throw Error(ErrorKind::InvalidParameter, "alphabets beyond 36 symbols cannot be written");
        line.push_back(digits[s]);
    }
    out << line << '\n';
}

} // namespace isingem
