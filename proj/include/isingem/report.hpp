#pragma once

#include "isingem/config.hpp"
#include "isingem/emachine.hpp"
#include "isingem/sweep.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace isingem {

/// Multiplier taking bits to the requested unit.
double entropy_scale(bool nats) noexcept;

/// Round-trip decimal form ("%.17g"); non-finite values print as nan/inf.
std::string format_double(double x);

/// "↓↑" style label for binary alphabets, comma-joined values otherwise.
std::string block_label(const BlockSpace& space, BlockIndex block);

std::vector<std::string> csv_header(const ModelSpec& model);
void write_csv(std::ostream& out, const ModelSpec& model, const std::vector<SweepRecord>& records, bool nats);

/// Metrics document of one analysed point, including per-class machines.
nlohmann::json metrics_json(const Analysis& analysis, const BlockSpace& space, bool nats);

/// One digraph per closed class of the machine's state graph. Nodes carry Pr(C); edges
/// carry "symbol | probability" and are drawn when the probability exceeds kEdgeThreshold.
void write_machine_dot(std::ostream& out, const Analysis& analysis, const BlockSpace& space, bool spin_level);

/// Header lines start with '#'; the body is one character per spin (symbol index in base 36).
void write_sequence(std::ostream& out, const std::vector<Symbol>& spins, const nlohmann::json& metadata);

} // namespace isingem
