#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "relaylab/estimate.hpp"
#include "relaylab/model.hpp"

namespace relaylab::sim {

/// Deterministic xoshiro256++ stream, seeded through splitmix64 from a
/// (seed, stream) pair. Every trial block owns one stream, so estimates are
/// bit-identical no matter how blocks are scheduled across workers.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on [2^-54, 1): never exactly 0, so logs are safe.
    double uniform();

    /// Standard normal via Box-Muller; the second variate of each pair is
    /// cached to keep consumption deterministic.
    double normal();

    /// Gamma draw with shape m > 0 and mean omega >= 0 (Marsaglia-Tsang
    /// squeeze for m >= 1, uniform-power boost below 1).
    double gamma(double shape, double mean);

private:
    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct McSettings {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint32_t block_size = 1u << 16;
    unsigned workers = 0;  // 0: one per hardware thread
};

enum class Strategy { SSRS, TSRS };

/// One realization of all squared channel gains, in a fixed draw order
/// (per relay: s1, s2, d1, d2, residual relay, residual d2, si).
model::ChannelDraw draw_channels(const model::SystemConfig& cfg, RngStream& rng);

/// Single-stage selection: relay with the largest minimum user-1 SINR.
/// Ties go to the lowest index.
std::size_t select_ssrs(const model::SystemConfig& cfg, const model::ChannelDraw& draw);

/// Relays whose three user-1 SINRs all exceed the user-1 threshold.
std::vector<std::size_t> build_kr(const model::SystemConfig& cfg, const model::ChannelDraw& draw);

/// Two-stage selection: among the service set, the relay with the largest
/// minimum user-2 SINR; empty set means none (an outage).
std::optional<std::size_t> select_tsrs(const model::SystemConfig& cfg,
                                       const model::ChannelDraw& draw);

/// Monte Carlo outage estimate with a Wald 95% half-width.
OutageEstimate estimate_op(const model::SystemConfig& cfg, Strategy strategy,
                           const McSettings& settings);

/// Both strategies from one pass over the same channel realizations.
std::pair<OutageEstimate, OutageEstimate> estimate_op_pair(const model::SystemConfig& cfg,
                                                           const McSettings& settings);

}  // namespace relaylab::sim
