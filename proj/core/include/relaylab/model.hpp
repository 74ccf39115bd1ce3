#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace relaylab::model {

enum class DuplexMode { HD, FD };

/// 0 for half duplex, 1 for full duplex; multiplies the self-interference
/// term in the relay-side SINRs.
inline double varpi(DuplexMode mode) { return mode == DuplexMode::FD ? 1.0 : 0.0; }

/// Fractions of the source power (a1, a2) and relay power (a3, a4) assigned
/// to the two users. User 1 has service priority, hence the strict ordering.
struct PowerAllocation {
    double a1 = 0.75;
    double a2 = 0.25;
    double a3 = 0.75;
    double a4 = 0.25;

    /// Builds the usual QoS split a2 = 1-a1, a4 = 1-a3.
    static PowerAllocation qos(double a1, double a3) { return {a1, 1.0 - a1, a3, 1.0 - a3}; }

    void validate() const;
    bool operator==(const PowerAllocation&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

enum class NodeId { S1, S2, D1, D2 };

/// Planar geometry: fixed terminals plus the relay cluster position in polar
/// coordinates about the origin. Link variances derive from these distances
/// through the path-loss exponent alpha.
struct NodeLayout {
    Point s1{-6.0, 6.0};
    Point s2{-6.0, -6.0};
    Point d1{6.0, -6.0};
    Point d2{6.0, 6.0};
    double relay_r = 0.0;
    double relay_theta = 0.0;
    double alpha = 3.0;

    void validate() const;
    bool operator==(const NodeLayout&) const = default;
};

/// Nakagami-m link: the squared gain is Gamma with shape m and mean omega.
/// `omega0` is the variance at unit distance; without geometry it is used
/// directly as the variance.
struct LinkFading {
    double m = 1.0;
    double omega0 = 1.0;

    void validate() const;
    bool operator==(const LinkFading&) const = default;
};

/// Residual loop-back channel of a full-duplex relay. The effective variance
/// after cancellation is omega_rr * kappa * P_R^(vartheta-1), so kappa scales
/// the residual linearly and vartheta sets its growth with transmit power.
struct SelfInterferenceModel {
    double m_rr = 1.0;
    double omega_rr = 1.0;
    double kappa = 1.0;
    double vartheta = 1.0;

    void validate() const;
    bool operator==(const SelfInterferenceModel&) const = default;
};

/// Residual interference left by imperfect successive cancellation, at the
/// relay (eps_relay) and at user 2 (eps_d2). Residual channels are unit-mean
/// Nakagami with the given shapes; eps = 0 recovers perfect cancellation.
struct ImperfectSic {
    double eps_relay = 0.0;
    double eps_d2 = 0.0;
    double m_res_relay = 1.0;
    double m_res_d2 = 1.0;

    void validate() const;
    bool operator==(const ImperfectSic&) const = default;
};

/// One relay's four data links, its self-interference channel, and its
/// residual-cancellation parameters.
struct RelayProfile {
    LinkFading s1;  // source 1 -> relay
    LinkFading s2;  // source 2 -> relay
    LinkFading d1;  // relay -> user 1
    LinkFading d2;  // relay -> user 2
    SelfInterferenceModel si;
    ImperfectSic sic;

    void validate() const;
    bool operator==(const RelayProfile&) const = default;
};

/// Full experiment description. Immutable value semantics: build, validate,
/// then share freely across threads.
struct SystemConfig {
    std::vector<RelayProfile> relays;
    PowerAllocation power;
    DuplexMode mode = DuplexMode::HD;
    double rate_d1 = 0.1;  // bits per channel use
    double rate_d2 = 1.0;
    double total_power = 100.0;  // P_T, linear; sources and relays get P_T/2
    double noise_relay = 1.0;
    double noise_d1 = 1.0;
    double noise_d2 = 1.0;
    std::optional<NodeLayout> layout;

    std::size_t relay_count() const { return relays.size(); }
    bool homogeneous() const;

    double source_power() const { return total_power / 2.0; }
    double relay_power() const { return total_power / 2.0; }
    double rho_source() const { return source_power() / noise_relay; }
    double rho_relay() const { return relay_power() / noise_relay; }
    double rho_d1() const { return relay_power() / noise_d1; }
    double rho_d2() const { return relay_power() / noise_d2; }

    /// Replicates one profile L times.
    static SystemConfig uniform(std::size_t count, const RelayProfile& profile);

    void validate() const;
};

enum class Link { S1R, S2R, RD1, RD2 };

/// One realization of every squared channel gain of one relay.
struct RelayGains {
    double g_s1 = 0.0;      // |g_Si|^2,  source 1 -> relay
    double h_s2 = 0.0;      // |h_Si|^2,  source 2 -> relay
    double g_d1 = 0.0;      // |g_Ri1|^2, relay -> user 1
    double h_d2 = 0.0;      // |h_Ri2|^2, relay -> user 2
    double res_relay = 0.0; // residual SIC gain at the relay
    double res_d2 = 0.0;    // residual SIC gain at user 2
    double si = 0.0;        // self-interference gain
};

using ChannelDraw = std::vector<RelayGains>;

/// The five SINRs of one relay under one channel realization.
struct SinrBundle {
    double relay_u1 = 0.0;  // user-1 signal decoded at the relay
    double relay_u2 = 0.0;  // user-2 signal decoded at the relay
    double d1_u1 = 0.0;     // user-1 signal at user 1
    double d2_u1 = 0.0;     // user-1 signal at user 2
    double d2_u2 = 0.0;     // user-2 signal at user 2
};

struct Thresholds {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/// Euclidean distance from a terminal to the relay cluster position.
double node_distance(const NodeLayout& layout, NodeId node);

/// Link variance at distance d: omega0 * d^(-alpha). d = 0 is a domain error.
double effective_scale(const LinkFading& link, double distance, double alpha);

/// Effective self-interference variance omega_rr * kappa * p_relay^(vartheta-1).
double si_variance(const SelfInterferenceModel& si, double p_relay);

/// Rate -> SINR thresholds. Half duplex spends two slots per symbol, so the
/// exponent doubles: 2^(2R)-1 versus 2^R-1 for full duplex.
Thresholds thresholds(double rate_d1, double rate_d2, DuplexMode mode);

/// Variance of the given link for the given relay, resolved through the
/// layout when present and taken verbatim otherwise.
double resolved_scale(const SystemConfig& cfg, std::size_t relay, Link link);

// SINR kernels. Gains are squared magnitudes; all quantities linear.
double sinr_relay_user1(double a1, double a2, double rho_s, double g_s1, double h_s2,
                        double varpi, double rho_r, double si_gain);
double sinr_relay_user2(double a1, double a2, double eps_relay, double rho_s, double h_s2,
                        double res_relay, double varpi, double rho_r, double si_gain);
double sinr_dest_user1(double a3, double a4, double rho, double gain);
double sinr_dest_user2(double a3, double a4, double eps_d2, double rho, double h_d2,
                       double res_d2);

/// All five SINRs for relay `i` under `draw`.
SinrBundle sinr_bundle(const SystemConfig& cfg, const ChannelDraw& draw, std::size_t i);

}  // namespace relaylab::model
