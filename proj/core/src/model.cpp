#include "relaylab/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab::model {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

void PowerAllocation::validate() const {
    require(a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0, "power: a1 and a2 must lie in (0,1)");
    require(a3 > 0.0 && a3 < 1.0 && a4 > 0.0 && a4 < 1.0, "power: a3 and a4 must lie in (0,1)");
    require(std::abs(a1 + a2 - 1.0) <= 1e-12, "power: a1 + a2 must equal 1");
    require(std::abs(a3 + a4 - 1.0) <= 1e-12, "power: a3 + a4 must equal 1");
    require(a1 > a2, "power: a1 must exceed a2 (user 1 has priority)");
    require(a3 > a4, "power: a3 must exceed a4 (user 1 has priority)");
}

void NodeLayout::validate() const {
    require(alpha > 0.0, "geometry: path-loss exponent must be positive");
    require(relay_r >= 0.0, "geometry: relay radius must be nonnegative");
    require(relay_theta >= 0.0 && relay_theta < 2.0 * std::numbers::pi,
            "geometry: relay angle must lie in [0, 2*pi)");
}

void LinkFading::validate() const {
    require(m > 0.0, "link: Nakagami shape must be positive");
    require(omega0 > 0.0, "link: variance must be positive");
}

void SelfInterferenceModel::validate() const {
    require(m_rr > 0.0, "si: shape must be positive");
    require(omega_rr > 0.0, "si: base variance must be positive");
    require(kappa >= 0.0 && kappa <= 1.0, "si: kappa must lie in [0,1]");
    require(vartheta >= 0.0 && vartheta <= 1.0, "si: vartheta must lie in [0,1]");
}

void ImperfectSic::validate() const {
    require(eps_relay >= 0.0 && eps_relay <= 1.0, "sic: eps_relay must lie in [0,1]");
    require(eps_d2 >= 0.0 && eps_d2 <= 1.0, "sic: eps_d2 must lie in [0,1]");
    require(m_res_relay > 0.0, "sic: residual shape at relay must be positive");
    require(m_res_d2 > 0.0, "sic: residual shape at user 2 must be positive");
}

void RelayProfile::validate() const {
    s1.validate();
    s2.validate();
    d1.validate();
    d2.validate();
    si.validate();
    sic.validate();
}

bool SystemConfig::homogeneous() const {
    for (std::size_t i = 1; i < relays.size(); ++i)
        if (!(relays[i] == relays.front())) return false;
    return true;
}

SystemConfig SystemConfig::uniform(std::size_t count, const RelayProfile& profile) {
    SystemConfig cfg;
    cfg.relays.assign(count, profile);
    return cfg;
}

void SystemConfig::validate() const {
    require(!relays.empty(), "config: at least one relay required");
    for (const RelayProfile& r : relays) r.validate();
    power.validate();
    require(rate_d1 > 0.0 && rate_d2 > 0.0, "config: rates must be positive");
    require(total_power > 0.0, "config: total power must be positive");
    require(noise_relay > 0.0 && noise_d1 > 0.0 && noise_d2 > 0.0,
            "config: noise variances must be positive");
    if (layout) layout->validate();
}

double node_distance(const NodeLayout& layout, NodeId node) {
    const Point* p = nullptr;
    switch (node) {
        case NodeId::S1: p = &layout.s1; break;
        case NodeId::S2: p = &layout.s2; break;
        case NodeId::D1: p = &layout.d1; break;
        case NodeId::D2: p = &layout.d2; break;
    }
    const double rx = layout.relay_r * std::cos(layout.relay_theta);
    const double ry = layout.relay_r * std::sin(layout.relay_theta);
    return std::hypot(p->x - rx, p->y - ry);
}

double effective_scale(const LinkFading& link, double distance, double alpha) {
    if (!(distance > 0.0))
        throw NumericError("effective_scale: singular path loss at distance " + std::to_string(distance));
    return link.omega0 * std::pow(distance, -alpha);
}

double si_variance(const SelfInterferenceModel& si, double p_relay) {
    if (!(p_relay > 0.0)) throw NumericError("si_variance: relay power must be positive");
    if (si.kappa == 0.0) return 0.0;
    return si.omega_rr * si.kappa * std::pow(p_relay, si.vartheta - 1.0);
}

Thresholds thresholds(double rate_d1, double rate_d2, DuplexMode mode) {
    const double k = mode == DuplexMode::HD ? 2.0 : 1.0;
    return {std::exp2(k * rate_d1) - 1.0, std::exp2(k * rate_d2) - 1.0};
}

double resolved_scale(const SystemConfig& cfg, std::size_t relay, Link link) {
    const RelayProfile& p = cfg.relays.at(relay);
    const LinkFading* f = nullptr;
    NodeId node{};
    switch (link) {
        case Link::S1R: f = &p.s1; node = NodeId::S1; break;
        case Link::S2R: f = &p.s2; node = NodeId::S2; break;
        case Link::RD1: f = &p.d1; node = NodeId::D1; break;
        case Link::RD2: f = &p.d2; node = NodeId::D2; break;
    }
    if (!cfg.layout) return f->omega0;
    return effective_scale(*f, node_distance(*cfg.layout, node), cfg.layout->alpha);
}

double sinr_relay_user1(double a1, double a2, double rho_s, double g_s1, double h_s2,
                        double varpi, double rho_r, double si_gain) {
    return a1 * rho_s * g_s1 / (a2 * rho_s * h_s2 + varpi * rho_r * si_gain + 1.0);
}

double sinr_relay_user2(double a1, double a2, double eps_relay, double rho_s, double h_s2,
                        double res_relay, double varpi, double rho_r, double si_gain) {
    return a2 * rho_s * h_s2 /
           (a1 * eps_relay * rho_s * res_relay + varpi * rho_r * si_gain + 1.0);
}

double sinr_dest_user1(double a3, double a4, double rho, double gain) {
    return a3 * rho * gain / (a4 * rho * gain + 1.0);
}

double sinr_dest_user2(double a3, double a4, double eps_d2, double rho, double h_d2,
                       double res_d2) {
    return a4 * rho * h_d2 / (a3 * eps_d2 * rho * res_d2 + 1.0);
}

SinrBundle sinr_bundle(const SystemConfig& cfg, const ChannelDraw& draw, std::size_t i) {
    const RelayGains& g = draw.at(i);
    const PowerAllocation& a = cfg.power;
    const double w = varpi(cfg.mode);
    const double eps_r = cfg.relays.at(i).sic.eps_relay;
    const double eps_d2 = cfg.relays.at(i).sic.eps_d2;
    SinrBundle s;
    s.relay_u1 = sinr_relay_user1(a.a1, a.a2, cfg.rho_source(), g.g_s1, g.h_s2, w, cfg.rho_relay(), g.si);
    s.relay_u2 = sinr_relay_user2(a.a1, a.a2, eps_r, cfg.rho_source(), g.h_s2, g.res_relay, w, cfg.rho_relay(), g.si);
    s.d1_u1 = sinr_dest_user1(a.a3, a.a4, cfg.rho_d1(), g.g_d1);
    s.d2_u1 = sinr_dest_user1(a.a3, a.a4, cfg.rho_d2(), g.h_d2);
    s.d2_u2 = sinr_dest_user2(a.a3, a.a4, eps_d2, cfg.rho_d2(), g.h_d2, g.res_d2);
    return s;
}

}  // namespace relaylab::model
