#include "relaylab/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "relaylab/errors.hpp"

namespace relaylab::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    // Decorrelate the stream id from the seed before expanding the state.
    std::uint64_t x = seed ^ (0xa0761d6478bd642full * (stream + 1));
    for (std::uint64_t& s : state_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-54;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

double RngStream::gamma(double shape, double mean) {
    if (!(shape > 0.0)) throw NumericError("gamma sampler: shape must be positive");
    if (mean == 0.0) return 0.0;
    if (!(mean > 0.0)) throw NumericError("gamma sampler: mean must be nonnegative");
    const double scale = mean / shape;
    if (shape < 1.0) {
        // Boost: G(a) = G(a+1) * U^(1/a).
        const double g = gamma(shape + 1.0, (shape + 1.0) * scale);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

namespace {

// Per-relay sampling parameters resolved once per estimate.
struct RelayLaw {
    double m_s1, o_s1;
    double m_s2, o_s2;
    double m_d1, o_d1;
    double m_d2, o_d2;
    double m_res_r;
    double m_res_d2;
    double m_si, o_si;
    double eps_relay, eps_d2;
};

struct Sampler {
    std::vector<RelayLaw> relays;
    double a1, a2, a3, a4;
    double rho_s, rho_r, rho_d1, rho_d2;
    double varpi;
    double gamma1, gamma2;

    explicit Sampler(const model::SystemConfig& cfg) {
        const auto th = model::thresholds(cfg.rate_d1, cfg.rate_d2, cfg.mode);
        gamma1 = th.gamma1;
        gamma2 = th.gamma2;
        a1 = cfg.power.a1;
        a2 = cfg.power.a2;
        a3 = cfg.power.a3;
        a4 = cfg.power.a4;
        rho_s = cfg.rho_source();
        rho_r = cfg.rho_relay();
        rho_d1 = cfg.rho_d1();
        rho_d2 = cfg.rho_d2();
        varpi = model::varpi(cfg.mode);
        relays.reserve(cfg.relay_count());
        for (std::size_t i = 0; i < cfg.relay_count(); ++i) {
            const model::RelayProfile& p = cfg.relays[i];
            RelayLaw law{};
            law.m_s1 = p.s1.m;
            law.o_s1 = model::resolved_scale(cfg, i, model::Link::S1R);
            law.m_s2 = p.s2.m;
            law.o_s2 = model::resolved_scale(cfg, i, model::Link::S2R);
            law.m_d1 = p.d1.m;
            law.o_d1 = model::resolved_scale(cfg, i, model::Link::RD1);
            law.m_d2 = p.d2.m;
            law.o_d2 = model::resolved_scale(cfg, i, model::Link::RD2);
            law.m_res_r = p.sic.m_res_relay;
            law.m_res_d2 = p.sic.m_res_d2;
            law.m_si = p.si.m_rr;
            law.o_si = model::si_variance(p.si, cfg.relay_power());
            law.eps_relay = p.sic.eps_relay;
            law.eps_d2 = p.sic.eps_d2;
            relays.push_back(law);
        }
    }

    model::RelayGains draw_one(const RelayLaw& law, RngStream& rng) const {
        model::RelayGains g;
        g.g_s1 = rng.gamma(law.m_s1, law.o_s1);
        g.h_s2 = rng.gamma(law.m_s2, law.o_s2);
        g.g_d1 = rng.gamma(law.m_d1, law.o_d1);
        g.h_d2 = rng.gamma(law.m_d2, law.o_d2);
        g.res_relay = rng.gamma(law.m_res_r, 1.0);
        g.res_d2 = rng.gamma(law.m_res_d2, 1.0);
        g.si = rng.gamma(law.m_si, law.o_si);
        return g;
    }

    // Counts one trial: returns (ssrs outage, tsrs outage).
    std::pair<bool, bool> run_trial(RngStream& rng) const {
        double best_min1 = -1.0;
        double best_min2 = -1.0;
        bool any_member = false;
        for (const RelayLaw& law : relays) {
            const model::RelayGains g = draw_one(law, rng);
            const double s_r1 = model::sinr_relay_user1(a1, a2, rho_s, g.g_s1, g.h_s2, varpi, rho_r, g.si);
            const double s_d1 = model::sinr_dest_user1(a3, a4, rho_d1, g.g_d1);
            const double s_d2u1 = model::sinr_dest_user1(a3, a4, rho_d2, g.h_d2);
            const double min1 = std::min({s_r1, s_d1, s_d2u1});
            best_min1 = std::max(best_min1, min1);
            if (min1 > gamma1) {
                any_member = true;
                const double s_r2 = model::sinr_relay_user2(a1, a2, law.eps_relay, rho_s, g.h_s2,
                                                            g.res_relay, varpi, rho_r, g.si);
                const double s_d2u2 =
                    model::sinr_dest_user2(a3, a4, law.eps_d2, rho_d2, g.h_d2, g.res_d2);
                best_min2 = std::max(best_min2, std::min(s_r2, s_d2u2));
            }
        }
        const bool ssrs_outage = best_min1 < gamma1;
        const bool tsrs_outage = !any_member || best_min2 < gamma2;
        return {ssrs_outage, tsrs_outage};
    }
};

struct Counts {
    std::uint64_t ssrs = 0;
    std::uint64_t tsrs = 0;
};

Counts run_blocks(const Sampler& sampler, const McSettings& settings) {
    const std::uint64_t trials = settings.trials;
    const std::uint64_t block = std::max<std::uint32_t>(settings.block_size, 1);
    const std::uint64_t nblocks = (trials + block - 1) / block;
    unsigned workers = settings.workers != 0 ? settings.workers
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, nblocks));

    std::atomic<std::uint64_t> next_block{0};
    std::atomic<std::uint64_t> ssrs_total{0};
    std::atomic<std::uint64_t> tsrs_total{0};

    auto work = [&] {
        std::uint64_t b;
        while ((b = next_block.fetch_add(1)) < nblocks) {
            RngStream rng(settings.seed, b);
            const std::uint64_t lo = b * block;
            const std::uint64_t hi = std::min(lo + block, trials);
            Counts c;
            for (std::uint64_t t = lo; t < hi; ++t) {
                const auto [s, d] = sampler.run_trial(rng);
                c.ssrs += s;
                c.tsrs += d;
            }
            ssrs_total.fetch_add(c.ssrs);
            tsrs_total.fetch_add(c.tsrs);
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return {ssrs_total.load(), tsrs_total.load()};
}

OutageEstimate to_estimate(std::uint64_t outages, std::uint64_t trials) {
    const double p = static_cast<double>(outages) / static_cast<double>(trials);
    OutageEstimate e;
    e.raw = p;
    e.value = p;
    e.method = Method::MonteCarlo;
    e.half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return e;
}

}  // namespace

model::ChannelDraw draw_channels(const model::SystemConfig& cfg, RngStream& rng) {
    const Sampler sampler(cfg);
    model::ChannelDraw draw;
    draw.reserve(sampler.relays.size());
    for (const RelayLaw& law : sampler.relays) draw.push_back(sampler.draw_one(law, rng));
    return draw;
}

std::size_t select_ssrs(const model::SystemConfig& cfg, const model::ChannelDraw& draw) {
    std::size_t best = 0;
    double best_min = -1.0;
    for (std::size_t i = 0; i < draw.size(); ++i) {
        const model::SinrBundle s = model::sinr_bundle(cfg, draw, i);
        const double m = std::min({s.relay_u1, s.d1_u1, s.d2_u1});
        if (m > best_min) {
            best_min = m;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> build_kr(const model::SystemConfig& cfg, const model::ChannelDraw& draw) {
    const double g1 = model::thresholds(cfg.rate_d1, cfg.rate_d2, cfg.mode).gamma1;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < draw.size(); ++i) {
        const model::SinrBundle s = model::sinr_bundle(cfg, draw, i);
        if (std::min({s.relay_u1, s.d1_u1, s.d2_u1}) > g1) members.push_back(i);
    }
    return members;
}

std::optional<std::size_t> select_tsrs(const model::SystemConfig& cfg,
                                       const model::ChannelDraw& draw) {
    std::optional<std::size_t> best;
    double best_min = -1.0;
    for (std::size_t i : build_kr(cfg, draw)) {
        const model::SinrBundle s = model::sinr_bundle(cfg, draw, i);
        const double m = std::min(s.relay_u2, s.d2_u2);
        if (m > best_min) {
            best_min = m;
            best = i;
        }
    }
    return best;
}

OutageEstimate estimate_op(const model::SystemConfig& cfg, Strategy strategy,
                           const McSettings& settings) {
    cfg.validate();
    if (settings.trials == 0) throw ConfigError("mc: trial count must be at least 1");
    const Sampler sampler(cfg);
    const Counts c = run_blocks(sampler, settings);
    return to_estimate(strategy == Strategy::SSRS ? c.ssrs : c.tsrs, settings.trials);
}

std::pair<OutageEstimate, OutageEstimate> estimate_op_pair(const model::SystemConfig& cfg,
                                                           const McSettings& settings) {
    cfg.validate();
    if (settings.trials == 0) throw ConfigError("mc: trial count must be at least 1");
    const Sampler sampler(cfg);
    const Counts c = run_blocks(sampler, settings);
    return {to_estimate(c.ssrs, settings.trials), to_estimate(c.tsrs, settings.trials)};
}

}  // namespace relaylab::sim
