#include "support.hpp"

#include <quadmath.h>

#include <cmath>

#include "relaylab/config.hpp"

namespace testsupport {

namespace {

using f128 = __float128;

f128 log_p_series_q(f128 a, f128 x) {
    f128 ap = a;
    f128 sum = 1.0 / a;
    f128 term = sum;
    for (int n = 0; n < 2000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (fabsq(term) < fabsq(sum) * 1e-36Q) break;
    }
    return -x + a * logq(x) - lgammaq(a) + logq(sum);
}

f128 log_q_cf_q(f128 a, f128 x) {
    const f128 tiny = 1e-4000Q;
    f128 b = x + 1.0 - a;
    f128 c = 1.0 / tiny;
    f128 d = 1.0 / b;
    f128 h = d;
    for (int i = 1; i <= 2000; ++i) {
        const f128 an = -static_cast<f128>(i) * (static_cast<f128>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (fabsq(d) < tiny) d = tiny;
        c = b + an / c;
        if (fabsq(c) < tiny) c = tiny;
        d = 1.0 / d;
        const f128 del = d * c;
        h *= del;
        if (fabsq(del - 1.0Q) < 1e-35Q) break;
    }
    return -x + a * logq(x) - lgammaq(a) + logq(h);
}

}  // namespace

std::pair<double, double> ref_reg_gamma_pq(double a, double x) {
    if (x == 0.0) return {0.0, 1.0};
    const f128 aq = a;
    const f128 xq = x;
    if (x < a + 1.0) {
        const f128 p = expq(log_p_series_q(aq, xq));
        return {static_cast<double>(p), static_cast<double>(1.0Q - p)};
    }
    const f128 q = expq(log_q_cf_q(aq, xq));
    return {static_cast<double>(1.0Q - q), static_cast<double>(q)};
}

relaylab::model::SystemConfig rayleigh_config(std::size_t relays, relaylab::model::DuplexMode mode,
                                              double pt_db, double kappa, double vartheta) {
    using namespace relaylab;
    model::RelayProfile p;
    p.si.kappa = kappa;
    p.si.vartheta = vartheta;
    model::SystemConfig cfg = model::SystemConfig::uniform(relays, p);
    cfg.mode = mode;
    cfg.power = model::PowerAllocation::qos(0.75, 0.75);
    cfg.rate_d1 = 0.1;
    cfg.rate_d2 = 1.0;
    return cli::with_pt_db(cfg, pt_db);
}

relaylab::model::SystemConfig random_config(TestRng& rng, bool allow_fd, bool allow_ipsic) {
    using namespace relaylab;
    model::RelayProfile p;
    p.s1 = {static_cast<double>(rng.int_in(1, 3)), rng.uniform(0.2, 3.0)};
    p.s2 = {static_cast<double>(rng.int_in(1, 3)), rng.uniform(0.2, 3.0)};
    p.d1 = {rng.uniform(0.5, 3.0), rng.uniform(0.2, 3.0)};
    p.d2 = {rng.uniform(0.5, 3.0), rng.uniform(0.2, 3.0)};
    p.si.m_rr = rng.uniform(0.5, 3.0);
    p.si.omega_rr = rng.uniform(0.2, 3.0);
    p.si.kappa = rng.below(2) ? 1.0 : 0.5;
    p.si.vartheta = rng.uniform(0.1, 0.9);
    p.sic.m_res_relay = rng.uniform(0.5, 3.0);
    p.sic.m_res_d2 = static_cast<double>(rng.int_in(1, 3));
    if (allow_ipsic && rng.below(2)) {
        p.sic.eps_relay = rng.below(2) ? 0.01 : 0.05;
        p.sic.eps_d2 = rng.below(2) ? 0.01 : 0.05;
    }
    model::SystemConfig cfg = model::SystemConfig::uniform(1 + rng.below(3), p);
    cfg.mode = allow_fd && rng.below(2) ? model::DuplexMode::FD : model::DuplexMode::HD;
    cfg.power = model::PowerAllocation::qos(rng.uniform(0.6, 0.85), rng.uniform(0.6, 0.85));
    cfg.rate_d1 = rng.uniform(0.05, 0.3);
    cfg.rate_d2 = rng.uniform(0.3, 1.0);
    const double dbs[] = {10.0, 30.0, 50.0};
    return cli::with_pt_db(cfg, dbs[rng.below(3)]);
}

}  // namespace testsupport
