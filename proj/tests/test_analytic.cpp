#include <doctest.h>

#include <cmath>
#include <vector>

#include "relaylab/analytic.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/oracle.hpp"
#include "relaylab/special.hpp"
#include "support.hpp"

using namespace relaylab;
using analytic::RelayAnalyticInputs;

namespace {

// Independent closed form of the membership probability for all-Rayleigh
// links: exponential gains make every factor elementary.
double rayleigh_membership(const RelayAnalyticInputs& in) {
    if (in.gamma1 >= in.a3 / in.a4) return 0.0;
    const double denom = in.a3 - in.gamma1 * in.a4;
    const double tail_d1 = std::exp(-in.gamma1 / (in.omega_d1 * in.rho_d1 * denom));
    const double tail_d2 = std::exp(-in.gamma1 / (in.omega_d2 * in.rho_d2 * denom));
    const double beta = in.gamma1 / (in.a1 * in.rho_s * in.omega_s1);
    double source = std::exp(-beta);
    source /= 1.0 + in.gamma1 * in.a2 * in.omega_s2 / (in.a1 * in.omega_s1);
    source /= 1.0 + beta * in.varpi * in.rho_r * in.omega_si;
    return tail_d1 * tail_d2 * source;
}

// Independent closed form of the joint source-side factor for all-Rayleigh
// links, half duplex, perfect cancellation.
double rayleigh_phi3_hd_psic(const RelayAnalyticInputs& in) {
    const double beta1 = in.gamma1 / (in.a1 * in.rho_s * in.omega_s1);
    const double beta2 = in.gamma2 * (in.a1 * in.omega_s1 + in.gamma1 * in.a2 * in.omega_s2) /
                         (in.a1 * in.a2 * in.rho_s * in.omega_s1 * in.omega_s2);
    const double c2 = in.gamma1 * in.a2 * in.omega_s2 / (in.a1 * in.omega_s1);
    return std::exp(-(beta1 + beta2)) / (1.0 + c2);
}

RelayAnalyticInputs inputs_for(const model::SystemConfig& cfg) {
    return analytic::relay_inputs(cfg, 0);
}

}  // namespace

TEST_CASE("membership probability: degenerate threshold saturates to zero") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::HD, 30.0);
    cfg.rate_d1 = 1.0;  // threshold 3 == a3/a4
    CHECK(analytic::prob_relay_in_kr(inputs_for(cfg)) == 0.0);
    CHECK(analytic::op_ssrs_exact(cfg).value == 1.0);
    CHECK(analytic::op_tsrs_exact(cfg).value == 1.0);
    cfg.rate_d1 = 1.2;
    CHECK(analytic::op_ssrs_exact(cfg).value == 1.0);
}

TEST_CASE("membership probability: Rayleigh closed form, both duplex modes") {
    for (auto mode : {model::DuplexMode::HD, model::DuplexMode::FD})
        for (double db : {10.0, 30.0, 50.0}) {
            const model::SystemConfig cfg = testsupport::rayleigh_config(2, mode, db);
            const RelayAnalyticInputs in = inputs_for(cfg);
            const double got = analytic::prob_relay_in_kr(in);
            CHECK(got == doctest::Approx(rayleigh_membership(in)).epsilon(1e-12));
        }
}

TEST_CASE("membership probability: matches quadrature on mixed Nakagami inputs") {
    testsupport::TestRng rng(23);
    for (int i = 0; i < 12; ++i) {
        const model::SystemConfig cfg = testsupport::random_config(rng);
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double quad = oracle::quad_prob_relay_in_kr(in);
        const double closed = analytic::prob_relay_in_kr(in);
        CHECK(std::abs(closed - quad) / quad <= 1e-6);
    }
}

TEST_CASE("single-stage outage: product structure over identical relays") {
    const model::SystemConfig one = testsupport::rayleigh_config(1, model::DuplexMode::FD, 30.0);
    const model::SystemConfig two = testsupport::rayleigh_config(2, model::DuplexMode::FD, 30.0);
    const double p1 = analytic::op_ssrs_exact(one).value;
    const double p2 = analytic::op_ssrs_exact(two).value;
    CHECK(p2 == doctest::Approx(p1 * p1).epsilon(1e-12));
}

TEST_CASE("phi2: frozen value and limits") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 0.0);
    RelayAnalyticInputs in = inputs_for(cfg);
    in.m_d1 = 2.0;
    in.omega_d1 = 1.0;
    in.rho_d1 = 100.0;
    in.gamma1 = 1.0;
    // Q(2, 0.04) = e^-0.04 * 1.04
    CHECK(analytic::phi2(in) == doctest::Approx(0.9992210167184161).epsilon(1e-12));

    in.gamma1 = 1e-14;
    CHECK(analytic::phi2(in) == doctest::Approx(1.0).epsilon(1e-10));
    in.gamma1 = 3.0;  // == a3/a4
    CHECK(analytic::phi2(in) == 0.0);
}

TEST_CASE("phi1: perfect-cancellation route and tail limits") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 20.0);
    RelayAnalyticInputs in = inputs_for(cfg);
    CHECK(in.eps_d2 == 0.0);
    const double u = analytic::u_max(in);
    CHECK(analytic::phi1(in) ==
          doctest::Approx(special::reg_gamma_q(in.m_d2, in.m_d2 * u / in.omega_d2)).epsilon(1e-14));

    // Enormous user-2 rate: the gain threshold explodes and the probability dies.
    RelayAnalyticInputs hard = in;
    hard.gamma2 = std::exp2(40.0) - 1.0;
    CHECK(analytic::phi1(hard) <= 1e-200);
}

TEST_CASE("phi1: residual interference against quadrature") {
    testsupport::TestRng rng(29);
    for (int i = 0; i < 12; ++i) {
        model::SystemConfig cfg = testsupport::random_config(rng, true, false);
        for (auto& r : cfg.relays) r.sic.eps_d2 = rng.below(2) ? 0.05 : 0.01;
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double quad = oracle::quad_phi1(in);
        const double closed = analytic::phi1(in);
        CHECK(std::abs(closed - quad) / quad <= 1e-6);
    }
}

TEST_CASE("phi3: Rayleigh half-duplex reduction") {
    for (double db : {10.0, 30.0, 50.0}) {
        const model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::HD, db);
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double expected = rayleigh_phi3_hd_psic(in);
        CHECK(analytic::phi3(in) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(analytic::phi3_hd_psic(in) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(oracle::quad_phi3(in) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("phi3: full-duplex with residual interference against quadrature") {
    testsupport::TestRng rng(31);
    for (int i = 0; i < 10; ++i) {
        model::SystemConfig cfg = testsupport::random_config(rng);
        for (auto& r : cfg.relays) r.sic.eps_relay = 0.05;
        cfg.mode = model::DuplexMode::FD;
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double quad = oracle::quad_phi3(in);
        const double closed = analytic::phi3(in);
        CHECK(std::abs(closed - quad) / quad <= 1e-6);
    }
}

TEST_CASE("phi3: vanishing user-2 threshold leaves the user-1 source tail") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 25.0);
    RelayAnalyticInputs in = inputs_for(cfg);
    in.gamma2 = 1e-11;
    const double marginal = 1.0 - analytic::cdf_sinr_relay_user1(in, in.gamma1);
    CHECK(analytic::phi3(in) == doctest::Approx(marginal).epsilon(1e-8));
}

TEST_CASE("membership equals the assembled tail product") {
    testsupport::TestRng rng(37);
    for (int i = 0; i < 40; ++i) {
        const model::SystemConfig cfg = testsupport::random_config(rng);
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double denom = in.a3 - in.gamma1 * in.a4;
        if (denom <= 0.0) continue;
        const double tails =
            special::reg_gamma_q(in.m_d1, in.m_d1 * in.gamma1 / (in.omega_d1 * in.rho_d1 * denom)) *
            special::reg_gamma_q(in.m_d2, in.m_d2 * in.gamma1 / (in.omega_d2 * in.rho_d2 * denom)) *
            (1.0 - analytic::cdf_sinr_relay_user1(in, in.gamma1));
        CHECK(analytic::prob_relay_in_kr(in) == doctest::Approx(tails).epsilon(1e-10));
    }
}

TEST_CASE("conditional factor lies in the unit interval across random configs") {
    testsupport::TestRng rng(41);
    for (int i = 0; i < 120; ++i) {
        const model::SystemConfig cfg = testsupport::random_config(rng);
        const RelayAnalyticInputs in = inputs_for(cfg);
        const double v = analytic::p_phi(in);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("two-stage combination: binomial, enumeration, and factorized product agree") {
    testsupport::TestRng rng(43);
    for (int i = 0; i < 30; ++i) {
        const std::size_t count = 1 + rng.below(5);
        std::vector<double> p(count), pp(count);
        for (std::size_t j = 0; j < count; ++j) {
            p[j] = rng.uniform();
            pp[j] = rng.uniform();
        }
        double factorized = 1.0;
        for (std::size_t j = 0; j < count; ++j) factorized *= 1.0 - p[j] * pp[j];
        CHECK(analytic::tsrs_combine_enumerate(p, pp) == doctest::Approx(factorized).epsilon(1e-12));
        const std::vector<double> hp(count, p[0]), hpp(count, pp[0]);
        CHECK(analytic::tsrs_combine_binomial(p[0], pp[0], count) ==
              doctest::Approx(analytic::tsrs_combine_enumerate(hp, hpp)).epsilon(1e-12));
    }
    std::vector<double> too_many(21, 0.5);
    CHECK_THROWS_AS(analytic::tsrs_combine_enumerate(too_many, too_many), CapacityError);
}

TEST_CASE("two-stage outage: heterogeneous relays use the enumeration path") {
    testsupport::TestRng rng(47);
    model::SystemConfig cfg = testsupport::random_config(rng);
    cfg.relays.resize(3, cfg.relays.front());
    cfg.relays[1].d1.omega0 *= 1.7;
    cfg.relays[2].sic.eps_relay = 0.01;
    CHECK_FALSE(cfg.homogeneous());
    double factorized = 1.0;
    for (std::size_t i = 0; i < cfg.relay_count(); ++i) {
        const RelayAnalyticInputs in = analytic::relay_inputs(cfg, i);
        factorized *= 1.0 - analytic::prob_relay_in_kr(in) * analytic::p_phi(in);
    }
    CHECK(analytic::op_tsrs_exact(cfg).value == doctest::Approx(factorized).epsilon(1e-12));
}

TEST_CASE("outage probabilities are monotone in transmit power and in relay count") {
    for (auto strategy : {0, 1}) {
        double prev_op = 1.1;
        for (double db = 0.0; db <= 60.0; db += 3.0) {
            const model::SystemConfig cfg = testsupport::rayleigh_config(2, model::DuplexMode::FD, db);
            const double op = strategy == 0 ? analytic::op_ssrs_exact(cfg).value
                                            : analytic::op_tsrs_exact(cfg).value;
            CHECK(op >= 0.0);
            CHECK(op <= 1.0);
            CHECK(op <= prev_op + 1e-12);
            prev_op = op;
        }
    }
    double prev = 1.1;
    for (std::size_t count : {1, 2, 3, 4}) {
        const model::SystemConfig cfg = testsupport::rayleigh_config(count, model::DuplexMode::FD, 30.0);
        const double op = analytic::op_tsrs_exact(cfg).value;
        CHECK(op < prev);
        prev = op;
    }
}

TEST_CASE("asymptotics converge to the exact curves at high power") {
    // Half duplex, perfect SIC: both expressions settle on the interference
    // floor, so their ratio approaches 1.
    for (double db : {70.0, 90.0}) {
        const model::SystemConfig cfg = testsupport::rayleigh_config(2, model::DuplexMode::HD, db);
        const double exact = analytic::op_ssrs_exact(cfg).value;
        const double asym = analytic::op_ssrs_asymptotic(cfg).value;
        CHECK(exact / asym == doctest::Approx(1.0).epsilon(2e-3));
    }
    // Full duplex with partial SI cancellation: floor region by 55 dB.
    for (double db : {55.0, 60.0}) {
        const model::SystemConfig cfg = testsupport::rayleigh_config(2, model::DuplexMode::FD, db, 1.0, 0.2);
        const double exact = analytic::op_ssrs_exact(cfg).value;
        const double asym = analytic::op_ssrs_asymptotic(cfg).value;
        CHECK(exact / asym == doctest::Approx(1.0).epsilon(0.02));
        const double exact_t = analytic::op_tsrs_exact(cfg).value;
        const double asym_t = analytic::op_tsrs_asymptotic(cfg).value;
        CHECK(exact_t / asym_t == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("asymptotic phi2 at unit shape") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 30.0);
    RelayAnalyticInputs in = inputs_for(cfg);
    const double expected =
        1.0 - in.gamma1 / (in.rho_d1 * in.omega_d1 * (in.a3 - in.gamma1 * in.a4));
    CHECK(analytic::phi2_asymptotic(in) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("general forms reduce to the half-duplex / perfect-SIC forms") {
    testsupport::TestRng rng(53);
    for (int i = 0; i < 40; ++i) {
        model::SystemConfig cfg = testsupport::random_config(rng, /*allow_fd=*/false,
                                                             /*allow_ipsic=*/false);
        for (auto& r : cfg.relays) r.si.kappa = 0.0;
        const RelayAnalyticInputs in = inputs_for(cfg);
        CHECK(analytic::prob_relay_in_kr(in) ==
              doctest::Approx(analytic::prob_relay_in_kr_hd(in)).epsilon(1e-10));
        CHECK(analytic::phi1(in) == doctest::Approx(analytic::phi1_psic(in)).epsilon(1e-10));
        CHECK(analytic::phi3(in) == doctest::Approx(analytic::phi3_hd_psic(in)).epsilon(1e-10));
    }
}

TEST_CASE("closed forms reject non-integer source shapes") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 30.0);
    cfg.relays[0].s1.m = 1.5;
    CHECK_THROWS_AS(analytic::op_ssrs_exact(cfg), NumericError);
    cfg.relays[0].s1.m = 2.0;
    cfg.relays[0].s2.m = 2.25;
    CHECK_THROWS_AS(analytic::op_tsrs_exact(cfg), NumericError);
}
