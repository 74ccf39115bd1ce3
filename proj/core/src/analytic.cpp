#include "relaylab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaylab/errors.hpp"
#include "relaylab/special.hpp"

namespace relaylab::analytic {

using special::SignedLogSum;

namespace {

constexpr double kProbTol = 1e-8;

int as_positive_int(double m, const char* what) {
    const double r = std::round(m);
    if (!(m > 0.0) || std::abs(m - r) > 1e-9)
        throw NumericError(std::string(what) + " must be a positive integer for the closed forms, got " +
                           std::to_string(m));
    return static_cast<int>(r);
}

// Mean self-interference power at the relay input, already scaled by the
// duplex switch: varpi * rho_r * omega_si.
double si_power(const RelayAnalyticInputs& in) { return in.varpi * in.rho_r * in.omega_si; }

// Argument of the second-hop gamma tails: m * gamma1 / (omega * rho * (a3 - gamma1*a4)).
double dest_tail_arg(double m, double omega, double rho, const RelayAnalyticInputs& in) {
    return m * in.gamma1 / (omega * rho * (in.a3 - in.gamma1 * in.a4));
}

// ln of the tail of the user-1 SINR at the relay, Pr(sinr > gamma).
// Finite triple expansion over the integer source shapes; all terms positive.
double log_source_tail(const RelayAnalyticInputs& in, double gamma) {
    if (gamma == 0.0) return 0.0;
    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const double x0 = in.m_s1 * gamma / (in.a1 * in.rho_s * in.omega_s1);
    const double l1 = std::log(in.m_s1 * gamma / (in.a1 * in.omega_s1));
    const double l2 = std::log(in.a2 * in.omega_s2 / in.m_s2);
    const double si = si_power(in);
    const double lsi = si > 0.0 ? std::log(si / in.m_si) : 0.0;
    const double c2 = in.m_s1 * gamma * in.a2 * in.omega_s2 / (in.m_s2 * in.a1 * in.omega_s1);
    const double csi = in.m_s1 * gamma * si / (in.m_si * in.a1 * in.rho_s * in.omega_s1);
    const double lrho = std::log(in.rho_s);

    SignedLogSum sum;
    for (int p1 = 0; p1 < m1; ++p1)
        for (int p2 = 0; p2 <= p1; ++p2)
            for (int p3 = 0; p3 <= p2; ++p3) {
                if (si == 0.0 && p2 != p3) continue;
                double lg = -x0 + p1 * l1 + p3 * l2;
                lg += special::log_binomial(p1, p2) + special::log_binomial(p2, p3);
                lg += std::lgamma(p3 + in.m_s2) - std::lgamma(in.m_s2);
                lg += std::lgamma(p2 - p3 + in.m_si) - std::lgamma(in.m_si);
                lg -= std::lgamma(p1 + 1.0);
                lg += (p2 - p3) * lsi;
                lg -= (in.m_s2 + p3) * std::log1p(c2);
                lg -= (in.m_si + p2 - p3) * std::log1p(csi);
                lg -= (p1 - p3) * lrho;
                sum.add_log(lg);
            }
    return sum.log_value().first;
}

}  // namespace

RelayAnalyticInputs relay_inputs(const model::SystemConfig& cfg, std::size_t relay) {
    const model::RelayProfile& p = cfg.relays.at(relay);
    RelayAnalyticInputs in;
    in.omega_s1 = model::resolved_scale(cfg, relay, model::Link::S1R);
    in.omega_s2 = model::resolved_scale(cfg, relay, model::Link::S2R);
    in.omega_d1 = model::resolved_scale(cfg, relay, model::Link::RD1);
    in.omega_d2 = model::resolved_scale(cfg, relay, model::Link::RD2);
    in.omega_si = model::si_variance(p.si, cfg.relay_power());
    in.m_s1 = p.s1.m;
    in.m_s2 = p.s2.m;
    in.m_d1 = p.d1.m;
    in.m_d2 = p.d2.m;
    in.m_si = p.si.m_rr;
    in.m_res_relay = p.sic.m_res_relay;
    in.m_res_d2 = p.sic.m_res_d2;
    in.rho_s = cfg.rho_source();
    in.rho_r = cfg.rho_relay();
    in.rho_d1 = cfg.rho_d1();
    in.rho_d2 = cfg.rho_d2();
    in.varpi = model::varpi(cfg.mode);
    in.eps_relay = p.sic.eps_relay;
    in.eps_d2 = p.sic.eps_d2;
    in.a1 = cfg.power.a1;
    in.a2 = cfg.power.a2;
    in.a3 = cfg.power.a3;
    in.a4 = cfg.power.a4;
    const model::Thresholds th = model::thresholds(cfg.rate_d1, cfg.rate_d2, cfg.mode);
    in.gamma1 = th.gamma1;
    in.gamma2 = th.gamma2;
    return in;
}

void validate_closed_form_shapes(const RelayAnalyticInputs& in) {
    as_positive_int(in.m_s1, "source-1 shape");
    as_positive_int(in.m_s2, "source-2 shape");
    as_positive_int(in.m_res_d2, "user-2 residual shape");
}

bool degenerate_user1(const RelayAnalyticInputs& in) { return in.gamma1 >= in.a3 / in.a4; }

double clamp_probability(double raw, double tol, const char* context) {
    if (std::isnan(raw) || raw < -tol || raw > 1.0 + tol)
        throw NumericError(std::string(context) + ": probability out of range: " + std::to_string(raw));
    return std::clamp(raw, 0.0, 1.0);
}

double cdf_sinr_relay_user1(const RelayAnalyticInputs& in, double gamma) {
    if (gamma <= 0.0) return 0.0;
    return 1.0 - std::exp(log_source_tail(in, gamma));
}

double prob_relay_in_kr(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const double tail_d1 = special::reg_gamma_q(in.m_d1, dest_tail_arg(in.m_d1, in.omega_d1, in.rho_d1, in));
    const double tail_d2 = special::reg_gamma_q(in.m_d2, dest_tail_arg(in.m_d2, in.omega_d2, in.rho_d2, in));
    const double source = std::exp(log_source_tail(in, in.gamma1));
    return clamp_probability(tail_d1 * tail_d2 * source, kProbTol, "prob_relay_in_kr");
}

double prob_relay_in_kr_hd(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const double tail_d1 = special::reg_gamma_q(in.m_d1, dest_tail_arg(in.m_d1, in.omega_d1, in.rho_d1, in));
    const double tail_d2 = special::reg_gamma_q(in.m_d2, dest_tail_arg(in.m_d2, in.omega_d2, in.rho_d2, in));

    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const double x0 = in.m_s1 * in.gamma1 / (in.a1 * in.rho_s * in.omega_s1);
    const double l1 = std::log(in.m_s1 * in.gamma1 / (in.a1 * in.omega_s1));
    const double l2 = std::log(in.a2 * in.omega_s2 / in.m_s2);
    const double c2 = in.m_s1 * in.gamma1 * in.a2 * in.omega_s2 / (in.m_s2 * in.a1 * in.omega_s1);
    const double lrho = std::log(in.rho_s);
    SignedLogSum sum;
    for (int p1 = 0; p1 < m1; ++p1)
        for (int p3 = 0; p3 <= p1; ++p3) {
            double lg = -x0 + p1 * l1 + p3 * l2 + special::log_binomial(p1, p3);
            lg += std::lgamma(p3 + in.m_s2) - std::lgamma(in.m_s2) - std::lgamma(p1 + 1.0);
            lg -= (in.m_s2 + p3) * std::log1p(c2);
            lg -= (p1 - p3) * lrho;
            sum.add_log(lg);
        }
    return clamp_probability(tail_d1 * tail_d2 * sum.value(), kProbTol, "prob_relay_in_kr_hd");
}

double prob_relay_in_kr_asymptotic(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const double arg1 = dest_tail_arg(in.m_d1, in.omega_d1, in.rho_d1, in);
    const double arg2 = dest_tail_arg(in.m_d2, in.omega_d2, in.rho_d2, in);
    // Leading term of the lower incomplete gamma: P(m,x) -> x^m / Gamma(m+1).
    const double f1 = 1.0 - std::exp(in.m_d1 * std::log(arg1) - std::lgamma(in.m_d1 + 1.0));
    const double f2 = 1.0 - std::exp(in.m_d2 * std::log(arg2) - std::lgamma(in.m_d2 + 1.0));
    const double c2 = in.m_s1 * in.gamma1 * in.a2 * in.omega_s2 / (in.m_s2 * in.a1 * in.omega_s1);
    const double csi = in.m_s1 * in.gamma1 * si_power(in) / (in.m_si * in.a1 * in.rho_s * in.omega_s1);
    const double t = c2 / (1.0 + c2);
    double series = 0.0;
    for (int p1 = 0; p1 < m1; ++p1)
        series += special::generalized_binomial(p1 + in.m_s2 - 1.0, p1) * std::pow(t, p1);
    const double source =
        series * std::exp(-in.m_s2 * std::log1p(c2) - in.m_si * std::log1p(csi));
    return std::clamp(f1, 0.0, 1.0) * std::clamp(f2, 0.0, 1.0) * std::clamp(source, 0.0, 1.0);
}

double u_max(const RelayAnalyticInputs& in) {
    return std::max(in.gamma2 / (in.rho_d2 * in.a4),
                    in.gamma1 / (in.rho_d2 * (in.a3 - in.gamma1 * in.a4)));
}

double phi1_psic(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    return special::reg_gamma_q(in.m_d2, in.m_d2 * u_max(in) / in.omega_d2);
}

double phi1(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    if (in.eps_d2 == 0.0) return phi1_psic(in);
    const int mt = as_positive_int(in.m_res_d2, "user-2 residual shape");
    const double u = u_max(in);
    const double c = in.m_d2 * in.gamma2 * in.a3 * in.eps_d2 / (in.a4 * in.m_res_d2 * in.omega_d2);
    const double b = in.m_d2 / in.omega_d2 + in.a4 * in.m_res_d2 / (in.gamma2 * in.a3 * in.eps_d2);
    const double log_pref = in.m_d2 * std::log(c) - special::log_gamma(in.m_d2) +
                            in.m_res_d2 / (in.a3 * in.eps_d2 * in.rho_d2) -
                            in.m_d2 * std::log1p(c);
    const double l_scale = std::log(in.rho_d2) + std::log(in.a3 * in.eps_d2 / in.m_res_d2);

    SignedLogSum sum;
    sum.add(1.0, special::log_reg_gamma_q(in.m_d2, in.m_d2 * u / in.omega_d2));
    for (int p1 = 0; p1 < mt; ++p1)
        for (int p2 = 0; p2 <= p1; ++p2) {
            double lt = special::log_binomial(p1, p2) +
                        special::log_upper_gamma(p2 + in.m_d2, b * u) - std::lgamma(p1 + 1.0);
            lt -= (p1 - p2) * l_scale;
            lt -= p2 * std::log1p(c);
            const double sign = (p1 - p2) % 2 == 0 ? 1.0 : -1.0;
            sum.add(-sign, log_pref + lt);
        }
    return clamp_probability(sum.value(), kProbTol, "phi1");
}

double phi1_asymptotic(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    if (in.eps_d2 == 0.0) return 1.0;
    const int mt = as_positive_int(in.m_res_d2, "user-2 residual shape");
    const double c = in.m_d2 * in.gamma2 * in.a3 * in.eps_d2 / (in.a4 * in.m_res_d2 * in.omega_d2);
    SignedLogSum sum;
    for (int p1 = 0; p1 < mt; ++p1) {
        double lt = std::lgamma(p1 + in.m_d2) - std::lgamma(p1 + 1.0) - special::log_gamma(in.m_d2);
        lt += in.m_d2 * std::log(c) - (in.m_d2 + p1) * std::log1p(c);
        sum.add_log(lt);
    }
    return std::clamp(1.0 - sum.value(), 0.0, 1.0);
}

double phi2(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    return special::reg_gamma_q(in.m_d1, dest_tail_arg(in.m_d1, in.omega_d1, in.rho_d1, in));
}

double phi2_asymptotic(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const double arg = dest_tail_arg(in.m_d1, in.omega_d1, in.rho_d1, in);
    return std::clamp(1.0 - std::exp(in.m_d1 * std::log(arg) - std::lgamma(in.m_d1 + 1.0)), 0.0, 1.0);
}

namespace {

// Shared pieces of the joint source-side factor and its variants.
struct Phi3Terms {
    double c2;      // source-ratio bracket argument
    double c_eps;   // residual-SIC bracket argument
    double c_si;    // self-interference bracket argument
    double log_e;   // ln of the exponential prefactor
    double l1;      // ln(m_s1*gamma1/(a1*omega_s1))
    double l2;      // ln(a2*omega_s2/m_s2)
    double l_g2;    // ln(gamma2)
    double l_eps;   // ln(a1*eps/m_res)
    double l_si;    // ln(si_power/m_si)
    double l_rho;   // ln(rho_s)
    double si;      // varpi*rho_r*omega_si
};

Phi3Terms phi3_terms(const RelayAnalyticInputs& in) {
    Phi3Terms t{};
    t.si = si_power(in);
    const double num = in.m_s2 * in.a1 * in.omega_s1 * in.gamma2 +
                       (in.gamma2 + 1.0) * in.m_s1 * in.gamma1 * in.a2 * in.omega_s2;
    const double den = in.a1 * in.a2 * in.omega_s1 * in.omega_s2;
    t.log_e = -num / (den * in.rho_s);
    t.c2 = in.m_s1 * in.gamma1 * in.a2 * in.omega_s2 / (in.m_s2 * in.a1 * in.omega_s1);
    t.c_eps = in.gamma2 * (in.m_s2 * in.a1 * in.omega_s1 + in.m_s1 * in.gamma1 * in.a2 * in.omega_s2) *
              in.eps_relay / (in.m_res_relay * in.a2 * in.omega_s1 * in.omega_s2);
    t.c_si = num / (in.m_si * den) * t.si / in.rho_s;
    t.l1 = std::log(in.m_s1 * in.gamma1 / (in.a1 * in.omega_s1));
    t.l2 = std::log(in.a2 * in.omega_s2 / in.m_s2);
    t.l_g2 = std::log(in.gamma2);
    t.l_eps = in.eps_relay > 0.0 ? std::log(in.a1 * in.eps_relay / in.m_res_relay) : 0.0;
    t.l_si = t.si > 0.0 ? std::log(t.si / in.m_si) : 0.0;
    t.l_rho = std::log(in.rho_s);
    return t;
}

}  // namespace

double phi3(const RelayAnalyticInputs& in) {
    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const int m2 = as_positive_int(in.m_s2, "source-2 shape");
    const Phi3Terms t = phi3_terms(in);

    SignedLogSum sum;
    for (int q1 = 0; q1 < m1; ++q1)
        for (int q2 = 0; q2 <= q1; ++q2)
            for (int q3 = 0; q3 <= q2; ++q3)
                for (int k1 = 0; k1 < q3 + m2; ++k1)
                    for (int k2 = 0; k2 <= k1; ++k2)
                        for (int k3 = 0; k3 <= k2; ++k3) {
                            if (in.eps_relay == 0.0 && k3 != 0) continue;
                            const int si_pow = k2 + q2 - k3 - q3;
                            if (t.si == 0.0 && si_pow != 0) continue;
                            double lt = special::log_binomial(q1, q2) + special::log_binomial(q2, q3) +
                                        special::log_binomial(k1, k2) + special::log_binomial(k2, k3);
                            lt += std::lgamma(k3 + in.m_res_relay) - std::lgamma(in.m_res_relay);
                            lt += std::lgamma(si_pow + in.m_si) - std::lgamma(in.m_si);
                            lt += std::lgamma(q3 + in.m_s2) - std::lgamma(in.m_s2);
                            lt += q1 * t.l1 + (q3 - k1) * t.l2 + k3 * t.l_eps + k1 * t.l_g2;
                            lt -= std::lgamma(k1 + 1.0) + std::lgamma(q1 + 1.0);
                            lt -= (q3 + in.m_s2 - k1) * std::log1p(t.c2);
                            lt -= (k3 + in.m_res_relay) * std::log1p(t.c_eps);
                            lt -= (si_pow + in.m_si) * std::log1p(t.c_si);
                            lt += si_pow * t.l_si;
                            lt -= (k1 + q1 - k3 - q3) * t.l_rho;
                            sum.add_log(lt);
                        }
    const double v = std::exp(t.log_e + sum.log_value().first);
    return clamp_probability(v, kProbTol, "phi3");
}

double phi3_hd_psic(const RelayAnalyticInputs& in) {
    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const int m2 = as_positive_int(in.m_s2, "source-2 shape");
    const Phi3Terms t = phi3_terms(in);
    SignedLogSum sum;
    for (int q1 = 0; q1 < m1; ++q1)
        for (int q3 = 0; q3 <= q1; ++q3)
            for (int k1 = 0; k1 < q3 + m2; ++k1) {
                double lt = special::log_binomial(q1, q3);
                lt += std::lgamma(q3 + in.m_s2) - std::lgamma(in.m_s2);
                lt += q1 * t.l1 + (q3 - k1) * t.l2 + k1 * t.l_g2;
                lt -= std::lgamma(k1 + 1.0) + std::lgamma(q1 + 1.0);
                lt -= (q3 + in.m_s2 - k1) * std::log1p(t.c2);
                lt -= (k1 + q1 - q3) * t.l_rho;
                sum.add_log(lt);
            }
    const double v = std::exp(t.log_e + sum.log_value().first);
    return clamp_probability(v, kProbTol, "phi3_hd_psic");
}

double phi3_asymptotic(const RelayAnalyticInputs& in) {
    const int m1 = as_positive_int(in.m_s1, "source-1 shape");
    const int m2 = as_positive_int(in.m_s2, "source-2 shape");
    const Phi3Terms t = phi3_terms(in);
    SignedLogSum sum;
    for (int q1 = 0; q1 < m1; ++q1)
        for (int k1 = 0; k1 < q1 + m2; ++k1) {
            if (in.eps_relay == 0.0 && k1 != 0) continue;
            double lt = std::lgamma(in.m_res_relay + k1) - std::lgamma(in.m_res_relay);
            lt += std::lgamma(in.m_s2 + q1) - std::lgamma(in.m_s2);
            lt += (k1 - q1) * -t.l2;  // (m_s2/(a2*omega_s2))^(k1-q1)
            lt += q1 * t.l1;
            lt += k1 * (t.l_g2 + t.l_eps);
            lt -= std::lgamma(k1 + 1.0) + std::lgamma(q1 + 1.0);
            lt -= (in.m_s2 + q1 - k1) * std::log1p(t.c2);
            lt -= in.m_si * std::log1p(t.c_si);
            lt -= (in.m_res_relay + k1) * std::log1p(t.c_eps);
            sum.add_log(lt);
        }
    return std::clamp(sum.value(), 0.0, 1.0);
}

double p_phi(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const double p = prob_relay_in_kr(in);
    if (p <= 0.0) return 0.0;
    const double raw = phi1(in) * phi2(in) * phi3(in) / p;
    return clamp_probability(raw, kProbTol, "p_phi");
}

double p_phi_asymptotic(const RelayAnalyticInputs& in) {
    if (degenerate_user1(in)) return 0.0;
    const double p = prob_relay_in_kr_asymptotic(in);
    if (p <= 0.0) return 0.0;
    const double raw = phi1_asymptotic(in) * phi2_asymptotic(in) * phi3_asymptotic(in) / p;
    return std::clamp(raw, 0.0, 1.0);
}

namespace {

OutageEstimate make_estimate(double raw, Method method) {
    OutageEstimate e;
    e.raw = raw;
    e.method = method;
    e.value = method == Method::Exact ? clamp_probability(raw, kProbTol, "outage probability")
                                      : std::clamp(raw, 0.0, 1.0);
    return e;
}

template <typename PerRelay>
double product_of_misses(const model::SystemConfig& cfg, PerRelay&& member_prob) {
    double prod = 1.0;
    for (std::size_t i = 0; i < cfg.relay_count(); ++i) {
        const RelayAnalyticInputs in = relay_inputs(cfg, i);
        validate_closed_form_shapes(in);
        prod *= 1.0 - member_prob(in);
    }
    return prod;
}

template <typename MemberFn, typename PhiFn>
double tsrs_value(const model::SystemConfig& cfg, MemberFn&& member, PhiFn&& conditional) {
    const std::size_t count = cfg.relay_count();
    std::vector<double> p(count), pp(count);
    for (std::size_t i = 0; i < count; ++i) {
        const RelayAnalyticInputs in = relay_inputs(cfg, i);
        validate_closed_form_shapes(in);
        p[i] = member(in);
        pp[i] = conditional(in);
    }
    if (cfg.homogeneous()) return tsrs_combine_binomial(p[0], pp[0], count);
    return tsrs_combine_enumerate(p, pp);
}

}  // namespace

double tsrs_combine_binomial(double p_member, double p_phi, std::size_t count) {
    // Sum over the number of relays that pass the user-1 screening; an outage
    // needs every passing relay to miss the user-2 conditions.
    double total = 0.0;
    for (std::size_t l = 0; l <= count; ++l) {
        double lt = special::log_binomial(static_cast<int>(count), static_cast<int>(l));
        double term = std::exp(lt);
        term *= std::pow(p_member * (1.0 - p_phi), static_cast<double>(l));
        term *= std::pow(1.0 - p_member, static_cast<double>(count - l));
        total += term;
    }
    return total;
}

double tsrs_combine_enumerate(std::span<const double> p_member, std::span<const double> p_phi) {
    const std::size_t count = p_member.size();
    if (count != p_phi.size()) throw NumericError("tsrs_combine_enumerate: size mismatch");
    if (count > 20)
        throw CapacityError("tsrs_combine_enumerate: subset enumeration over " +
                            std::to_string(count) + " distinct relays exceeds the 20-relay limit");
    double total = 0.0;
    double comp = 0.0;
    for (std::uint64_t mask = 0; mask < (1ull << count); ++mask) {
        double term = 1.0;
        for (std::size_t i = 0; i < count; ++i) {
            if (mask >> i & 1)
                term *= p_member[i] * (1.0 - p_phi[i]);
            else
                term *= 1.0 - p_member[i];
        }
        const double s = total + term;
        comp += std::abs(total) >= std::abs(term) ? (total - s) + term : (term - s) + total;
        total = s;
    }
    return total + comp;
}

OutageEstimate op_ssrs_exact(const model::SystemConfig& cfg) {
    cfg.validate();
    return make_estimate(product_of_misses(cfg, prob_relay_in_kr), Method::Exact);
}

OutageEstimate op_ssrs_asymptotic(const model::SystemConfig& cfg) {
    cfg.validate();
    return make_estimate(product_of_misses(cfg, prob_relay_in_kr_asymptotic), Method::Asymptotic);
}

OutageEstimate op_tsrs_exact(const model::SystemConfig& cfg) {
    cfg.validate();
    return make_estimate(tsrs_value(cfg, prob_relay_in_kr, p_phi), Method::Exact);
}

OutageEstimate op_tsrs_asymptotic(const model::SystemConfig& cfg) {
    cfg.validate();
    return make_estimate(tsrs_value(cfg, prob_relay_in_kr_asymptotic, p_phi_asymptotic),
                         Method::Asymptotic);
}

}  // namespace relaylab::analytic
