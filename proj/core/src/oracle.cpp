#include "relaylab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "relaylab/errors.hpp"
#include "relaylab/special.hpp"

namespace relaylab::oracle {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1,1].
constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kWeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
// Gauss-7 weights; zero where the node is Kronrod-only.
constexpr double kWeightsG[8] = {
    0.0, 0.129484966168870, 0.0, 0.279705391489277,
    0.0, 0.381830050505119, 0.0, 0.417959183673469,
};

struct Panel {
    double a, b;
    double value;
    double error;
    std::uint64_t seq;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b, std::uint64_t seq) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0;
    {
        const double y = f(mid);
        k15 += kWeightsK[7] * y;
        g7 += kWeightsG[7] * y;
    }
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double y = f(mid + dx) + f(mid - dx);
        k15 += kWeightsK[i] * y;
        g7 += kWeightsG[i] * y;
    }
    return {a, b, k15 * half, std::abs(k15 - g7) * half, seq};
}

bool worse(const Panel& x, const Panel& y) {
    if (x.error != y.error) return x.error > y.error;
    return x.seq < y.seq;
}

}  // namespace

static void validate_spec(const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
        throw NumericError("quadrature: tolerances must be positive");
    if (!(spec.trunc_quantile > 0.9) || !(spec.trunc_quantile < 1.0))
        throw NumericError("quadrature: truncation quantile must lie in (0.9, 1)");
    if (spec.max_subdivisions < 1) throw NumericError("quadrature: subdivision budget must be positive");
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    validate_spec(spec);
    if (!(b > a)) return {0.0, 0.0};
    std::uint64_t seq = 0;
    std::vector<Panel> panels;
    // Seed with several panels so narrow features cannot hide between the
    // nodes of one wide panel.
    constexpr int kInitialPanels = 8;
    for (int i = 0; i < kInitialPanels; ++i) {
        const double lo = a + (b - a) * i / kInitialPanels;
        const double hi = a + (b - a) * (i + 1) / kInitialPanels;
        panels.push_back(evaluate_panel(f, lo, hi, seq++));
    }

    auto totals = [&panels] {
        double v = 0.0, e = 0.0;
        for (const Panel& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    while (true) {
        auto [value, error] = totals();
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) break;
        if (static_cast<int>(panels.size()) >= spec.max_subdivisions)
            throw AccuracyError("quadrature: subdivision budget exhausted", value, error);
        auto worst = std::min_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) { return worse(x, y); });
        const Panel split = *worst;
        const double mid = 0.5 * (split.a + split.b);
        *worst = evaluate_panel(f, split.a, mid, seq++);
        panels.push_back(evaluate_panel(f, mid, split.b, seq++));
    }

    // Re-sum left to right with compensation; panel order is deterministic.
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Panel& p : panels) {
        const double s = sum + p.value;
        comp += std::abs(sum) >= std::abs(p.value) ? (sum - s) + p.value : (p.value - s) + sum;
        sum = s;
        err += p.error;
    }
    return {sum + comp, err};
}

namespace {

// Gamma density with shape m and mean omega, in log-assembled form so large
// shapes and small scales stay finite.
double gamma_pdf(double m, double omega, double x) {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return m < 1.0 ? std::numeric_limits<double>::infinity() : (m == 1.0 ? m / omega : 0.0);
    const double r = m / omega;
    return std::exp(m * std::log(r) + (m - 1.0) * std::log(x) - r * x - special::log_gamma(m));
}

double upper_cut(double m, double omega, const QuadratureSpec& spec) {
    return special::gamma_quantile(m, omega, spec.trunc_quantile);
}

QuadratureSpec inner_spec(const QuadratureSpec& spec) {
    QuadratureSpec s = spec;
    s.abs_tol = spec.abs_tol * 0.1;
    s.rel_tol = spec.rel_tol * 0.1;
    return s;
}

}  // namespace

double quad_prob_relay_in_kr(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec) {
    if (analytic::degenerate_user1(in)) return 0.0;
    const double denom = in.a3 - in.gamma1 * in.a4;
    const double tail_d1 =
        special::reg_gamma_q(in.m_d1, in.m_d1 * in.gamma1 / (in.omega_d1 * in.rho_d1 * denom));
    const double tail_d2 =
        special::reg_gamma_q(in.m_d2, in.m_d2 * in.gamma1 / (in.omega_d2 * in.rho_d2 * denom));

    const double si_scale = in.varpi * in.rho_r;  // multiplies the SI gain in the SINR
    const bool si_matters = si_scale > 0.0 && in.omega_si > 0.0;
    const bool integrate_si = si_matters || (spec.force_full_dims && in.omega_si > 0.0);
    auto source_tail_given_si = [&](double si_gain) {
        auto f = [&](double x) {
            const double w = in.gamma1 * (in.a2 * in.rho_s * x + si_scale * si_gain + 1.0) /
                             (in.a1 * in.rho_s);
            return special::reg_gamma_q(in.m_s1, in.m_s1 * w / in.omega_s1) *
                   gamma_pdf(in.m_s2, in.omega_s2, x);
        };
        const QuadratureSpec is = integrate_si ? inner_spec(spec) : spec;
        return integrate(f, 0.0, upper_cut(in.m_s2, in.omega_s2, spec), is).value;
    };

    double source_tail;
    if (integrate_si) {
        auto outer = [&](double y) { return source_tail_given_si(y) * gamma_pdf(in.m_si, in.omega_si, y); };
        source_tail = integrate(outer, 0.0, upper_cut(in.m_si, in.omega_si, spec), spec).value;
    } else {
        source_tail = source_tail_given_si(0.0);
    }
    return tail_d1 * tail_d2 * source_tail;
}

double quad_phi1(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec) {
    if (analytic::degenerate_user1(in)) return 0.0;
    const double u = analytic::u_max(in);
    if (in.eps_d2 == 0.0)
        return special::reg_gamma_q(in.m_d2, in.m_d2 * u / in.omega_d2);
    auto f = [&](double x) {
        const double w = (in.a4 * in.rho_d2 * x - in.gamma2) / (in.gamma2 * in.a3 * in.eps_d2 * in.rho_d2);
        const double cdf = w <= 0.0 ? 0.0 : special::reg_gamma_p(in.m_res_d2, in.m_res_d2 * w);
        return cdf * gamma_pdf(in.m_d2, in.omega_d2, x);
    };
    const double hi = std::max(upper_cut(in.m_d2, in.omega_d2, spec), 2.0 * u);
    return integrate(f, u, hi, spec).value;
}

double quad_phi3(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec) {
    const double si_scale = in.varpi * in.rho_r;
    const bool with_si = si_scale > 0.0 && in.omega_si > 0.0;

    // Tail of the source-1 gain and CDF of the relay residual gain are exact
    // gamma expressions; integrate them over the source-2 gain y and, for
    // full duplex, the self-interference gain z.
    auto joint_given_si = [&](double si_gain) {
        const double y_min = in.gamma2 * (si_scale * si_gain + 1.0) / (in.a2 * in.rho_s);
        auto f = [&](double y) {
            const double x_low = in.gamma1 * (in.a2 * in.rho_s * y + si_scale * si_gain + 1.0) /
                                 (in.a1 * in.rho_s);
            double v = special::reg_gamma_q(in.m_s1, in.m_s1 * x_low / in.omega_s1);
            if (in.eps_relay > 0.0) {
                const double psi_bound = (in.a2 * in.rho_s * y / in.gamma2 - si_scale * si_gain - 1.0) /
                                         (in.a1 * in.eps_relay * in.rho_s);
                v *= psi_bound <= 0.0 ? 0.0
                                      : special::reg_gamma_p(in.m_res_relay, in.m_res_relay * psi_bound);
            }
            return v * gamma_pdf(in.m_s2, in.omega_s2, y);
        };
        const double hi = std::max(upper_cut(in.m_s2, in.omega_s2, spec), 2.0 * y_min);
        if (y_min >= hi) return 0.0;
        const QuadratureSpec is = with_si ? inner_spec(spec) : spec;
        return integrate(f, y_min, hi, is).value;
    };

    if (!with_si) return joint_given_si(0.0);
    auto outer = [&](double z) { return joint_given_si(z) * gamma_pdf(in.m_si, in.omega_si, z); };
    return integrate(outer, 0.0, upper_cut(in.m_si, in.omega_si, spec), spec).value;
}

namespace {

double quad_p_phi(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec) {
    if (analytic::degenerate_user1(in)) return 0.0;
    const double p = quad_prob_relay_in_kr(in, spec);
    if (p <= 0.0) return 0.0;
    const double raw = quad_phi1(in, spec) * analytic::phi2(in) * quad_phi3(in, spec) / p;
    return std::clamp(raw, 0.0, 1.0);
}

}  // namespace

OutageEstimate op_ssrs_quadrature(const model::SystemConfig& cfg, const QuadratureSpec& spec) {
    cfg.validate();
    double prod = 1.0;
    for (std::size_t i = 0; i < cfg.relay_count(); ++i)
        prod *= 1.0 - quad_prob_relay_in_kr(analytic::relay_inputs(cfg, i), spec);
    OutageEstimate e;
    e.raw = prod;
    e.method = Method::Quadrature;
    e.value = std::clamp(prod, 0.0, 1.0);
    return e;
}

OutageEstimate op_tsrs_quadrature(const model::SystemConfig& cfg, const QuadratureSpec& spec) {
    cfg.validate();
    const std::size_t count = cfg.relay_count();
    std::vector<double> p(count), pp(count);
    for (std::size_t i = 0; i < count; ++i) {
        const analytic::RelayAnalyticInputs in = analytic::relay_inputs(cfg, i);
        p[i] = quad_prob_relay_in_kr(in, spec);
        pp[i] = quad_p_phi(in, spec);
    }
    const double raw = cfg.homogeneous() ? analytic::tsrs_combine_binomial(p[0], pp[0], count)
                                         : analytic::tsrs_combine_enumerate(p, pp);
    OutageEstimate e;
    e.raw = raw;
    e.method = Method::Quadrature;
    e.value = std::clamp(raw, 0.0, 1.0);
    return e;
}

}  // namespace relaylab::oracle
