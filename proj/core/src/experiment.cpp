#include "relaylab/experiment.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "relaylab/analytic.hpp"
#include "relaylab/errors.hpp"

namespace relaylab::cli {

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, p);
}

namespace {

std::string method_column(Method m) {
    switch (m) {
        case Method::Exact: return "op_exact";
        case Method::Asymptotic: return "op_asymptotic";
        case Method::MonteCarlo: return "op_mc";
        case Method::Quadrature: return "op_quadrature";
    }
    return "?";
}

}  // namespace

OutageEstimate compute_op(const model::SystemConfig& cfg, Method method, sim::Strategy strategy,
                          const RunParams& run) {
    const bool tsrs = strategy == sim::Strategy::TSRS;
    switch (method) {
        case Method::Exact:
            return tsrs ? analytic::op_tsrs_exact(cfg) : analytic::op_ssrs_exact(cfg);
        case Method::Asymptotic:
            return tsrs ? analytic::op_tsrs_asymptotic(cfg) : analytic::op_ssrs_asymptotic(cfg);
        case Method::Quadrature:
            return tsrs ? oracle::op_tsrs_quadrature(cfg) : oracle::op_ssrs_quadrature(cfg);
        case Method::MonteCarlo: {
            sim::McSettings mc{run.trials, run.seed, 1u << 16, run.workers};
            return sim::estimate_op(cfg, strategy, mc);
        }
    }
    throw NumericError("compute_op: unknown method");
}

std::vector<CurveRow> run_curve(const ExperimentConfig& exp) {
    const RunParams& run = exp.run;
    if (!(run.db_step > 0.0)) throw ConfigError("sweep.step must be positive");
    std::vector<CurveRow> rows;
    for (int i = 0;; ++i) {
        const double db = run.db_start + i * run.db_step;
        if (db > run.db_stop + 1e-9) break;
        const model::SystemConfig cfg = with_pt_db(exp.system, db);
        CurveRow row;
        row.pt_db = db;
        for (Method m : run.methods) {
            const OutageEstimate e = compute_op(cfg, m, run.strategy, run);
            switch (m) {
                case Method::Exact: row.exact = e.value; break;
                case Method::Asymptotic: row.asymptotic = e.value; break;
                case Method::Quadrature: row.quadrature = e.value; break;
                case Method::MonteCarlo:
                    row.mc = e.value;
                    row.mc_half_width = e.half_width;
                    break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<Method>& methods,
                     const std::vector<CurveRow>& rows) {
    out << "pt_db";
    for (Method m : methods) {
        out << ',' << method_column(m);
        if (m == Method::MonteCarlo) out << ",mc_half_width";
    }
    out << '\n';
    for (const CurveRow& row : rows) {
        out << format_double(row.pt_db);
        for (Method m : methods) {
            switch (m) {
                case Method::Exact: out << ',' << format_double(*row.exact); break;
                case Method::Asymptotic: out << ',' << format_double(*row.asymptotic); break;
                case Method::Quadrature: out << ',' << format_double(*row.quadrature); break;
                case Method::MonteCarlo:
                    out << ',' << format_double(*row.mc) << ',' << format_double(*row.mc_half_width);
                    break;
            }
        }
        out << '\n';
    }
}

void write_placement_summary(std::ostream& out, const placement::GridPoint& best) {
    out << "x=" << format_double(best.x) << " y=" << format_double(best.y)
        << " op_min=" << format_double(best.op) << " d_s1=" << format_double(best.d_s1)
        << " d_s2=" << format_double(best.d_s2) << " d_d1=" << format_double(best.d_d1)
        << " d_d2=" << format_double(best.d_d2) << '\n';
}

void write_grid_csv(std::ostream& out, const placement::PlacementResult& result) {
    out << "n,p,r,theta,x,y,d_s1,d_s2,d_d1,d_d2,op\n";
    for (const placement::GridPoint& pt : result.grid) {
        out << pt.n << ',' << pt.p << ',' << format_double(pt.r) << ',' << format_double(pt.theta)
            << ',' << format_double(pt.x) << ',' << format_double(pt.y) << ','
            << format_double(pt.d_s1) << ',' << format_double(pt.d_s2) << ','
            << format_double(pt.d_d1) << ',' << format_double(pt.d_d2) << ','
            << format_double(pt.op) << '\n';
    }
}

namespace {

model::RelayProfile rayleigh_profile() {
    model::RelayProfile p;  // all defaults: unit shapes and variances
    return p;
}

model::SystemConfig base_config(std::size_t relays, model::DuplexMode mode, double pt_db) {
    model::SystemConfig cfg = model::SystemConfig::uniform(relays, rayleigh_profile());
    cfg.mode = mode;
    cfg.power = model::PowerAllocation::qos(0.75, 0.75);
    cfg.rate_d1 = 0.1;
    cfg.rate_d2 = 1.0;
    return with_pt_db(cfg, pt_db);
}

void reconcile_relay(std::vector<Gate>& gates, const std::string& tag,
                     const analytic::RelayAnalyticInputs& in, double bound) {
    const auto rel_err = [](double got, double want) {
        if (want == 0.0) return std::abs(got);
        return std::abs(got - want) / std::abs(want);
    };
    const double q_kr = oracle::quad_prob_relay_in_kr(in);
    const double q_p1 = oracle::quad_phi1(in);
    const double q_p3 = oracle::quad_phi3(in);
    const double e_kr = rel_err(analytic::prob_relay_in_kr(in), q_kr);
    const double e_p1 = rel_err(analytic::phi1(in), q_p1);
    const double e_p3 = rel_err(analytic::phi3(in), q_p3);
    gates.push_back({tag + " membership vs quadrature", e_kr, bound, e_kr <= bound});
    gates.push_back({tag + " phi1 vs quadrature", e_p1, bound, e_p1 <= bound});
    gates.push_back({tag + " phi3 vs quadrature", e_p3, bound, e_p3 <= bound});
}

void rayleigh_suite(std::vector<Gate>& gates) {
    const double bound = 1e-5;
    int idx = 0;
    for (model::DuplexMode mode : {model::DuplexMode::HD, model::DuplexMode::FD}) {
        for (double eps : {0.0, 0.05}) {
            model::SystemConfig cfg = base_config(2, mode, 30.0);
            for (auto& r : cfg.relays) {
                r.si.kappa = 1.0;
                r.si.vartheta = 0.2;
                r.sic.eps_relay = eps;
                r.sic.eps_d2 = eps;
            }
            const auto in = analytic::relay_inputs(cfg, 0);
            reconcile_relay(gates, "rayleigh[" + std::to_string(idx++) + "]", in, bound);
        }
    }
}

void degenerate_suite(std::vector<Gate>& gates) {
    // Rate high enough that the user-1 threshold reaches the a3/a4 ceiling:
    // every path must report certain outage.
    model::SystemConfig cfg = base_config(2, model::DuplexMode::HD, 30.0);
    cfg.rate_d1 = 1.0;  // threshold 3 == a3/a4
    const double exact = analytic::op_tsrs_exact(cfg).value;
    const double asym = analytic::op_tsrs_asymptotic(cfg).value;
    const double quad = oracle::op_tsrs_quadrature(cfg).value;
    const double exact_s = analytic::op_ssrs_exact(cfg).value;
    sim::McSettings mc{10'000, 7, 1u << 12, 1};
    const double sim_t = sim::estimate_op(cfg, sim::Strategy::TSRS, mc).value;
    gates.push_back({"degenerate exact == 1", std::abs(exact - 1.0), 0.0, exact == 1.0});
    gates.push_back({"degenerate asymptotic == 1", std::abs(asym - 1.0), 0.0, asym == 1.0});
    gates.push_back({"degenerate quadrature == 1", std::abs(quad - 1.0), 0.0, quad == 1.0});
    gates.push_back({"degenerate ssrs exact == 1", std::abs(exact_s - 1.0), 0.0, exact_s == 1.0});
    gates.push_back({"degenerate monte carlo == 1", std::abs(sim_t - 1.0), 0.0, sim_t == 1.0});
}

void reduction_suite(std::vector<Gate>& gates) {
    // Half duplex + perfect SIC: the general forms must match the reduced
    // ones once the duplex and residual terms cancel.
    const double bound = 1e-10;
    std::uint64_t state = 42;
    auto next = [&state] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state % 10'000) / 10'000.0;
    };
    double worst_kr = 0.0, worst_p1 = 0.0, worst_p3 = 0.0;
    for (int i = 0; i < 25; ++i) {
        model::RelayProfile p;
        p.s1 = {1.0 + std::floor(next() * 3.0), 0.3 + 2.0 * next()};
        p.s2 = {1.0 + std::floor(next() * 3.0), 0.3 + 2.0 * next()};
        p.d1 = {0.5 + 2.5 * next(), 0.3 + 2.0 * next()};
        p.d2 = {0.5 + 2.5 * next(), 0.3 + 2.0 * next()};
        p.si.kappa = 0.0;
        model::SystemConfig cfg = model::SystemConfig::uniform(1, p);
        cfg.mode = model::DuplexMode::HD;
        cfg.power = model::PowerAllocation::qos(0.6 + 0.3 * next(), 0.6 + 0.3 * next());
        cfg.rate_d1 = 0.05 + 0.2 * next();
        cfg.rate_d2 = 0.3 + 0.7 * next();
        cfg = with_pt_db(cfg, 10.0 + 40.0 * next());
        const auto in = analytic::relay_inputs(cfg, 0);
        const auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        };
        worst_kr = std::max(worst_kr, rel(analytic::prob_relay_in_kr(in),
                                          analytic::prob_relay_in_kr_hd(in)));
        worst_p1 = std::max(worst_p1, rel(analytic::phi1(in), analytic::phi1_psic(in)));
        worst_p3 = std::max(worst_p3, rel(analytic::phi3(in), analytic::phi3_hd_psic(in)));
    }
    gates.push_back({"reduction membership general vs hd", worst_kr, bound, worst_kr <= bound});
    gates.push_back({"reduction phi1 general vs psic", worst_p1, bound, worst_p1 <= bound});
    gates.push_back({"reduction phi3 general vs hd/psic", worst_p3, bound, worst_p3 <= bound});
}

}  // namespace

std::vector<Gate> validate_builtin(const std::string& suite) {
    std::vector<Gate> gates;
    if (suite == "rayleigh" || suite == "all") rayleigh_suite(gates);
    if (suite == "degenerate" || suite == "all") degenerate_suite(gates);
    if (suite == "reduction" || suite == "all") reduction_suite(gates);
    if (gates.empty())
        throw ConfigError("unknown validation suite '" + suite +
                          "' (expected rayleigh, degenerate, reduction, or all)");
    return gates;
}

std::vector<Gate> validate_config(const ExperimentConfig& exp) {
    std::vector<Gate> gates;
    const model::SystemConfig& cfg = exp.system;
    cfg.validate();
    for (std::size_t i = 0; i < cfg.relay_count(); ++i) {
        const auto in = analytic::relay_inputs(cfg, i);
        analytic::validate_closed_form_shapes(in);
        reconcile_relay(gates, "relay " + std::to_string(i + 1), in, 1e-5);
    }
    const double exact = analytic::op_tsrs_exact(cfg).value;
    sim::McSettings mc{exp.run.trials, exp.run.seed, 1u << 16, exp.run.workers};
    const OutageEstimate sim_est = sim::estimate_op(cfg, sim::Strategy::TSRS, mc);
    const double sigma = *sim_est.half_width / 1.96;
    const double diff = std::abs(sim_est.value - exact);
    const double bound = std::max(4.0 * sigma, 4.0 / static_cast<double>(exp.run.trials));
    gates.push_back({"tsrs exact vs monte carlo (4 sigma)", diff, bound, diff <= bound});
    return gates;
}

void write_gate_report(std::ostream& out, const std::vector<Gate>& gates) {
    for (const Gate& g : gates)
        out << (g.pass ? "PASS" : "FAIL") << " | " << g.name
            << " | measured=" << format_double(g.measured) << " bound=" << format_double(g.bound)
            << '\n';
}

bool all_pass(const std::vector<Gate>& gates) {
    for (const Gate& g : gates)
        if (!g.pass) return false;
    return true;
}

}  // namespace relaylab::cli

namespace relaylab {

std::string method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Asymptotic: return "asymptotic";
        case Method::MonteCarlo: return "mc";
        case Method::Quadrature: return "quadrature";
    }
    return "?";
}

}  // namespace relaylab
