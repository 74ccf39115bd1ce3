#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaylab/config.hpp"
#include "relaylab/estimate.hpp"
#include "relaylab/oracle.hpp"
#include "relaylab/placement.hpp"

namespace relaylab::cli {

/// One sweep point: P_T/sigma^2 in dB plus one outage column per requested
/// method (and the Monte Carlo half-width when MC is requested).
struct CurveRow {
    double pt_db = 0.0;
    std::optional<double> exact;
    std::optional<double> asymptotic;
    std::optional<double> mc;
    std::optional<double> mc_half_width;
    std::optional<double> quadrature;
};

/// Shortest round-trip decimal formatting capped at 10 significant digits,
/// locale independent.
std::string format_double(double v);

OutageEstimate compute_op(const model::SystemConfig& cfg, Method method, sim::Strategy strategy,
                          const RunParams& run);

std::vector<CurveRow> run_curve(const ExperimentConfig& exp);

void write_curve_csv(std::ostream& out, const std::vector<Method>& methods,
                     const std::vector<CurveRow>& rows);

void write_placement_summary(std::ostream& out, const placement::GridPoint& best);
void write_grid_csv(std::ostream& out, const placement::PlacementResult& result);

struct Gate {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Built-in reconciliation suites: "rayleigh" (closed forms against
/// quadrature), "degenerate" (saturated-threshold behavior), "reduction"
/// (general forms against the simplified half-duplex/perfect-SIC forms),
/// or "all".
std::vector<Gate> validate_builtin(const std::string& suite);

/// Reconciles the closed forms of every relay of a user config against
/// quadrature, and the exact outage against Monte Carlo.
std::vector<Gate> validate_config(const ExperimentConfig& exp);

void write_gate_report(std::ostream& out, const std::vector<Gate>& gates);

bool all_pass(const std::vector<Gate>& gates);

}  // namespace relaylab::cli
