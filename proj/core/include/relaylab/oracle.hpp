#pragma once

#include <functional>

#include "relaylab/analytic.hpp"
#include "relaylab/estimate.hpp"
#include "relaylab/model.hpp"

namespace relaylab::oracle {

/// Tolerances and budget for the adaptive quadratures. Infinite domains are
/// cut at the `trunc_quantile` point of the dominating Gamma factor; the
/// discarded mass is bounded by 1 - trunc_quantile per dimension.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-7;
    double trunc_quantile = 1.0 - 1e-10;
    int max_subdivisions = 4000;
    /// Keep the self-interference dimension even when the integrand does not
    /// depend on it (used to test the analytic dimension collapse).
    bool force_full_dims = false;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a,b]. Worst-panel-first
/// refinement with a deterministic tie-break, so results are reproducible.
/// Throws AccuracyError (carrying the best estimate) if the budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec);

/// Service-set membership probability evaluated from the defining integral:
/// the user-1 SINR tail at the relay is integrated against the interferer
/// and self-interference densities, then composed with the two second-hop
/// gamma tails. Handles any real shapes.
double quad_prob_relay_in_kr(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec = {});

/// Joint user-2 probability at D2 from its defining one-dimensional integral.
double quad_phi1(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec = {});

/// Joint source-side probability from its defining integral. The gains with
/// analytic tails (source 1, residual) are folded in as regularized gamma
/// functions; the remaining interferer/self-interference plane is quadratured.
double quad_phi3(const analytic::RelayAnalyticInputs& in, const QuadratureSpec& spec = {});

/// Outage probabilities assembled like the exact path but with the
/// quadrature values in place of the closed forms.
OutageEstimate op_ssrs_quadrature(const model::SystemConfig& cfg, const QuadratureSpec& spec = {});
OutageEstimate op_tsrs_quadrature(const model::SystemConfig& cfg, const QuadratureSpec& spec = {});

}  // namespace relaylab::oracle
