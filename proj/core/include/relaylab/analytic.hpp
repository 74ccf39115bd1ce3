#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relaylab/estimate.hpp"
#include "relaylab/model.hpp"

namespace relaylab::analytic {

/// Everything the closed forms need about one relay: resolved link variances,
/// the effective self-interference variance, per-hop SNRs, thresholds, and
/// the cancellation parameters. Pure value type.
struct RelayAnalyticInputs {
    // Link variances (distance already folded in).
    double omega_s1 = 1.0;
    double omega_s2 = 1.0;
    double omega_d1 = 1.0;
    double omega_d2 = 1.0;
    double omega_si = 0.0;  // omega_rr * kappa * P_R^(vartheta-1)

    // Nakagami shapes.
    double m_s1 = 1.0;
    double m_s2 = 1.0;
    double m_d1 = 1.0;
    double m_d2 = 1.0;
    double m_si = 1.0;
    double m_res_relay = 1.0;
    double m_res_d2 = 1.0;

    // Per-hop SNRs (linear).
    double rho_s = 1.0;
    double rho_r = 1.0;
    double rho_d1 = 1.0;
    double rho_d2 = 1.0;

    double varpi = 0.0;
    double eps_relay = 0.0;
    double eps_d2 = 0.0;

    double a1 = 0.75, a2 = 0.25, a3 = 0.75, a4 = 0.25;
    double gamma1 = 0.0;  // user-1 SINR threshold
    double gamma2 = 0.0;  // user-2 SINR threshold
};

/// Resolves geometry, SI variance, SNRs, and thresholds for one relay.
RelayAnalyticInputs relay_inputs(const model::SystemConfig& cfg, std::size_t relay);

/// The finite-expansion closed forms require integer shapes on the two
/// source links and on the user-2 residual channel. Throws NumericError.
void validate_closed_form_shapes(const RelayAnalyticInputs& in);

/// Whether user 1's rate is unreachable outright (threshold at or above the
/// a3/a4 ceiling of the second-hop SINRs).
bool degenerate_user1(const RelayAnalyticInputs& in);

/// The service-set membership probability: all three user-1 conditions hold.
double prob_relay_in_kr(const RelayAnalyticInputs& in);
double prob_relay_in_kr_asymptotic(const RelayAnalyticInputs& in);

/// CDF of the user-1 SINR at the relay, evaluated at `gamma`.
double cdf_sinr_relay_user1(const RelayAnalyticInputs& in, double gamma);

/// Conditional service factors for the two-stage scheme. phi1 covers both
/// user-2-side conditions at D2, phi2 the user-1 condition at D1, phi3 the
/// joint source-side conditions at the relay.
double phi1(const RelayAnalyticInputs& in);
double phi1_psic(const RelayAnalyticInputs& in);  // eps_d2 = 0 specialization
double phi1_asymptotic(const RelayAnalyticInputs& in);
double phi2(const RelayAnalyticInputs& in);
double phi2_asymptotic(const RelayAnalyticInputs& in);
double phi3(const RelayAnalyticInputs& in);
double phi3_asymptotic(const RelayAnalyticInputs& in);

/// Reduced forms with the duplex and residual terms cancelled, kept as an
/// independent path for the half-duplex / perfect-SIC identity checks.
double prob_relay_in_kr_hd(const RelayAnalyticInputs& in);
double phi3_hd_psic(const RelayAnalyticInputs& in);

/// Pr(user-2 conditions hold | relay serves user 1), assembled from the
/// factor probabilities by Bayes.
double p_phi(const RelayAnalyticInputs& in);
double p_phi_asymptotic(const RelayAnalyticInputs& in);

/// Largest of the two user-2 gain thresholds at D2.
double u_max(const RelayAnalyticInputs& in);

// Outage probabilities.
OutageEstimate op_ssrs_exact(const model::SystemConfig& cfg);
OutageEstimate op_ssrs_asymptotic(const model::SystemConfig& cfg);
OutageEstimate op_tsrs_exact(const model::SystemConfig& cfg);
OutageEstimate op_tsrs_asymptotic(const model::SystemConfig& cfg);

/// Statistically identical relays: binomial sum over service-set sizes.
double tsrs_combine_binomial(double p_member, double p_phi, std::size_t count);

/// Distinct relays: explicit enumeration over service-set patterns.
/// Throws CapacityError above 20 relays.
double tsrs_combine_enumerate(std::span<const double> p_member, std::span<const double> p_phi);

/// Clamp a raw probability into [0,1]; drift beyond `tol` is a NumericError.
double clamp_probability(double raw, double tol, const char* context);

}  // namespace relaylab::analytic
