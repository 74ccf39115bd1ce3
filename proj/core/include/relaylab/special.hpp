#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace relaylab::special {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
/// Series for x < a+1, continued fraction otherwise.
double reg_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double reg_gamma_q(double a, double x);

/// ln Q(a,x), stable when Q underflows (x >> a).
double log_reg_gamma_q(double a, double x);

/// ln of the unnormalized upper incomplete gamma Gamma(a,x).
double log_upper_gamma(double a, double x);

/// e^{-x} * sum_{p=0}^{m-1} x^p / p!  -- the finite expansion of Q(m,x)
/// for integer m >= 1. Throws on non-integer m.
double finite_upper_gamma_sum(double m, double x);

/// Binomial coefficient C(top, k) with possibly non-integer top,
/// computed as a gamma ratio in the log domain. Requires top - k + 1 > 0.
double generalized_binomial(double top, int k);

/// ln C(n, k) for integers 0 <= k <= n.
double log_binomial(int n, int k);

/// Quantile of the Gamma law with shape m and mean omega: the x with
/// P(m, m*x/omega) = p. Used to truncate integration domains.
double gamma_quantile(double shape, double mean, double p);

/// Accumulates terms given as (sign, ln|term|) and evaluates the sum with a
/// single exponent shift. Terms more than ~41.5 nats (1e-18 relative) below
/// the running maximum are dropped; the remainder is summed with Neumaier
/// compensation in insertion order, so results are reproducible.
class SignedLogSum {
public:
    void add(double sign, double log_magnitude);
    void add_log(double log_magnitude) { add(1.0, log_magnitude); }

    /// The accumulated sum as a double (may underflow to 0 or overflow to inf).
    double value() const;

    /// (ln|sum|, sign) without leaving the log domain.
    std::pair<double, double> log_value() const;

    std::size_t size() const { return terms_.size(); }

private:
    struct Term {
        double log_mag;
        double sign;
    };
    std::vector<Term> terms_;
};

}  // namespace relaylab::special
