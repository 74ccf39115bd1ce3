#include "relaylab/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab::special {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// ln(P(a,x)) via the ascending series gamma(a,x) = x^a e^-x sum x^n / (a)_n+1.
// Valid for x < a + 1 where the series converges fast.
double log_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return -x + a * std::log(x) - log_gamma(a) + std::log(sum);
}

// ln(Q(a,x)) via the Legendre continued fraction (modified Lentz).
// Valid for x >= a + 1.
double log_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return -x + a * std::log(x) - log_gamma(a) + std::log(h);
}

void check_pq_domain(double a, double x) {
    if (!(a > 0.0)) throw NumericError("incomplete gamma: shape must be positive, got " + std::to_string(a));
    if (!(x >= 0.0)) throw NumericError("incomplete gamma: argument must be nonnegative, got " + std::to_string(x));
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw NumericError("log_gamma: argument must be positive, got " + std::to_string(x));
    return std::lgamma(x);
}

double reg_gamma_p(double a, double x) {
    check_pq_domain(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::exp(log_p_series(a, x));
    return 1.0 - std::exp(log_q_cf(a, x));
}

double reg_gamma_q(double a, double x) {
    check_pq_domain(a, x);
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - std::exp(log_p_series(a, x));
    return std::exp(log_q_cf(a, x));
}

double log_reg_gamma_q(double a, double x) {
    check_pq_domain(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        // Q is bounded away from 0 here; the cancellation in 1-P is harmless.
        return std::log1p(-std::exp(log_p_series(a, x)));
    }
    return log_q_cf(a, x);
}

double log_upper_gamma(double a, double x) {
    return log_gamma(a) + log_reg_gamma_q(a, x);
}

double finite_upper_gamma_sum(double m, double x) {
    if (!(m >= 1.0) || m != std::floor(m))
        throw NumericError("finite_upper_gamma_sum: shape must be a positive integer, got " + std::to_string(m));
    if (!(x >= 0.0)) throw NumericError("finite_upper_gamma_sum: argument must be nonnegative");
    if (x == 0.0) return 1.0;
    const int n = static_cast<int>(m);
    const double lx = std::log(x);
    SignedLogSum sum;
    for (int p = 0; p < n; ++p) sum.add_log(-x + p * lx - std::lgamma(p + 1.0));
    return sum.value();
}

double generalized_binomial(double top, int k) {
    if (k < 0) throw NumericError("generalized_binomial: k must be nonnegative");
    if (k == 0) return 1.0;
    if (!(top - k + 1.0 > 0.0))
        throw NumericError("generalized_binomial: gamma pole at top-k+1 = " + std::to_string(top - k + 1.0));
    return std::exp(std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0));
}

double log_binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) throw NumericError("log_binomial: need 0 <= k <= n");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double gamma_quantile(double shape, double mean, double p) {
    if (!(shape > 0.0) || !(mean > 0.0)) throw NumericError("gamma_quantile: shape and mean must be positive");
    if (!(p >= 0.0 && p < 1.0)) throw NumericError("gamma_quantile: p must lie in [0,1)");
    if (p == 0.0) return 0.0;
    // Bracket then bisect on the regularized CDF. Cheap relative to the
    // integrals it truncates, and monotone so bisection cannot fail.
    double lo = 0.0;
    double hi = mean;
    while (reg_gamma_p(shape, shape * hi / mean) < p) {
        hi *= 2.0;
        if (hi > 1e300) throw NumericError("gamma_quantile: bracket overflow");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (reg_gamma_p(shape, shape * mid / mean) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void SignedLogSum::add(double sign, double log_magnitude) {
    if (sign == 0.0 || log_magnitude == -std::numeric_limits<double>::infinity()) return;
    terms_.push_back({log_magnitude, sign < 0.0 ? -1.0 : 1.0});
}

std::pair<double, double> SignedLogSum::log_value() const {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    if (terms_.empty()) return {kNegInf, 0.0};
    double max_log = kNegInf;
    for (const Term& t : terms_) max_log = std::max(max_log, t.log_mag);
    if (max_log == kNegInf) return {kNegInf, 0.0};

    constexpr double kDropBelow = -41.5;  // ln(1e-18)
    double sum = 0.0;
    double comp = 0.0;  // Neumaier compensation
    for (const Term& t : terms_) {
        const double shifted = t.log_mag - max_log;
        if (shifted < kDropBelow) continue;
        const double v = t.sign * std::exp(shifted);
        const double s = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - s) + v;
        else
            comp += (v - s) + sum;
        sum = s;
    }
    sum += comp;
    if (sum == 0.0) return {kNegInf, 0.0};
    return {max_log + std::log(std::abs(sum)), sum < 0.0 ? -1.0 : 1.0};
}

double SignedLogSum::value() const {
    const auto [log_abs, sign] = log_value();
    return sign * std::exp(log_abs);
}

}  // namespace relaylab::special
