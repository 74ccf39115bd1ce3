#pragma once

#include <optional>
#include <string>

namespace relaylab {

enum class Method { Exact, Asymptotic, MonteCarlo, Quadrature };

std::string method_name(Method m);

/// An outage probability together with how it was obtained. `raw` keeps the
/// value before clamping to [0,1] so out-of-range drift stays observable.
struct OutageEstimate {
    double value = 0.0;
    Method method = Method::Exact;
    double raw = 0.0;
    std::optional<double> half_width;  // Wald 95% half-width, Monte Carlo only
};

}  // namespace relaylab
