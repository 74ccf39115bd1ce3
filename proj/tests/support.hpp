#pragma once

#include <cstdint>
#include <utility>

#include "relaylab/model.hpp"

namespace testsupport {

/// xorshift64* generator for test-case sampling; independent of the library
/// RNG under test.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    int int_in(int lo, int hi) { return lo + below(hi - lo + 1); }

private:
    std::uint64_t state_;
};

/// Reference regularized incomplete gamma pair (P, Q) in quad precision:
/// P from the ascending series, Q from the Legendre continued fraction, both
/// evaluated in __float128 (~33 significant digits).
std::pair<double, double> ref_reg_gamma_pq(double a, double x);

/// Unit-variance Rayleigh network at the given operating point (all shapes
/// and variances 1, rates 0.1 / 1.0, 0.75 power split).
relaylab::model::SystemConfig rayleigh_config(std::size_t relays, relaylab::model::DuplexMode mode,
                                              double pt_db, double kappa = 1.0,
                                              double vartheta = 0.2);

/// Random valid config for property tests: integer source shapes, real
/// destination/SI shapes, both duplex modes, optional residual interference.
relaylab::model::SystemConfig random_config(TestRng& rng, bool allow_fd = true,
                                            bool allow_ipsic = true);

}  // namespace testsupport
