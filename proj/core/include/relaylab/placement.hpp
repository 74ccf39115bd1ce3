#pragma once

#include <cstddef>
#include <vector>

#include "relaylab/model.hpp"

namespace relaylab::placement {

/// Polar search lattice for the relay cluster: 64 radii spaced 6/64 m by 64
/// angles spaced 6.28/64 rad (the reference lattice, kept verbatim so
/// coordinates reproduce bit-for-bit). The r = 0 ring collapses to a single
/// point, leaving 64*64 - 63 = 4033 distinct evaluations.
struct PlacementGrid {
    int radial_steps = 64;
    int angular_steps = 64;
    double radial_step = 6.0 / 64.0;
    double angular_step = 6.28 / 64.0;
};

struct GridPoint {
    int n = 0;  // radial index
    int p = 0;  // angular index
    double r = 0.0;
    double theta = 0.0;
    double x = 0.0;
    double y = 0.0;
    double d_s1 = 0.0;
    double d_s2 = 0.0;
    double d_d1 = 0.0;
    double d_d2 = 0.0;
    double op = 1.0;
};

struct PlacementResult {
    GridPoint best;
    std::vector<GridPoint> grid;
};

/// Two-stage outage probability with the relay cluster moved to (r, theta).
/// Requires a geometry-mode config (layout present).
double evaluate_position(const model::SystemConfig& cfg, double r, double theta);

/// Exhaustive lattice search for the minimum-outage relay position.
/// Ties break toward the smaller radial index, then the smaller angular one.
PlacementResult optimize(const model::SystemConfig& cfg, const PlacementGrid& grid = {});

}  // namespace relaylab::placement
