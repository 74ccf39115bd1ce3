#include "relaylab/placement.hpp"

#include <cmath>

#include "relaylab/analytic.hpp"
#include "relaylab/errors.hpp"

namespace relaylab::placement {

namespace {

model::SystemConfig at_position(const model::SystemConfig& cfg, double r, double theta) {
    if (!cfg.layout)
        throw ConfigError("placement: config must use geometry mode (layout + per-link omega0)");
    model::SystemConfig moved = cfg;
    moved.layout->relay_r = r;
    moved.layout->relay_theta = theta;
    return moved;
}

GridPoint evaluate_point(const model::SystemConfig& cfg, int n, int p, const PlacementGrid& grid) {
    GridPoint pt;
    pt.n = n;
    pt.p = p;
    pt.r = n * grid.radial_step;
    pt.theta = p * grid.angular_step;
    const model::SystemConfig moved = at_position(cfg, pt.r, pt.theta);
    pt.x = pt.r * std::cos(pt.theta);
    pt.y = pt.r * std::sin(pt.theta);
    pt.d_s1 = model::node_distance(*moved.layout, model::NodeId::S1);
    pt.d_s2 = model::node_distance(*moved.layout, model::NodeId::S2);
    pt.d_d1 = model::node_distance(*moved.layout, model::NodeId::D1);
    pt.d_d2 = model::node_distance(*moved.layout, model::NodeId::D2);
    pt.op = analytic::op_tsrs_exact(moved).value;
    return pt;
}

}  // namespace

double evaluate_position(const model::SystemConfig& cfg, double r, double theta) {
    return analytic::op_tsrs_exact(at_position(cfg, r, theta)).value;
}

PlacementResult optimize(const model::SystemConfig& cfg, const PlacementGrid& grid) {
    PlacementResult result;
    result.grid.reserve(static_cast<std::size_t>(grid.radial_steps) * grid.angular_steps -
                        (grid.angular_steps - 1));
    for (int n = 0; n < grid.radial_steps; ++n) {
        const int angles = n == 0 ? 1 : grid.angular_steps;  // r = 0 ring deduplicated
        for (int p = 0; p < angles; ++p)
            result.grid.push_back(evaluate_point(cfg, n, p, grid));
    }
    result.best = result.grid.front();
    for (const GridPoint& pt : result.grid)
        if (pt.op < result.best.op) result.best = pt;  // scan order encodes the tie-break
    return result;
}

}  // namespace relaylab::placement
