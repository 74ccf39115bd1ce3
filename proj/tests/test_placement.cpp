#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaylab/config.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/experiment.hpp"
#include "relaylab/placement.hpp"
#include "support.hpp"

using namespace relaylab;
using placement::PlacementGrid;
using placement::PlacementResult;

namespace {

// Geometry-mode network used by the placement studies: all shapes 2, unit
// base variances, standard square layout.
model::SystemConfig placement_config(model::DuplexMode mode, double a1, double a3, double kappa,
                                     double vartheta, std::size_t relays, double pt_db) {
    model::RelayProfile p;
    p.s1 = {2.0, 1.0};
    p.s2 = {2.0, 1.0};
    p.d1 = {2.0, 1.0};
    p.d2 = {2.0, 1.0};
    p.si = {2.0, 1.0, kappa, vartheta};
    model::SystemConfig cfg = model::SystemConfig::uniform(relays, p);
    cfg.mode = mode;
    cfg.power = model::PowerAllocation::qos(a1, a3);
    cfg.rate_d1 = 0.1;
    cfg.rate_d2 = 1.0;
    cfg.layout = model::NodeLayout{};
    return cli::with_pt_db(cfg, pt_db);
}

}  // namespace

TEST_CASE("grid is deduplicated at the origin ring") {
    const auto cfg = placement_config(model::DuplexMode::FD, 0.55, 0.75, 1.0, 0.31, 2, 30.0);
    PlacementGrid small;
    small.radial_steps = 8;
    small.angular_steps = 8;
    const PlacementResult r = placement::optimize(cfg, small);
    CHECK(r.grid.size() == 8 * 8 - 7);
    CHECK(r.best.op <= placement::evaluate_position(cfg, 0.0, 0.0) + 1e-15);
}

TEST_CASE("default lattice evaluates 64*64 - 63 distinct points") {
    const auto cfg = placement_config(model::DuplexMode::FD, 0.55, 0.75, 1.0, 0.31, 2, 50.0);
    const PlacementResult r = placement::optimize(cfg);
    CHECK(r.grid.size() == 4033);
    std::ostringstream csv;
    cli::write_grid_csv(csv, r);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 4034);  // header + rows
}

TEST_CASE("reported distances satisfy the Euclidean relation") {
    const auto cfg = placement_config(model::DuplexMode::FD, 0.55, 0.75, 1.0, 0.31, 2, 30.0);
    PlacementGrid small;
    small.radial_steps = 5;
    small.angular_steps = 6;
    const PlacementResult r = placement::optimize(cfg, small);
    for (const auto& pt : r.grid) {
        CHECK(std::hypot(-6.0 - pt.x, 6.0 - pt.y) == doctest::Approx(pt.d_s1).epsilon(1e-9));
        CHECK(std::hypot(-6.0 - pt.x, -6.0 - pt.y) == doctest::Approx(pt.d_s2).epsilon(1e-9));
        CHECK(std::hypot(6.0 - pt.x, -6.0 - pt.y) == doctest::Approx(pt.d_d1).epsilon(1e-9));
        CHECK(std::hypot(6.0 - pt.x, 6.0 - pt.y) == doctest::Approx(pt.d_d2).epsilon(1e-9));
    }
}

TEST_CASE("reference distance row reproduces from the cartesian position") {
    // Position (-4.415, -0.870) pairs with distances (7.050, 5.369, 11.610, 12.477).
    model::NodeLayout layout;
    layout.relay_r = std::hypot(-4.415, -0.870);
    layout.relay_theta = std::atan2(-0.870, -4.415) + 2.0 * 3.14159265358979323846;
    CHECK(model::node_distance(layout, model::NodeId::S1) == doctest::Approx(7.050).epsilon(2e-4));
    CHECK(model::node_distance(layout, model::NodeId::S2) == doctest::Approx(5.369).epsilon(2e-4));
    CHECK(model::node_distance(layout, model::NodeId::D1) == doctest::Approx(11.610).epsilon(2e-4));
    CHECK(model::node_distance(layout, model::NodeId::D2) == doctest::Approx(12.477).epsilon(2e-4));
}

TEST_CASE("origin evaluation sees equal 8.485 m distances") {
    const auto cfg = placement_config(model::DuplexMode::FD, 0.55, 0.75, 1.0, 0.31, 2, 50.0);
    model::SystemConfig at_origin = cfg;
    at_origin.layout->relay_r = 0.0;
    for (auto node : {model::NodeId::S1, model::NodeId::S2, model::NodeId::D1, model::NodeId::D2})
        CHECK(model::node_distance(*at_origin.layout, node) == doctest::Approx(8.485).epsilon(1e-4));
}

TEST_CASE("half-duplex placement is independent of the SI cancellation factors") {
    const auto a = placement_config(model::DuplexMode::HD, 0.75, 0.75, 1.0, 0.31, 2, 40.0);
    const auto b = placement_config(model::DuplexMode::HD, 0.75, 0.75, 0.3, 0.9, 2, 40.0);
    for (double r : {0.5, 2.0, 4.5})
        for (double theta : {0.3, 2.1, 4.4})
            CHECK(placement::evaluate_position(a, r, theta) ==
                  doctest::Approx(placement::evaluate_position(b, r, theta)).epsilon(1e-14));
}

TEST_CASE("axis-symmetric network yields a mirror-symmetric outage field") {
    auto cfg = placement_config(model::DuplexMode::HD, 0.75, 0.75, 0.0, 1.0, 2, 40.0);
    cfg.layout->s1 = {0.0, 6.0};
    cfg.layout->s2 = {0.0, 6.0};
    cfg.layout->d1 = {0.0, -6.0};
    cfg.layout->d2 = {0.0, -6.0};
    for (double r : {1.0, 3.0})
        for (double theta : {0.4, 1.1, 2.8}) {
            const double direct = placement::evaluate_position(cfg, r, theta);
            const double mirrored =
                placement::evaluate_position(cfg, r, 3.14159265358979323846 - theta);
            CHECK(direct == doctest::Approx(mirrored).epsilon(1e-9));
        }
}

TEST_CASE("placement requires geometry mode") {
    model::SystemConfig cfg = testsupport::rayleigh_config(1, model::DuplexMode::FD, 30.0);
    CHECK_THROWS_AS(placement::evaluate_position(cfg, 1.0, 0.0), ConfigError);
}
