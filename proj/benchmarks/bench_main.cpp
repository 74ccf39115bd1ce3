#include <benchmark/benchmark.h>

#include "relaylab/analytic.hpp"
#include "relaylab/config.hpp"
#include "relaylab/model.hpp"
#include "relaylab/oracle.hpp"
#include "relaylab/placement.hpp"
#include "relaylab/simulate.hpp"
#include "relaylab/special.hpp"

using namespace relaylab;

namespace {

model::SystemConfig mixed_config(model::DuplexMode mode) {
    model::RelayProfile p;
    p.s1 = {2.0, 1.55};
    p.s2 = {3.0, 1.7};
    p.d1 = {1.75, 1.3};
    p.d2 = {1.5, 1.6};
    p.si = {1.25, 1.0, 1.0, 0.2};
    p.sic = {0.01, 0.01, 2.0, 2.0};
    model::SystemConfig cfg = model::SystemConfig::uniform(3, p);
    cfg.mode = mode;
    cfg.power = model::PowerAllocation::qos(0.75, 0.75);
    cfg.rate_d1 = 0.2;
    cfg.rate_d2 = 1.0;
    return cli::with_pt_db(cfg, 40.0);
}

void BM_RegGammaQ(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-4;
        benchmark::DoNotOptimize(special::reg_gamma_q(2.5, x));
    }
}
BENCHMARK(BM_RegGammaQ);

void BM_MembershipClosedForm(benchmark::State& state) {
    const auto in = analytic::relay_inputs(mixed_config(model::DuplexMode::FD), 0);
    for (auto _ : state) benchmark::DoNotOptimize(analytic::prob_relay_in_kr(in));
}
BENCHMARK(BM_MembershipClosedForm);

void BM_TsrsExact(benchmark::State& state) {
    const auto cfg = mixed_config(model::DuplexMode::FD);
    for (auto _ : state) benchmark::DoNotOptimize(analytic::op_tsrs_exact(cfg).value);
}
BENCHMARK(BM_TsrsExact);

void BM_QuadPhi3(benchmark::State& state) {
    const auto in = analytic::relay_inputs(mixed_config(model::DuplexMode::FD), 0);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::quad_phi3(in));
}
BENCHMARK(BM_QuadPhi3);

void BM_GammaSampler(benchmark::State& state) {
    sim::RngStream rng(1, 0);
    const double shape = static_cast<double>(state.range(0)) / 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(rng.gamma(shape, 1.0));
}
BENCHMARK(BM_GammaSampler)->Arg(1)->Arg(2)->Arg(4);

void BM_McTrialBlock(benchmark::State& state) {
    const auto cfg = mixed_config(model::DuplexMode::FD);
    std::uint64_t block = 0;
    for (auto _ : state) {
        sim::McSettings mc{4096, 1, 4096, 1};
        mc.seed = ++block;
        benchmark::DoNotOptimize(sim::estimate_op(cfg, sim::Strategy::TSRS, mc).value);
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_McTrialBlock);

void BM_PlacementGridRow(benchmark::State& state) {
    const auto cfg = [&] {
        auto c = mixed_config(model::DuplexMode::FD);
        c.layout = model::NodeLayout{};
        for (auto& r : c.relays) r.sic = {0.0, 0.0, 2.0, 2.0};
        return c;
    }();
    for (auto _ : state)
        for (int p = 0; p < 64; ++p)
            benchmark::DoNotOptimize(placement::evaluate_position(cfg, 3.0, p * 6.28 / 64.0));
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_PlacementGridRow);

}  // namespace

BENCHMARK_MAIN();
