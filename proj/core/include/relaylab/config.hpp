#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaylab/estimate.hpp"
#include "relaylab/model.hpp"
#include "relaylab/simulate.hpp"

namespace relaylab::cli {

/// Run-time parameters that ride along with the system description: sweep
/// range, Monte Carlo budget, strategy, and which methods to evaluate.
struct RunParams {
    double db_start = 0.0;
    double db_stop = 60.0;
    double db_step = 5.0;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<Method> methods{Method::Exact};
    sim::Strategy strategy = sim::Strategy::TSRS;
    std::optional<double> pt_db;  // operating point for single-shot commands
};

struct ExperimentConfig {
    model::SystemConfig system;
    RunParams run;
};

/// Parses the flat key=value format ('#' comments, dotted sections, indexed
/// relay overrides). Unknown, duplicate, or malformed keys raise ConfigError
/// with the source line in the message.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

ExperimentConfig load_config(const std::string& path);

/// Comma-separated method list: exact, asymptotic, mc, quadrature.
std::vector<Method> parse_methods(std::string_view csv);

sim::Strategy parse_strategy(std::string_view name);

/// Copy of `cfg` operating at the given P_T over the relay noise floor, dB.
model::SystemConfig with_pt_db(const model::SystemConfig& cfg, double db);

}  // namespace relaylab::cli
