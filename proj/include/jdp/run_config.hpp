#pragma once

#include <string>
#include <vector>

#include "jdp/iteration.hpp"
#include "jdp/oracles.hpp"

namespace jdp {

struct GridConfig {
    int m = 200;
    int n = 100;
    double width = 5.0;
};

struct IterationConfig {
    double tol = 0.0;    // <= 0 resolves to 1e-4 * strike
    int max_iter = 0;    // <= 0 resolves to required_iterations + 5
    bool use_refined_bound = false;
};

/// Which independent quotes to compute after the solve, and where.
struct OracleSelection {
    bool merton_european = false;
    bool binomial = false;
    bool lsmc = false;
    int binomial_steps = 2000;
    McConfig mc;
    std::vector<double> spots;  // quoted at the horizon maturity
};

/// Everything one pricing run needs. Parsed from strict JSON: unknown keys
/// are rejected and every complaint names the offending field path.
struct RunConfig {
    ModelParams model;  // validated on load
    GridConfig grid;
    SolverConfig solver;
    IterationConfig iteration;
    OracleSelection oracles;
    std::string output_dir = "out";
};

/// Loads and validates a config file. Throws ConfigError with the field path
/// for structural problems and the model validation errors for bad values.
RunConfig load_run_config(const std::string& path);

/// Parses config text (same contract; `where` names the source in messages).
RunConfig parse_run_config(const std::string& text, const std::string& where);

}  // namespace jdp
