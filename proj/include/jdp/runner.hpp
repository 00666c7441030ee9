#pragma once

#include <iosfwd>

#include "jdp/run_config.hpp"

namespace jdp {

/// Outcome of a full pricing run, before or after writing artifacts.
struct RunArtifacts {
    FixedPointResult result;
    std::vector<OracleQuote> quotes;       // in config order
    std::vector<double> quote_spots;       // spot per quote row
    ResidualReport residual;
};

/// Solves the fixed point for the config and computes the requested oracle
/// quotes. Throws on invariant violations.
RunArtifacts run_pricing(const RunConfig& config);

/// run_pricing plus deterministic artifact files in config.output_dir:
/// value_surface.csv (T,x,value), boundary.csv (T,c,fit_slope),
/// convergence.json (per-iterate n/gap/bounds/ratio) and, when any oracle is
/// enabled, oracle_quotes.json. Reruns with the same config are byte
/// identical. `log` gets a short human summary.
void run_and_write(const RunConfig& config, std::ostream& log);

/// Price v(spot, maturity) by bilinear interpolation of the solved surface,
/// plus the certified tail bound at termination. maturity outside
/// [0, horizon] or spot < 0 throw OutOfRange.
struct PriceAtResult {
    double price = 0.0;
    double bound = 0.0;      // a-priori (or refined) tail at the final iterate
    int iterations = 0;
};
PriceAtResult price_at(const RunConfig& config, double spot, double maturity);

/// Built-in smoke battery over three parameter sets (diffusion only, Merton
/// lognormal, discrete atoms): runs the fixed point with the invariant suite,
/// the residual classification and the fixed-point defect check. Returns 0 on
/// success, 2 on any violation; writes one line per check to `log`.
int selftest(std::ostream& log);

}  // namespace jdp
