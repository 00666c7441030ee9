#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jdp/model.hpp"

namespace jdp {

/// Controls for the least-squares Monte Carlo oracle. Path count is rounded
/// down to a multiple of two when antithetic pairing is on. basis_degree 0
/// disables early exercise (European mode).
struct McConfig {
    long paths = 100000;
    int steps = 200;
    std::uint64_t seed = 1;
    int basis_degree = 3;
    bool antithetic = true;
};

struct OracleQuote {
    double price = 0.0;
    double std_error = 0.0;  // zero for the closed-form and lattice oracles
    std::string method;
};

/// European put under the jump diffusion with lognormal jump sizes, by
/// conditioning on the jump count: a Poisson-weighted series of Black
/// put values with inflated variance sigma^2 T + n s^2 and drift shifted by
/// n*log_mean. Truncated once the remaining Poisson mass is below 1e-12
/// (SeriesNotConverged past 1000 terms). lambda = 0 reduces to Black-Scholes
/// for any jump measure.
OracleQuote merton_european_put(const ModelParams& p, double spot,
                                double maturity);

/// American put on a Cox-Ross-Rubinstein tree, diffusion only: requires
/// lambda = 0 (else LambdaNotZero). The quote averages the step and step+1
/// trees to damp the odd-even oscillation.
OracleQuote binomial_american_put(const ModelParams& p, double spot,
                                  double maturity, int steps);

/// Path matrix of the jump diffusion on a uniform step grid: paths rows of
/// `steps` columns holding the spot after each step (the start value is not
/// stored). Antithetic pairs share jump draws and flip only the Brownian
/// increments; every path (pair) owns an engine seeded from (seed, index), so
/// the parallel and serial fills are bit-identical.
std::vector<double> simulate_jump_paths(const ModelParams& p, double spot,
                                        double maturity, const McConfig& mc,
                                        bool parallel = true);

/// Longstaff-Schwartz lower-bound estimate of the American put. Regression
/// of discounted continuation values on monomials in x/K up to basis_degree,
/// in-the-money paths only; all reductions are serial so the quote does not
/// depend on the thread count. std_error is the standard error of the mean
/// over independent units (antithetic pair means count as one unit).
OracleQuote lsmc_american_put(const ModelParams& p, double spot,
                              double maturity, const McConfig& mc);

}  // namespace jdp
