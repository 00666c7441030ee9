#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jdp/lcp_solver.hpp"

namespace jdp {

/// Result of the per-iterate surface checks: payoff/cap bounds, K at x = 0,
/// monotonicity in iteration and maturity, convexity and the 1-Lipschitz
/// property in x, and the boundary location. `ok` summarises; `detail` names
/// the first failure with its location and magnitude.
struct InvariantReport {
    bool bounds_ok = true;
    bool left_value_ok = true;
    bool monotone_iter_ok = true;
    bool monotone_time_ok = true;
    bool convex_ok = true;
    bool lipschitz_ok = true;
    bool boundary_ok = true;
    bool ok = true;
    std::string detail;
};

/// Checks v against the invariant suite; prev, when given, must be the
/// previous iterate (ordering check v >= prev). boundary_tol is the contact
/// tolerance used for the boundary extraction, <= 0 meaning 1e-6 * K.
/// expect_contact = false skips the boundary leg: with zero interest the
/// stopping region is genuinely empty and no boundary exists. Ordering and
/// bound slacks are 1e-9 K; the convexity slack is 1e-6 K, sized for the
/// layer the far-field truncation u(x_M) = 0 leaves when jumps can cross
/// the strike from above, and the second difference at the last interior
/// node (which straddles that clamp) is not checked at all.
InvariantReport check_surface_invariants(const ValueSurface& v,
                                         const ValueSurface* prev,
                                         double boundary_tol = 0.0,
                                         bool expect_contact = true);

/// Per-iterate diagnostics of the fixed-point loop. gap is the sup-norm
/// distance to the previous iterate; the bounds are the geometric tail
/// estimates (lambda/(lambda+r))^n * K, the refined variant multiplying in
/// (1 - exp(-(r+lambda)T0))^n; ratio is gap_n/gap_{n-1} (unset for the first
/// iterate) and should stay below lambda/(lambda+r) up to discretization.
struct IterationReport {
    int n = 0;
    double gap = 0.0;
    double apriori_bound = 0.0;
    double refined_bound = 0.0;
    std::optional<double> ratio;
    bool invariants_ok = true;
};

struct FixedPointResult {
    enum class stop_reason { gap_tol, bound_tol, max_iter };

    ValueSurface surface;  // final iterate, label "limit"
    FreeBoundary boundary;
    std::vector<IterationReport> reports;
    stop_reason terminated_by = stop_reason::gap_tol;
    double tol = 0.0;
    std::string warning;  // set when max_iter fired first
};

/// Smallest n with bound_n <= tol, where bound_n is the a-priori tail
/// (lambda/(lambda+r))^n * K or, with use_refined, the refined tail. Zero
/// intensity gives 1. When the bound cannot reach tol (r = 0 with lambda > 0
/// and no refined factor) the count is capped at 10000.
int required_iterations(const ModelParams& p, double tol, bool use_refined);

/// Iterates v_{n+1} = J v_n from the payoff until the gap or the running
/// bound (refined when use_refined) falls to tol, or max_iter is hit (then
/// result.warning is set; never an exception). Every iterate must pass the
/// invariant suite, else InvariantViolated. tol <= 0 resolves to 1e-4 * K;
/// max_iter <= 0 to required_iterations + 5.
FixedPointResult run_fixed_point(const ModelParams& p,
                                 std::shared_ptr<const Grid> grid,
                                 const SolverConfig& config, double tol = 0.0,
                                 int max_iter = 0, bool use_refined = false);

/// Fixed-point defect ||J v - v|| of a candidate limit surface.
double check_fixed_point(const ValueSurface& v, const ModelParams& p,
                         const SolverConfig& config);

}  // namespace jdp
