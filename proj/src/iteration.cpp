#include "jdp/iteration.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "jdp/errors.hpp"

namespace jdp {

namespace {

constexpr int kIterCap = 10000;

std::string locate(const char* what, int i, int j, double excess) {
    std::ostringstream os;
    os << what << " violated at node " << i << ", level " << j
       << " (excess " << excess << ")";
    return os.str();
}

}  // namespace

InvariantReport check_surface_invariants(const ValueSurface& v,
                                         const ValueSurface* prev,
                                         double boundary_tol,
                                         bool expect_contact) {
    const Grid& g = *v.grid;
    const double K = g.strike;
    const double slack = 1e-9 * K;
    const double convex_slack = 1e-6 * K;
    const int ns = g.n_space();
    const int nt = g.n_time();
    InvariantReport rep;

    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        rep.ok = false;
        if (rep.detail.empty()) rep.detail = msg;
    };

    std::vector<double> psi(ns);
    for (int i = 0; i < ns; ++i)
        psi[i] = g.x[i] < K ? K - g.x[i] : 0.0;

    for (int j = 0; j < nt && rep.bounds_ok; ++j) {
        const auto lev = v.level(j);
        for (int i = 0; i < ns; ++i) {
            if (lev[i] < psi[i]) {
                fail(rep.bounds_ok, locate("payoff lower bound", i, j,
                                           psi[i] - lev[i]));
                break;
            }
            if (lev[i] > K + slack) {
                fail(rep.bounds_ok, locate("cap v <= K", i, j, lev[i] - K));
                break;
            }
        }
    }

    for (int j = 0; j < nt; ++j) {
        if (v.at(0, j) != K) {
            fail(rep.left_value_ok,
                 locate("exact value K at x = 0", 0, j, v.at(0, j) - K));
            break;
        }
    }

    if (prev != nullptr) {
        if (prev->grid != v.grid && !prev->grid->same_layout(g))
            raise(errc::grid_mismatch, "'" + v.label + "' vs '" + prev->label +
                                           "'");
        for (std::size_t k = 0; k < v.values.size() && rep.monotone_iter_ok;
             ++k) {
            if (v.values[k] < prev->values[k] - slack)
                fail(rep.monotone_iter_ok,
                     locate("monotonicity in the iterate",
                            static_cast<int>(k % ns),
                            static_cast<int>(k / ns),
                            prev->values[k] - v.values[k]));
        }
    }

    for (int j = 0; j + 1 < nt && rep.monotone_time_ok; ++j) {
        const auto lo = v.level(j);
        const auto hi = v.level(j + 1);
        for (int i = 0; i < ns; ++i) {
            if (hi[i] < lo[i] - slack) {
                fail(rep.monotone_time_ok,
                     locate("monotonicity in maturity", i, j, lo[i] - hi[i]));
                break;
            }
        }
    }

    for (int j = 0; j < nt && rep.convex_ok && rep.lipschitz_ok; ++j) {
        const auto lev = v.level(j);
        for (int i = 0; i + 1 < ns; ++i) {
            const double dx = g.x[i + 1] - g.x[i];
            const double drop = lev[i] - lev[i + 1];
            if (drop < -slack) {
                fail(rep.lipschitz_ok,
                     locate("nonincreasing in x", i, j, -drop));
                break;
            }
            if (drop > dx + slack) {
                fail(rep.lipschitz_ok,
                     locate("1-Lipschitz in x", i, j, drop - dx));
                break;
            }
        }
        // the last interior node is skipped: its second difference straddles
        // the far-field clamp u(x_max) = 0, and when jumps can carry x_max
        // below the strike the true far value is positive, so that one
        // difference measures the domain width rather than the solution
        for (int i = 1; i + 2 < ns && rep.convex_ok; ++i) {
            const double dxl = g.x[i] - g.x[i - 1];
            const double dxr = g.x[i + 1] - g.x[i];
            const double sl = (lev[i] - lev[i - 1]) / dxl;
            const double sr = (lev[i + 1] - lev[i]) / dxr;
            // secant slopes must not decrease, up to a 1e-6 K perturbation
            // of the three values involved (truncation leaves a layer of
            // that size near the top of the grid)
            const double allowance = convex_slack * (1.0 / dxl + 1.0 / dxr);
            if (sr - sl < -allowance)
                fail(rep.convex_ok, locate("convexity in x", i, j, sl - sr));
        }
    }

    if (!expect_contact) return rep;

    try {
        const double tol = boundary_tol > 0.0 ? boundary_tol : 1e-6 * K;
        const FreeBoundary fb = extract_boundary(v, tol);
        if (fb.at_edge) {
            fail(rep.boundary_ok, "contact region reaches the highest node");
        } else {
            const double cell = std::exp(g.dy);
            for (std::size_t j = 0; j < fb.c.size(); ++j) {
                if (!(fb.c[j] > g.x[1]) || !(fb.c[j] < K)) {
                    fail(rep.boundary_ok,
                         locate("boundary inside (x_1, K)",
                                static_cast<int>(j) + 1, 0, fb.c[j]));
                    break;
                }
                if (j > 0 && fb.c[j] > fb.c[j - 1] * cell * (1.0 + 1e-12)) {
                    fail(rep.boundary_ok,
                         locate("boundary nonincreasing in maturity",
                                static_cast<int>(j) + 1, 0,
                                fb.c[j] - fb.c[j - 1]));
                    break;
                }
            }
        }
    } catch (const error& e) {
        fail(rep.boundary_ok, e.what());
    }

    return rep;
}

int required_iterations(const ModelParams& params, double tol,
                        bool use_refined) {
    const ModelParams p = validate(params);
    if (!(tol > 0.0))
        raise(errc::out_of_range, "tolerance must be positive");
    if (p.intensity == 0.0) return 1;
    double ratio = p.intensity / (p.intensity + p.rate);
    if (use_refined)
        ratio *= 1.0 - std::exp(-(p.rate + p.intensity) * p.horizon);
    double bound = p.strike;
    int n = 0;
    while (bound > tol) {
        if (n >= kIterCap || !(ratio < 1.0)) return kIterCap;
        bound *= ratio;
        ++n;
    }
    return n;
}

FixedPointResult run_fixed_point(const ModelParams& params,
                                 std::shared_ptr<const Grid> grid,
                                 const SolverConfig& config, double tol,
                                 int max_iter, bool use_refined) {
    const ModelParams p = validate(params);
    if (grid == nullptr) raise(errc::grid_mismatch, "null grid");
    if (tol <= 0.0) tol = 1e-4 * p.strike;
    if (max_iter <= 0)
        max_iter = std::min(required_iterations(p, tol, use_refined),
                            kIterCap - 5) + 5;

    const double ratio_base =
        p.intensity > 0.0 ? p.intensity / (p.intensity + p.rate) : 0.0;
    const double ratio_refined =
        ratio_base * (1.0 - std::exp(-(p.rate + p.intensity) * p.horizon));

    FixedPointResult res;
    res.tol = tol;
    ValueSurface v = payoff_surface(std::move(grid));
    double prev_gap = 0.0;
    res.terminated_by = FixedPointResult::stop_reason::max_iter;

    // with zero interest exercise is never strictly optimal, so no iterate
    // has a contact region and no boundary exists to check or extract
    const bool expect_contact = p.rate > 0.0;

    for (int n = 1; n <= max_iter; ++n) {
        ValueSurface u = apply_J(v, p, config);
        u.label = std::to_string(n);
        const InvariantReport inv =
            check_surface_invariants(u, &v, 0.0, expect_contact);
        if (!inv.ok)
            raise(errc::invariant_violated,
                  "iterate " + std::to_string(n) + ": " + inv.detail);

        IterationReport rep;
        rep.n = n;
        rep.gap = sup_norm_gap(u, v);
        rep.apriori_bound = std::pow(ratio_base, n) * p.strike;
        rep.refined_bound = std::pow(ratio_refined, n) * p.strike;
        if (n >= 2 && prev_gap > 0.0) rep.ratio = rep.gap / prev_gap;
        res.reports.push_back(rep);

        v = std::move(u);
        prev_gap = rep.gap;

        if (rep.gap <= tol) {
            res.terminated_by = FixedPointResult::stop_reason::gap_tol;
            break;
        }
        const double bound =
            use_refined ? rep.refined_bound : rep.apriori_bound;
        if (bound <= tol) {
            res.terminated_by = FixedPointResult::stop_reason::bound_tol;
            break;
        }
    }

    if (res.terminated_by == FixedPointResult::stop_reason::max_iter)
        res.warning = "MaxIterReached: stopped after " +
                      std::to_string(max_iter) +
                      " iterations above tolerance";

    v.label = "limit";
    if (expect_contact) {
        res.boundary = extract_boundary(v, 1e-6 * p.strike);
    } else {
        try {
            res.boundary = extract_boundary(v, 1e-6 * p.strike);
        } catch (const error& e) {
            if (e.code() != errc::no_contact_region) throw;
        }
    }
    res.surface = std::move(v);
    return res;
}

double check_fixed_point(const ValueSurface& v, const ModelParams& p,
                         const SolverConfig& config) {
    return sup_norm_gap(apply_J(v, p, config), v);
}

}  // namespace jdp
