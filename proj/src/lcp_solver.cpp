#include "jdp/lcp_solver.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jdp/errors.hpp"
#include "jdp/jump_measure.hpp"

namespace jdp {

DiscreteOperator assemble(const ModelParams& p, const Grid& g) {
    const int m = g.n_space() - 1;
    DiscreteOperator L;
    L.killing = p.rate + p.intensity;
    L.interior_lo = 1;
    L.interior_hi = m - 1;

    const double dy = g.dy;
    const double half_sig2 = 0.5 * p.sigma * p.sigma;
    const double adv = p.drift - half_sig2;  // advection in log coordinates
    const double dw = half_sig2 / (dy * dy);

    double lo, mid, up;
    if (dw >= std::fabs(adv) / (2.0 * dy)) {
        const double d = adv / (2.0 * dy);
        lo = dw - d;
        mid = -2.0 * dw;
        up = dw + d;
    } else if (adv > 0.0) {
        // advection dominates the cell: one-sided drift keeps all
        // off-diagonal entries nonnegative (M-matrix after time stepping)
        lo = dw;
        mid = -(2.0 * dw + adv / dy);
        up = dw + adv / dy;
        L.upwinded = true;
    } else {
        lo = dw - adv / dy;
        mid = -(2.0 * dw - adv / dy);
        up = dw;
        L.upwinded = true;
    }

    L.lower.assign(m + 1, 0.0);
    L.diag.assign(m + 1, 0.0);
    L.upper.assign(m + 1, 0.0);
    for (int i = 2; i <= m - 1; ++i) {
        L.lower[i] = lo;
        L.diag[i] = mid - L.killing;
        L.upper[i] = up;
    }

    // node 1 borders the appended x = 0 node, which breaks the log spacing;
    // assemble its row on the raw price axis with spacings h0 = x_1 - 0 and
    // h1 = x_2 - x_1
    const double x1 = g.x[1];
    const double h0 = x1;
    const double h1 = g.x[2] - x1;
    const double a2 = p.sigma * p.sigma * x1 * x1;  // twice the diffusion
    const double a1 = p.drift * x1;
    double lo1 = (a2 - a1 * h1) / (h0 * (h0 + h1));
    double up1 = (a2 + a1 * h0) / (h1 * (h0 + h1));
    if (lo1 < 0.0 || up1 < 0.0) {
        lo1 = a2 / (h0 * (h0 + h1));
        up1 = a2 / (h1 * (h0 + h1));
        if (a1 > 0.0)
            up1 += a1 / h1;
        else
            lo1 -= a1 / h0;
        L.upwinded = true;
    }
    L.lower[1] = lo1;
    L.upper[1] = up1;
    L.diag[1] = -(lo1 + up1) - L.killing;
    return L;
}

namespace {

void check_solver_config(const SolverConfig& c, double strike) {
    if (!(c.theta >= 0.0 && c.theta <= 1.0))
        raise(errc::config_error, "solver.theta must lie in [0, 1]");
    if (c.rannacher_steps < 0)
        raise(errc::config_error, "solver.rannacher_steps must be >= 0");
    if (!(c.psor_omega > 0.0 && c.psor_omega < 2.0))
        raise(errc::config_error, "solver.psor_omega must lie in (0, 2)");
    if (c.psor_max_iter < 1)
        raise(errc::config_error, "solver.psor_max_iter must be >= 1");
    if (!(strike > 0.0))
        raise(errc::non_positive_strike, "strike must be positive");
}

double contact_tol_of(const SolverConfig& c, double strike) {
    return c.psor_tol > 0.0 ? c.psor_tol : 1e-10 * strike;
}

// Single-step theta-scheme matrix A = I - theta*dt*L on the unknown nodes.
struct StepMatrix {
    std::vector<double> sub, dia, sup;  // index k maps node i = k + 1
    double theta = -1.0;

    void build(const DiscreteOperator& L, double dt, double th, int n_unknown) {
        theta = th;
        sub.resize(n_unknown);
        dia.resize(n_unknown);
        sup.resize(n_unknown);
        for (int k = 0; k < n_unknown; ++k) {
            const int i = k + 1;
            sub[k] = -th * dt * L.lower[i];
            dia[k] = 1.0 - th * dt * L.diag[i];
            sup[k] = -th * dt * L.upper[i];
        }
    }
};

// Direct LCP solve: eliminate the superdiagonal from the continuation side,
// then substitute upward from the exercise side projecting onto the obstacle.
// Exact when the contact set is an interval attached to the lowest node,
// which holds for the put.
void solve_brennan_schwartz(const StepMatrix& A, std::vector<double>& rhs,
                            const double* psi, std::vector<double>& work_d,
                            std::vector<double>& sol) {
    const int n = static_cast<int>(A.dia.size());
    work_d.resize(n);
    work_d[n - 1] = A.dia[n - 1];
    for (int k = n - 2; k >= 0; --k) {
        const double mlt = A.sup[k] / work_d[k + 1];
        work_d[k] = A.dia[k] - mlt * A.sub[k + 1];
        rhs[k] -= mlt * rhs[k + 1];
    }
    sol.resize(n);
    sol[0] = std::max(psi[0], rhs[0] / work_d[0]);
    for (int k = 1; k < n; ++k)
        sol[k] =
            std::max(psi[k], (rhs[k] - A.sub[k] * sol[k - 1]) / work_d[k]);
}

// Projected SOR with warm start; cross-checks the direct sweep.
void solve_psor(const StepMatrix& A, const std::vector<double>& rhs,
                const double* psi, const SolverConfig& config, double tol,
                std::vector<double>& sol) {
    const int n = static_cast<int>(A.dia.size());
    const double omega = config.psor_omega;
    for (int it = 0; it < config.psor_max_iter; ++it) {
        double delta = 0.0;
        for (int k = 0; k < n; ++k) {
            double r = rhs[k] - A.dia[k] * sol[k];
            if (k > 0) r -= A.sub[k] * sol[k - 1];
            if (k < n - 1) r -= A.sup[k] * sol[k + 1];
            double u = sol[k] + omega * r / A.dia[k];
            if (u < psi[k]) u = psi[k];
            delta = std::max(delta, std::fabs(u - sol[k]));
            sol[k] = u;
        }
        if (delta <= tol) return;
    }
    raise(errc::psor_diverged,
          "no convergence in " + std::to_string(config.psor_max_iter) +
              " sweeps (omega = " + std::to_string(config.psor_omega) + ")");
}

}  // namespace

ValueSurface apply_J(const ValueSurface& f, const ModelParams& p,
                     const SolverConfig& config) {
    if (f.grid == nullptr) raise(errc::grid_mismatch, "surface without grid");
    const Grid& g = *f.grid;
    check_solver_config(config, p.strike);

    const int m = g.n_space() - 1;
    const int steps = g.n_time() - 1;
    const int ns = g.n_space();
    const int n_unknown = m - 1;  // nodes 1..m-1
    const double dt = g.dt;
    const double lam = p.intensity;

    std::vector<double> psi(ns);
    for (int i = 0; i < ns; ++i)
        psi[i] = g.x[i] < p.strike ? p.strike - g.x[i] : 0.0;

    // jump average of the stored iterate on every level; this is the only
    // coupling to f and the only heavy kernel of a step
    std::vector<double> pf;
    if (lam > 0.0) pf = apply_P_all_levels(f, p.jump, true);

    const DiscreteOperator L = assemble(p, g);

    ValueSurface out;
    out.grid = f.grid;
    out.label = "J(" + f.label + ")";
    out.values.assign(static_cast<std::size_t>(g.n_time()) * ns, 0.0);
    for (int i = 0; i < ns; ++i) out.values[i] = psi[i];

    StepMatrix A;
    std::vector<double> rhs(n_unknown), sol(n_unknown), work(n_unknown);
    const double psor_tol = contact_tol_of(config, p.strike);

    for (int j = 1; j <= steps; ++j) {
        const double th =
            j <= config.rannacher_steps ? 1.0 : config.theta;
        if (th != A.theta) A.build(L, dt, th, n_unknown);

        const auto prev = out.level(j - 1);
        double* cur = out.values.data() + static_cast<std::size_t>(j) * ns;

        for (int k = 0; k < n_unknown; ++k) {
            const int i = k + 1;
            double b = prev[i] + (1.0 - th) * dt * L.row(prev, i);
            if (lam > 0.0) {
                const double src =
                    th * pf[static_cast<std::size_t>(j) * ns + i] +
                    (1.0 - th) * pf[static_cast<std::size_t>(j - 1) * ns + i];
                b += dt * lam * src;
            }
            rhs[k] = b;
        }
        // absorbing neighbor u(0, T) = K
        rhs[0] += th * dt * L.lower[1] * psi[0];

        if (config.method == lcp_method::brennan_schwartz) {
            solve_brennan_schwartz(A, rhs, psi.data() + 1, work, sol);
        } else {
            sol.resize(n_unknown);
            for (int k = 0; k < n_unknown; ++k)
                sol[k] = std::max(prev[k + 1], psi[k + 1]);
            solve_psor(A, rhs, psi.data() + 1, config, psor_tol, sol);
        }

        cur[0] = psi[0];  // v(0, T) = K
        cur[m] = 0.0;
        for (int k = 0; k < n_unknown; ++k) {
            const double u = sol[k];
            if (!std::isfinite(u))
                raise(errc::obstacle_violation,
                      "non-finite value at step " + std::to_string(j));
            if (u < psi[k + 1] - psor_tol)
                raise(errc::obstacle_violation,
                      "node " + std::to_string(k + 1) + " at step " +
                          std::to_string(j));
            cur[k + 1] = u;
        }
    }
    return out;
}

ResidualReport residual_check(const ValueSurface& u, const ValueSurface& f,
                              const ModelParams& p,
                              const SolverConfig& config) {
    if (u.grid == nullptr || f.grid == nullptr)
        raise(errc::grid_mismatch, "surface without grid");
    if (u.grid != f.grid && !u.grid->same_layout(*f.grid))
        raise(errc::grid_mismatch, "'" + u.label + "' vs '" + f.label + "'");
    const Grid& g = *u.grid;
    check_solver_config(config, p.strike);

    const int m = g.n_space() - 1;
    const int ns = g.n_space();
    const double dt = g.dt;
    const double lam = p.intensity;
    const double tol = contact_tol_of(config, p.strike);

    std::vector<double> psi(ns);
    for (int i = 0; i < ns; ++i)
        psi[i] = g.x[i] < p.strike ? p.strike - g.x[i] : 0.0;

    std::vector<double> pf;
    if (lam > 0.0) pf = apply_P_all_levels(f, p.jump, true);
    const DiscreteOperator L = assemble(p, g);

    // end of the contact run attached to node 1 (0 when node 1 is detached)
    auto run_end = [&](std::span<const double> lev) {
        if (lev[1] - psi[1] > tol) return 0;
        int b = 1;
        while (b < m && lev[b + 1] - psi[b + 1] <= tol) ++b;
        return b;
    };

    ResidualReport rep;
    rep.residuals.assign(u.values.size(),
                         std::numeric_limits<double>::quiet_NaN());

    for (int j = 1; j < g.n_time(); ++j) {
        const double th = j <= config.rannacher_steps ? 1.0 : config.theta;
        const auto cur = u.level(j);
        const auto prev = u.level(j - 1);
        const int b_cur = run_end(cur);
        const int b_prev = run_end(prev);

        for (int i = 1; i <= m - 1; ++i) {
            double rc = L.row(cur, i);
            double rp = L.row(prev, i);
            if (lam > 0.0) {
                rc += lam * pf[static_cast<std::size_t>(j) * ns + i];
                rp += lam * pf[static_cast<std::size_t>(j - 1) * ns + i];
            }
            const double res =
                th * rc + (1.0 - th) * rp - (cur[i] - prev[i]) / dt;
            rep.residuals[static_cast<std::size_t>(j) * ns + i] = res;

            if (std::abs(i - b_cur) <= 1 || std::abs(i - b_prev) <= 1)
                continue;  // boundary cell: complementarity switches here
            if (cur[i] - psi[i] <= tol) {
                ++rep.stopping_nodes;
                rep.max_pos_stopping = std::max(rep.max_pos_stopping, res);
            } else {
                ++rep.continuation_nodes;
                rep.max_abs_continuation =
                    std::max(rep.max_abs_continuation, std::fabs(res));
            }
        }
    }
    return rep;
}

}  // namespace jdp
