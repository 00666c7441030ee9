#pragma once

// Independent reference for the obstacle-problem stepper. Everything here is
// derived separately from the library: the generator is discretized with
// nonuniform three-point stencils directly in the price variable (the library
// works with constant coefficients in log price), time stepping is projected
// explicit Euler with stability-bounded substeps (the library is an implicit
// theta scheme), and the jump expectation uses a dense midpoint rule over the
// log jump size (the library uses Gauss-Hermite). Agreement between the two
// is therefore evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "jdp/grid.hpp"
#include "jdp/model.hpp"

namespace testref {

// piecewise-linear read of a stored level with the shared boundary
// conventions (intrinsic below the first node, last-cell slope above)
inline double read_level(const std::vector<double>& xs, double strike,
                         std::span<const double> lev, double x) {
    const int m = static_cast<int>(xs.size()) - 1;
    if (x < xs[1]) return strike - x;
    if (x >= xs[m]) {
        const double slope = (lev[m] - lev[m - 1]) / (xs[m] - xs[m - 1]);
        return std::max(0.0, lev[m] + slope * (x - xs[m]));
    }
    const auto it = std::upper_bound(xs.begin() + 1, xs.end(), x);
    const int i = static_cast<int>(it - xs.begin()) - 1;
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return lev[i] + w * (lev[i + 1] - lev[i]);
}

// jump sizes and weights for the expectation over Z; midpoint rule over
// +-8 standard deviations for the lognormal case
inline void jump_rule(const jdp::JumpMeasure& nu, std::vector<double>& z,
                      std::vector<double>& w) {
    z.clear();
    w.clear();
    if (nu.kind == jdp::JumpMeasure::kind_t::discrete) {
        double total = 0.0;
        for (const auto& a : nu.atoms) total += a.w;
        for (const auto& a : nu.atoms) {
            z.push_back(a.z);
            w.push_back(a.w / total);
        }
        return;
    }
    if (nu.log_std == 0.0) {
        z.push_back(std::exp(nu.log_mean));
        w.push_back(1.0);
        return;
    }
    const int n = 2001;
    const double lo = nu.log_mean - 8.0 * nu.log_std;
    const double hi = nu.log_mean + 8.0 * nu.log_std;
    const double h = (hi - lo) / n;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double lz = lo + (k + 0.5) * h;
        const double t = (lz - nu.log_mean) / nu.log_std;
        const double dens = std::exp(-0.5 * t * t);
        z.push_back(std::exp(lz));
        w.push_back(dens);
        total += dens;
    }
    for (double& ww : w) ww /= total;
}

// One application of the fixed-point operator by projected explicit Euler on
// the nodes of f's grid. Returns values in the surface layout of the library.
inline std::vector<double> explicit_apply_J(const jdp::ValueSurface& f,
                                            const jdp::ModelParams& p) {
    const jdp::Grid& g = *f.grid;
    const std::vector<double>& xs = g.x;
    const int m = static_cast<int>(xs.size()) - 1;
    const int levels = static_cast<int>(g.t.size());
    const double K = p.strike;
    const double kill = p.rate + p.intensity;

    std::vector<double> psi(m + 1);
    for (int i = 0; i <= m; ++i) psi[i] = std::max(K - xs[i], 0.0);

    // generator rows on the raw price nodes; the row at node 1 sees the
    // appended x = 0 neighbor through hl = x_1
    std::vector<double> cl(m + 1, 0.0), cm(m + 1, 0.0), cu(m + 1, 0.0);
    for (int i = 1; i <= m - 1; ++i) {
        const double hl = xs[i] - xs[i - 1];
        const double hr = xs[i + 1] - xs[i];
        const double s2x2 = 0.5 * p.sigma * p.sigma * xs[i] * xs[i];
        const double mx = p.drift * xs[i];
        cl[i] = s2x2 * 2.0 / (hl * (hl + hr)) - mx * hr / (hl * (hl + hr));
        cm[i] = -s2x2 * 2.0 / (hl * hr) + mx * (hr - hl) / (hl * hr) - kill;
        cu[i] = s2x2 * 2.0 / (hr * (hl + hr)) + mx * hl / (hr * (hl + hr));
    }

    double stiff = kill;
    for (int i = 1; i <= m - 1; ++i) stiff = std::max(stiff, -cm[i]);
    const int per_step = std::max(1, static_cast<int>(std::ceil(
                                          2.0 * g.dt * stiff)));
    const double dts = g.dt / per_step;

    std::vector<double> zq, wq;
    jump_rule(p.jump, zq, wq);
    auto source_at = [&](std::span<const double> lev, int i) {
        double acc = 0.0;
        for (std::size_t q = 0; q < zq.size(); ++q)
            acc += wq[q] * read_level(xs, K, lev, xs[i] * zq[q]);
        return p.intensity * acc;
    };

    std::vector<double> out(static_cast<std::size_t>(levels) * (m + 1));
    std::copy(psi.begin(), psi.end(), out.begin());

    std::vector<double> cur(psi), nxt(m + 1), src_lo(m + 1), src_hi(m + 1);
    for (int j = 1; j < levels; ++j) {
        if (p.intensity > 0.0) {
            for (int i = 1; i <= m - 1; ++i) {
                src_lo[i] = source_at(f.level(j - 1), i);
                src_hi[i] = source_at(f.level(j), i);
            }
        }
        for (int sub = 0; sub < per_step; ++sub) {
            // source from the stored iterate, linearly interpolated in time
            const double frac = (sub + 0.5) / per_step;
            nxt[0] = K;
            nxt[m] = 0.0;
            for (int i = 1; i <= m - 1; ++i) {
                double rate_of_change = cl[i] * cur[i - 1] +
                                        cm[i] * cur[i] + cu[i] * cur[i + 1];
                if (p.intensity > 0.0)
                    rate_of_change +=
                        (1.0 - frac) * src_lo[i] + frac * src_hi[i];
                nxt[i] = std::max(psi[i], cur[i] + dts * rate_of_change);
            }
            cur = nxt;
        }
        std::copy(cur.begin(), cur.end(),
                  out.begin() + static_cast<std::size_t>(j) * (m + 1));
    }
    return out;
}

}  // namespace testref
