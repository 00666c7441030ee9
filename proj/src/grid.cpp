#include "jdp/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jdp/errors.hpp"

namespace jdp {

bool Grid::same_layout(const Grid& other) const {
    return strike == other.strike && x == other.x && t == other.t;
}

Grid build_grid(const ModelParams& p, int m, int n, double width) {
    if (m < 16)
        raise(errc::grid_too_small, "need >= 16 spatial nodes, got " +
                                        std::to_string(m));
    if (n < 8)
        raise(errc::grid_too_small, "need >= 8 time steps, got " +
                                        std::to_string(n));
    if (!(width >= 0.0) || !std::isfinite(width))
        raise(errc::grid_too_small, "bad width " + std::to_string(width));

    const double half =
        width * p.sigma * std::sqrt(p.horizon) + std::abs(p.drift) * p.horizon;
    if (!(half > 0.0) || !std::isfinite(half))
        raise(errc::grid_too_small,
              "log-domain half-width must be positive, got " +
                  std::to_string(half));

    Grid g;
    g.strike = p.strike;
    g.y_min = -half;
    g.dy = 2.0 * half / (m - 1);
    g.x.resize(static_cast<std::size_t>(m) + 1);
    g.x[0] = 0.0;
    for (int i = 1; i <= m; ++i)
        g.x[i] = p.strike * std::exp(g.y_min + (i - 1) * g.dy);
    g.dt = p.horizon / n;
    g.t.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < n; ++j) g.t[j] = j * g.dt;
    g.t[n] = p.horizon;
    return g;
}

ValueSurface payoff_surface(std::shared_ptr<const Grid> grid) {
    ValueSurface s;
    s.grid = std::move(grid);
    const Grid& g = *s.grid;
    s.values.resize(static_cast<std::size_t>(g.n_time()) * g.n_space());
    for (int j = 0; j < g.n_time(); ++j) {
        for (int i = 0; i < g.n_space(); ++i) {
            const double xi = g.x[i];
            s.values[static_cast<std::size_t>(j) * g.n_space() + i] =
                xi < g.strike ? g.strike - xi : 0.0;
        }
    }
    s.label = "payoff";
    return s;
}

double sup_norm_gap(const ValueSurface& a, const ValueSurface& b) {
    if (a.grid == nullptr || b.grid == nullptr)
        raise(errc::grid_mismatch, "surface without grid");
    if (a.grid != b.grid && !a.grid->same_layout(*b.grid))
        raise(errc::grid_mismatch,
              "'" + a.label + "' vs '" + b.label + "'");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        worst = std::max(worst, std::fabs(a.values[k] - b.values[k]));
    return worst;
}

double eval_level(const Grid& g, std::span<const double> lev, double x) {
    const auto& xs = g.x;
    const int m = static_cast<int>(xs.size()) - 1;
    if (x < xs[1]) return g.strike - x;  // deep in the money
    if (x >= xs[m]) {
        const double slope = (lev[m] - lev[m - 1]) / (xs[m] - xs[m - 1]);
        const double v = lev[m] + slope * (x - xs[m]);
        return v > 0.0 ? v : 0.0;
    }
    // log-uniform layout gives the cell index in closed form; the two nudge
    // loops absorb the floor's last-ulp error so node hits stay exact
    int i = 1 + static_cast<int>(std::floor(std::log(x / xs[1]) / g.dy));
    if (i < 1) i = 1;
    if (i > m - 1) i = m - 1;
    while (i > 1 && xs[i] > x) --i;
    while (i < m - 1 && xs[i + 1] <= x) ++i;
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return lev[i] + w * (lev[i + 1] - lev[i]);
}

double eval_at_x(const ValueSurface& f, int t_index, double x) {
    const Grid& g = *f.grid;
    if (t_index < 0 || t_index >= g.n_time())
        raise(errc::out_of_range, "time level " + std::to_string(t_index));
    if (x < 0.0 || !std::isfinite(x))
        raise(errc::out_of_range, "spot " + std::to_string(x));
    return eval_level(g, f.level(t_index), x);
}

double eval_at(const ValueSurface& f, double x, double t) {
    const Grid& g = *f.grid;
    const double horizon = g.t.back();
    if (x < 0.0 || !std::isfinite(x))
        raise(errc::out_of_range, "spot " + std::to_string(x));
    if (!(t >= -1e-12 * horizon) || !(t <= horizon * (1.0 + 1e-12)))
        raise(errc::out_of_range, "maturity " + std::to_string(t) +
                                      " outside [0, " +
                                      std::to_string(horizon) + "]");
    const double tc = std::min(std::max(t, 0.0), horizon);
    int j = static_cast<int>(std::floor(tc / g.dt));
    if (j > g.n_time() - 2) j = g.n_time() - 2;
    const double w = (tc - g.t[j]) / g.dt;
    const double lo = eval_level(g, f.level(j), x);
    const double hi = eval_level(g, f.level(j + 1), x);
    return lo + w * (hi - lo);
}

FreeBoundary extract_boundary(const ValueSurface& v, double tol) {
    const Grid& g = *v.grid;
    if (!(tol > 0.0))
        raise(errc::out_of_range, "contact tolerance must be positive");
    const int m = g.n_space() - 1;
    FreeBoundary fb;
    fb.t.reserve(g.n_time() - 1);
    fb.c.reserve(g.n_time() - 1);
    fb.fit_slope.reserve(g.n_time() - 1);

    auto psi = [&](double x) {
        return x < g.strike ? g.strike - x : 0.0;
    };

    for (int j = 1; j < g.n_time(); ++j) {
        const auto lev = v.level(j);
        // contact run starting at the lowest positive node; isolated far-tail
        // nodes with v below tol are truncation artifacts, not contact
        if (lev[1] - psi(g.x[1]) > tol)
            raise(errc::no_contact_region,
                  "level " + std::to_string(j) + " of '" + v.label + "'");
        int b = 1;
        while (b < m && lev[b + 1] - psi(g.x[b + 1]) <= tol) ++b;
        fb.t.push_back(g.t[j]);
        if (b == m) {
            fb.at_edge = true;
            fb.c.push_back(g.x[m]);
            fb.fit_slope.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double gap_b = lev[b] - psi(g.x[b]);
        const double gap_b1 = lev[b + 1] - psi(g.x[b + 1]);
        double frac = (tol - gap_b) / (gap_b1 - gap_b);
        frac = std::min(std::max(frac, 0.0), 1.0);
        const double c = g.x[b] + frac * (g.x[b + 1] - g.x[b]);
        fb.c.push_back(c);

        // one-sided slope on the continuation side of c; second order from
        // (c, psi(c)) and the next two nodes when available
        const double h0 = g.x[b + 1] - c;
        if (h0 > 1e-12 * g.x[b + 1] && b + 2 <= m) {
            const double h1 = g.x[b + 2] - g.x[b + 1];
            const double v0 = psi(c), v1 = lev[b + 1], v2 = lev[b + 2];
            fb.fit_slope.push_back(-(2.0 * h0 + h1) / (h0 * (h0 + h1)) * v0 +
                                   (h0 + h1) / (h0 * h1) * v1 -
                                   h0 / (h1 * (h0 + h1)) * v2);
        } else if (b + 2 <= m) {
            const double h1 = g.x[b + 2] - g.x[b + 1];
            fb.fit_slope.push_back((lev[b + 2] - lev[b + 1]) / h1);
        } else {
            fb.fit_slope.push_back((lev[b + 1] - psi(c)) / h0);
        }
    }
    return fb;
}

double holder_half_seminorm(const ValueSurface& v) {
    const Grid& g = *v.grid;
    const double root_dt = std::sqrt(g.dt);
    double worst = 0.0;
    for (int j = 0; j + 1 < g.n_time(); ++j) {
        const auto lo = v.level(j);
        const auto hi = v.level(j + 1);
        for (int i = 0; i < g.n_space(); ++i)
            worst = std::max(worst, std::fabs(hi[i] - lo[i]) / root_dt);
    }
    return worst;
}

}  // namespace jdp
