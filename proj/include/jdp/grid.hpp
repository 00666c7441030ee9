#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jdp/model.hpp"

namespace jdp {

/// Space-time lattice. Spatial nodes are x[0] = 0 plus M log-uniform nodes
/// x[1..M] = K*exp(y_min + (i-1)*dy); time levels t[j] = j*dt run in time to
/// maturity from 0 to the horizon T0.
struct Grid {
    std::vector<double> x;  // strictly increasing, x[0] = 0
    std::vector<double> t;  // uniform, t[0] = 0, t.back() = horizon
    double strike = 0.0;
    double y_min = 0.0;  // log(x[1]/K)
    double dy = 0.0;     // log-space step
    double dt = 0.0;     // time step

    int n_space() const { return static_cast<int>(x.size()); }  // M + 1
    int n_time() const { return static_cast<int>(t.size()); }   // N + 1

    bool same_layout(const Grid& other) const;
};

/// Builds the lattice for the given parameters. m is the count of positive
/// nodes (>= 16), n the count of time steps (>= 8). The domain half-width in
/// log space is width*sigma*sqrt(T0) + |mu|*T0, so the highest node is
/// x_max = K*exp(width*sigma*sqrt(T0) + |mu|*T0) and x_1 = K^2/x_max. The
/// strike always lies strictly inside (x_1, x_max). Throws GridTooSmall.
Grid build_grid(const ModelParams& p, int m, int n, double width = 5.0);

/// Function values on a Grid, time-major: values[j*(M+1) + i] is the value at
/// (x_i, T_j). Treated as immutable after construction; copies share the grid.
struct ValueSurface {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;
    std::string label;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * grid->x.size() + i];
    }
    std::span<const double> level(int j) const {
        auto m = grid->x.size();
        return {values.data() + static_cast<std::size_t>(j) * m, m};
    }
};

/// Surface equal to the put payoff (K - x)^+ at every time level; this is the
/// zeroth iterate and the obstacle of the variational problem.
ValueSurface payoff_surface(std::shared_ptr<const Grid> grid);

/// max_{i,j} |a - b|; requires identical grid layout, else GridMismatch.
double sup_norm_gap(const ValueSurface& a, const ValueSurface& b);

/// Evaluates one stored level at an arbitrary spot x >= 0 by piecewise-linear
/// interpolation between positive nodes: node arguments reproduce stored
/// values bit-exactly. Below x_1 the put is deep in the money and the value
/// is K - x; at or above x_M the value continues with the slope of the last
/// cell, clipped at zero. Shared primitive of surface evaluation and the
/// jump-average kernel.
double eval_level(const Grid& g, std::span<const double> level, double x);

/// eval_level on the level t_index of a surface.
double eval_at_x(const ValueSurface& f, int t_index, double x);

/// Bilinear evaluation (linear in T between levels, eval_at_x in x). Requires
/// 0 <= t <= horizon, else OutOfRange.
double eval_at(const ValueSurface& f, double x, double t);

/// Early-exercise boundary extracted from a surface: at each level T_j
/// (j >= 1) the contact set {v - payoff <= tol} is a run of nodes starting at
/// x_1, and c[j-1] is the tol-crossing of v - payoff interpolated in the first
/// cell past the run. fit_slope is a one-sided second-order estimate of
/// dv/dx at c, which should approach -1 under grid refinement (smooth fit).
struct FreeBoundary {
    std::vector<double> t;          // levels T_1..T_N
    std::vector<double> c;          // boundary location per level
    std::vector<double> fit_slope;  // one-sided slope at c per level
    bool at_edge = false;           // some level had contact up to x_M
};

/// Throws NoContactRegion when some level has no contact node at all. A level
/// whose contact run reaches x_M marks the degenerate at_edge flag and
/// reports c = x_M with slope NaN.
FreeBoundary extract_boundary(const ValueSurface& v, double tol);

/// max over nodes and adjacent levels of |v(x, T') - v(x, T)| / sqrt(T' - T);
/// finite uniformly in the grid for solver output (1/2-Hoelder in time).
double holder_half_seminorm(const ValueSurface& v);

}  // namespace jdp
