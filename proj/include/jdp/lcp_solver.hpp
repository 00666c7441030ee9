#pragma once

#include "jdp/grid.hpp"
#include "jdp/model.hpp"

namespace jdp {

enum class lcp_method { brennan_schwartz, psor };

/// Time-stepping and complementarity-solver controls. theta = 1/2 is
/// Crank-Nicolson; the first rannacher_steps steps run fully implicit to damp
/// the nonsmooth payoff. psor_tol <= 0 resolves to 1e-10 * strike at use; the
/// same value breaks contact ties in the residual classification.
struct SolverConfig {
    double theta = 0.5;
    int rannacher_steps = 2;
    lcp_method method = lcp_method::brennan_schwartz;
    double psor_omega = 1.5;
    double psor_tol = 0.0;
    int psor_max_iter = 20000;
};

/// Tridiagonal action of the killed generator A - (r + lambda)Id on a spatial
/// level. Rows 2..M-1 are assembled in log coordinates where the coefficients
/// are constant; row 1 neighbors the appended x = 0 node and uses a
/// nonuniform raw-price stencil. lower/diag/upper are indexed by node and
/// diag includes the killing term. Applied to the constant 1 the operator
/// returns -(r + lambda) up to roundoff.
struct DiscreteOperator {
    std::vector<double> lower, diag, upper;
    double killing = 0.0;  // r + lambda
    int interior_lo = 1;   // first interior node
    int interior_hi = 0;   // last interior node, M - 1
    bool upwinded = false; // drift discretized one-sided to keep an M-matrix

    /// lower[i]*u[i-1] + diag[i]*u[i] + upper[i]*u[i+1] for one interior node.
    double row(std::span<const double> u, int i) const {
        return lower[i] * u[i - 1] + diag[i] * u[i] + upper[i] * u[i + 1];
    }
};

/// Central differences for the diffusion, central drift unless that breaks
/// diagonal dominance (then one-sided drift), killing r + lambda on the
/// diagonal. Row sums are zero before killing.
DiscreteOperator assemble(const ModelParams& p, const Grid& grid);

/// One application of the fixed-point operator: solves the obstacle problem
/// with running source lambda*Pf backward over the whole lattice and returns
/// the new surface. Level 0 is the payoff; at each later level the
/// theta-scheme linear complementarity problem
///   min(u - payoff, (I - theta*dt*L)u - b) = 0
/// is solved by a Brennan-Schwartz sweep or PSOR over nodes 1..M-1. Dirichlet
/// values are u(0) = K and u(x_M) = 0. The Pf source is evaluated on the
/// stored iterate f (theta-weighted between adjacent levels), which makes
/// each level's problem linear.
ValueSurface apply_J(const ValueSurface& f, const ModelParams& p,
                     const SolverConfig& config);

/// Discrete complementarity residual R = theta*(Lu + lambda*Pf)(T_j)
/// + (1-theta)*(Lu + lambda*Pf)(T_{j-1}) - dT u, mirroring the scheme's
/// per-step theta. Nodes adjacent to the contact boundary at either level are
/// excluded from the maxima.
struct ResidualReport {
    std::vector<double> residuals;   // surface layout; NaN where not defined
    double max_abs_continuation = 0; // |R| off the contact set
    double max_pos_stopping = 0;     // positive part of R on the contact set
    long continuation_nodes = 0;
    long stopping_nodes = 0;
};

ResidualReport residual_check(const ValueSurface& u, const ValueSurface& f,
                              const ModelParams& p, const SolverConfig& config);

}  // namespace jdp
