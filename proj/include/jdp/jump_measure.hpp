#pragma once

#include <vector>

namespace jdp {

struct ValueSurface;

/// One point mass of the relative jump-size distribution.
struct JumpAtom {
    double z = 1.0;  // multiplicative jump size, > 0
    double w = 1.0;  // probability weight
};

/// Distribution of the multiplicative jump size Z. Either a finite list of
/// atoms or a lognormal law (log Z ~ N(log_mean, log_std^2)) discretized by
/// Gauss-Hermite quadrature when applied to a surface.
struct JumpMeasure {
    enum class kind_t { discrete, lognormal };

    kind_t kind = kind_t::discrete;

    // discrete case
    std::vector<JumpAtom> atoms{JumpAtom{}};

    // lognormal case
    double log_mean = 0.0;
    double log_std = 0.0;
    int quad_nodes = 32;

    static JumpMeasure point_mass(double z = 1.0);
    static JumpMeasure discrete(std::vector<JumpAtom> atoms);
    static JumpMeasure lognormal(double log_mean, double log_std,
                                 int quad_nodes = 32);
};

/// Throws BadJumpMeasure (or QuadratureOrderTooSmall) unless the measure is a
/// proper probability distribution with positive jump sizes.
void validate(const JumpMeasure& nu);

/// E[Z]; exact for both kinds (lognormal: exp(log_mean + log_std^2/2)).
double mean(const JumpMeasure& nu);

/// Discretization of nu as (z, w) pairs with w > 0 summing to 1 to machine
/// precision. Discrete measures are returned with weights normalized;
/// lognormal ones map Gauss-Hermite abscissae through
/// z_q = exp(log_mean + log_std*sqrt(2)*t_q).
std::vector<JumpAtom> quadrature_nodes(const JumpMeasure& nu);

/// (Pf)(x_i, T_j) = sum_q w_q f(x_i z_q, T_j) for every node x_i of the level
/// t_index, evaluating f by piecewise-linear interpolation in x. Off-grid
/// arguments use the surface evaluation rules of eval_at_x. Returns one value
/// per spatial node. The parallel variant and the serial reference produce
/// bit-identical output.
std::vector<double> apply_P(const ValueSurface& f, int t_index,
                            const JumpMeasure& nu);
std::vector<double> apply_P_serial(const ValueSurface& f, int t_index,
                                   const JumpMeasure& nu);

/// Pf on every time level at once, concatenated in the surface layout. This
/// is the hot kernel of the solver; `parallel` selects the OpenMP path.
std::vector<double> apply_P_all_levels(const ValueSurface& f,
                                       const JumpMeasure& nu,
                                       bool parallel = true);

}  // namespace jdp
