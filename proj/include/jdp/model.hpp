#pragma once

#include "jdp/jump_measure.hpp"

namespace jdp {

/// Market and contract parameters for the American put under a jump
/// diffusion. The risk-neutral drift is mu = r + lambda - lambda*E[Z], so the
/// discounted spot including jumps is a martingale; the discount rate equals
/// the interest rate r.
struct ModelParams {
    double rate = 0.0;       // r >= 0
    double sigma = 0.0;      // diffusive volatility, > 0
    double intensity = 0.0;  // jump arrival rate lambda >= 0
    double strike = 0.0;     // K > 0
    double horizon = 0.0;    // longest maturity T0 > 0
    JumpMeasure jump = JumpMeasure::point_mass();

    // filled in by validate()
    double jump_mean = 1.0;  // xi = E[Z]
    double drift = 0.0;      // mu = r + lambda*(1 - xi)
};

/// Checks every field, computes the derived drift and jump mean, and returns
/// the completed struct. Throws NonPositiveSigma, NonPositiveStrike,
/// NonPositiveHorizon, NegativeRate, NegativeIntensity or BadJumpMeasure.
ModelParams validate(ModelParams p);

/// (K - x)^+ for x >= 0; x < 0 throws NegativePrice.
double payoff_eval(double strike, double x);

/// Put payoff as a callable.
struct Payoff {
    double strike = 0.0;
    double operator()(double x) const { return payoff_eval(strike, x); }
};

}  // namespace jdp
