#include "jdp/model.hpp"

#include <cmath>
#include <string>

#include "jdp/errors.hpp"

namespace jdp {

ModelParams validate(ModelParams p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        raise(errc::non_positive_sigma, "sigma = " + std::to_string(p.sigma));
    if (!(p.strike > 0.0) || !std::isfinite(p.strike))
        raise(errc::non_positive_strike, "strike = " + std::to_string(p.strike));
    if (!(p.horizon > 0.0) || !std::isfinite(p.horizon))
        raise(errc::non_positive_horizon,
              "horizon = " + std::to_string(p.horizon));
    if (p.rate < 0.0 || !std::isfinite(p.rate))
        raise(errc::negative_rate, "rate = " + std::to_string(p.rate));
    if (p.intensity < 0.0 || !std::isfinite(p.intensity))
        raise(errc::negative_intensity,
              "intensity = " + std::to_string(p.intensity));
    validate(p.jump);
    p.jump_mean = mean(p.jump);
    p.drift = p.rate + p.intensity * (1.0 - p.jump_mean);
    return p;
}

double payoff_eval(double strike, double x) {
    if (x < 0.0 || !std::isfinite(x))
        raise(errc::negative_price, "spot = " + std::to_string(x));
    return x < strike ? strike - x : 0.0;
}

}  // namespace jdp
