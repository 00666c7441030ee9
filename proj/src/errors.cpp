#include "jdp/errors.hpp"

namespace jdp {

const char* errc_name(errc code) {
    switch (code) {
        case errc::non_positive_sigma: return "NonPositiveSigma";
        case errc::non_positive_strike: return "NonPositiveStrike";
        case errc::non_positive_horizon: return "NonPositiveHorizon";
        case errc::negative_rate: return "NegativeRate";
        case errc::negative_intensity: return "NegativeIntensity";
        case errc::bad_jump_measure: return "BadJumpMeasure";
        case errc::negative_price: return "NegativePrice";
        case errc::quadrature_order_too_small: return "QuadratureOrderTooSmall";
        case errc::grid_too_small: return "GridTooSmall";
        case errc::grid_mismatch: return "GridMismatch";
        case errc::no_contact_region: return "NoContactRegion";
        case errc::boundary_at_edge: return "BoundaryAtEdge";
        case errc::psor_diverged: return "PsorDiverged";
        case errc::obstacle_violation: return "ObstacleViolation";
        case errc::invariant_violated: return "InvariantViolated";
        case errc::max_iter_reached: return "MaxIterReached";
        case errc::series_not_converged: return "SeriesNotConverged";
        case errc::lambda_not_zero: return "LambdaNotZero";
        case errc::out_of_range: return "OutOfRange";
        case errc::config_error: return "ConfigError";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace jdp
