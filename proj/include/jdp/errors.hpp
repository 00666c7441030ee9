#pragma once

#include <stdexcept>
#include <string>

namespace jdp {

enum class errc {
    non_positive_sigma,
    non_positive_strike,
    non_positive_horizon,
    negative_rate,
    negative_intensity,
    bad_jump_measure,
    negative_price,
    quadrature_order_too_small,
    grid_too_small,
    grid_mismatch,
    no_contact_region,
    boundary_at_edge,
    psor_diverged,
    obstacle_violation,
    invariant_violated,
    max_iter_reached,
    series_not_converged,
    lambda_not_zero,
    out_of_range,
    config_error,
    io_error,
};

const char* errc_name(errc code);

/// Exception carrying a machine-checkable code next to the human-readable
/// message. what() is "<CodeName>: <detail>".
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& detail) {
    throw error(code, detail);
}

}  // namespace jdp
