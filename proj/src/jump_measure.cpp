#include "jdp/jump_measure.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <string>
#include <utility>

#include "jdp/errors.hpp"
#include "jdp/grid.hpp"

namespace jdp {

JumpMeasure JumpMeasure::point_mass(double z) {
    JumpMeasure nu;
    nu.kind = kind_t::discrete;
    nu.atoms = {JumpAtom{z, 1.0}};
    return nu;
}

JumpMeasure JumpMeasure::discrete(std::vector<JumpAtom> atoms) {
    JumpMeasure nu;
    nu.kind = kind_t::discrete;
    nu.atoms = std::move(atoms);
    return nu;
}

JumpMeasure JumpMeasure::lognormal(double log_mean, double log_std,
                                   int quad_nodes) {
    JumpMeasure nu;
    nu.kind = kind_t::lognormal;
    nu.atoms.clear();
    nu.log_mean = log_mean;
    nu.log_std = log_std;
    nu.quad_nodes = quad_nodes;
    return nu;
}

void validate(const JumpMeasure& nu) {
    if (nu.kind == JumpMeasure::kind_t::discrete) {
        if (nu.atoms.empty())
            raise(errc::bad_jump_measure, "no atoms");
        double total = 0.0;
        for (const auto& a : nu.atoms) {
            if (!(a.z > 0.0) || !std::isfinite(a.z))
                raise(errc::bad_jump_measure,
                      "atom size must be positive, got " + std::to_string(a.z));
            if (!(a.w > 0.0) || !std::isfinite(a.w))
                raise(errc::bad_jump_measure,
                      "atom weight must be positive, got " +
                          std::to_string(a.w));
            total += a.w;
        }
        if (!(total > 0.0) || !std::isfinite(total))
            raise(errc::bad_jump_measure, "weights sum to " +
                                              std::to_string(total));
    } else {
        if (!std::isfinite(nu.log_mean))
            raise(errc::bad_jump_measure, "log_mean not finite");
        if (nu.log_std < 0.0 || !std::isfinite(nu.log_std))
            raise(errc::bad_jump_measure,
                  "log_std must be >= 0, got " + std::to_string(nu.log_std));
        if (nu.quad_nodes < 2)
            raise(errc::quadrature_order_too_small,
                  "need >= 2 quadrature nodes, got " +
                      std::to_string(nu.quad_nodes));
    }
}

double mean(const JumpMeasure& nu) {
    validate(nu);
    if (nu.kind == JumpMeasure::kind_t::lognormal)
        return std::exp(nu.log_mean + 0.5 * nu.log_std * nu.log_std);
    double total = 0.0, acc = 0.0;
    for (const auto& a : nu.atoms) {
        total += a.w;
        acc += a.w * a.z;
    }
    return acc / total;
}

std::vector<JumpAtom> quadrature_nodes(const JumpMeasure& nu) {
    validate(nu);
    std::vector<JumpAtom> out;
    if (nu.kind == JumpMeasure::kind_t::discrete) {
        out = nu.atoms;
    } else {
        // Gauss-Hermite with weight exp(-t^2); the substitution
        // y = sqrt(2) t turns sum w_q g(exp(m + s*sqrt(2) t_q)) / sqrt(pi)
        // into E[g(Z)] for log Z ~ N(m, s^2).
        const std::size_t n = static_cast<std::size_t>(nu.quad_nodes);
        gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
            gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
        if (ws == nullptr)
            raise(errc::bad_jump_measure, "quadrature allocation failed");
        const double* t = gsl_integration_fixed_nodes(ws);
        const double* w = gsl_integration_fixed_weights(ws);
        const double root2 = std::sqrt(2.0);
        out.reserve(n);
        for (std::size_t q = 0; q < n; ++q)
            out.push_back(
                {std::exp(nu.log_mean + nu.log_std * root2 * t[q]), w[q]});
        gsl_integration_fixed_free(ws);
    }
    // normalizing by the computed total absorbs the 1/sqrt(pi) constant and
    // keeps the weight sum at 1 to machine precision for both kinds
    double total = 0.0;
    for (const auto& a : out) total += a.w;
    for (auto& a : out) a.w /= total;
    return out;
}

namespace {

// Weighted jump average at one node; a point mass at z = 1 reproduces the
// stored value bit-exactly because eval_level is exact on nodes.
double point_value(const Grid& g, std::span<const double> lev, double xi,
                   const std::vector<JumpAtom>& nodes) {
    double acc = 0.0;
    for (const auto& a : nodes) acc += a.w * eval_level(g, lev, xi * a.z);
    return acc;
}

}  // namespace

std::vector<double> apply_P_serial(const ValueSurface& f, int t_index,
                                   const JumpMeasure& nu) {
    const Grid& g = *f.grid;
    if (t_index < 0 || t_index >= g.n_time())
        raise(errc::out_of_range, "time level " + std::to_string(t_index));
    const auto nodes = quadrature_nodes(nu);
    const auto lev = f.level(t_index);
    std::vector<double> out(g.x.size());
    for (int i = 0; i < g.n_space(); ++i)
        out[i] = point_value(g, lev, g.x[i], nodes);
    return out;
}

std::vector<double> apply_P(const ValueSurface& f, int t_index,
                            const JumpMeasure& nu) {
    const Grid& g = *f.grid;
    if (t_index < 0 || t_index >= g.n_time())
        raise(errc::out_of_range, "time level " + std::to_string(t_index));
    const auto nodes = quadrature_nodes(nu);
    const auto lev = f.level(t_index);
    std::vector<double> out(g.x.size());
    const int ns = g.n_space();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < ns; ++i)
        out[i] = point_value(g, lev, g.x[i], nodes);
    return out;
}

std::vector<double> apply_P_all_levels(const ValueSurface& f,
                                       const JumpMeasure& nu, bool parallel) {
    const Grid& g = *f.grid;
    const auto nodes = quadrature_nodes(nu);
    const int nl = g.n_time();
    const int ns = g.n_space();
    std::vector<double> out(static_cast<std::size_t>(nl) * ns);
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
    for (int j = 0; j < nl; ++j) {
        for (int i = 0; i < ns; ++i) {
            out[static_cast<std::size_t>(j) * ns + i] =
                point_value(g, f.level(j), g.x[i], nodes);
        }
    }
    return out;
}

}  // namespace jdp
