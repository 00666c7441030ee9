#include "jdp/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "jdp/errors.hpp"

namespace jdp {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Undiscounted Black put on a lognormal terminal price with forward fwd and
// total standard deviation v.
double black_put(double fwd, double strike, double v) {
    if (v <= 0.0) return std::max(strike - fwd, 0.0);
    const double d1 = (std::log(fwd / strike) + 0.5 * v * v) / v;
    const double d2 = d1 - v;
    return strike * norm_cdf(-d2) - fwd * norm_cdf(-d1);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t unit_seed(std::uint64_t seed, long unit) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL *
                                 static_cast<std::uint64_t>(unit + 1));
}

long effective_paths(const McConfig& mc) {
    long n = mc.paths;
    if (mc.antithetic) n -= n % 2;
    return n;
}

}  // namespace

OracleQuote merton_european_put(const ModelParams& params, double spot,
                                double maturity) {
    const ModelParams p = validate(params);
    if (spot < 0.0 || !std::isfinite(spot))
        raise(errc::negative_price, "spot = " + std::to_string(spot));
    if (maturity < 0.0 || !std::isfinite(maturity))
        raise(errc::out_of_range, "maturity = " + std::to_string(maturity));

    OracleQuote q;
    q.method = "merton_european";
    if (maturity == 0.0) {
        q.price = payoff_eval(p.strike, spot);
        return q;
    }
    if (spot == 0.0) {
        q.price = p.strike * std::exp(-p.rate * maturity);
        return q;
    }
    if (p.intensity > 0.0 && p.jump.kind != JumpMeasure::kind_t::lognormal)
        raise(errc::bad_jump_measure,
              "closed-form series needs lognormal jump sizes");

    const double T = maturity;
    const double lam_t = p.intensity * T;
    const double base_var = p.sigma * p.sigma * T;
    const double base_drift = (p.drift - 0.5 * p.sigma * p.sigma) * T;
    const double m = p.jump.log_mean;
    const double s2 = p.jump.log_std * p.jump.log_std;

    double weight = std::exp(-lam_t);  // Poisson mass at n jumps
    double cum = 0.0;
    double acc = 0.0;
    for (int n = 0;; ++n) {
        const double var_n = base_var + n * s2;
        const double fwd_n =
            spot * std::exp(base_drift + n * m + 0.5 * var_n);
        acc += weight * black_put(fwd_n, p.strike, std::sqrt(var_n));
        cum += weight;
        if (1.0 - cum <= 1e-12) break;
        if (n >= 1000)
            raise(errc::series_not_converged,
                  "Poisson tail still " + std::to_string(1.0 - cum) +
                      " after 1000 terms");
        weight *= lam_t / (n + 1);
    }
    q.price = std::exp(-p.rate * T) * acc;
    return q;
}

OracleQuote binomial_american_put(const ModelParams& params, double spot,
                                  double maturity, int steps) {
    const ModelParams p = validate(params);
    if (p.intensity != 0.0)
        raise(errc::lambda_not_zero,
              "tree oracle is diffusion-only, intensity = " +
                  std::to_string(p.intensity));
    if (spot < 0.0 || !std::isfinite(spot))
        raise(errc::negative_price, "spot = " + std::to_string(spot));
    if (maturity < 0.0 || !std::isfinite(maturity))
        raise(errc::out_of_range, "maturity = " + std::to_string(maturity));
    if (steps < 1)
        raise(errc::out_of_range, "steps = " + std::to_string(steps));

    OracleQuote q;
    q.method = "binomial";
    if (maturity == 0.0 || spot == 0.0) {
        q.price = payoff_eval(p.strike, spot);
        return q;
    }

    auto tree = [&](int n) {
        const double dt = maturity / n;
        const double step_sd = p.sigma * std::sqrt(dt);
        const double u = std::exp(step_sd);
        const double d = 1.0 / u;
        const double grow = std::exp(p.rate * dt);
        const double pu = (grow - d) / (u - d);
        if (!(pu > 0.0 && pu < 1.0))
            raise(errc::out_of_range,
                  "tree step too coarse for these parameters");
        const double disc = 1.0 / grow;

        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j) {
            const double st = spot * std::exp((2.0 * j - n) * step_sd);
            v[j] = st < p.strike ? p.strike - st : 0.0;
        }
        for (int k = n - 1; k >= 0; --k) {
            for (int j = 0; j <= k; ++j) {
                const double cont = disc * (pu * v[j + 1] + (1.0 - pu) * v[j]);
                const double st = spot * std::exp((2.0 * j - k) * step_sd);
                const double ex = st < p.strike ? p.strike - st : 0.0;
                v[j] = cont > ex ? cont : ex;
            }
        }
        return v[0];
    };
    // average adjacent step counts to damp the odd-even oscillation
    q.price = 0.5 * (tree(steps) + tree(steps + 1));
    return q;
}

std::vector<double> simulate_jump_paths(const ModelParams& params, double spot,
                                        double maturity, const McConfig& mc,
                                        bool parallel) {
    const ModelParams p = validate(params);
    if (!(spot > 0.0) || !std::isfinite(spot))
        raise(errc::negative_price, "spot = " + std::to_string(spot));
    if (!(maturity > 0.0))
        raise(errc::out_of_range, "maturity = " + std::to_string(maturity));
    if (mc.steps < 1)
        raise(errc::out_of_range, "steps = " + std::to_string(mc.steps));
    const long npaths = effective_paths(mc);
    if (npaths < 2)
        raise(errc::out_of_range, "paths = " + std::to_string(mc.paths));

    const int steps = mc.steps;
    const double dt = maturity / steps;
    const double drift_dt = (p.drift - 0.5 * p.sigma * p.sigma) * dt;
    const double vol_rt = p.sigma * std::sqrt(dt);
    const double lam_dt = p.intensity * dt;
    const double log0 = std::log(spot);

    const bool lognormal_jumps =
        p.jump.kind == JumpMeasure::kind_t::lognormal;
    // prefix sums for inverse-CDF sampling of discrete jump sizes
    std::vector<double> cdf, logz;
    if (!lognormal_jumps) {
        double total = 0.0;
        for (const auto& a : p.jump.atoms) total += a.w;
        double run = 0.0;
        for (const auto& a : p.jump.atoms) {
            run += a.w / total;
            cdf.push_back(run);
            logz.push_back(std::log(a.z));
        }
        cdf.back() = 1.0;
    }

    std::vector<double> out(static_cast<std::size_t>(npaths) * steps);
    const long nunits = mc.antithetic ? npaths / 2 : npaths;

    // one engine per unit, seeded from (seed, unit): the fill order inside a
    // unit is fixed, so thread scheduling cannot change any draw
#pragma omp parallel for schedule(static) if (parallel)
    for (long u = 0; u < nunits; ++u) {
        std::mt19937_64 eng(unit_seed(mc.seed, u));
        std::normal_distribution<double> gauss;
        std::poisson_distribution<int> jumps(lam_dt > 0.0 ? lam_dt : 1.0);
        std::uniform_real_distribution<double> unif;

        double log_a = log0, log_b = log0;
        double* row_a;
        double* row_b = nullptr;
        if (mc.antithetic) {
            row_a = out.data() + static_cast<std::size_t>(2 * u) * steps;
            row_b = row_a + steps;
        } else {
            row_a = out.data() + static_cast<std::size_t>(u) * steps;
        }
        for (int k = 0; k < steps; ++k) {
            const double eps = gauss(eng);
            double jump_log = 0.0;
            if (lam_dt > 0.0) {
                const int nj = jumps(eng);
                for (int q = 0; q < nj; ++q) {
                    if (lognormal_jumps) {
                        jump_log += p.jump.log_mean +
                                    p.jump.log_std * gauss(eng);
                    } else {
                        const double r = unif(eng);
                        std::size_t a = 0;
                        while (a + 1 < cdf.size() && r > cdf[a]) ++a;
                        jump_log += logz[a];
                    }
                }
            }
            // antithetic twin flips the Brownian increment, keeps the jumps
            log_a += drift_dt + vol_rt * eps + jump_log;
            row_a[k] = std::exp(log_a);
            if (row_b != nullptr) {
                log_b += drift_dt - vol_rt * eps + jump_log;
                row_b[k] = std::exp(log_b);
            }
        }
    }
    return out;
}

OracleQuote lsmc_american_put(const ModelParams& params, double spot,
                              double maturity, const McConfig& mc) {
    const ModelParams p = validate(params);
    if (spot < 0.0 || !std::isfinite(spot))
        raise(errc::negative_price, "spot = " + std::to_string(spot));
    if (maturity < 0.0)
        raise(errc::out_of_range, "maturity = " + std::to_string(maturity));
    if (mc.basis_degree < 0 || mc.basis_degree > 8)
        raise(errc::out_of_range,
              "basis_degree = " + std::to_string(mc.basis_degree));

    OracleQuote q;
    q.method = "lsmc";
    if (maturity == 0.0 || spot == 0.0) {
        q.price = payoff_eval(p.strike, spot);
        return q;
    }

    const std::vector<double> paths =
        simulate_jump_paths(p, spot, maturity, mc, true);
    const long npaths = effective_paths(mc);
    const int steps = mc.steps;
    const double dt = maturity / steps;
    const double K = p.strike;

    auto s_at = [&](long path, int step) {
        return paths[static_cast<std::size_t>(path) * steps + (step - 1)];
    };
    auto put = [&](double x) { return x < K ? K - x : 0.0; };

    std::vector<int> stop(npaths, steps);
    std::vector<double> cash(npaths);
    for (long i = 0; i < npaths; ++i) cash[i] = put(s_at(i, steps));

    const int dim = mc.basis_degree + 1;
    if (mc.basis_degree > 0) {
        Eigen::MatrixXd gram(dim, dim);
        Eigen::VectorXd mom(dim), beta(dim), phi(dim);
        std::vector<long> itm;
        itm.reserve(npaths);
        for (int k = steps - 1; k >= 1; --k) {
            itm.clear();
            for (long i = 0; i < npaths; ++i)
                if (put(s_at(i, k)) > 0.0) itm.push_back(i);
            if (static_cast<int>(itm.size()) <= dim) continue;

            gram.setZero();
            mom.setZero();
            for (long i : itm) {
                const double xr = s_at(i, k) / K;
                phi(0) = 1.0;
                for (int d = 1; d < dim; ++d) phi(d) = phi(d - 1) * xr;
                const double y =
                    cash[i] * std::exp(-p.rate * (stop[i] - k) * dt);
                gram.noalias() += phi * phi.transpose();
                mom.noalias() += y * phi;
            }
            beta = gram.ldlt().solve(mom);

            for (long i : itm) {
                const double xr = s_at(i, k) / K;
                phi(0) = 1.0;
                for (int d = 1; d < dim; ++d) phi(d) = phi(d - 1) * xr;
                const double fitted = beta.dot(phi);
                const double ex = put(s_at(i, k));
                if (ex >= fitted) {
                    stop[i] = k;
                    cash[i] = ex;
                }
            }
        }
    }

    // serial reduction over independent units keeps the quote thread-stable
    const long nunits = mc.antithetic ? npaths / 2 : npaths;
    double sum = 0.0, sum_sq = 0.0;
    for (long u = 0; u < nunits; ++u) {
        double v;
        if (mc.antithetic) {
            const long a = 2 * u, b = 2 * u + 1;
            v = 0.5 * (cash[a] * std::exp(-p.rate * stop[a] * dt) +
                       cash[b] * std::exp(-p.rate * stop[b] * dt));
        } else {
            v = cash[u] * std::exp(-p.rate * stop[u] * dt);
        }
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / nunits;
    const double var =
        nunits > 1 ? std::max(0.0, (sum_sq - nunits * mean * mean) /
                                       (nunits - 1))
                   : 0.0;
    q.price = std::max(put(spot), mean);
    q.std_error = std::sqrt(var / nunits);
    return q;
}

}  // namespace jdp
