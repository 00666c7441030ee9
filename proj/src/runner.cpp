#include "jdp/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "jdp/errors.hpp"

namespace jdp {

namespace {

// fixed-format float rendering so identical runs produce identical bytes
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot write " + path.string());
    out << body;
    if (!out) raise(errc::io_error, "write failed for " + path.string());
}

}  // namespace

RunArtifacts run_pricing(const RunConfig& config) {
    const ModelParams p = validate(config.model);
    auto grid = std::make_shared<const Grid>(
        build_grid(p, config.grid.m, config.grid.n, config.grid.width));

    RunArtifacts art;
    art.result = run_fixed_point(p, grid, config.solver, config.iteration.tol,
                                 config.iteration.max_iter,
                                 config.iteration.use_refined_bound);
    // the limit surface is its own jump-source: its residual classifies the
    // continuation and stopping regions of the solved problem
    art.residual =
        residual_check(art.result.surface, art.result.surface, p,
                       config.solver);

    const double T0 = p.horizon;
    auto add = [&](const OracleQuote& q, double spot) {
        art.quotes.push_back(q);
        art.quote_spots.push_back(spot);
    };
    if (config.oracles.merton_european)
        for (double s : config.oracles.spots)
            add(merton_european_put(p, s, T0), s);
    if (config.oracles.binomial)
        for (double s : config.oracles.spots)
            add(binomial_american_put(p, s, T0, config.oracles.binomial_steps),
                s);
    if (config.oracles.lsmc)
        for (double s : config.oracles.spots)
            add(lsmc_american_put(p, s, T0, config.oracles.mc), s);
    return art;
}

void run_and_write(const RunConfig& config, std::ostream& log) {
    const RunArtifacts art = run_pricing(config);
    const ValueSurface& v = art.result.surface;
    const Grid& g = *v.grid;

    const std::filesystem::path dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(errc::io_error, "cannot create " + dir.string());

    std::string csv = "T,x,value\n";
    csv.reserve(v.values.size() * 24);
    for (int j = 0; j < g.n_time(); ++j)
        for (int i = 0; i < g.n_space(); ++i)
            csv += fmt(g.t[j]) + "," + fmt(g.x[i]) + "," + fmt(v.at(i, j)) +
                   "\n";
    write_file(dir / "value_surface.csv", csv);

    const FreeBoundary& fb = art.result.boundary;
    std::string bcsv = "T,c,fit_slope\n";
    for (std::size_t k = 0; k < fb.c.size(); ++k)
        bcsv += fmt(fb.t[k]) + "," + fmt(fb.c[k]) + "," +
                fmt(fb.fit_slope[k]) + "\n";
    write_file(dir / "boundary.csv", bcsv);

    std::string conv = "[\n";
    for (std::size_t k = 0; k < art.result.reports.size(); ++k) {
        const IterationReport& r = art.result.reports[k];
        conv += "  {\"n\": " + std::to_string(r.n) +
                ", \"gap\": " + fmt(r.gap) +
                ", \"apriori_bound\": " + fmt(r.apriori_bound) +
                ", \"refined_bound\": " + fmt(r.refined_bound) +
                ", \"ratio\": " + (r.ratio ? fmt(*r.ratio) : "null") + "}";
        conv += k + 1 < art.result.reports.size() ? ",\n" : "\n";
    }
    conv += "]\n";
    write_file(dir / "convergence.json", conv);

    if (!art.quotes.empty()) {
        std::string oq = "[\n";
        for (std::size_t k = 0; k < art.quotes.size(); ++k) {
            const OracleQuote& q = art.quotes[k];
            oq += "  {\"method\": \"" + q.method +
                  "\", \"spot\": " + fmt(art.quote_spots[k]) +
                  ", \"maturity\": " + fmt(g.t.back()) +
                  ", \"price\": " + fmt(q.price) +
                  ", \"std_error\": " + fmt(q.std_error) + "}";
            oq += k + 1 < art.quotes.size() ? ",\n" : "\n";
        }
        oq += "]\n";
        write_file(dir / "oracle_quotes.json", oq);
    }

    const IterationReport& last = art.result.reports.back();
    log << "grid: " << g.n_space() - 1 << "x" << g.n_time() - 1
        << " nodes on [" << fmt(g.x[1]) << ", " << fmt(g.x.back())
        << "], horizon " << fmt(g.t.back()) << "\n";
    const char* reason =
        art.result.terminated_by == FixedPointResult::stop_reason::gap_tol
            ? "gap_tol"
        : art.result.terminated_by == FixedPointResult::stop_reason::bound_tol
            ? "bound_tol"
            : "max_iter";
    log << "iterations: " << last.n << " (" << reason << "), gap "
        << fmt(last.gap) << ", apriori " << fmt(last.apriori_bound)
        << ", refined " << fmt(last.refined_bound) << "\n";
    if (!art.result.warning.empty())
        log << "warning: " << art.result.warning << "\n";
    if (fb.c.empty())
        log << "boundary: none (no contact region at zero interest)\n";
    else
        log << "boundary: c(T0) = " << fmt(fb.c.back()) << ", fit slope "
            << fmt(fb.fit_slope.back()) << "\n";
    log << "residual: continuation " << fmt(art.residual.max_abs_continuation)
        << ", stopping positive part " << fmt(art.residual.max_pos_stopping)
        << "\n";
    log << "value at strike: " << fmt(eval_at(v, g.strike, g.t.back()))
        << "\n";
    for (std::size_t k = 0; k < art.quotes.size(); ++k)
        log << "oracle " << art.quotes[k].method << " at spot "
            << fmt(art.quote_spots[k]) << ": " << fmt(art.quotes[k].price)
            << " (se " << fmt(art.quotes[k].std_error) << ")\n";
    log << "wrote " << (dir / "value_surface.csv").string() << ", "
        << (dir / "boundary.csv").string() << ", "
        << (dir / "convergence.json").string();
    if (!art.quotes.empty())
        log << ", " << (dir / "oracle_quotes.json").string();
    log << "\n";
}

PriceAtResult price_at(const RunConfig& config, double spot, double maturity) {
    const ModelParams p = validate(config.model);
    if (spot < 0.0 || !std::isfinite(spot))
        raise(errc::out_of_range, "spot = " + std::to_string(spot));
    if (!(maturity >= 0.0) || maturity > p.horizon)
        raise(errc::out_of_range,
              "maturity " + std::to_string(maturity) + " outside [0, " +
                  std::to_string(p.horizon) + "]");
    auto grid = std::make_shared<const Grid>(
        build_grid(p, config.grid.m, config.grid.n, config.grid.width));
    const FixedPointResult res = run_fixed_point(
        p, grid, config.solver, config.iteration.tol,
        config.iteration.max_iter, config.iteration.use_refined_bound);
    PriceAtResult out;
    out.price = eval_at(res.surface, spot, maturity);
    const IterationReport& last = res.reports.back();
    out.bound = config.iteration.use_refined_bound ? last.refined_bound
                                                   : last.apriori_bound;
    out.iterations = last.n;
    return out;
}

int selftest(std::ostream& log) {
    struct Case {
        const char* name;
        ModelParams params;
    };
    ModelParams diffusion;
    diffusion.rate = 0.05;
    diffusion.sigma = 0.2;
    diffusion.intensity = 0.0;
    diffusion.strike = 100.0;
    diffusion.horizon = 1.0;

    ModelParams merton;
    merton.rate = 0.05;
    merton.sigma = 0.2;
    merton.intensity = 0.3;
    merton.strike = 100.0;
    merton.horizon = 0.5;
    merton.jump = JumpMeasure::lognormal(-0.045, 0.3, 32);

    ModelParams atoms;
    atoms.rate = 0.04;
    atoms.sigma = 0.25;
    atoms.intensity = 0.2;
    atoms.strike = 100.0;
    atoms.horizon = 0.75;
    atoms.jump = JumpMeasure::discrete(
        {{0.7, 0.4}, {1.0, 0.2}, {1.3, 0.4}});

    const Case cases[] = {
        {"diffusion", diffusion}, {"merton", merton}, {"atoms", atoms}};

    int status = 0;
    auto check = [&](const char* name, const char* what, bool ok,
                     const std::string& extra) {
        log << "selftest " << name << ": " << what << " "
            << (ok ? "ok" : "FAIL");
        if (!extra.empty()) log << " (" << extra << ")";
        log << "\n";
        if (!ok) status = 2;
    };

    for (const Case& c : cases) {
        try {
            const ModelParams p = validate(c.params);
            const double K = p.strike;
            auto grid =
                std::make_shared<const Grid>(build_grid(p, 200, 100, 5.0));
            SolverConfig solver;
            const double tol = 1e-4 * K;
            const FixedPointResult res =
                run_fixed_point(p, grid, solver, tol, 0, true);
            check(c.name, "fixed point solve", true,
                  std::to_string(res.reports.back().n) + " iterations");

            const double defect =
                check_fixed_point(res.surface, p, solver);
            check(c.name, "fixed-point defect <= 2 tol", defect <= 2.0 * tol,
                  "defect " + fmt(defect));

            const ResidualReport rr =
                residual_check(res.surface, res.surface, p, solver);
            check(c.name, "continuation residual <= 1e-4 K",
                  rr.max_abs_continuation <= 1e-4 * K,
                  "max " + fmt(rr.max_abs_continuation));
            check(c.name, "stopping residual sign <= 1e-6 K",
                  rr.max_pos_stopping <= 1e-6 * K,
                  "max positive part " + fmt(rr.max_pos_stopping));

            if (p.intensity == 0.0) {
                const OracleQuote b =
                    binomial_american_put(p, K, p.horizon, 2000);
                const double pde = eval_at(res.surface, K, p.horizon);
                check(c.name, "price vs binomial within 0.3% K",
                      std::fabs(pde - b.price) <= 3e-3 * K,
                      "pde " + fmt(pde) + " tree " + fmt(b.price));
            } else if (p.jump.kind == JumpMeasure::kind_t::lognormal) {
                const OracleQuote e = merton_european_put(p, K, p.horizon);
                const double pde = eval_at(res.surface, K, p.horizon);
                check(c.name, "American above European",
                      pde >= e.price - 1e-3 * K,
                      "pde " + fmt(pde) + " series " + fmt(e.price));
            }
        } catch (const std::exception& e) {
            check(c.name, "run", false, e.what());
        }
    }
    log << "selftest " << (status == 0 ? "PASS" : "FAIL") << "\n";
    return status;
}

}  // namespace jdp
