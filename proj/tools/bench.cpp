#include <chrono>
#include <cstdio>
#include <memory>

#include "jdp/grid.hpp"
#include "jdp/jump_measure.hpp"
#include "jdp/lcp_solver.hpp"
#include "jdp/oracles.hpp"
#include "jdp/parallel.hpp"

namespace {

using clk = std::chrono::steady_clock;

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

// keep a value alive so the timed work is not optimized away
volatile double sink = 0.0;

}  // namespace

int main() {
    jdp::apply_thread_cap_from_env();

    jdp::ModelParams p;
    p.rate = 0.05;
    p.sigma = 0.2;
    p.intensity = 0.3;
    p.strike = 100.0;
    p.horizon = 0.5;
    p.jump = jdp::JumpMeasure::lognormal(-0.045, 0.3, 64);
    p = jdp::validate(p);

    auto grid = std::make_shared<const jdp::Grid>(
        jdp::build_grid(p, 400, 400, 5.0));
    jdp::SolverConfig solver;
    const jdp::ValueSurface v1 =
        jdp::apply_J(jdp::payoff_surface(grid), p, solver);

    std::printf("threads: %d\n", jdp::max_threads());
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial", "parallel",
                "speedup");

    {
        const int reps = 5;
        auto t0 = clk::now();
        for (int r = 0; r < reps; ++r) {
            auto out = jdp::apply_P_all_levels(v1, p.jump, false);
            sink = sink + out[out.size() / 2];
        }
        const double serial = ms_since(t0) / reps;
        t0 = clk::now();
        for (int r = 0; r < reps; ++r) {
            auto out = jdp::apply_P_all_levels(v1, p.jump, true);
            sink = sink + out[out.size() / 2];
        }
        const double parallel = ms_since(t0) / reps;
        std::printf("%-34s %8.1fms %8.1fms %7.2fx\n",
                    "jump average, 400x400 surface", serial, parallel,
                    serial / parallel);
    }

    {
        jdp::McConfig mc;
        mc.paths = 200000;
        mc.steps = 200;
        mc.seed = 7;
        auto t0 = clk::now();
        auto a = jdp::simulate_jump_paths(p, 100.0, p.horizon, mc, false);
        const double serial = ms_since(t0);
        t0 = clk::now();
        auto b = jdp::simulate_jump_paths(p, 100.0, p.horizon, mc, true);
        const double parallel = ms_since(t0);
        sink = sink + a.back() + b.back();
        std::printf("%-34s %8.1fms %8.1fms %7.2fx\n",
                    "path simulation, 200k x 200", serial, parallel,
                    serial / parallel);
        std::printf("parallel fill bit-identical to serial: %s\n",
                    a == b ? "yes" : "NO");
    }
    return 0;
}
