#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "jdp/errors.hpp"
#include "jdp/parallel.hpp"
#include "jdp/runner.hpp"

namespace {

// 1 for problems with the user's input, 2 for numerical failures
int exit_code_for(const jdp::error& e) {
    switch (e.code()) {
        case jdp::errc::config_error:
        case jdp::errc::io_error:
        case jdp::errc::out_of_range:
            return 1;
        default:
            return 2;
    }
}

int cmd_run(const std::string& config_path) {
    const jdp::RunConfig cfg = jdp::load_run_config(config_path);
    jdp::run_and_write(cfg, std::cout);
    return 0;
}

int cmd_at(const std::string& config_path, double spot, double maturity) {
    const jdp::RunConfig cfg = jdp::load_run_config(config_path);
    const jdp::PriceAtResult r = jdp::price_at(cfg, spot, maturity);
    std::printf("price = %.12g\n", r.price);
    std::printf("certified_bound = %.12g\n", r.bound);
    std::printf("iterations = %d\n", r.iterations);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    jdp::apply_thread_cap_from_env();

    CLI::App app{"American put pricer for a jump diffusion"};
    app.require_subcommand(1);

    std::string config_path;
    double spot = 0.0, maturity = 0.0;

    CLI::App* run = app.add_subcommand(
        "run", "solve a config and write surface/boundary/convergence files");
    run->add_option("config", config_path, "JSON config file")->required();

    CLI::App* at = app.add_subcommand(
        "at", "solve a config and print the price at one point");
    at->add_option("config", config_path, "JSON config file")->required();
    at->add_option("--spot", spot, "spot price, >= 0")->required();
    at->add_option("--maturity", maturity, "time to maturity in [0, horizon]")
        ->required();

    CLI::App* st = app.add_subcommand(
        "selftest", "run the built-in solver checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (at->parsed()) return cmd_at(config_path, spot, maturity);
        if (st->parsed()) return jdp::selftest(std::cout);
    } catch (const jdp::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
