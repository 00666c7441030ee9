#include "jdp/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "jdp/errors.hpp"

namespace jdp {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
    raise(errc::config_error, path + ": " + why);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) bad(path.empty() ? it.key() : path + "." + it.key(),
                        "unknown key");
    }
}

const json* find(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double need_num(const json& obj, const std::string& path,
                const std::string& key) {
    const json* v = find(obj, key);
    if (v == nullptr) bad(path + "." + key, "missing required field");
    if (!v->is_number()) bad(path + "." + key, "expected a number");
    return v->get<double>();
}

double opt_num(const json& obj, const std::string& path,
               const std::string& key, double fallback) {
    const json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) bad(path + "." + key, "expected a number");
    return v->get<double>();
}

int opt_int(const json& obj, const std::string& path, const std::string& key,
            int fallback) {
    const json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) bad(path + "." + key, "expected an integer");
    return v->get<int>();
}

bool opt_bool(const json& obj, const std::string& path,
              const std::string& key, bool fallback) {
    const json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) bad(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

std::string opt_str(const json& obj, const std::string& path,
                    const std::string& key, const std::string& fallback) {
    const json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) bad(path + "." + key, "expected a string");
    return v->get<std::string>();
}

JumpMeasure parse_jump(const json& obj, const std::string& path) {
    if (!obj.is_object()) bad(path, "expected an object");
    const std::string kind = opt_str(obj, path, "kind", "");
    if (kind == "discrete") {
        reject_unknown(obj, path, {"kind", "atoms"});
        const json* atoms = find(obj, "atoms");
        if (atoms == nullptr || !atoms->is_array() || atoms->empty())
            bad(path + ".atoms", "expected a non-empty array");
        std::vector<JumpAtom> out;
        int idx = 0;
        for (const auto& a : *atoms) {
            const std::string apath =
                path + ".atoms[" + std::to_string(idx++) + "]";
            if (!a.is_object()) bad(apath, "expected an object");
            reject_unknown(a, apath, {"z", "w"});
            JumpAtom atom;
            atom.z = need_num(a, apath, "z");
            atom.w = need_num(a, apath, "w");
            if (!(atom.z > 0.0)) bad(apath + ".z", "must be positive");
            if (!(atom.w > 0.0)) bad(apath + ".w", "must be positive");
            out.push_back(atom);
        }
        return JumpMeasure::discrete(std::move(out));
    }
    if (kind == "lognormal") {
        reject_unknown(obj, path, {"kind", "log_mean", "log_std", "quad_nodes"});
        const double m = need_num(obj, path, "log_mean");
        const double s = need_num(obj, path, "log_std");
        const int nodes = opt_int(obj, path, "quad_nodes", 32);
        if (s < 0.0) bad(path + ".log_std", "must be >= 0");
        if (nodes < 2) bad(path + ".quad_nodes", "must be >= 2");
        return JumpMeasure::lognormal(m, s, nodes);
    }
    bad(path + ".kind", "expected \"discrete\" or \"lognormal\"");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& where) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(errc::config_error, where + ": " + e.what());
    }
    if (!root.is_object()) bad(where, "top level must be an object");
    reject_unknown(root, "",
                   {"model", "grid", "solver", "iteration", "oracles",
                    "output_dir"});

    RunConfig cfg;

    const json* model = find(root, "model");
    if (model == nullptr || !model->is_object())
        bad("model", "missing required section");
    reject_unknown(*model, "model",
                   {"rate", "sigma", "lambda", "strike", "horizon", "jump"});
    cfg.model.rate = need_num(*model, "model", "rate");
    cfg.model.sigma = need_num(*model, "model", "sigma");
    cfg.model.intensity = opt_num(*model, "model", "lambda", 0.0);
    cfg.model.strike = need_num(*model, "model", "strike");
    cfg.model.horizon = need_num(*model, "model", "horizon");
    if (!(cfg.model.sigma > 0.0)) bad("model.sigma", "must be positive");
    if (!(cfg.model.strike > 0.0)) bad("model.strike", "must be positive");
    if (!(cfg.model.horizon > 0.0)) bad("model.horizon", "must be positive");
    if (cfg.model.rate < 0.0) bad("model.rate", "must be >= 0");
    if (cfg.model.intensity < 0.0) bad("model.lambda", "must be >= 0");
    const json* jump = find(*model, "jump");
    if (jump != nullptr) {
        cfg.model.jump = parse_jump(*jump, "model.jump");
    } else if (cfg.model.intensity > 0.0) {
        bad("model.jump", "required when model.lambda > 0");
    }

    if (const json* grid = find(root, "grid")) {
        if (!grid->is_object()) bad("grid", "expected an object");
        reject_unknown(*grid, "grid", {"m", "n", "width"});
        cfg.grid.m = opt_int(*grid, "grid", "m", cfg.grid.m);
        cfg.grid.n = opt_int(*grid, "grid", "n", cfg.grid.n);
        cfg.grid.width = opt_num(*grid, "grid", "width", cfg.grid.width);
        if (cfg.grid.m < 16) bad("grid.m", "must be >= 16");
        if (cfg.grid.n < 8) bad("grid.n", "must be >= 8");
        if (!(cfg.grid.width >= 0.0)) bad("grid.width", "must be >= 0");
    }

    if (const json* solver = find(root, "solver")) {
        if (!solver->is_object()) bad("solver", "expected an object");
        reject_unknown(*solver, "solver",
                       {"theta", "rannacher_steps", "lcp_method", "psor_omega",
                        "psor_tol", "psor_max_iter"});
        cfg.solver.theta = opt_num(*solver, "solver", "theta",
                                   cfg.solver.theta);
        cfg.solver.rannacher_steps = opt_int(*solver, "solver",
                                             "rannacher_steps",
                                             cfg.solver.rannacher_steps);
        const std::string method = opt_str(*solver, "solver", "lcp_method",
                                           "brennan_schwartz");
        if (method == "brennan_schwartz")
            cfg.solver.method = lcp_method::brennan_schwartz;
        else if (method == "psor")
            cfg.solver.method = lcp_method::psor;
        else
            bad("solver.lcp_method",
                "expected \"brennan_schwartz\" or \"psor\"");
        cfg.solver.psor_omega = opt_num(*solver, "solver", "psor_omega",
                                        cfg.solver.psor_omega);
        cfg.solver.psor_tol = opt_num(*solver, "solver", "psor_tol",
                                      cfg.solver.psor_tol);
        cfg.solver.psor_max_iter = opt_int(*solver, "solver", "psor_max_iter",
                                           cfg.solver.psor_max_iter);
        if (!(cfg.solver.theta >= 0.0 && cfg.solver.theta <= 1.0))
            bad("solver.theta", "must lie in [0, 1]");
        if (cfg.solver.rannacher_steps < 0)
            bad("solver.rannacher_steps", "must be >= 0");
        if (!(cfg.solver.psor_omega > 0.0 && cfg.solver.psor_omega < 2.0))
            bad("solver.psor_omega", "must lie in (0, 2)");
        if (cfg.solver.psor_max_iter < 1)
            bad("solver.psor_max_iter", "must be >= 1");
    }

    if (const json* iter = find(root, "iteration")) {
        if (!iter->is_object()) bad("iteration", "expected an object");
        reject_unknown(*iter, "iteration",
                       {"tol", "max_iter", "use_refined_bound"});
        cfg.iteration.tol = opt_num(*iter, "iteration", "tol",
                                    cfg.iteration.tol);
        cfg.iteration.max_iter = opt_int(*iter, "iteration", "max_iter",
                                         cfg.iteration.max_iter);
        cfg.iteration.use_refined_bound =
            opt_bool(*iter, "iteration", "use_refined_bound",
                     cfg.iteration.use_refined_bound);
        if (const json* v = find(*iter, "tol"))
            if (v->is_number() && !(v->get<double>() > 0.0))
                bad("iteration.tol", "must be positive");
        if (cfg.iteration.max_iter < 0)
            bad("iteration.max_iter", "must be >= 0");
    }

    if (const json* oracles = find(root, "oracles")) {
        if (!oracles->is_object()) bad("oracles", "expected an object");
        reject_unknown(*oracles, "oracles",
                       {"merton_european", "binomial", "lsmc",
                        "binomial_steps", "mc", "spots"});
        cfg.oracles.merton_european = opt_bool(*oracles, "oracles",
                                               "merton_european", false);
        cfg.oracles.binomial = opt_bool(*oracles, "oracles", "binomial",
                                        false);
        cfg.oracles.lsmc = opt_bool(*oracles, "oracles", "lsmc", false);
        cfg.oracles.binomial_steps =
            opt_int(*oracles, "oracles", "binomial_steps",
                    cfg.oracles.binomial_steps);
        if (cfg.oracles.binomial_steps < 1)
            bad("oracles.binomial_steps", "must be >= 1");
        if (const json* mc = find(*oracles, "mc")) {
            if (!mc->is_object()) bad("oracles.mc", "expected an object");
            reject_unknown(*mc, "oracles.mc",
                           {"paths", "steps", "seed", "basis_degree",
                            "antithetic"});
            cfg.oracles.mc.paths =
                opt_int(*mc, "oracles.mc", "paths",
                        static_cast<int>(cfg.oracles.mc.paths));
            cfg.oracles.mc.steps = opt_int(*mc, "oracles.mc", "steps",
                                           cfg.oracles.mc.steps);
            const json* seed = find(*mc, "seed");
            if (seed != nullptr) {
                if (!seed->is_number_integer() || seed->get<long long>() < 0)
                    bad("oracles.mc.seed", "expected a nonnegative integer");
                cfg.oracles.mc.seed = seed->get<std::uint64_t>();
            }
            cfg.oracles.mc.basis_degree =
                opt_int(*mc, "oracles.mc", "basis_degree",
                        cfg.oracles.mc.basis_degree);
            cfg.oracles.mc.antithetic = opt_bool(*mc, "oracles.mc",
                                                 "antithetic",
                                                 cfg.oracles.mc.antithetic);
            if (cfg.oracles.mc.paths < 2)
                bad("oracles.mc.paths", "must be >= 2");
            if (cfg.oracles.mc.steps < 1)
                bad("oracles.mc.steps", "must be >= 1");
            if (cfg.oracles.mc.basis_degree < 0 ||
                cfg.oracles.mc.basis_degree > 8)
                bad("oracles.mc.basis_degree", "must lie in [0, 8]");
        }
        if (const json* spots = find(*oracles, "spots")) {
            if (!spots->is_array()) bad("oracles.spots", "expected an array");
            int idx = 0;
            for (const auto& s : *spots) {
                const std::string spath =
                    "oracles.spots[" + std::to_string(idx++) + "]";
                if (!s.is_number()) bad(spath, "expected a number");
                const double x = s.get<double>();
                if (x < 0.0) bad(spath, "must be >= 0");
                cfg.oracles.spots.push_back(x);
            }
        }
    }
    if (cfg.oracles.spots.empty()) cfg.oracles.spots = {cfg.model.strike};

    cfg.output_dir = opt_str(root, "", "output_dir", cfg.output_dir);
    if (cfg.output_dir.empty()) bad("output_dir", "must not be empty");

    // belt and braces: derive drift/jump mean and recheck everything
    try {
        cfg.model = validate(cfg.model);
    } catch (const error& e) {
        bad("model", e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path);
}

}  // namespace jdp
