#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int status = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int rc = pclose(pipe);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

std::string price_bin() { return std::string("\"") + PRICE_BIN + "\""; }

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("price_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p, std::ios::trunc);
    out << body;
    return p;
}

std::string small_run_config(const fs::path& out_dir,
                             const std::string& extra_model = "",
                             const std::string& oracles =
                                 "{\"merton_european\": false, "
                                 "\"binomial\": false, \"lsmc\": false}") {
    std::ostringstream os;
    os << "{\n"
       << "  \"model\": {\"rate\": 0.05, \"sigma\": 0.2, \"lambda\": 0.3,\n"
       << "    \"strike\": 100, \"horizon\": 0.5,\n"
       << "    \"jump\": {\"kind\": \"lognormal\", \"log_mean\": -0.045,\n"
       << "      \"log_std\": 0.3, \"quad_nodes\": 16}" << extra_model
       << "},\n"
       << "  \"grid\": {\"m\": 120, \"n\": 40, \"width\": 6},\n"
       << "  \"iteration\": {\"tol\": 0.05, \"use_refined_bound\": true},\n"
       << "  \"oracles\": " << oracles << ",\n"
       << "  \"output_dir\": \"" << out_dir.string() << "\"\n"
       << "}\n";
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("run writes the full artifact set and reports what it did") {
    const fs::path out_dir = scratch_dir() / "run_basic";
    const fs::path cfg =
        write_config("basic.json", small_run_config(out_dir));
    const CmdResult r = run_cmd(price_bin() + " run " + cfg.string());
    CAPTURE(r.out);
    CHECK(r.status == 0);
    CHECK(fs::exists(out_dir / "value_surface.csv"));
    CHECK(fs::exists(out_dir / "boundary.csv"));
    CHECK(fs::exists(out_dir / "convergence.json"));
    CHECK_FALSE(fs::exists(out_dir / "oracle_quotes.json"));
    CHECK(r.out.find("iterations:") != std::string::npos);
    CHECK(r.out.find("boundary:") != std::string::npos);

    const std::string csv = slurp(out_dir / "value_surface.csv");
    CHECK(csv.rfind("T,x,value", 0) == 0);
    CHECK(slurp(out_dir / "boundary.csv").rfind("T,c,fit_slope", 0) == 0);
}

TEST_CASE("run produces oracle quotes when asked") {
    const fs::path out_dir = scratch_dir() / "run_oracles";
    const fs::path cfg = write_config(
        "oracles.json",
        small_run_config(out_dir, "",
                         "{\"merton_european\": true, \"binomial\": false, "
                         "\"lsmc\": false, \"spots\": [90, 100]}"));
    const CmdResult r = run_cmd(price_bin() + " run " + cfg.string());
    CAPTURE(r.out);
    CHECK(r.status == 0);
    CHECK(fs::exists(out_dir / "oracle_quotes.json"));
    CHECK(r.out.find("merton_european") != std::string::npos);
}

TEST_CASE("repeat runs are byte-identical") {
    const fs::path out_dir = scratch_dir() / "run_repeat";
    const fs::path cfg =
        write_config("repeat.json", small_run_config(out_dir));
    REQUIRE(run_cmd(price_bin() + " run " + cfg.string()).status == 0);
    const std::string surf1 = slurp(out_dir / "value_surface.csv");
    const std::string conv1 = slurp(out_dir / "convergence.json");
    const std::string bnd1 = slurp(out_dir / "boundary.csv");
    REQUIRE(run_cmd(price_bin() + " run " + cfg.string()).status == 0);
    CHECK(slurp(out_dir / "value_surface.csv") == surf1);
    CHECK(slurp(out_dir / "convergence.json") == conv1);
    CHECK(slurp(out_dir / "boundary.csv") == bnd1);
}

TEST_CASE("output does not depend on the thread cap") {
    const fs::path out_dir = scratch_dir() / "run_threads";
    const fs::path cfg =
        write_config("threads.json", small_run_config(out_dir));
    REQUIRE(run_cmd("PRICE_THREADS=1 " + price_bin() + " run " +
                    cfg.string())
                .status == 0);
    const std::string surf1 = slurp(out_dir / "value_surface.csv");
    REQUIRE(run_cmd("PRICE_THREADS=2 " + price_bin() + " run " +
                    cfg.string())
                .status == 0);
    CHECK(slurp(out_dir / "value_surface.csv") == surf1);
}

TEST_CASE("point queries print a price with its certificate") {
    const fs::path out_dir = scratch_dir() / "at_out";
    const fs::path cfg = write_config("at.json", small_run_config(out_dir));
    const CmdResult r = run_cmd(price_bin() + " at " + cfg.string() +
                                " --spot 90 --maturity 0.25");
    CAPTURE(r.out);
    CHECK(r.status == 0);
    CHECK(r.out.find("price = ") != std::string::npos);
    CHECK(r.out.find("certified_bound = ") != std::string::npos);
    CHECK(r.out.find("iterations = ") != std::string::npos);

    double price = -1.0;
    std::sscanf(r.out.c_str() + r.out.find("price = "), "price = %lf", &price);
    CHECK(price > 9.0);   // below intrinsic 10 minus time value is impossible
    CHECK(price < 101.0); // and the put never exceeds the strike
}

TEST_CASE("point queries outside the horizon fail cleanly") {
    const fs::path out_dir = scratch_dir() / "at_bad";
    const fs::path cfg =
        write_config("at_bad.json", small_run_config(out_dir));
    const CmdResult r = run_cmd(price_bin() + " at " + cfg.string() +
                                " --spot 90 --maturity 2.0");
    CHECK(r.status == 1);
    CHECK(r.out.find("OutOfRange") != std::string::npos);
}

TEST_CASE("config mistakes are reported by field and exit with 1") {
    const fs::path out_dir = scratch_dir() / "bad_cfg";

    SUBCASE("unknown key") {
        const fs::path cfg = write_config(
            "unknown.json",
            small_run_config(out_dir, ", \"sgima\": 0.2"));
        const CmdResult r = run_cmd(price_bin() + " run " + cfg.string());
        CHECK(r.status == 1);
        CHECK(r.out.find("sgima") != std::string::npos);
    }

    SUBCASE("negative volatility") {
        std::string body = small_run_config(out_dir);
        body.replace(body.find("\"sigma\": 0.2"), 12, "\"sigma\": -0.2");
        const fs::path cfg = write_config("neg_sigma.json", body);
        const CmdResult r = run_cmd(price_bin() + " run " + cfg.string());
        CHECK(r.status == 1);
        CHECK(r.out.find("model.sigma") != std::string::npos);
    }

    SUBCASE("missing file") {
        const CmdResult r =
            run_cmd(price_bin() + " run " + (out_dir / "nope.json").string());
        CHECK(r.status == 1);
        CHECK(r.out.find("IoError") != std::string::npos);
    }

    SUBCASE("malformed json") {
        const fs::path cfg = write_config("broken.json", "{\"model\": [}");
        const CmdResult r = run_cmd(price_bin() + " run " + cfg.string());
        CHECK(r.status == 1);
    }
}

TEST_CASE("the built-in selftest passes") {
    const CmdResult r = run_cmd(price_bin() + " selftest");
    CAPTURE(r.out);
    CHECK(r.status == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("selftest diffusion") != std::string::npos);
    CHECK(r.out.find("selftest merton") != std::string::npos);
    CHECK(r.out.find("selftest atoms") != std::string::npos);
}
