#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef FLOQ_CLI_PATH
#error "FLOQ_CLI_PATH must point at the built command-line binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the binary through the shell, captures stdout, discards stderr
// (specific tests re-enable it by redirecting into the capture).
RunResult run(const std::string& args, const std::string& redirect = " 2>/dev/null") {
    const std::string cmd = std::string(FLOQ_CLI_PATH) + " " + args + redirect;
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

RunResult run_env(const std::string& env, const std::string& args) {
    const std::string cmd = env + " " + std::string(FLOQ_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/floq_cli_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("gen produces parseable potentials and honors the seed") {
    auto r = run("gen --periods 2,3 --seed 5 --out -");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("periods") == nlohmann::json({2, 3}));
    CHECK(doc.at("values").size() == 6);

    SUBCASE("same seed, byte-identical output") {
        auto again = run("gen --periods 2,3 --seed 5 --out -");
        CHECK(again.out == r.out);
    }
    SUBCASE("different seed, different values") {
        auto other = run("gen --periods 2,3 --seed 6 --out -");
        CHECK(other.out != r.out);
    }
    SUBCASE("separable mode with a pattern") {
        auto sep = run("gen --periods 2,3 --mode separable --pattern 1,1 --seed 5 --out " +
                       temp_path("sep.json"));
        CHECK(sep.exit_code == 0);
        auto test = run("separable --in " + temp_path("sep.json") + " --pattern 1,1");
        CHECK(test.exit_code == 0);
    }
    SUBCASE("nonseparable mode fails the separability gate with exit 1") {
        auto non = run("gen --periods 2,3 --mode nonseparable --pattern 1,1 --seed 5 --out " +
                       temp_path("non.json"));
        CHECK(non.exit_code == 0);
        auto test = run("separable --in " + temp_path("non.json") + " --pattern 1,1");
        CHECK(test.exit_code == 1);
        auto doc = nlohmann::json::parse(test.out);
        CHECK(doc.at("separable").get<bool>() == false);
        CHECK(doc.contains("witness"));
    }
}

TEST_CASE("dft consumes stdin when asked") {
    auto gen = run("gen --periods 2 --seed 3 --out " + temp_path("v1.json"));
    REQUIRE(gen.exit_code == 0);
    auto piped = run("dft --in - --out - < " + temp_path("v1.json"));
    CHECK(piped.exit_code == 0);
    auto doc = nlohmann::json::parse(piped.out);
    CHECK(doc.at("coefficients").size() == 2);
}

TEST_CASE("isospectral decides with the exit code") {
    run("gen --periods 2,3 --seed 9 --out " + temp_path("a.json"));
    // A cyclic shift of the same draw: build it by generating and splitting
    // through the dft/idft pipeline is overkill; the verify suite already
    // covers translates. Here: a potential is isospectral to itself.
    auto same = run("isospectral --a " + temp_path("a.json") + " --b " + temp_path("a.json"));
    CHECK(same.exit_code == 0);
    auto doc = nlohmann::json::parse(same.out);
    CHECK(doc.at("accepted").get<bool>() == true);

    run("gen --periods 2,3 --seed 10 --out " + temp_path("b.json"));
    auto diff = run("isospectral --a " + temp_path("a.json") + " --b " + temp_path("b.json"));
    CHECK(diff.exit_code == 1);
}

TEST_CASE("split writes the constant and one file per component") {
    run("gen --periods 2,3 --mode separable --pattern 1,1 --seed 12 --out " +
        temp_path("s.json"));
    auto r = run("split --in " + temp_path("s.json") + " --pattern 1,1 --out-prefix " +
                 temp_path("parts"));
    CHECK(r.exit_code == 0);
    std::ifstream c(temp_path("parts") + "_constant.json");
    CHECK(c.good());
    std::ifstream c0(temp_path("parts") + "_component_0.json");
    std::ifstream c1(temp_path("parts") + "_component_1.json");
    REQUIRE(c0.good());
    REQUIRE(c1.good());
    auto d0 = nlohmann::json::parse(c0);
    CHECK(d0.at("periods") == nlohmann::json({2}));
    auto d1 = nlohmann::json::parse(c1);
    CHECK(d1.at("periods") == nlohmann::json({3}));

    SUBCASE("a nonseparable input is refused with exit 1") {
        run("gen --periods 2,3 --mode nonseparable --pattern 1,1 --seed 12 --out " +
            temp_path("ns.json"));
        auto bad = run("split --in " + temp_path("ns.json") + " --pattern 1,1 --out-prefix " +
                       temp_path("nope"));
        CHECK(bad.exit_code == 1);
    }
}

TEST_CASE("verify suites succeed quickly at low trial counts") {
    auto r = run("verify all --trials 3 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);

    SUBCASE("json mode emits one parseable report per suite") {
        auto j = run("verify main2 --trials 2 --seed 7 --json");
        CHECK(j.exit_code == 0);
        auto doc = nlohmann::json::parse(j.out);
        CHECK(doc.at("passed").get<bool>() == true);
    }
}

TEST_CASE("config file supplies defaults, flags still win") {
    const std::string cfg = temp_path("cfg.json");
    write_file(cfg, R"({"seed": 5, "periods": [2, 3]})");
    auto with_cfg = run("--config " + cfg + " gen --out -");
    auto explicit_args = run("gen --periods 2,3 --seed 5 --out -");
    CHECK(with_cfg.exit_code == 0);
    CHECK(with_cfg.out == explicit_args.out);

    // A flag on the command line overrides the config value.
    auto overridden = run("--config " + cfg + " gen --seed 6 --out -");
    auto direct = run("gen --periods 2,3 --seed 6 --out -");
    CHECK(overridden.out == direct.out);
}

TEST_CASE("the seed environment variable is the fallback default") {
    auto env = run_env("FLOQUET_SEED=5", "gen --periods 2,3 --out -");
    auto arg = run("gen --periods 2,3 --seed 5 --out -");
    CHECK(env.exit_code == 0);
    CHECK(env.out == arg.out);

    // Config beats the environment.
    const std::string cfg = temp_path("cfg2.json");
    write_file(cfg, R"({"seed": 7})");
    auto both = run_env("FLOQUET_SEED=5", "--config " + cfg + " gen --periods 2,3 --out -");
    auto cfg_only = run("gen --periods 2,3 --seed 7 --out -");
    CHECK(both.out == cfg_only.out);
}

TEST_CASE("usage and format problems exit 2") {
    CHECK(run("gen --periods 2 --no-such-flag").exit_code == 2);
    CHECK(run("gen").exit_code == 2);  // --periods is required without a config
    CHECK(run("separable --in /tmp/floq_does_not_exist.json --pattern 1,1").exit_code == 2);
    const std::string bad = temp_path("bad.json");
    write_file(bad, "{ this is not json");
    CHECK(run("dft --in " + bad).exit_code == 2);
    // spectrum needs exactly one of --k / --grid
    run("gen --periods 2 --seed 1 --out " + temp_path("v2.json"));
    CHECK(run("spectrum --in " + temp_path("v2.json")).exit_code == 2);
    CHECK(run("spectrum --in " + temp_path("v2.json") + " --k 0.0 --grid 3").exit_code == 2);
    CHECK(run("spectrum --in " + temp_path("v2.json") + " --k 0.0").exit_code == 0);
}

TEST_CASE("charpoly and extract dump polynomials") {
    run("gen --periods 2 --seed 2 --out " + temp_path("p2.json"));
    auto p = run("charpoly --in " + temp_path("p2.json") + " --out -");
    CHECK(p.exit_code == 0);
    // One term per line, tokens: exponent, lambda power, re, im.
    std::istringstream lines(p.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 5);  // lambda^2, lambda, const, z, 1/z

    auto pt = run("charpoly --in " + temp_path("p2.json") + " --tilde --out -");
    CHECK(pt.exit_code == 0);
    CHECK(pt.out != p.out);

    run("gen --periods 2,3 --mode separable --pattern 1,1 --seed 4 --out " + temp_path("e.json"));
    auto ex = run("extract --in " + temp_path("e.json") + " --pattern 1,1 --keep 1 --out -");
    CHECK(ex.exit_code == 0);
    CHECK_FALSE(ex.out.empty());
}

TEST_CASE("help lands on exit 0") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("gen --help").exit_code == 0);
}
