#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string out_path = "cli_out_" + std::to_string(counter++) + ".txt";
    const std::string cmd =
        std::string(DHA_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r{status < 0 ? -1 : (status >> 8) & 0xff, slurp(out_path)};
    std::remove(out_path.c_str());
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream cols(line);
        std::string cell;
        while (std::getline(cols, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double summary_value(const std::string& text, const std::string& key) {
    std::istringstream lines(text);
    std::string line;
    const std::string prefix = "# " + key + " = ";
    while (std::getline(lines, line))
        if (line.rfind(prefix, 0) == 0) return std::stod(line.substr(prefix.size()));
    throw std::runtime_error("summary key not found: " + key);
}

}  // namespace

TEST_CASE("spectrum: Kempf example table") {
    auto r = run_cli("spectrum --family kempf --beta 0.01 --delta 0.5 --levels 0..3");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);  // header + 4 levels
    CHECK(rows[0][0] == "n");
    CHECK(std::stod(rows[1][3]) == doctest::Approx(-1.4589803).epsilon(1e-6));
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][5]) <= 1e-8);  // embedded oracle residual
}

TEST_CASE("spectrum: undeformed ground state") {
    auto r = run_cli("spectrum --family none --delta 0.5 --levels 0..0");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][3]) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run_cli("spectrum --family kempf --delta 0 --levels 0..0").exit_code == 2);
    CHECK(run_cli("spectrum --family bogus").exit_code == 2);
    CHECK(run_cli("spectrum --family polyplus --beta 0.01 --k 0.25").exit_code == 2);
    CHECK(run_cli("spectrum --delta 0.2 --A 1.0").exit_code == 2);
    CHECK(run_cli("eigenfunction --family none").exit_code == 2);
    CHECK(run_cli("extensions-check --family none").exit_code == 2);
}

TEST_CASE("determinism: identical configs give byte-identical files") {
    const std::string args =
        "spectrum --family polyminus --beta 0.04 --k -1 --delta 0.3 --levels 0..4";
    auto first = run_cli(args + " --output det_a.csv");
    auto second = run_cli(args + " --output det_b.csv");
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    const std::string a = slurp("det_a.csv"), b = slurp("det_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    std::remove("det_a.csv");
    std::remove("det_b.csv");
}

TEST_CASE("config file: flags override file values") {
    {
        std::ofstream cfg("cli_test.cfg");
        cfg << "family=kempf\nbeta=0.04\ndelta=0.5\nlevels=0..1\n";
    }
    auto from_file = run_cli("spectrum --config cli_test.cfg");
    CHECK(from_file.exit_code == 0);
    auto rows = parse_csv(from_file.out);
    REQUIRE(rows.size() == 3);

    auto overridden = run_cli("spectrum --config cli_test.cfg --beta 0.01");
    auto direct = run_cli("spectrum --family kempf --beta 0.01 --delta 0.5 --levels 0..1");
    CHECK(overridden.out == direct.out);
    std::remove("cli_test.cfg");
}

TEST_CASE("corrections: beta-linear shift for PolyMinus k = 1/2") {
    auto r = run_cli("corrections --family polyminus --k 0.5 --beta 1e-4 --levels 0..0");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][1]) == 0.0);                                  // dE_formula
    CHECK(std::stod(rows[1][3]) == doctest::Approx(1.0).epsilon(0.01));   // exponent
    CHECK(std::stod(rows[1][5]) <= 1e-4);                                 // fd_check
}

TEST_CASE("corrections: Kempf formula vs fit") {
    auto r = run_cli("corrections --recipe 1c --levels 0..1");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    for (size_t i = 1; i < rows.size(); ++i) {
        const double formula = std::stod(rows[i][1]);
        const double fit = std::stod(rows[i][2]);
        CHECK(fit == doctest::Approx(formula).epsilon(0.05));
        CHECK(std::stod(rows[i][3]) == doctest::Approx(0.5).epsilon(0.04));
    }
}

TEST_CASE("eigenfunction: table spans [-b, b] with unit norm") {
    auto r = run_cli(
        "eigenfunction --family kempf --beta 0.01 --delta 0.5 --n 0 --samples 11");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 12);
    const double b = 3.14159265358979323846 / (2.0 * 0.1);
    CHECK(std::stod(rows[1][0]) == doctest::Approx(-b).epsilon(1e-14));
    CHECK(std::stod(rows[11][0]) == doctest::Approx(b).epsilon(1e-14));
    CHECK(std::abs(summary_value(r.out, "norm") - 1.0) <= 1e-10);
    const double E = summary_value(r.out, "E");
    CHECK(summary_value(r.out, "max_residual") <= 1e-8 * std::abs(E));
}

TEST_CASE("extensions-check passes for Kempf and skips the inverse at delta 0") {
    CHECK(run_cli("extensions-check --family kempf --beta 1 --delta 0.5").exit_code == 0);
    auto skipped = run_cli("extensions-check --family kempf --beta 1 --delta 0");
    CHECK(skipped.exit_code == 0);
    CHECK(skipped.out.find("inverse check skipped") != std::string::npos);
}

TEST_CASE("minimal-length") {
    auto r = run_cli("minimal-length --family kempf --beta 0.04");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.2).epsilon(1e-12));
    auto none = run_cli("minimal-length --family none");
    CHECK(none.exit_code == 0);
    CHECK(none.out.find("b diverges") != std::string::npos);
}

TEST_CASE("json output carries the same columns") {
    auto r = run_cli("spectrum --family kempf --beta 0.01 --levels 0..0 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"columns\"") != std::string::npos);
    CHECK(r.out.find("\"closed_form_E\"") != std::string::npos);
    CHECK(r.out.find("-1.4589803375031547") != std::string::npos);
}

TEST_CASE("every example recipe runs") {
    for (const char* recipe : {"1a", "1b", "2a", "2b"})
        CHECK(run_cli(std::string("spectrum --recipe ") + recipe).exit_code == 0);
    for (const char* recipe : {"1c", "2c", "3", "3s"})
        CHECK(run_cli(std::string("corrections --recipe ") + recipe +
                      " --levels 0..0").exit_code == 0);
    CHECK(run_cli("spectrum --recipe nope").exit_code == 2);
    CHECK(run_cli("corrections --recipe 1a").exit_code == 2);
}
