// End-to-end tests for the memcap binary: schemas, golden values, exit
// codes, determinism. The binary path comes in through MEMCAP_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "golden.hpp"
#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_raw(const std::string& command) {
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    size_t got = 0;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.out.append(buffer, got);
    }
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.exit_code = WEXITSTATUS(status);
    return result;
}

// Stdout only; stderr (timestamps, summaries) dropped.
RunResult run(const std::string& args) {
    return run_raw(std::string(MEMCAP_CLI_PATH) + " " + args + " 2>/dev/null");
}

// Stdout and stderr interleaved, for error-message assertions.
RunResult run_merged(const std::string& args) {
    return run_raw(std::string(MEMCAP_CLI_PATH) + " " + args + " 2>&1");
}

nlohmann::json parse(const RunResult& result) {
    return nlohmann::json::parse(result.out);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("capacity json: schema and frozen values") {
    const RunResult r = run(
        "capacity --lambda 0.8 --mu 0.2 --task key --n 1000 --epsilon 0.05");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("schema_version") == "1");
    CHECK(doc.at("command") == "capacity");
    CHECK(doc.at("inputs").at("lambda") == 0.8);
    CHECK(doc.at("inputs").at("n") == 1000);
    CHECK(doc.at("inputs").at("exact") == false);
    const auto& outputs = doc.at("outputs");
    CHECK(outputs.at("lower").get<double>() ==
          testing_golden::scalar("cmd_capacity_0.8_0.2_key_1000_0.05_lower"));
    CHECK(outputs.at("raw").get<double>() ==
          testing_golden::scalar("cmd_capacity_raw"));
    CHECK(outputs.at("clamped") == true);
    const auto& comp = outputs.at("components");
    CHECK(outputs.at("raw").get<double>() ==
          comp.at("asymptotic_term").get<double>() -
              comp.at("sqrt_term").get<double>() -
              comp.at("penalty").get<double>());
    CHECK(doc.at("warnings").empty());
}

TEST_CASE("byte-identical reruns") {
    const std::string args =
        "capacity --lambda 0.7 --mu 0.3 --task ebit --n 64";
    const RunResult a = run(args);
    const RunResult b = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult v1 = run("verify --grid quick --format csv");
    const RunResult v2 = run("verify --grid quick --format csv");
    REQUIRE(v1.exit_code == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("capacity csv agrees with json") {
    const std::string tail =
        "capacity --lambda 0.8 --mu 0.2 --task key --n 1000 --epsilon 0.05";
    const nlohmann::json doc = parse(run(tail));
    const RunResult csv = run(tail + " --format csv");
    REQUIRE(csv.exit_code == 0);
    const auto lines = split_lines(csv.out);
    REQUIRE(lines.size() == 2);
    const auto header = split_fields(lines[0]);
    const auto row = split_fields(lines[1]);
    REQUIRE(header.size() == row.size());
    double csv_lower = 0.0, csv_raw_terms = 0.0;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "lower") csv_lower = std::stod(row[i]);
        if (header[i] == "asymptotic_term") csv_raw_terms += std::stod(row[i]);
        if (header[i] == "sqrt_term") csv_raw_terms -= std::stod(row[i]);
        if (header[i] == "penalty") csv_raw_terms -= std::stod(row[i]);
    }
    CHECK(csv_lower == doc.at("outputs").at("lower").get<double>());
    CHECK(csv_raw_terms == doc.at("outputs").at("raw").get<double>());
}

TEST_CASE("capacity --exact and the small-n path") {
    const RunResult r = run(
        "capacity --lambda 0.5 --mu 0.25 --task ebit --n 2 --exact");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("inputs").at("exact") == true);
    const auto& outputs = doc.at("outputs");
    CHECK(outputs.at("spectrum_sum").get<double>() ==
          doctest::Approx(outputs.at("lower").get<double>() +
                          outputs.at("penalty").get<double>())
              .epsilon(1e-15));

    // Without --exact, n < 4 is refused and the message names the flag.
    const RunResult refused =
        run_merged("capacity --lambda 0.5 --mu 0.25 --task ebit --n 2");
    CHECK(refused.exit_code == 2);
    CHECK(refused.out.find("--exact") != std::string::npos);
}

TEST_CASE("zero-capacity warning") {
    const RunResult r =
        run("capacity --lambda 0.3 --mu 0 --task qubit --n 16");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("outputs").at("lower") == 0.0);
    CHECK(doc.at("outputs").at("clamped") == true);
    REQUIRE(doc.at("warnings").size() == 1);
    CHECK(doc.at("warnings")[0] == "zero-capacity region");
}

TEST_CASE("uses-needed: frozen value and debug override") {
    const RunResult r = run(
        "uses-needed --lambda 0.9 --mu 0.5 --task key --epsilon 0.05 "
        "--target-k 100");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("command") == "uses-needed");
    CHECK(doc.at("outputs").at("n").get<long long>() ==
          (long long)testing_golden::scalar("uses_0.9_0.5_key_0.05_100"));
    CHECK(doc.at("outputs").at("bound_at_n").get<double>() >= 100.0);

    const RunResult dbg =
        run("uses-needed --debug-coefficients 1,0,0 --target-k 4");
    REQUIRE(dbg.exit_code == 0);
    CHECK(parse(dbg).at("outputs").at("n") == 4);

    const RunResult bad =
        run_merged("uses-needed --debug-coefficients '1;0;0' --target-k 4");
    CHECK(bad.exit_code == 3);
}

TEST_CASE("uses-needed: structured unreachable record") {
    const RunResult r = run(
        "uses-needed --lambda 0.3 --mu 0 --task qubit --target-k 5");
    CHECK(r.exit_code == 2);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("command") == "uses-needed");
    CHECK(doc.at("error").at("type") == "UnreachableTarget");
    CHECK(doc.at("error").at("message").get<std::string>().size() > 0);
}

TEST_CASE("spectrum csv against the frozen transmissivities") {
    const RunResult r =
        run("spectrum --lambda 0.5 --mu 0.25 --n 64 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 65);
    CHECK(lines[0] ==
          "index,singular_value,transmissivity,qubit_bits,ebit_bits");
    const std::vector<double> expected =
        testing_golden::series("modes_0.5_0.25_64.json");
    REQUIRE(expected.size() == 64);
    for (size_t i = 0; i < 64; ++i) {
        const auto fields = split_fields(lines[i + 1]);
        REQUIRE(fields.size() == 5);
        CHECK(std::stoi(fields[0]) == (int)i + 1);
        CHECK(std::stod(fields[2]) ==
              doctest::Approx(expected[i]).epsilon(1e-11));
        // Consistency inside the row.
        const double s = std::stod(fields[1]);
        CHECK(std::stod(fields[2]) == doctest::Approx(s * s).epsilon(1e-14));
    }
}

TEST_CASE("verify quick grid through the CLI") {
    const RunResult r = run("verify --grid quick");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = parse(r);
    CHECK(doc.at("outputs").at("passed") == true);
    REQUIRE(doc.at("outputs").at("reports").size() == 6);
    for (const auto& report : doc.at("outputs").at("reports")) {
        CHECK(report.at("cases_failed") == 0);
        CHECK(report.at("cases_run").get<int>() >= 1);
        CHECK(report.at("cases").size() ==
              (size_t)report.at("cases_run").get<int>());
    }
}

TEST_CASE("verify grid file handling") {
    const std::string good = "/tmp/memcap_grid_good.json";
    {
        std::ofstream out(good);
        out << "{\"lambdas\":[0.5],\"mus\":[0.25],\"n_list\":[4,16],"
               "\"band_list\":[1],\"k_list\":[2],\"trunc_list\":[4]}";
    }
    const RunResult ok = run("verify --grid " + good);
    CHECK(ok.exit_code == 0);
    CHECK(parse(ok).at("outputs").at("passed") == true);

    const std::string broken = "/tmp/memcap_grid_broken.json";
    {
        std::ofstream out(broken);
        out << "{\"lambdas\": [0.5,\n  }";
    }
    const RunResult parse_fail = run_merged("verify --grid " + broken);
    CHECK(parse_fail.exit_code == 3);
    CHECK(parse_fail.out.find("line") != std::string::npos);

    const std::string empty = "/tmp/memcap_grid_empty.json";
    {
        std::ofstream out(empty);
        out << "{}";
    }
    CHECK(run("verify --grid " + empty).exit_code == 3);
    CHECK(run("verify --grid /tmp/no_such_grid_file.json").exit_code == 3);
}

TEST_CASE("--output file carries the exact stdout payload") {
    const std::string path = "/tmp/memcap_cli_payload.json";
    std::remove(path.c_str());
    const std::string args =
        "capacity --lambda 0.6 --mu 0.1 --task key --n 128";
    const RunResult direct = run(args);
    const RunResult redirected = run(args + " --output " + path);
    REQUIRE(redirected.exit_code == 0);
    CHECK(redirected.out.empty());
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == direct.out);
}

TEST_CASE("exit codes") {
    // 2: parameter values outside their documented ranges.
    CHECK(run("capacity --lambda 1.5 --mu 0 --n 16").exit_code == 2);
    CHECK(run("capacity --lambda 0.5 --mu -0.2 --n 16").exit_code == 2);
    CHECK(run("capacity --lambda 0.5 --mu 0 --n 0").exit_code == 2);
    CHECK(run("capacity --lambda 0.5 --mu 0 --n 16 --epsilon 1.0").exit_code ==
          2);
    CHECK(run("uses-needed --lambda 0.5 --mu 0 --target-k -3").exit_code == 2);

    // 3: structural usage problems.
    CHECK(run("capacity --lambda 0.5 --mu 0 --n 16 --bogus").exit_code == 3);
    CHECK(run("capacity --lambda 0.5 --mu 0 --n 16 --format xml").exit_code ==
          3);
    CHECK(run("capacity --mu 0 --n 16").exit_code == 3);  // missing --lambda
    CHECK(run("uses-needed --target-k 5").exit_code == 3);
    CHECK(run("nonsense").exit_code == 3);
    CHECK(run("capacity --lambda 0.5 --mu 0 --n notanumber").exit_code == 3);

    // 3: the SVD order cap, from the environment.
    const std::string env = "MEMCAP_MAX_N=32 ";
    CHECK(run_raw(env + MEMCAP_CLI_PATH +
                  " spectrum --lambda 0.5 --mu 0 --n 64 2>/dev/null")
              .exit_code == 3);
    CHECK(run_raw(env + MEMCAP_CLI_PATH +
                  " capacity --lambda 0.5 --mu 0 --n 64 --exact 2>/dev/null")
              .exit_code == 3);
    CHECK(run_raw(std::string("MEMCAP_MAX_N=abc ") + MEMCAP_CLI_PATH +
                  " spectrum --lambda 0.5 --mu 0 --n 8 2>/dev/null")
              .exit_code == 3);
    CHECK(run_raw(env + MEMCAP_CLI_PATH +
                  " spectrum --lambda 0.5 --mu 0 --n 32 2>/dev/null")
              .exit_code == 0);

    // 1: quadrature budget that cannot be met.
    CHECK(run("capacity --lambda 0.7 --mu 0.3 --task key --n 100 "
              "--tol 1e-30")
              .exit_code == 1);

    // 0 with help text.
    CHECK(run("--help").exit_code == 0);
    CHECK(run("capacity --help").exit_code == 0);
}
