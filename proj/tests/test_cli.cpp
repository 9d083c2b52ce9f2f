#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "corrspec/report_io.hpp"

using namespace corrspec;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CORRSPEC_BIN) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("spectrum (5,1,1) with all methods emits a 6-row CSV and exits 0") {
    const auto res = run_cli("spectrum -p 5 -m 1 -e 1 --method all --format csv");
    CHECK(res.exit_code == 0);
    const SpectrumReport rep = report_from_csv(res.output);
    CHECK(rep.method == "all");
    CHECK(rep.counts == std::array<std::uint64_t, 6>{6, 6, 6, 3, 3, 0});
    CHECK(rep.all_audits_pass());
}

TEST_CASE("invalid parameters exit 2 with the violated constraint named") {
    const auto res = run_cli("spectrum -p 7 -m 1 -e 1");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("1 (mod 4)") != std::string::npos);

    const auto even_m = run_cli("spectrum -p 5 -m 2 -e 1");
    CHECK(even_m.exit_code == 2);

    const auto bad_e = run_cli("spectrum -p 5 -m 3 -e 2");
    CHECK(bad_e.exit_code == 2);
}

TEST_CASE("cap violations exit 3") {
    const auto res = run_cli("spectrum -p 5 -m 1 -e 1 --cap 10");
    CHECK(res.exit_code == 3);
}

TEST_CASE("field-info") {
    const auto res = run_cli("field-info -p 5 -n 2");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("x^2 + x + 2") != std::string::npos);
    CHECK(res.output.find("order: 24") != std::string::npos);
    CHECK(res.output.find("order check ok") != std::string::npos);

    const auto composite = run_cli("field-info -p 6 -n 2");
    CHECK(composite.exit_code == 2);
}

TEST_CASE("field-info reports dlog cache hits and misses") {
    const fs::path dir = fresh_dir("corrspec_cli_cache");
    const std::string flags = "field-info -p 5 -n 6 --cache-dir " + dir.string();
    const auto first = run_cli(flags);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("dlog cache: miss") != std::string::npos);
    const auto second = run_cli(flags);
    CHECK(second.output.find("dlog cache: hit") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("verify (5,1,1) passes every audit") {
    const auto res = run_cli("verify -p 5 -m 1 -e 1");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("[FAIL]") == std::string::npos);
    CHECK(res.output.find("all audits passed") != std::string::npos);
    for (const char* name :
         {"methods_agree", "theorem1_match", "gauss_sum_value", "lemma10_sum_E",
          "lemma11_sum_C_cubed", "corollary3_N0", "lemma7_value", "lemma8_single_root_count",
          "float_path_agreement", "boundary_C_minus1_0"})
        CHECK(res.output.find(name) != std::string::npos);
}

TEST_CASE("verify (13,1,1) as JSON") {
    const auto res = run_cli("verify -p 13 -m 1 -e 1 --format json");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("export: header, balance, decimation") {
    const auto res = run_cli("export -p 5 -m 1 -e 1");
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("# 5 1 1 2 3 24\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : res.output)
        if (ch == '\n') ++lines;
    CHECK(lines == 25);

    const auto dec = run_cli("export -p 5 -m 1 -e 1 --decimated");
    CHECK(dec.exit_code == 0);
    // s_{dt} has least period 8: line t and line t+8 agree
    std::vector<std::string> rows;
    std::istringstream in(dec.output);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 24);
    for (std::size_t t = 0; t + 8 < rows.size(); ++t) CHECK(rows[t] == rows[t + 8]);
}

TEST_CASE("analyze emits the TSV dump") {
    const auto res = run_cli("analyze -p 5 -m 1 -e 1");
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("dlog\tkernel_size\trank\tdet_class\tE_u\tE_v\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : res.output)
        if (ch == '\n') ++lines;
    CHECK(lines == 25);
}

TEST_CASE("bench runs all methods and agrees") {
    const auto res = run_cli("bench -p 5 -m 1 -e 1");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("direct:") != std::string::npos);
    CHECK(res.output.find("sums:") != std::string::npos);
    CHECK(res.output.find("rank_fast:") != std::string::npos);
    CHECK(res.output.find("identical results: yes") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
    const auto a = run_cli("spectrum -p 5 -m 1 -e 1 --method direct --format json");
    const auto b = run_cli("spectrum -p 5 -m 1 -e 1 --method direct --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("rank_fast at (5,3,1) reproduces the theorem counts") {
    const auto res = run_cli("spectrum -p 5 -m 3 -e 1 --method rank_fast --format csv");
    CHECK(res.exit_code == 0);
    const SpectrumReport rep = report_from_csv(res.output);
    CHECK(rep.counts == std::array<std::uint64_t, 6>{5796, 2646, 3906, 1575, 1575, 126});
}

TEST_CASE("--output writes the report to a file") {
    const fs::path dir = fresh_dir("corrspec_cli_out");
    const fs::path file = dir / "report.json";
    const auto res =
        run_cli("spectrum -p 5 -m 1 -e 1 --method direct --format json --output " + file.string());
    CHECK(res.exit_code == 0);
    std::ifstream in(file);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    const SpectrumReport rep = report_from_json(buf.str());
    CHECK(rep.counts == std::array<std::uint64_t, 6>{6, 6, 6, 3, 3, 0});
    fs::remove_all(dir);
}

TEST_CASE("config precedence: flags beat env beat config file") {
    const fs::path dir = fresh_dir("corrspec_cli_prec");
    const fs::path dir_cfg = dir / "from_config";
    const fs::path dir_env = dir / "from_env";
    const fs::path dir_flag = dir / "from_flag";
    const fs::path cfg = dir / "corrspec.conf";
    {
        std::ofstream out(cfg);
        out << "# comment line\n";
        out << "cache-dir = " << dir_cfg.string() << "\n";
        out << "threads = 2\n";
    }
    auto cache_used = [](const fs::path& d) {
        return fs::exists(d) && !fs::is_empty(d);
    };

    // config only
    auto res = run_cli("field-info -p 5 -n 2 --config " + cfg.string());
    CHECK(res.exit_code == 0);
    CHECK(cache_used(dir_cfg));

    // env overrides config
    setenv("CORRSPEC_CACHE_DIR", dir_env.string().c_str(), 1);
    res = run_cli("field-info -p 5 -n 2 --config " + cfg.string());
    CHECK(res.exit_code == 0);
    CHECK(cache_used(dir_env));

    // flag overrides env
    res = run_cli("field-info -p 5 -n 2 --config " + cfg.string() + " --cache-dir " +
                  dir_flag.string());
    CHECK(res.exit_code == 0);
    CHECK(cache_used(dir_flag));
    unsetenv("CORRSPEC_CACHE_DIR");

    // config file can carry the parameters too
    {
        std::ofstream out(cfg, std::ios::trunc);
        out << "p = 13\nm = 1\ne = 1\nmethod = rank_fast\nformat = csv\n";
    }
    res = run_cli("spectrum --config " + cfg.string());
    CHECK(res.exit_code == 0);
    const SpectrumReport rep = report_from_csv(res.output);
    CHECK(rep.params.p == 13);
    CHECK(rep.counts == std::array<std::uint64_t, 6>{70, 42, 42, 7, 7, 0});
    fs::remove_all(dir);
}

TEST_CASE("CSV and JSON CLI outputs round-trip to the same report") {
    const auto csv = run_cli("spectrum -p 13 -m 1 -e 1 --method direct --format csv");
    const auto json = run_cli("spectrum -p 13 -m 1 -e 1 --method direct --format json");
    REQUIRE(csv.exit_code == 0);
    REQUIRE(json.exit_code == 0);
    CHECK(report_from_csv(csv.output) == report_from_json(json.output));
}
