#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetamoments/errors.hpp"
#include "zetamoments/report.hpp"

using namespace zm;

namespace {

std::string read_all(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_prefix(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "zetamoments_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("0.25") == cplx(0.25, 0));
    CHECK(parse_complex("-0.02+0.005i") == cplx(-0.02, 0.005));
    CHECK(parse_complex("1e-3-2e-3i") == cplx(1e-3, -2e-3));
    CHECK(parse_complex("0.3i") == cplx(0, 0.3));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("2.5e+1") == cplx(25, 0));
    CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3, 6.02214076e23, -2.5e-300, 123456789.0})
        CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("configuration parsing") {
    Config c = Config::from_text("# comment\nT = 1000\nr_values = 1..3, 7\nshifts = 0.01, -0.02+0.01i\n");
    c.set("T=2000");
    CHECK(c.get_double("T", 0) == 2000);
    CHECK(c.get_ints("r_values", "") == std::vector<i64>{1, 2, 3, 7});
    CHECK(c.get_complexes("shifts", "")[1] == cplx(-0.02, 0.01));
    CHECK(c.get_int("missing", 5) == 5);
    CHECK(c.resolved().at("missing") == "5");
    CHECK_NOTHROW(c.reject_unused());
    c.set("typo", "1");
    try {
        c.reject_unused();
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.param() == "typo");
    }
    Config bad = Config::from_text("k = two\n");
    CHECK_THROWS_AS(bad.get_int("k", 1), ConfigError);
    CHECK_THROWS_AS(Config::from_text("no equals sign\n"), ConfigError);
}

TEST_CASE("CSV table") {
    CsvTable t;
    t.add_column("n", "integer", "index");
    t.add_complex_column("z", "value");
    t.add_row(3, cplx(0.5, -1.0));
    CHECK(t.body() == "n,z_re,z_im\n3,0.5,-1\n");
    CHECK_THROWS_AS(t.add_row(1), DomainError);
    const auto schema = t.schema("demo");
    CHECK(schema["columns"].size() == 3);
    CHECK(schema["columns"][1]["name"] == "z_re");
}

TEST_CASE("identities command is reproducible for a fixed seed") {
    Config c;
    c.set("points", "20");
    const auto a = cmd_identities(c), b = cmd_identities(c);
    CHECK(a.table.body() == b.table.body());
    CHECK(a.metrics["identities_pass"].get<bool>());
    Config d = c;
    d.set("seed", "99");
    const auto e = cmd_identities(d);
    CHECK(e.table.body() != a.table.body());
    CHECK(e.metrics["identities_pass"].get<bool>() == a.metrics["identities_pass"].get<bool>());
}

TEST_CASE("error paths map to exit codes") {
    std::ostringstream out, err;
    Config degenerate;
    degenerate.set("I", "0.01,0.01,0.02");
    degenerate.set("J", "0.03,0.04,0.05");
    degenerate.set("output", temp_prefix("degenerate"));
    CHECK(run_command("identities", degenerate, out, err) == 2);

    Config window;
    window.set("X_values", "100");
    window.set("r_values", "1..20");
    try {
        cmd_divisor(window);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.param() == "r_values");
        CHECK(std::string(e.what()).find("uniformity window") != std::string::npos);
    }
    CHECK(run_command("nonsense", Config{}, out, err) == 2);

    Config coarse;
    coarse.set("k", "1");
    coarse.set("T_values", "500");
    coarse.set("step", "5");
    coarse.set("output", temp_prefix("coarse"));
    CHECK(run_command("moment", coarse, out, err) == 3);
}

TEST_CASE("run_command writes CSV, schema and summary") {
    const std::string prefix = temp_prefix("constants");
    Config c;
    c.set("output", prefix);
    std::ostringstream out, err;
    CHECK(run_command("constants", c, out, err) == 0);
    const auto summary = json::parse(read_all(prefix + ".json"));
    for (const char* key : {"experiment", "parameters", "pass", "metrics", "runtime_seconds"})
        CHECK(summary.contains(key));
    CHECK(summary["pass"].get<bool>());
    const auto schema = json::parse(read_all(prefix + ".schema.json"));
    const std::string csv = read_all(prefix + ".csv");
    const std::string header = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n') - 1);
    std::size_t cols = 1;
    for (char ch : header) cols += ch == ',';
    CHECK(schema["columns"].size() == cols);
    CHECK(csv.find("42 a_3/9!") != std::string::npos);

    Config j;
    j.set("output", prefix + "_json");
    j.set("format", "json");
    CHECK(run_command("constants", j, out, err) == 0);
    CHECK(json::parse(read_all(prefix + "_json.json"))["rows"].size() == 4);
}
