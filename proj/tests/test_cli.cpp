#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "oscfar/pfa.hpp"

using namespace oscfar;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("pfa on a single-pulse configuration matches the single-pulse formula", "[cli]") {
    const auto r = invoke({"pfa", "--N", "16", "--M", "1", "--n", "5", "--k", "1", "--tau", "2.5",
                           "--format", "json"});
    REQUIRE(r.code == cli::kExitOk);
    const auto doc = json::parse(r.out);
    CHECK(doc["command"] == "pfa");
    CHECK(doc["parameters"]["tau"].get<double>() == 2.5);
    REQUIRE(doc["results"].size() == 1);
    const double value = doc["results"][0]["pfa"].get<double>();
    CHECK(value == Catch::Approx(single_pulse_os_pfa(16, 5, 2.5).value).epsilon(1e-12));
    CHECK(value == Catch::Approx(0.4751090040627435118).epsilon(1e-12));
}

TEST_CASE("pfa with the minimum CRP statistic at tau = 1 gives 1/5", "[cli]") {
    const auto r = invoke({"pfa", "--N", "4", "--M", "1", "--n", "4", "--k", "1", "--tau", "1",
                           "--format", "csv"});
    REQUIRE(r.code == cli::kExitOk);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    const auto header = split(lines[0]);
    const auto row = split(lines[1]);
    REQUIRE(header.size() == row.size());
    const auto col = std::find(header.begin(), header.end(), "pfa") - header.begin();
    CHECK(std::stod(row[col]) == Catch::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("solve round trips the single-pulse value to tau = 2.5", "[cli]") {
    char target[32];
    std::snprintf(target, sizeof target, "%.17g", single_pulse_os_pfa(16, 5, 2.5).value);
    const auto r = invoke({"solve", "--N", "16", "--M", "1", "--n", "5", "--k", "1", "--pfa",
                           target, "--format", "json"});
    REQUIRE(r.code == cli::kExitOk);
    const auto row = json::parse(r.out)["results"][0];
    CHECK(row["tau"].get<double>() == Catch::Approx(2.5).margin(1e-6));
    CHECK(row["bracket_low"].get<double>() <= row["tau"].get<double>());
    CHECK(row["tau"].get<double>() <= row["bracket_high"].get<double>());
}

TEST_CASE("csv and json carry identical numbers", "[cli]") {
    const std::vector<std::string> base = {"pfa",  "--N", "12", "--M",   "3",
                                           "--n",  "10",  "--k", "2",   "--tau", "1.7"};
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = invoke(csv_args);
    const auto js = invoke(json_args);
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    CHECK(csv.out.back() == '\n');

    const auto lines = lines_of(csv.out);
    REQUIRE(lines.size() == 2);
    const auto header = split(lines[0]);
    const auto row = split(lines[1]);
    const auto obj = json::parse(js.out)["results"][0];
    REQUIRE(obj.size() == header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& v = obj[header[i]];
        if (v.is_boolean()) {
            CHECK(row[i] == (v.get<bool>() ? "true" : "false"));
        } else {
            CHECK(std::stod(row[i]) == v.get<double>());
        }
    }
    CHECK(std::stod(row[5]) == Catch::Approx(0.041266624111562870321).epsilon(1e-12));
}

TEST_CASE("doubles are printed with 17 significant digits", "[cli]") {
    const auto r = invoke({"pfa", "--N", "8", "--M", "1", "--n", "6", "--k", "1", "--tau", "3",
                           "--format", "csv"});
    REQUIRE(r.code == 0);
    // 2/27 to 17 significant digits.
    CHECK(r.out.find("0.074074074074074") != std::string::npos);
    const auto row = split(lines_of(r.out)[1]);
    CHECK(std::stod(row[5]) == 2.0 / 27.0);
}

TEST_CASE("pfa --check reports the quadrature value and difference", "[cli]") {
    const auto r = invoke({"pfa", "--N", "8", "--M", "4", "--n", "6", "--k", "3", "--tau", "1",
                           "--check", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto row = json::parse(r.out)["results"][0];
    REQUIRE(row.contains("quadrature_pfa"));
    REQUIRE(row.contains("difference"));
    CHECK(std::fabs(row["difference"].get<double>()) <= 1e-7);
    CHECK(row["pfa"].get<double>() - row["quadrature_pfa"].get<double>() ==
          row["difference"].get<double>());
}

TEST_CASE("oracle reports quadrature with an error estimate", "[cli]") {
    const auto r = invoke({"oracle", "--N", "4", "--M", "2", "--n", "3", "--k", "2", "--tau",
                           "0.5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto row = json::parse(r.out)["results"][0];
    CHECK(row["quadrature_pfa"].get<double>() == Catch::Approx(0.76380952380952380952).epsilon(1e-9));
    CHECK(row["error_estimate"].get<double>() >= 0.0);
}

TEST_CASE("decide applies the rule to inline and file cells", "[cli]") {
    auto r = invoke({"decide", "--n", "4", "--k", "2", "--tau", "0.5", "--cuts", "2,5", "--crp",
                     "1,2,3,4", "--format", "json"});
    REQUIRE(r.code == 0);
    auto row = json::parse(r.out)["results"][0];
    CHECK(row["statistic"].get<double>() == 5.0);
    CHECK(row["threshold"].get<double>() == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(row["outcome"] == "H1");

    const auto dir = std::filesystem::temp_directory_path();
    const auto cuts = dir / "oscfar_test_cuts.txt";
    const auto crp = dir / "oscfar_test_crp.txt";
    std::ofstream(cuts) << "1.5\n1.9\n";
    std::ofstream(crp) << "1 2\n3, 4\n";
    r = invoke({"decide", "--n", "4", "--k", "2", "--tau", "0.5", "--cuts-file", cuts.string(),
                "--crp-file", crp.string(), "--format", "json"});
    std::filesystem::remove(cuts);
    std::filesystem::remove(crp);
    REQUIRE(r.code == 0);
    row = json::parse(r.out)["results"][0];
    CHECK(row["statistic"].get<double>() == 1.9);
    CHECK(row["outcome"] == "H0");
}

TEST_CASE("simulate is reproducible and defaults to seed 0", "[cli]") {
    const std::vector<std::string> args = {"simulate", "--N",     "16",    "--M",     "2",
                                           "--n",      "12",      "--k",   "1",       "--tau",
                                           "0.5",      "--alpha", "3",     "--beta",  "1",
                                           "--trials", "20000",   "--format", "json"};
    const auto a = invoke(args);
    auto seeded = args;
    seeded.insert(seeded.end(), {"--seed", "0", "--shards", "3"});
    const auto b = invoke(seeded);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto ra = json::parse(a.out)["results"][0];
    const auto rb = json::parse(b.out)["results"][0];
    CHECK(ra["hits"] == rb["hits"]);
    CHECK(json::parse(a.out)["parameters"]["seed"] == 0);
    CHECK(ra["trials"] == 20000);
    CHECK(ra["ci_low"].get<double>() <= ra["pfa_hat"].get<double>());
    CHECK(ra["pfa_hat"].get<double>() <= ra["ci_high"].get<double>());
}

TEST_CASE("simulate with --signal-scale is labelled as an extension", "[cli]") {
    const auto r = invoke({"simulate", "--N", "16", "--M", "2", "--n", "12", "--k", "1", "--pfa",
                           "0.01", "--alpha", "3", "--beta", "1", "--trials", "5000",
                           "--signal-scale", "10", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    REQUIRE(doc.contains("notes"));
    CHECK(doc["notes"][0].get<std::string>().find("NON-PAPER EXTENSION") != std::string::npos);
    CHECK(doc["results"][0]["non_paper_extension"] == true);
}

TEST_CASE("sweep emits one row per grid point with the documented columns", "[cli]") {
    const auto r = invoke({"sweep", "--N", "16", "--M", "2", "--n", "12", "--k", "1", "--pfa",
                           "0.05", "--grid-alphas", "0.5,4", "--grid-betas", "0.1,1,10",
                           "--trials", "4000", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "alpha,beta,trials,hits,pfa_hat,ci_low,ci_high,analytic_pfa,covered");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = split(lines[i]);
        REQUIRE(row.size() == 9);
        CHECK(std::stod(row[7]) == Catch::Approx(0.05).epsilon(1e-8));
    }
    CHECK(split(lines[1])[0] == "0.5");
    CHECK(split(lines[1])[1] == "0.10000000000000001");
    CHECK(split(lines[4])[0] == "4");
}

TEST_CASE("--out writes the report to a file", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "oscfar_test_out.json";
    const auto r = invoke({"pfa", "--N", "4", "--M", "1", "--n", "4", "--k", "1", "--tau", "1",
                           "--format", "json", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto doc = json::parse(in);
    std::filesystem::remove(path);
    CHECK(doc["results"][0]["pfa"].get<double>() == Catch::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("usage errors exit 2 and name the offending flag", "[cli]") {
    struct Case {
        std::vector<std::string> args;
        std::string flag;
    };
    const std::vector<Case> cases = {
        {{"pfa", "--N", "4", "--M", "1", "--n", "5", "--k", "1", "--tau", "1"}, "--n"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "2", "--tau", "1"}, "--k"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "-1"}, "--tau"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "x"}, "--tau"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "1"}, "--tau"},
        {{"pfa", "--N", "1", "--M", "1", "--n", "1", "--k", "1", "--tau", "1"}, "--N"},
        {{"solve", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--pfa", "1.5"}, "--pfa"},
        {{"simulate", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "1", "--alpha",
          "0", "--beta", "1"},
         "--alpha"},
        {{"simulate", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--alpha", "1", "--beta",
          "1"},
         "--tau"},
        {{"simulate", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "1", "--alpha",
          "1", "--beta", "1", "--trials", "0"},
         "--trials"},
        {{"sweep", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "1", "--grid-alphas",
          "1,-2", "--grid-betas", "1"},
         "--alpha"},
        {{"decide", "--n", "2", "--k", "1", "--tau", "1", "--cuts", "1", "--crp", "1,0"}, "--crp"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "1", "--format", "xml"},
         "--format"},
        {{"pfa", "--N", "4", "--M", "1", "--n", "3", "--k", "1", "--tau", "1", "-t", "1"}, "-t"},
    };
    for (const auto& c : cases) {
        const auto r = invoke(c.args);
        INFO(r.err);
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.err.find(c.flag) != std::string::npos);
        CHECK(r.out.empty());
    }
    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"bogus"}).code == cli::kExitUsage);
}

TEST_CASE("computation errors exit 1 with the library message", "[cli]") {
    const auto r = invoke({"solve", "--N", "4", "--M", "2", "--n", "3", "--k", "1", "--pfa", "0.99"});
    CHECK(r.code == cli::kExitComputation);
    CHECK(r.err.find("not attainable") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("--help exits 0", "[cli]") {
    const auto r = invoke({"--help"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("sweep") != std::string::npos);
    CHECK(invoke({"simulate", "--help"}).code == cli::kExitOk);
}
