#include <doctest.h>

#include <cmath>

#include "cli_util.hpp"

using namespace clitest;
using nlsv::json;

TEST_CASE("usage errors and invalid configs exit with 2") {
    TempDir d("usage");
    CHECK(lab("") == 2);
    CHECK(lab("frobnicate") == 2);
    CHECK(lab("lambda") == 2);
    CHECK(lab("toy run --no-such-flag") == 2);
    CHECK(lab("resonance-scan --config '" + d / "missing.json" + "'") == 2);

    write_file(d / "broken.json", "{\"radius\": ");
    CHECK(lab("resonance-scan --config '" + d / "broken.json" + "' --out '" + d / "o" + "'") == 2);
    write_file(d / "array.json", "[1, 2]");
    CHECK(lab("resonance-scan --config '" + d / "array.json" + "' --out '" + d / "o" + "'") == 2);

    auto rc = [&](const std::string& cmd, const json& cfg) {
        return lab(cmd + " --quiet --config '" + config(d, "c", cfg) + "' --out '" + d / "o" + "'");
    };
    CHECK(rc("resonance-scan", {{"radius", 1}, {"radiuss", 2}}) == 2);
    CHECK(rc("resonance-scan", {{"radius", 1}, {"eta", 1.5}}) == 2);
    CHECK(rc("resonance-scan", {{"radius", "one"}}) == 2);
    CHECK(rc("resonance-scan", {{"radius", 1}, {"potential", "nonsense"}}) == 2);
    CHECK(rc("nf-check", {{"radius", 1}, {"shape", "hexagon"}}) == 2);
    CHECK(rc("lambda build", {{"N", 1}}) == 2);
    CHECK(rc("lambda verify", json::object()) == 2);
    CHECK(rc("toy run", json::object()) == 2);
    CHECK(rc("toy run", {{"b0", {1, 0}}, {"t_end", -1}}) == 2);
    CHECK(rc("toy slider", {{"N", 5}, {"start", 4}, {"end", 3}}) == 2);
    CHECK(rc("cascade run", {{"N", 3}, {"lambda", 0}}) == 2);
    CHECK(rc("cascade run", {{"N", 3}, {"lambdas", {8, 16}}}) == 2);
    // nothing was computed for a rejected config
    CHECK(!fs::exists(d / "o"));
}

TEST_CASE("resonance-scan on the one-mode box") {
    TempDir d("scan");
    const std::string out = d / "o";
    REQUIRE(lab("resonance-scan --quiet --config '" + config(d, "c", {{"radius", 0}}) + "' --out '" + out + "'") == 0);
    const json s = read_json(fs::path(out) / "summary.json");
    CHECK(s["modes"] == 1);
    CHECK(s["passed"] == true);
    CHECK(s["max_abs_F"] == 0.0);
    const std::string tuples = read_file(fs::path(out) / "tuples.jsonl");
    CHECK(std::count(tuples.begin(), tuples.end(), '\n') == 1);
}

TEST_CASE("nf-check passes on the empty and small boxes and fails with an injected fault") {
    TempDir d("nf");
    CHECK(lab("nf-check --quiet --config '" + config(d, "a", {{"radius", 0}}) + "' --out '" + d / "a" + "'") == 0);
    CHECK(lab("nf-check --quiet --config '" + config(d, "b", {{"radius", 2}, {"potential", "sample"}}) + "' --out '" +
              d / "b" + "'") == 0);
    CHECK(read_json(d / "b/nf_report.json")["passed"] == true);
    CHECK(lab("nf-check --quiet --config '" + config(d, "c", {{"radius", 2}, {"inject_fault", true}}) + "' --out '" +
              d / "c" + "'") == 1);
    const json r = read_json(d / "c/nf_report.json");
    CHECK(r["passed"] == false);
    CHECK(!r["first_offender"].get<std::string>().empty());
}

TEST_CASE("lambda build, verify (including a mutated set) and certify") {
    TempDir d("lambda");
    const std::string b = d / "b";
    // the rectangle-spreading count exceeds two at the default threshold; three is attained
    CHECK(lab("lambda build --quiet --config '" + config(d, "b2", {{"N", 3}}) + "' --out '" + d / "b2" + "'") == 1);
    CHECK(read_json(d / "b2/report.json")["conditions"]["6"]["passed"] == false);
    REQUIRE(lab("lambda build --quiet --config '" + config(d, "b", {{"N", 3}, {"cond6_threshold", 3}}) + "' --out '" +
                b + "'") == 0);
    json set = read_json(fs::path(b) / "base_set.json");
    CHECK(set["generations"].size() == 3);
    for (const auto& g : set["generations"]) CHECK(g.size() == 4);

    const json vcfg = {{"set", b + "/base_set.json"}, {"mode", "base"}, {"cond6_threshold", 3}};
    CHECK(lab("lambda verify --quiet --config '" + config(d, "v", vcfg) + "' --out '" + d / "v" + "'") == 0);

    // move one child so that its family no longer closes
    json bad = set;
    bad["generations"][1][0][0] = bad["generations"][1][0][0].get<std::int64_t>() + 1;
    write_file(d / "bad_set.json", bad.dump());
    json mcfg = vcfg;
    mcfg["set"] = d / "bad_set.json";
    CHECK(lab("lambda verify --quiet --config '" + config(d, "m", mcfg) + "' --out '" + d / "m" + "'") == 1);
    const json rep = read_json(d / "m/report.json");
    CHECK(rep["passed"] == false);

    const json ccfg = {{"base", b + "/base_set.json"}, {"cond6_threshold", 3}};
    CHECK(lab("lambda certify --quiet --config '" + config(d, "c", ccfg) + "' --out '" + d / "c" + "'") == 0);
    const json cr = read_json(d / "c/report.json");
    CHECK(cr["passed"] == true);
    CHECK(cr["C1"].get<std::int64_t>() >= 1);
    for (const auto& id : {"7", "8"}) CHECK(cr["conditions"][id]["checked"] == true);
    CHECK(fs::exists(d / "c/certified_set.json"));
}

TEST_CASE("toy run: a single occupied slot keeps a flat modulus; rescale replay") {
    TempDir d("toy");
    const json cfg = {{"b0", {json::array({0, 0}), json::array({0.6, 0.8}), json::array({0, 0})}},
                      {"t_end", 5},
                      {"samples", 11},
                      {"rescale", {0.5, 2, 10}}};
    REQUIRE(lab("toy run --quiet --config '" + config(d, "c", cfg) + "' --out '" + d / "o" + "'") == 0);
    std::istringstream csv(read_file(d / "o/trajectory.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,|b_1|^2,|b_2|^2,|b_3|^2,mass");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::vector<double> v;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 5);
        CHECK(v[1] == 0);
        CHECK(std::abs(v[2] - 1) <= 1e-12);
        CHECK(v[3] == 0);
    }
    CHECK(rows == 11);
    const json s = read_json(d / "o/summary.json");
    CHECK(s["rescale"].size() == 3);
    CHECK(s["passed"] == true);
}

TEST_CASE("toy slider for N = 5") {
    TempDir d("slider");
    REQUIRE(lab("toy slider --quiet --config '" + config(d, "c", {{"N", 5}, {"samples", 65}}) + "' --out '" + d / "o" +
                "'") == 0);
    const json s = read_json(d / "o/slider.json");
    CHECK(s["success"] == true);
    CHECK(s["T0"].get<double>() > 0);
    CHECK(fs::exists(d / "o/trajectory.csv"));
}

TEST_CASE("cascade run writes run.json and three CSVs; the zero potential gives no deviation") {
    TempDir d("cascade");
    const json cfg = {{"N", 3}, {"potential", "zero"}, {"lambda", 4}, {"samples", 33}, {"with_quintic", false}};
    REQUIRE(lab("cascade run --quiet --config '" + config(d, "c", cfg) + "' --out '" + d / "o" + "'") == 0);
    for (const char* f : {"run.json", "deviation.csv", "sobolev.csv", "generations.csv"}) CHECK(fs::exists(d.path / "o" / f));
    const json r = read_json(d / "o/run.json");
    CHECK(r["config"] == cfg);
    CHECK(r["seed"] == 1);
    CHECK(r["wall_clock"].contains("seconds"));
    CHECK(r["summary"]["deviation_peak"].get<double>() <= 1e-13);
    CHECK(r["summary"]["quintic_terms"] == 0);
    CHECK(read_file(d / "o/deviation.csv").rfind("t,l1_dev,bound\n", 0) == 0);
}

TEST_CASE("identical config and seed reproduce every output byte for byte") {
    TempDir d("repro");
    struct Case {
        std::string cmd;
        json cfg;
    };
    const std::vector<Case> cases = {
        {"resonance-scan", {{"radius", 2}, {"potential", "sample"}}},
        {"nf-check", {{"radius", 2}}},
        {"lambda build", {{"N", 3}, {"cond6_threshold", 3}}},
        {"toy run", {{"b0", {json::array({1, 0}), json::array({0, 0.1})}}, {"t_end", 3}}},
        {"toy slider", {{"N", 4}, {"samples", 33}}},
        {"cascade run", {{"N", 3}, {"lambda", 4}, {"samples", 33}}},
    };
    int k = 0;
    for (const auto& c : cases) {
        const std::string cf = config(d, "c" + std::to_string(k), c.cfg);
        const std::string a = d / ("a" + std::to_string(k)), b = d / ("b" + std::to_string(k));
        const int ra = lab(c.cmd + " --quiet --seed 7 --config '" + cf + "' --out '" + a + "'");
        const int rb = lab(c.cmd + " --quiet --seed 7 --config '" + cf + "' --out '" + b + "'");
        CHECK(ra == rb);
        std::string why;
        INFO(c.cmd << ": " << why);
        CHECK(same_outputs(a, b, &why));
        ++k;
    }
}
