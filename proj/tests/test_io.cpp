#include <doctest.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "kmpp/experiment.hpp"
#include "kmpp/io.hpp"

using namespace kmpp;

TEST_CASE("format_double round-trips awkward values") {
    for (double v : {1.0 / 3.0, 0.1, 1e300, 5e-324, 0.0, 106.5, -2.25,
                     1.0984757200673341e10}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("instance JSON round-trips losslessly and deterministically") {
    const Instance inst = build_instance(InstanceParams{3, 1.5, 2.0, 7.0});
    const std::string text = instance_to_json(inst);
    const Instance back = instance_from_json(text);

    CHECK(back.params.k == inst.params.k);
    CHECK(back.params.m == inst.params.m);
    CHECK(back.params.r == inst.params.r);
    CHECK(back.params.delta_geom == inst.params.delta_geom);
    REQUIRE(back.locations.size() == inst.locations.size());
    for (std::size_t i = 0; i < inst.locations.size(); ++i) {
        CHECK(back.locations[i].group == inst.locations[i].group);
        CHECK(back.locations[i].level == inst.locations[i].level);
        CHECK(back.locations[i].x == inst.locations[i].x);
        CHECK(back.locations[i].y == inst.locations[i].y);
        CHECK(back.locations[i].weight == inst.locations[i].weight);
    }
    CHECK(back.total_mass == doctest::Approx(inst.total_mass).epsilon(1e-15));
    CHECK(instance_to_json(back) == text);
}

TEST_CASE("instance JSON carries the exact field names") {
    const Instance inst = build_instance(InstanceParams{2, 1.0, 1.0, 5.0});
    const nlohmann::json j = nlohmann::json::parse(instance_to_json(inst));
    for (const char* key : {"k", "m", "r", "delta", "locations"}) CHECK(j.contains(key));
    const nlohmann::json& loc = j.at("locations").at(0);
    for (const char* key : {"group", "level", "x", "y", "weight"}) CHECK(loc.contains(key));
    CHECK(j.at("k").get<int>() == 2);
    CHECK(j.at("locations").size() == 6);
}

TEST_CASE("malformed instance JSON raises IoError") {
    CHECK_THROWS_AS(instance_from_json("{"), IoError);
    CHECK_THROWS_AS(instance_from_json("{\"k\":2}"), IoError);
    CHECK_THROWS_AS(instance_from_json("{\"k\":2,\"m\":1,\"r\":1,\"delta\":5,"
                                       "\"locations\":[]}"),
                    IoError);
}

TEST_CASE("centers JSON accepts indices and exact coordinates") {
    const Instance inst = build_instance(InstanceParams{2, 1.0, 1.0, 5.0});

    const auto idx = centers_from_json("[0, 3]");
    CHECK(resolve_centers(inst, idx) == std::vector<int>{0, 3});

    const auto coords = centers_from_json("[[0, 0], [5, 0]]");
    const std::vector<int> resolved = resolve_centers(inst, coords);
    REQUIRE(resolved.size() == 2);
    CHECK(inst.locations[static_cast<std::size_t>(resolved[0])].x == 0.0);
    CHECK(inst.locations[static_cast<std::size_t>(resolved[1])].x == 5.0);
    CHECK(inst.locations[static_cast<std::size_t>(resolved[1])].y == 0.0);

    const auto miss = centers_from_json("[[1, 1]]");
    CHECK_THROWS_AS(resolve_centers(inst, miss), ParameterError);
    CHECK_THROWS_AS(centers_from_json("[]"), IoError);
    CHECK_THROWS_AS(centers_from_json("nope"), IoError);
}

TEST_CASE("trial CSV has the pinned header and one row per trial") {
    const Instance inst = build_instance(InstanceParams{3, 1.0, 1.0, 8.0});
    const auto records = run_trials(inst, 5, 9, 2.0, 1);
    const std::string csv = trials_to_csv(inst, records);
    CHECK(csv.rfind("trial,seed,k,m,r,delta,xi,covered,t_centers,ratio,success,"
                    "lemma11_ok,lemma12_ok,lemma13_ok,psbound_ok\n",
                    0) == 0);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 6);
    CHECK(trials_to_csv(inst, run_trials(inst, 5, 9, 2.0, 2)) == csv);
}

TEST_CASE("summary JSON round-trips") {
    ExperimentConfig config;
    config.params = InstanceParams{4, 1.0, 1.0, 16.0};
    config.trials = 50;
    config.base_seed = 77;
    config.threads = 1;
    const ExperimentResult result = run_experiment(config);
    const std::string text = summary_to_json(result.summary);
    const ExperimentSummary back = summary_from_json(text);
    CHECK(back.k == result.summary.k);
    CHECK(back.alpha == result.summary.alpha);
    CHECK(back.pr_success == result.summary.pr_success);
    CHECK(back.pr_xi == result.summary.pr_xi);
    CHECK(back.dp_hitting == result.summary.dp_hitting);
    CHECK(back.s_star == result.summary.s_star);
    CHECK(back.base_seed == result.summary.base_seed);
    CHECK(summary_to_json(back) == text);

    CHECK_THROWS_AS(summary_from_json("{\"k\": 3}"), IoError);
}

TEST_CASE("report rows come out sorted by k") {
    ExperimentSummary a;
    a.k = 8;
    ExperimentSummary b;
    b.k = 4;
    ExperimentSummary c;
    c.k = 16;
    const std::string csv = report_csv({a, b, c});
    const std::size_t p4 = csv.find("\n4,");
    const std::size_t p8 = csv.find("\n8,");
    const std::size_t p16 = csv.find("\n16,");
    REQUIRE(p4 != std::string::npos);
    REQUIRE(p8 != std::string::npos);
    REQUIRE(p16 != std::string::npos);
    CHECK(p4 < p8);
    CHECK(p8 < p16);
    CHECK(csv.rfind(kReportCsvHeader, 0) == 0);
}

TEST_CASE("wilson interval sanity") {
    double low = 0.0, high = 0.0;
    wilson_interval(0, 100, low, high);
    CHECK(low == 0.0);
    CHECK(high > 0.0);
    CHECK(high < 0.05);
    wilson_interval(100, 100, low, high);
    CHECK(high == 1.0);
    CHECK(low > 0.95);
    wilson_interval(50, 100, low, high);
    CHECK(low < 0.5);
    CHECK(high > 0.5);
    CHECK(high - low < 0.25);
}
