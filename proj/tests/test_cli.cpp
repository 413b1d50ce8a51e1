#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "kmpp/chain.hpp"
#include "kmpp/evaluation.hpp"
#include "kmpp/experiment.hpp"
#include "kmpp/io.hpp"

using namespace kmpp;
namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* env = std::getenv("KMPP_BIN");
    REQUIRE(env != nullptr);
    return env;
}

fs::path workdir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "kmpp_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cmd(const std::string& args) {
    const std::string cmd = bin() + " " + args + " > " + (workdir() / "stdout.txt").string() +
                            " 2> " + (workdir() / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string last_stdout() { return load_text((workdir() / "stdout.txt").string()); }

} // namespace

TEST_CASE("gen writes the constructed instance bytes, idempotently") {
    const fs::path f1 = workdir() / "inst_a.json";
    const fs::path f2 = workdir() / "inst_b.json";
    CHECK(run_cmd("gen --k 2 --m 1 --r 1 --delta 5 --out " + f1.string()) == 0);
    CHECK(run_cmd("gen --k 2 --m 1 --r 1 --delta 5 --out " + f2.string()) == 0);
    const std::string a = load_text(f1.string());
    CHECK(a == load_text(f2.string()));
    CHECK(a == instance_to_json(build_instance(InstanceParams{2, 1.0, 1.0, 5.0})));
}

TEST_CASE("gen exit codes: parameter and schedule errors") {
    CHECK(run_cmd("gen --k 0") == 2);
    CHECK(run_cmd("gen --k 2 --m -3") == 2);
    CHECK(run_cmd("gen --k 10 --delta-from-schedule --delta-exp 0.008") == 3);
    CHECK(run_cmd("gen") == 2);       // missing required option
    CHECK(run_cmd("bogus") == 2);     // unknown subcommand
}

TEST_CASE("seed is deterministic for a fixed seed and stream") {
    const fs::path inst = workdir() / "seed_inst.json";
    REQUIRE(run_cmd("gen --k 3 --delta 8 --out " + inst.string()) == 0);
    CHECK(run_cmd("--seed 42 seed --in " + inst.string() + " --trace") == 0);
    const std::string first = last_stdout();
    CHECK(run_cmd("--seed 42 seed --in " + inst.string() + " --trace") == 0);
    CHECK(first == last_stdout());
    CHECK(run_cmd("--seed 43 seed --in " + inst.string()) == 0);
    CHECK(run_cmd("seed --in " + inst.string() + " --k 99") == 2); // beyond the site count

    const nlohmann::json j = nlohmann::json::parse(first);
    CHECK(j.at("centers").size() == 3);
    CHECK(j.at("trace").size() == 3);
    CHECK(j.at("trace").at(0).at("potential_before").is_null());
}

TEST_CASE("evaluate emits a lemma report for coordinate centers") {
    const fs::path inst = workdir() / "eval_inst.json";
    const fs::path centers = workdir() / "centers.json";
    REQUIRE(run_cmd("gen --k 3 --m 1 --r 1 --delta 32 --out " + inst.string()) == 0);
    save_text(centers.string(), "[[0, 0]]");
    CHECK(run_cmd("evaluate --in " + inst.string() + " --centers " + centers.string()) == 0);
    const nlohmann::json j = nlohmann::json::parse(last_stdout());
    CHECK(j.at("phi_u").get<double>() == 48684.0);
    CHECK(j.at("ok12").get<bool>());
    CHECK(j.at("ok13").get<bool>());
    CHECK(j.at("z_s").is_null()); // s = 0 keeps the p_0 = 1 convention

    save_text(centers.string(), "[[5, 0]]"); // no site there at delta=32
    CHECK(run_cmd("evaluate --in " + inst.string() + " --centers " + centers.string()) == 2);
}

TEST_CASE("oracle reports the optimum and budget violations") {
    const fs::path inst = workdir() / "oracle_inst.json";
    REQUIRE(run_cmd("gen --k 2 --delta 32 --out " + inst.string()) == 0);
    CHECK(run_cmd("oracle --in " + inst.string() + " --exact-seeding --alpha 2") == 0);
    const nlohmann::json j = nlohmann::json::parse(last_stdout());
    CHECK(j.at("cost").get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(j.at("pr_xi").get<double>() == doctest::Approx(96.0 / 106.5).epsilon(1e-12));

    const fs::path big = workdir() / "oracle_big.json";
    REQUIRE(run_cmd("gen --k 4 --delta 32 --out " + big.string()) == 0);
    CHECK(run_cmd("oracle --in " + big.string()) == 4);
}

TEST_CASE("chain emits schedule values and the DP probability") {
    CHECK(run_cmd("chain --kbar 9 --delta 0.008 --geom-delta 2 --alpha 2 --dp "
                  "--check-ineq") == 0);
    const nlohmann::json j = nlohmann::json::parse(last_stdout());
    CHECK(j.at("chain_s_star").get<long long>() == 7);
    const ChainParams params = make_chain_params(9, 2.0, 7);
    CHECK(j.at("dp").get<double>() ==
          doctest::Approx(hitting_probability_dp(params, 9)).epsilon(1e-15));
    CHECK(j.at("inequalities").contains("i1"));
    CHECK(j.at("hoeffding").is_null()); // alpha < 1 at k_bar = 9

    CHECK(run_cmd("chain --kbar 1e60 --delta 0.00833") == 0);
    const nlohmann::json big = nlohmann::json::parse(last_stdout());
    CHECK(big.at("schedule_valid").get<bool>());
    CHECK(big.at("hoeffding").get<double>() > 0.99);
}

TEST_CASE("chain MC estimate is independent of the thread count") {
    const std::string common =
        "chain --kbar 31 --delta 0.008 --geom-delta 1 --alpha 100 --mc 20000";
    CHECK(run_cmd("--seed 5 --threads 1 " + common) == 0);
    const double single =
        nlohmann::json::parse(last_stdout()).at("mc").at("estimate").get<double>();
    CHECK(run_cmd("--seed 5 --threads 3 " + common) == 0);
    const double pooled =
        nlohmann::json::parse(last_stdout()).at("mc").at("estimate").get<double>();
    CHECK(single == pooled);
}

TEST_CASE("experiment produces byte-identical artifacts across runs and threads") {
    const fs::path csv1 = workdir() / "t1.csv";
    const fs::path csv2 = workdir() / "t2.csv";
    const std::string common = "experiment --k 4 --delta 16 --trials 300 ";
    CHECK(run_cmd("--seed 7 --threads 1 --out " + csv1.string() + " " + common) == 0);
    CHECK(run_cmd("--seed 7 --threads 3 --out " + csv2.string() + " " + common) == 0);
    CHECK(load_text(csv1.string()) == load_text(csv2.string()));
    CHECK(load_text(csv1.string() + ".summary.json") ==
          load_text(csv2.string() + ".summary.json"));

    CHECK(run_cmd("--seed 7 " + common) == 2); // --out required
}

TEST_CASE("report merges summaries into the pinned table") {
    const fs::path csv = workdir() / "rep.csv";
    const fs::path summary = workdir() / "rep_summary.json";
    REQUIRE(run_cmd("--seed 3 --out " + csv.string() + " experiment --k 4 --delta 16 "
                    "--trials 100 --summary " +
                    summary.string()) == 0);
    CHECK(run_cmd("report " + summary.string()) == 0);
    const std::string table = last_stdout();
    CHECK(table.rfind(kReportCsvHeader, 0) == 0);
    std::size_t lines = 0;
    for (char c : table)
        if (c == '\n') ++lines;
    CHECK(lines == 2); // header + one row

    CHECK(run_cmd("report " + (workdir() / "missing.json").string()) == 5);
}

TEST_CASE("generic point sets load through the sentinel JSON shape") {
    const fs::path generic = workdir() / "generic.json";
    save_text(generic.string(),
              "{\"k\":2,\"m\":1,\"r\":1,\"delta\":1,\"locations\":["
              "{\"group\":-1,\"level\":0,\"x\":0,\"y\":0,\"weight\":3},"
              "{\"group\":-1,\"level\":0,\"x\":4,\"y\":1,\"weight\":1},"
              "{\"group\":-1,\"level\":0,\"x\":4,\"y\":-1,\"weight\":1}]}");
    CHECK(run_cmd("--seed 5 seed --in " + generic.string() + " --k 2") == 0);
    const nlohmann::json j = nlohmann::json::parse(last_stdout());
    CHECK(j.at("centers").size() == 2);
    CHECK(j.at("ratio").is_null()); // no family closed form for generic sets

    CHECK(run_cmd("oracle --in " + generic.string() + " --k 2") == 0);
    const nlohmann::json o = nlohmann::json::parse(last_stdout());
    // optimum splits the heavy singleton from the symmetric pair
    CHECK(o.at("cost").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("JSON config supplies defaults and flags override it") {
    const fs::path cfg = workdir() / "config.json";
    const fs::path out1 = workdir() / "cfg_a.json";
    const fs::path out2 = workdir() / "cfg_b.json";
    save_text(cfg.string(),
              "{\"gen\": {\"k\": 2, \"m\": 1, \"r\": 1, \"delta\": 5}}\n");
    CHECK(run_cmd("--config " + cfg.string() + " --out " + out1.string() + " gen") == 0);
    CHECK(load_text(out1.string()) ==
          instance_to_json(build_instance(InstanceParams{2, 1.0, 1.0, 5.0})));
    // explicit flag wins over the config value
    CHECK(run_cmd("--config " + cfg.string() + " --out " + out2.string() +
                  " gen --delta 6") == 0);
    CHECK(load_text(out2.string()) ==
          instance_to_json(build_instance(InstanceParams{2, 1.0, 1.0, 6.0})));
}
