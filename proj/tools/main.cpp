#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmpp/chain.hpp"
#include "kmpp/evaluation.hpp"
#include "kmpp/experiment.hpp"
#include "kmpp/instance.hpp"
#include "kmpp/io.hpp"
#include "kmpp/oracle.hpp"
#include "kmpp/seeding.hpp"

namespace {

using kmpp::format_double;

// JSON config files mirror the flags: top-level keys map to global options,
// nested objects to subcommand options. Command-line flags override.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j = nlohmann::json::parse(input, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw CLI::FileError("config file is not a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                flatten(value, deeper, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            out.push_back(item);
        }
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        kmpp::save_text(out_path, text);
}

std::string json_or_null(double v, bool present) {
    return present ? format_double(v) : std::string("null");
}

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
};

kmpp::InstanceParams resolve_gen_params(int k, double m, double r, double delta,
                                        bool from_schedule, double delta_exp) {
    kmpp::InstanceParams params{k, m, r, delta};
    if (from_schedule) {
        const kmpp::ScheduleValues sv = kmpp::schedule(static_cast<double>(k - 1), delta_exp);
        if (!sv.valid)
            throw kmpp::ScheduleError(
                "schedule-derived delta needs alpha = delta_exp*log(k-1) > 1");
        params.delta_geom = sv.delta_sched;
    }
    kmpp::validate_params(params);
    return params;
}

std::string schedule_json_fields(const kmpp::ScheduleValues& sv) {
    std::ostringstream out;
    out << "\"k_bar\":" << format_double(sv.k_bar)
        << ",\"delta_exp\":" << format_double(sv.delta_exp)
        << ",\"alpha\":" << format_double(sv.alpha) << ",\"eps\":" << format_double(sv.eps)
        << ",\"delta_real\":" << format_double(sv.delta_real)
        << ",\"log_delta_real\":" << format_double(sv.log_delta_real)
        << ",\"delta_sched\":" << format_double(sv.delta_sched)
        << ",\"u\":" << format_double(sv.u) << ",\"s_star\":" << format_double(sv.s_star)
        << ",\"schedule_valid\":" << (sv.valid ? "true" : "false");
    return out.str();
}

void add_gen(CLI::App& app, const GlobalOpts& global) {
    auto* sub = app.add_subcommand("gen", "construct an instance and write it as JSON");
    sub->fallthrough();
    auto k = std::make_shared<int>(2);
    auto m = std::make_shared<double>(1.0);
    auto r = std::make_shared<double>(1.0);
    auto delta = std::make_shared<double>(4.0);
    auto from_schedule = std::make_shared<bool>(false);
    auto delta_exp = std::make_shared<double>(0.008);
    sub->add_option("--k", *k, "number of clusters")->required();
    sub->add_option("--m", *m, "base mass");
    sub->add_option("--r", *r, "base radius");
    sub->add_option("--delta", *delta, "group spacing multiplier");
    sub->add_flag("--delta-from-schedule", *from_schedule,
                  "derive the spacing from the chain schedule at k_bar = k-1");
    sub->add_option("--delta-exp", *delta_exp, "schedule exponent delta in (0, 1/120]");
    sub->callback([&global, k, m, r, delta, from_schedule, delta_exp]() {
        const kmpp::InstanceParams params =
            resolve_gen_params(*k, *m, *r, *delta, *from_schedule, *delta_exp);
        emit(global.out, kmpp::instance_to_json(kmpp::build_instance(params)));
    });
}

void add_seed(CLI::App& app, const GlobalOpts& global) {
    auto* sub = app.add_subcommand("seed", "run one k-means++ seeding and print the outcome");
    sub->fallthrough();
    auto in = std::make_shared<std::string>();
    auto k = std::make_shared<int>(0);
    auto stream = std::make_shared<std::uint64_t>(0);
    auto with_trace = std::make_shared<bool>(false);
    sub->add_option("--in", *in, "instance JSON")->required();
    sub->add_option("--k", *k, "number of centers (default: the instance k)");
    sub->add_option("--stream", *stream, "RNG stream index");
    sub->add_flag("--trace", *with_trace, "include the per-iteration trace");
    sub->callback([&global, in, k, stream, with_trace]() {
        const kmpp::Instance inst = kmpp::load_instance(*in);
        const int kk = *k > 0 ? *k : inst.params.k;
        kmpp::RngStream rng(global.seed, *stream);
        const kmpp::SeedingResult res = kmpp::kmeanspp_seed(inst.locations, kk, rng);

        bool family = inst.params.k >= 2;
        for (const kmpp::Location& loc : inst.locations)
            if (loc.group < 0) family = false;

        std::ostringstream out;
        out << "{\"seed\":" << rng.derived_seed() << ",\"centers\":[";
        for (std::size_t i = 0; i < res.centers.size(); ++i)
            out << (i ? "," : "") << res.centers[i];
        out << "],\"xi\":" << (res.trace.xi ? "true" : "false");
        const double final_potential =
            kmpp::potential(inst.locations, std::span<const int>(res.centers));
        out << ",\"final_potential\":" << format_double(final_potential);
        if (family)
            out << ",\"ratio\":"
                << format_double(final_potential /
                                 kmpp::optimal_cost_closed_form(inst.params));
        else
            out << ",\"ratio\":null";
        if (*with_trace) {
            out << ",\"trace\":[";
            for (std::size_t i = 0; i < res.trace.steps.size(); ++i) {
                const kmpp::TraceStep& st = res.trace.steps[i];
                out << (i ? "," : "") << "{\"chosen\":" << st.chosen << ",\"potential_before\":"
                    << (std::isinf(st.potential_before)
                            ? std::string("null")
                            : format_double(st.potential_before))
                    << ",\"s\":" << st.covered_s << ",\"t\":" << st.centers_t << "}";
            }
            out << "]";
        }
        out << "}\n";
        emit(global.out, out.str());
    });
}

void add_evaluate(CLI::App& app, const GlobalOpts& global) {
    auto* sub =
        app.add_subcommand("evaluate", "check the potential-bound lemmas for a center set");
    sub->fallthrough();
    auto in = std::make_shared<std::string>();
    auto centers_path = std::make_shared<std::string>();
    sub->add_option("--in", *in, "instance JSON")->required();
    sub->add_option("--centers", *centers_path,
                    "centers JSON: [i, j, ...] indices or [[x, y], ...] coordinates")
        ->required();
    sub->callback([&global, in, centers_path]() {
        const kmpp::Instance inst = kmpp::load_instance(*in);
        const auto centers = kmpp::centers_from_json(kmpp::load_text(*centers_path));
        const std::vector<int> indices = kmpp::resolve_centers(inst, centers);
        const kmpp::LemmaReport report =
            kmpp::lemma_bound_report(inst, std::span<const int>(indices));
        emit(global.out, kmpp::lemma_report_to_json(report));
    });
}

void add_oracle(CLI::App& app, const GlobalOpts& global) {
    auto* sub = app.add_subcommand(
        "oracle", "brute-force optimum and exact seeding law for tiny instances");
    sub->fallthrough();
    auto in = std::make_shared<std::string>();
    auto k = std::make_shared<int>(0);
    auto max_locations = std::make_shared<int>(16);
    auto exact_seeding = std::make_shared<bool>(false);
    auto alpha = std::make_shared<double>(0.0);
    sub->add_option("--in", *in, "instance JSON")->required();
    sub->add_option("--k", *k, "number of clusters (default: the instance k)");
    sub->add_option("--max-locations", *max_locations, "enumeration budget");
    sub->add_flag("--exact-seeding", *exact_seeding, "also enumerate the seeding outcome tree");
    sub->add_option("--alpha", *alpha, "ratio threshold for the exact Pr[ratio <= alpha]");
    sub->callback([&global, in, k, max_locations, exact_seeding, alpha]() {
        const kmpp::Instance inst = kmpp::load_instance(*in);
        const int kk = *k > 0 ? *k : inst.params.k;
        const kmpp::PartitionResult opt =
            kmpp::brute_force_optimal(inst.locations, kk, *max_locations);

        std::ostringstream out;
        out << "{\"cost\":" << format_double(opt.cost) << ",\"assignment\":[";
        for (std::size_t i = 0; i < opt.assignment.size(); ++i)
            out << (i ? "," : "") << opt.assignment[i];
        out << "],\"centers\":[";
        for (std::size_t i = 0; i < opt.centers.size(); ++i)
            out << (i ? "," : "") << "[" << format_double(opt.centers[i].x) << ","
                << format_double(opt.centers[i].y) << "]";
        out << "]";
        if (*exact_seeding) {
            const kmpp::SeedingDistribution dist =
                kmpp::exact_seeding_distribution(inst.locations, kk);
            out << ",\"pr_xi\":" << format_double(kmpp::pr_xi(dist, inst.locations));
            out << ",\"pr_covered_at_least\":[";
            for (int c = 1; c <= inst.params.k; ++c)
                out << (c > 1 ? "," : "")
                    << format_double(kmpp::pr_covered_at_least(dist, inst, c));
            out << "]";
            if (*alpha > 0.0)
                out << ",\"pr_ratio_at_most\":"
                    << format_double(kmpp::pr_ratio_at_most(dist, inst, *alpha));
        }
        out << "}\n";
        emit(global.out, out.str());
    });
}

void add_chain(CLI::App& app, const GlobalOpts& global) {
    auto* sub = app.add_subcommand(
        "chain", "schedule values, inequality flags, hitting probabilities and tail bounds");
    sub->fallthrough();
    auto kbar = std::make_shared<double>(0.0);
    auto delta_exp = std::make_shared<double>(0.008);
    auto geom_delta = std::make_shared<double>(0.0);
    auto alpha = std::make_shared<double>(0.0);
    auto steps = std::make_shared<long long>(-1);
    auto dp = std::make_shared<bool>(false);
    auto mc = std::make_shared<long long>(0);
    auto check_ineq = std::make_shared<bool>(false);
    sub->add_option("--kbar", *kbar, "k_bar = k - 1")->required();
    sub->add_option("--delta", *delta_exp, "exponent delta in (0, 1/120]");
    sub->add_option("--geom-delta", *geom_delta,
                    "override the schedule spacing with an explicit instance Delta");
    sub->add_option("--alpha", *alpha, "override alpha (default delta * log(k_bar))");
    sub->add_option("--steps", *steps, "step budget (default k_bar)");
    sub->add_flag("--dp", *dp, "compute the exact hitting probability");
    sub->add_option("--mc", *mc, "estimate the hitting probability with N walks");
    sub->add_flag("--check-ineq", *check_ineq, "evaluate inequalities I1..I5");
    sub->callback([&global, kbar, delta_exp, geom_delta, alpha, steps, dp, mc, check_ineq]() {
        const kmpp::ScheduleValues sv = kmpp::schedule(*kbar, *delta_exp);
        std::ostringstream out;
        out << "{" << schedule_json_fields(sv);

        const double used_alpha = *alpha > 0.0 ? *alpha : sv.alpha;
        const double used_delta = *geom_delta > 0.0 ? *geom_delta : sv.delta_sched;
        out << ",\"used_alpha\":" << format_double(used_alpha)
            << ",\"used_delta\":" << format_double(used_delta);

        if (*check_ineq) {
            const kmpp::InequalityFlags f = kmpp::check_inequalities(sv);
            out << ",\"inequalities\":{\"i1\":" << (f.i1 ? "true" : "false")
                << ",\"i2\":" << (f.i2 ? "true" : "false")
                << ",\"i3\":" << (f.i3 ? "true" : "false")
                << ",\"i4\":" << (f.i4 ? "true" : "false")
                << ",\"i5\":" << (f.i5 ? "true" : "false") << "}";
        }

        if (*dp || *mc > 0) {
            if (*kbar < 1.0 || *kbar > 1e7 ||
                *kbar != std::floor(*kbar))
                throw kmpp::ParameterError(
                    "--dp/--mc need an integer k_bar in [1, 1e7]");
            const long long kb = static_cast<long long>(*kbar);
            const long long s_star =
                kmpp::min_covered_for_alpha(kb, used_delta, used_alpha);
            const long long budget = *steps >= 0 ? *steps : kb;
            const kmpp::ChainParams params =
                kmpp::make_chain_params(kb, used_delta, s_star);
            out << ",\"chain_s_star\":" << s_star << ",\"steps\":" << budget;
            if (*dp)
                out << ",\"dp\":"
                    << format_double(kmpp::hitting_probability_dp(params, budget));
            if (*mc > 0) {
                // walks are embarrassingly parallel; per-walk streams keep the
                // hit count independent of the thread count
                int workers = global.threads > 0
                                  ? global.threads
                                  : static_cast<int>(
                                        std::max(1u, std::thread::hardware_concurrency()));
                workers = static_cast<int>(
                    std::min<long long>(workers, *mc));
                std::vector<long long> hits(static_cast<std::size_t>(workers), 0);
                std::vector<std::thread> pool;
                for (int t = 0; t < workers; ++t) {
                    pool.emplace_back([&, t]() {
                        for (long long w = t; w < *mc; w += workers) {
                            kmpp::RngStream rng(global.seed, static_cast<std::uint64_t>(w));
                            if (kmpp::simulate_chain(params, budget, rng))
                                ++hits[static_cast<std::size_t>(t)];
                        }
                    });
                }
                for (std::thread& th : pool) th.join();
                long long total = 0;
                for (long long h : hits) total += h;
                const double est = static_cast<double>(total) / static_cast<double>(*mc);
                const double se =
                    std::sqrt(est * (1.0 - est) / static_cast<double>(*mc));
                out << ",\"mc\":{\"walks\":" << *mc << ",\"estimate\":" << format_double(est)
                    << ",\"std_error\":" << format_double(se) << "}";
            }
            const kmpp::ExpectedSteps ev = kmpp::expected_steps(params);
            out << ",\"expected_x\":" << json_or_null(ev.ex, ev.finite)
                << ",\"expected_y\":" << json_or_null(ev.ey, ev.finite);
        }

        if (sv.valid) {
            const double hoeffding = kmpp::hoeffding_bound(sv);
            // k = k_bar + 1 may exceed any integer type here; 2^-k underflows
            // to 0 exactly where it stops mattering
            const double pow2 = std::exp2(-(sv.k_bar + 1.0));
            out << ",\"hoeffding\":" << format_double(hoeffding)
                << ",\"theorem_bound\":"
                << format_double(std::min(1.0, pow2 + hoeffding));
        } else {
            out << ",\"hoeffding\":null,\"theorem_bound\":null";
        }
        out << "}\n";
        emit(global.out, out.str());
    });
}

void add_experiment(CLI::App& app, const GlobalOpts& global) {
    auto* sub = app.add_subcommand(
        "experiment", "batched seeding trials with lemma accounting and tail-bound columns");
    sub->fallthrough();
    auto k = std::make_shared<int>(0);
    auto m = std::make_shared<double>(1.0);
    auto r = std::make_shared<double>(1.0);
    auto delta = std::make_shared<double>(4.0);
    auto from_schedule = std::make_shared<bool>(false);
    auto delta_exp = std::make_shared<double>(0.008);
    auto alpha = std::make_shared<double>(0.0);
    auto trials = std::make_shared<int>(1000);
    auto summary_path = std::make_shared<std::string>();
    sub->add_option("--k", *k, "number of clusters")->required();
    sub->add_option("--m", *m, "base mass");
    sub->add_option("--r", *r, "base radius");
    sub->add_option("--delta", *delta, "group spacing multiplier");
    sub->add_flag("--delta-from-schedule", *from_schedule,
                  "derive the spacing from the chain schedule at k_bar = k-1");
    sub->add_option("--delta-exp", *delta_exp, "exponent delta in (0, 1/120]");
    sub->add_option("--alpha", *alpha,
                    "success threshold (default delta_exp * log(k))");
    sub->add_option("--trials", *trials, "number of trials");
    sub->add_option("--summary", *summary_path,
                    "summary JSON path (default: <out>.summary.json)");
    sub->callback([&global, k, m, r, delta, from_schedule, delta_exp, alpha, trials,
                   summary_path]() {
        if (global.out.empty())
            throw kmpp::ParameterError("experiment needs --out for the trial CSV");
        kmpp::ExperimentConfig config;
        config.params = resolve_gen_params(*k, *m, *r, *delta, *from_schedule, *delta_exp);
        config.delta_exp = *delta_exp;
        config.alpha = *alpha;
        config.trials = *trials;
        config.base_seed = global.seed;
        config.threads = global.threads;

        const kmpp::ExperimentResult result = kmpp::run_experiment(config);
        const kmpp::Instance inst = kmpp::build_instance(config.params);
        kmpp::save_text(global.out, kmpp::trials_to_csv(inst, result.records));
        const std::string spath =
            summary_path->empty() ? global.out + ".summary.json" : *summary_path;
        kmpp::save_text(spath, kmpp::summary_to_json(result.summary));
    });
}

void add_report(CLI::App& app, const GlobalOpts& global) {
    auto* sub =
        app.add_subcommand("report", "merge experiment summaries into a plot-ready table");
    sub->fallthrough();
    auto inputs = std::make_shared<std::vector<std::string>>();
    sub->add_option("summaries", *inputs, "summary JSON files")->required();
    sub->callback([&global, inputs]() {
        std::vector<kmpp::ExperimentSummary> summaries;
        for (const std::string& path : *inputs)
            summaries.push_back(kmpp::summary_from_json(kmpp::load_text(path)));
        emit(global.out, kmpp::report_csv(std::move(summaries)));
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-means++ seeding experiments on a hard planar instance family"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");

    GlobalOpts global;
    app.add_option("--seed", global.seed, "base RNG seed");
    app.add_option("--threads", global.threads, "worker threads (0 = all cores)");
    app.add_option("--out", global.out, "output path (default: stdout)");

    add_gen(app, global);
    add_seed(app, global);
    add_evaluate(app, global);
    add_oracle(app, global);
    add_chain(app, global);
    add_experiment(app, global);
    add_report(app, global);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const kmpp::ScheduleError& e) {
        std::cerr << "schedule error: " << e.what() << "\n";
        return 3;
    } catch (const kmpp::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 4;
    } catch (const kmpp::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 5;
    } catch (const kmpp::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
