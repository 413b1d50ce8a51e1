#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kmpp/instance.hpp"
#include "kmpp/seeding.hpp"

namespace kmpp {

struct ExperimentConfig {
    InstanceParams params;
    double delta_exp = 0.008;   // exponent delta used for alpha and the bounds
    double alpha = 0.0;         // success threshold; 0 means delta_exp * log(k)
    int trials = 1000;
    std::uint64_t base_seed = 1;
    int threads = 0;            // 0 = hardware concurrency
};

struct ExperimentSummary {
    int k = 0;
    double m = 0.0;
    double r = 0.0;
    double delta_geom = 0.0;
    double delta_exp = 0.0;
    double alpha = 0.0;
    long long trials = 0;
    std::uint64_t base_seed = 0;
    long long successes = 0;
    double pr_success = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    long long xi_count = 0;
    double pr_xi = 0.0;
    double mean_ratio = 0.0;
    long long violations_lemma11 = 0;
    long long violations_lemma12 = 0;
    long long violations_lemma13 = 0;
    long long violations_psbound = 0;
    long long violations_min_covered = 0;
    long long s_star = 0;       // min_covered_for_alpha(k-1, delta_geom, alpha)
    double dp_hitting = 0.0;    // chain DP at (k-1 steps, instance Delta)
    double theorem_bound_value = 1.0;
    bool theorem_valid = false;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    ExperimentSummary summary;
};

// 95% Wilson score interval for s successes out of n.
void wilson_interval(long long successes, long long n, double& low, double& high);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string summary_to_json(const ExperimentSummary& summary);
ExperimentSummary summary_from_json(const std::string& text);

inline constexpr const char* kReportCsvHeader =
    "k,trials,alpha,delta,delta_exp,pr_success,wilson_low,wilson_high,"
    "pr_xi,s_star,dp_hitting,theorem_bound,theorem_valid";

// Merges summaries into the plot-ready long-format table, sorted by k.
std::string report_csv(std::vector<ExperimentSummary> summaries);

} // namespace kmpp
