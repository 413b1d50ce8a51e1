#include "kmpp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kmpp/chain.hpp"
#include "kmpp/evaluation.hpp"
#include "kmpp/io.hpp"

namespace kmpp {

using nlohmann::json;

void wilson_interval(long long successes, long long n, double& low, double& high) {
    if (n <= 0) {
        low = 0.0;
        high = 1.0;
        return;
    }
    constexpr double z = 1.959963984540054; // 95%
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    high = successes == n ? 1.0 : std::min(1.0, center + half);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_params(config.params);
    if (config.params.k < 2)
        throw ParameterError("experiments need k >= 2 (the optimal cost is zero at k=1)");
    if (config.trials < 1)
        throw ParameterError("trials must be at least 1");
    if (!(config.delta_exp > 0.0) || !(config.delta_exp <= 1.0 / 120.0))
        throw ParameterError("delta_exp must lie in (0, 1/120]");

    const double alpha = config.alpha > 0.0
                             ? config.alpha
                             : config.delta_exp * std::log(static_cast<double>(config.params.k));
    if (!(alpha > 0.0))
        throw ParameterError("success threshold alpha must be positive");

    const Instance instance = build_instance(config.params);

    ExperimentResult result;
    result.records =
        run_trials(instance, config.trials, config.base_seed, alpha, config.threads);

    ExperimentSummary& s = result.summary;
    s.k = config.params.k;
    s.m = config.params.m;
    s.r = config.params.r;
    s.delta_geom = config.params.delta_geom;
    s.delta_exp = config.delta_exp;
    s.alpha = alpha;
    s.trials = config.trials;
    s.base_seed = config.base_seed;

    const long long k_bar = config.params.k - 1;
    s.s_star = min_covered_for_alpha(k_bar, config.params.delta_geom, alpha);

    double ratio_sum = 0.0;
    for (const TrialRecord& rec : result.records) {
        if (rec.success) ++s.successes;
        if (rec.xi) {
            ++s.xi_count;
            if (!rec.lemma11_ok) ++s.violations_lemma11;
            if (!rec.lemma12_ok) ++s.violations_lemma12;
            if (!rec.lemma13_ok) ++s.violations_lemma13;
            if (!rec.psbound_ok) ++s.violations_psbound;
        }
        if (rec.success && rec.covered < s.s_star) ++s.violations_min_covered;
        ratio_sum += rec.ratio;
    }
    s.pr_success = static_cast<double>(s.successes) / config.trials;
    s.pr_xi = static_cast<double>(s.xi_count) / config.trials;
    s.mean_ratio = ratio_sum / config.trials;
    wilson_interval(s.successes, s.trials, s.wilson_low, s.wilson_high);

    const ChainParams chain =
        make_chain_params(k_bar, config.params.delta_geom, s.s_star);
    s.dp_hitting = hitting_probability_dp(chain, k_bar);

    const TheoremBound tb = theorem_bound(config.params.k, config.delta_exp);
    s.theorem_bound_value = tb.value;
    s.theorem_valid = tb.schedule_valid;
    return result;
}

std::string summary_to_json(const ExperimentSummary& s) {
    std::ostringstream out;
    out << "{\"k\":" << s.k << ",\"m\":" << format_double(s.m)
        << ",\"r\":" << format_double(s.r) << ",\"delta\":" << format_double(s.delta_geom)
        << ",\"delta_exp\":" << format_double(s.delta_exp)
        << ",\"alpha\":" << format_double(s.alpha) << ",\"trials\":" << s.trials
        << ",\"base_seed\":" << s.base_seed << ",\"successes\":" << s.successes
        << ",\"pr_success\":" << format_double(s.pr_success)
        << ",\"wilson_low\":" << format_double(s.wilson_low)
        << ",\"wilson_high\":" << format_double(s.wilson_high)
        << ",\"xi_count\":" << s.xi_count << ",\"pr_xi\":" << format_double(s.pr_xi)
        << ",\"mean_ratio\":" << format_double(s.mean_ratio)
        << ",\"violations_lemma11\":" << s.violations_lemma11
        << ",\"violations_lemma12\":" << s.violations_lemma12
        << ",\"violations_lemma13\":" << s.violations_lemma13
        << ",\"violations_psbound\":" << s.violations_psbound
        << ",\"violations_min_covered\":" << s.violations_min_covered
        << ",\"s_star\":" << s.s_star
        << ",\"dp_hitting\":" << format_double(s.dp_hitting)
        << ",\"theorem_bound\":" << format_double(s.theorem_bound_value)
        << ",\"theorem_valid\":" << (s.theorem_valid ? "true" : "false") << "}\n";
    return out.str();
}

namespace {

double jnum(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw IoError(std::string("summary JSON missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

} // namespace

ExperimentSummary summary_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw IoError("malformed summary JSON");
    ExperimentSummary s;
    s.k = static_cast<int>(jnum(j, "k"));
    s.m = jnum(j, "m");
    s.r = jnum(j, "r");
    s.delta_geom = jnum(j, "delta");
    s.delta_exp = jnum(j, "delta_exp");
    s.alpha = jnum(j, "alpha");
    s.trials = static_cast<long long>(jnum(j, "trials"));
    s.base_seed = j.at("base_seed").get<std::uint64_t>();
    s.successes = static_cast<long long>(jnum(j, "successes"));
    s.pr_success = jnum(j, "pr_success");
    s.wilson_low = jnum(j, "wilson_low");
    s.wilson_high = jnum(j, "wilson_high");
    s.xi_count = static_cast<long long>(jnum(j, "xi_count"));
    s.pr_xi = jnum(j, "pr_xi");
    s.mean_ratio = jnum(j, "mean_ratio");
    s.violations_lemma11 = static_cast<long long>(jnum(j, "violations_lemma11"));
    s.violations_lemma12 = static_cast<long long>(jnum(j, "violations_lemma12"));
    s.violations_lemma13 = static_cast<long long>(jnum(j, "violations_lemma13"));
    s.violations_psbound = static_cast<long long>(jnum(j, "violations_psbound"));
    s.violations_min_covered = static_cast<long long>(jnum(j, "violations_min_covered"));
    s.s_star = static_cast<long long>(jnum(j, "s_star"));
    s.dp_hitting = jnum(j, "dp_hitting");
    s.theorem_bound_value = jnum(j, "theorem_bound");
    if (!j.contains("theorem_valid") || !j.at("theorem_valid").is_boolean())
        throw IoError("summary JSON missing boolean field 'theorem_valid'");
    s.theorem_valid = j.at("theorem_valid").get<bool>();
    return s;
}

std::string report_csv(std::vector<ExperimentSummary> summaries) {
    std::sort(summaries.begin(), summaries.end(),
              [](const ExperimentSummary& a, const ExperimentSummary& b) { return a.k < b.k; });
    std::ostringstream out;
    out << kReportCsvHeader << "\n";
    for (const ExperimentSummary& s : summaries) {
        out << s.k << "," << s.trials << "," << format_double(s.alpha) << ","
            << format_double(s.delta_geom) << "," << format_double(s.delta_exp) << ","
            << format_double(s.pr_success) << "," << format_double(s.wilson_low) << ","
            << format_double(s.wilson_high) << "," << format_double(s.pr_xi) << ","
            << s.s_star << "," << format_double(s.dp_hitting) << ","
            << format_double(s.theorem_bound_value) << "," << (s.theorem_valid ? 1 : 0)
            << "\n";
    }
    return out.str();
}

} // namespace kmpp
