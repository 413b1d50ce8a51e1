#include <doctest.h>

#include <cmath>
#include <vector>

#include "kmpp/chain.hpp"
#include "kmpp/evaluation.hpp"

using namespace kmpp;

namespace {

// independent extended-precision path used to pin the binary64 schedule
struct OracleSchedule {
    long double alpha, eps, log_delta, delta, u, exponent;
};

OracleSchedule oracle_schedule(long double k_bar, long double delta_exp) {
    OracleSchedule o{};
    o.alpha = delta_exp * logl(k_bar);
    o.eps = logl(o.alpha) / (120.0L * o.alpha);
    o.log_delta = 0.5L * logl(o.alpha) + 20.0L * o.alpha * (1.0L + o.eps);
    o.delta = expl(o.log_delta);
    o.u = o.alpha / (2.0L * o.delta * o.delta);
    o.exponent = k_bar * 2.0L * o.eps * o.eps * o.u * o.u / (9.0L * o.delta * o.delta);
    return o;
}

bool sig6(double value, long double oracle) {
    return std::abs(value - static_cast<double>(oracle)) <=
           1e-6 * std::abs(static_cast<double>(oracle));
}

bool within_3se(double observed, double expected, long long n) {
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    return std::abs(observed - expected) <= 3.0 * se;
}

} // namespace

TEST_CASE("schedule at k_bar = 1e60 matches the extended-precision oracle") {
    const ScheduleValues sv = schedule(1e60, 1.0 / 120.0);
    const OracleSchedule o = oracle_schedule(1e60L, 1.0L / 120.0L);

    CHECK(sv.valid);
    CHECK(sig6(sv.alpha, o.alpha));
    CHECK(sig6(sv.eps, o.eps));
    CHECK(sig6(sv.log_delta_real, o.log_delta));
    CHECK(sig6(sv.delta_real, o.delta));

    // frozen binary64 reference values
    CHECK(sv.alpha == doctest::Approx(1.1512925464970228).epsilon(1e-12));
    CHECK(sv.eps == doctest::Approx(1.0197615505913669e-3).epsilon(1e-9));
    CHECK(sv.delta_real == doctest::Approx(1.0984757200673341e10).epsilon(1e-9));
    // pre-ceiling value sits within 0.5% of 1.10e10
    CHECK(std::abs(sv.delta_real - 1.10e10) / 1.10e10 < 5e-3);
    CHECK(sv.delta_sched == std::ceil(sv.delta_real));
    CHECK(sig6(sv.u, o.alpha / (2.0L * static_cast<long double>(sv.delta_sched) *
                                static_cast<long double>(sv.delta_sched))));
}

TEST_CASE("alpha is linear in delta_exp") {
    const double k_bar = 1e40;
    const ScheduleValues a = schedule(k_bar, 0.004);
    const ScheduleValues b = schedule(k_bar, 0.008);
    CHECK(b.alpha == doctest::Approx(2.0 * a.alpha).epsilon(1e-12));
}

TEST_CASE("schedule boundary: alpha <= 1 flags the values as asymptotic-only") {
    // k_bar slightly below e^{1/delta} so alpha < 1 robustly
    const double delta = 1.0 / 128.0;
    const double k_bar = std::exp(127.999);
    const ScheduleValues sv = schedule(k_bar, delta);
    CHECK(sv.alpha < 1.0);
    CHECK(sv.alpha == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(sv.eps <= 0.0);
    CHECK(!sv.valid);
    // I3 fails at the boundary: 1/k_bar > 0 >= eps/9
    const InequalityFlags f = check_inequalities(sv);
    CHECK(!f.i3);
    CHECK_THROWS_AS(hoeffding_bound(sv), ScheduleError);
}

TEST_CASE("schedule rejects out-of-domain parameters") {
    CHECK_THROWS_AS(schedule(0.5, 0.008), ScheduleError);
    CHECK_THROWS_AS(schedule(10.0, 0.0), ScheduleError);
    CHECK_THROWS_AS(schedule(10.0, 0.009), ScheduleError); // above 1/120
    CHECK_THROWS_AS(schedule(10.0, 0.2), ScheduleError);
    CHECK_NOTHROW(schedule(10.0, 1.0 / 120.0)); // the endpoint itself evaluates
}

TEST_CASE("z_and_p worked example and edges") {
    const ZP zp = z_and_p(9, 2.0, 4);
    CHECK(zp.z == doctest::Approx(1600.0 / 3.5).epsilon(1e-14));
    CHECK(zp.p == doctest::Approx(3200.0 / 3207.0).epsilon(1e-14));

    const ZP absorb = z_and_p(9, 2.0, 9);
    CHECK(absorb.z == 0.0);
    CHECK(absorb.p == 0.0);

    CHECK(z_and_p(9, 1e8, 1).p > 1.0 - 1e-10); // Delta -> inf pushes p -> 1

    CHECK_THROWS_AS(z_and_p(9, 2.0, 0), ParameterError);
    CHECK_THROWS_AS(z_and_p(9, 2.0, 10), ParameterError);
}

TEST_CASE("p_s = z_s/(1+z_s) identity") {
    for (long long k_bar : {9LL, 31LL, 99LL}) {
        for (double delta : {1.0, 2.0, 8.0, 4096.0}) {
            for (long long s = 1; s < k_bar; ++s) {
                const ZP zp = z_and_p(k_bar, delta, s);
                CHECK(zp.p ==
                      doctest::Approx(zp.z / (1.0 + zp.z)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("inequality checks stay evaluable over a wide scan") {
    // the scan is the contract: every flag computes without overflow
    for (double exponent10 : {3.0, 6.0, 30.0, 60.0, 100.0, 200.0, 300.0}) {
        const double k_bar = std::pow(10.0, exponent10);
        const ScheduleValues sv = schedule(k_bar, 1.0 / 121.0);
        const InequalityFlags f = check_inequalities(sv);
        // I2 holds whenever alpha >= 1 and Delta >= 64
        if (sv.alpha >= 1.0 && sv.delta_sched >= 64.0) CHECK(f.i2);
        // I4 needs eps*alpha >= 3/40, far beyond representable k_bar
        CHECK(!f.i4);
    }
}

TEST_CASE("deterministic chain walks absorb exactly on schedule") {
    ChainParams params;
    params.s_star = 3;
    params.p = {1.0, 1.0, 1.0};
    params.truncation = 5.0;
    CHECK(hitting_probability_dp(params, 3) == 1.0);
    CHECK(hitting_probability_dp(params, 2) == 0.0);
    CHECK(hitting_probability_dp(params, 10) == 1.0);

    RngStream rng(8, 0);
    CHECK(simulate_chain(params, 3, rng));
    CHECK(!simulate_chain(params, 2, rng));
}

TEST_CASE("single forced step: s* = 1 with p_0 = 1") {
    ChainParams params;
    params.s_star = 1;
    params.p = {1.0};
    params.truncation = 1.0;
    CHECK(hitting_probability_dp(params, 0) == 0.0);
    CHECK(hitting_probability_dp(params, 1) == 1.0);
}

TEST_CASE("two-state chain: one forced step then Bernoulli tries") {
    ChainParams params;
    params.s_star = 2;
    params.p = {1.0, 0.25};
    params.truncation = 2.0;
    CHECK(hitting_probability_dp(params, 3) == doctest::Approx(0.4375).epsilon(1e-15));
}

TEST_CASE("DP values live in [0,1] and are monotone in the step budget") {
    const ChainParams params = make_chain_params(9, 2.0, 7);
    double prev = 0.0;
    for (long long steps = 0; steps <= 30; ++steps) {
        const double v = hitting_probability_dp(params, steps);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-15);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    CHECK(hitting_probability_dp(ChainParams{0, {}, 1.0}, 0) == 1.0);
}

TEST_CASE("simulated walks match the DP probability") {
    const ChainParams params = make_chain_params(9, 1.0, 6);
    const double exact = hitting_probability_dp(params, 9);
    const long long n = 100000;
    long long hits = 0;
    for (long long w = 0; w < n; ++w) {
        RngStream rng(2718, static_cast<std::uint64_t>(w));
        if (simulate_chain(params, 9, rng)) ++hits;
    }
    CHECK(within_3se(static_cast<double>(hits) / n, exact, n));
    RngStream rng(1, 1);
    CHECK(!simulate_chain(params, 0, rng)); // steps = 0 never absorbs
}

TEST_CASE("expected steps of the truncated and untruncated walks") {
    ChainParams unit;
    unit.s_star = 3;
    unit.p = {1.0, 1.0, 1.0};
    unit.truncation = 7.0;
    const ExpectedSteps ev = expected_steps(unit);
    CHECK(ev.ex == 3.0);
    CHECK(ev.ey == 3.0);

    ChainParams half;
    half.s_star = 1;
    half.p = {0.5};
    half.truncation = 2.0;
    const ExpectedSteps eh = expected_steps(half);
    CHECK(eh.ex == 2.0);
    CHECK(eh.ey == doctest::Approx(1.5).epsilon(1e-15));

    ChainParams stuck;
    stuck.s_star = 1;
    stuck.p = {0.0};
    stuck.truncation = 2.0;
    CHECK(!expected_steps(stuck).finite);

    // Y_s = min(X_s, Delta) never exceeds X_s
    for (long long k_bar : {9LL, 31LL}) {
        for (double delta : {1.0, 2.0, 8.0}) {
            const ChainParams params = make_chain_params(k_bar, delta, k_bar);
            const ExpectedSteps e = expected_steps(params);
            CHECK(e.ey <= e.ex + 1e-12);
        }
    }
}

TEST_CASE("expected absorption step matches simulation") {
    const ChainParams params = make_chain_params(9, 2.0, 9);
    const ExpectedSteps ev = expected_steps(params);
    const long long n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (long long w = 0; w < n; ++w) {
        RngStream rng(31415, static_cast<std::uint64_t>(w));
        const double steps =
            static_cast<double>(simulate_absorption_steps(params, rng, 1000000));
        sum += steps;
        sumsq += steps * steps;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - ev.ex) <= 3.0 * se);
}

TEST_CASE("hoeffding bound sits in (0, 1] over the valid scan") {
    for (double exponent10 : {53.0, 60.0, 100.0, 200.0, 300.0}) {
        const double k_bar = std::pow(10.0, exponent10);
        const ScheduleValues sv = schedule(k_bar, 1.0 / 120.0);
        REQUIRE(sv.valid);
        const double bound = hoeffding_bound(sv);
        CHECK(bound > 0.0);
        CHECK(bound <= 1.0);
    }
}

TEST_CASE("hoeffding bound at 1e60 matches the extended-precision oracle") {
    const ScheduleValues sv = schedule(1e60, 1.0 / 120.0);
    const OracleSchedule o = oracle_schedule(1e60L, 1.0L / 120.0L);
    const double bound = hoeffding_bound(sv);
    // frozen from the oracle: exponent 4.35866...e-8 (with the ceiled Delta
    // the exponent shifts in the 9th digit at most)
    const double exponent = -std::log(bound);
    CHECK(std::abs(exponent - static_cast<double>(o.exponent)) <=
          1e-6 * static_cast<double>(o.exponent));
    CHECK(bound == doctest::Approx(0.99999995641336).epsilon(1e-9));
}

TEST_CASE("the tail exponent factors through the E-definitions") {
    for (auto [k_bar, delta] : std::vector<std::pair<double, double>>{
             {1e60, 1.0 / 120.0}, {1e55, 0.0082}, {1e300, 1.0 / 121.0}}) {
        const ScheduleValues sv = schedule(k_bar, delta);
        REQUIRE(sv.valid);
        // route A: straight from the stored pre-ceiling values
        const double u_real = sv.alpha / (2.0 * sv.delta_real * sv.delta_real);
        const double log_a = std::log(2.0) + 2.0 * std::log(sv.eps) +
                             2.0 * std::log(u_real) - std::log(9.0) -
                             2.0 * std::log(sv.delta_real);
        // route B: eps^2 * alpha^-2 * e^{-120 alpha} / 18
        const double log_b = 2.0 * std::log(sv.eps) - 2.0 * std::log(sv.alpha) -
                             120.0 * sv.alpha - std::log(18.0);
        CHECK(std::abs(log_a - log_b) <= 1e-9);
    }
}

TEST_CASE("theorem bound brackets and validity flag") {
    for (int k = 2; k <= 64; k *= 2) {
        const TheoremBound tb = theorem_bound(k, 0.008);
        CHECK(tb.value >= std::ldexp(1.0, -k));
        CHECK(tb.value <= 1.0);
        // alpha = 0.008*log(k-1) <= 1 at every desk-scale k: vacuous bound
        CHECK(!tb.schedule_valid);
        CHECK(tb.value == 1.0);
    }
    CHECK_THROWS_AS(theorem_bound(1, 0.008), ParameterError);

    // monotonicity scan: report violations (none expected while vacuous)
    int violations = 0;
    double prev = 2.0;
    for (int k = 2; k <= 128; ++k) {
        const double v = theorem_bound(k, 0.008).value;
        if (v > prev + 1e-15) ++violations;
        prev = v;
    }
    CHECK(violations == 0);
}

TEST_CASE("DP never exceeds the analytic bound when the inequality regime holds") {
    // The I1-I5 regime needs eps*alpha >= 3/40, which sits beyond any
    // binary64 k_bar; the guard stays vacuous here but pins the contract.
    for (double exponent10 : {53.0, 60.0, 150.0}) {
        const ScheduleValues sv = schedule(std::pow(10.0, exponent10), 1.0 / 120.0);
        const InequalityFlags f = check_inequalities(sv);
        if (f.i1 && f.i2 && f.i3 && f.i4 && f.i5 && sv.s_star < 1e6) {
            const ChainParams params = make_chain_params(
                static_cast<long long>(sv.k_bar), sv.delta_sched,
                static_cast<long long>(sv.s_star));
            CHECK(hitting_probability_dp(params, static_cast<long long>(sv.k_bar)) <=
                  hoeffding_bound(sv));
        }
    }
}
