#include "kmpp/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kmpp {

namespace {
constexpr double kTwo53 = 9007199254740992.0;
}

ScheduleValues schedule(double k_bar, double delta_exp) {
    if (!(k_bar > 1.0) || !std::isfinite(k_bar))
        throw ScheduleError("k_bar must be a finite real > 1");
    if (!(delta_exp > 0.0) || !(delta_exp <= 1.0 / 120.0))
        throw ScheduleError("delta must lie in (0, 1/120]");

    ScheduleValues sv;
    sv.k_bar = k_bar;
    sv.delta_exp = delta_exp;
    sv.alpha = delta_exp * std::log(k_bar);
    if (!(sv.alpha > 0.0))
        throw ScheduleError("alpha = delta * log(k_bar) must be positive");
    sv.eps = std::log(sv.alpha) / (120.0 * sv.alpha);
    sv.valid = sv.alpha > 1.0;

    // Delta grows like exp(20*alpha); keep the log so downstream bounds can
    // stay in log-domain.
    sv.log_delta_real = 0.5 * std::log(sv.alpha) + 20.0 * sv.alpha * (1.0 + sv.eps);
    sv.delta_real = std::exp(sv.log_delta_real);
    sv.delta_sched = sv.delta_real < kTwo53 ? std::ceil(sv.delta_real) : sv.delta_real;
    sv.u = sv.alpha / (2.0 * sv.delta_sched * sv.delta_sched);
    sv.s_star = std::clamp(std::ceil(k_bar * (1.0 - sv.u)), 0.0, k_bar);
    return sv;
}

ZP z_and_p(long long k_bar, double delta_geom, long long s) {
    if (s == 0)
        throw ParameterError("z_s is undefined at s=0; use the p_0 = 1 convention");
    if (s < 0 || s > k_bar)
        throw ParameterError("s must lie in [1, k_bar]");
    if (s == k_bar)
        return ZP{0.0, 0.0};
    const double z = static_cast<double>(k_bar - s) * 80.0 * delta_geom * delta_geom /
                     (static_cast<double>(s) - 0.5);
    return ZP{z, 1.0 / (1.0 + 1.0 / z)};
}

InequalityFlags check_inequalities(const ScheduleValues& sv) {
    InequalityFlags f;
    const double k = sv.k_bar + 1.0;
    const double u = sv.u;
    const double eps = sv.eps;
    const double delta = sv.delta_sched;

    f.i1 = (1.0 / k <= u) && (u < 0.5);
    // (1 + 40a)^Delta >= 1/u^2, compared in log-domain
    f.i2 = delta * std::log1p(40.0 * sv.alpha) >= -2.0 * std::log(u);
    f.i3 = 1.0 / sv.k_bar <= eps / 9.0;
    f.i4 = 1.0 / (80.0 * delta * delta) <= (eps / 3.0) * u;
    f.i5 = u + (eps / 3.0) * (1.0 + eps / 3.0) * u * u <= (eps / 3.0) * (eps / 3.0);
    return f;
}

InequalityFlags check_inequalities(double k_bar, double delta_exp) {
    return check_inequalities(schedule(k_bar, delta_exp));
}

ChainParams make_chain_params(long long k_bar, double delta_geom, long long s_star) {
    if (s_star < 0 || s_star > k_bar)
        throw ParameterError("s_star must lie in [0, k_bar]");
    ChainParams params;
    params.s_star = s_star;
    params.truncation = delta_geom;
    params.p.reserve(static_cast<std::size_t>(s_star));
    for (long long s = 0; s < s_star; ++s)
        params.p.push_back(s == 0 ? 1.0 : z_and_p(k_bar, delta_geom, s).p);
    return params;
}

double hitting_probability_dp(const ChainParams& params, long long steps) {
    if (steps < 0)
        throw ParameterError("steps must be nonnegative");
    const long long s_star = params.s_star;
    if (s_star == 0) return 1.0;

    // P[s] = probability of sitting in state s; absorption mass accumulates
    // in P[s_star].
    std::vector<double> prob(static_cast<std::size_t>(s_star) + 1, 0.0);
    prob[0] = 1.0;
    for (long long t = 0; t < steps; ++t) {
        for (long long s = s_star; s >= 1; --s) {
            const double in = prob[static_cast<std::size_t>(s - 1)] *
                              params.p[static_cast<std::size_t>(s - 1)];
            if (s == s_star)
                prob[static_cast<std::size_t>(s)] += in;
            else
                prob[static_cast<std::size_t>(s)] =
                    prob[static_cast<std::size_t>(s)] *
                        (1.0 - params.p[static_cast<std::size_t>(s)]) +
                    in;
        }
        prob[0] *= 1.0 - params.p[0];
    }
    return prob[static_cast<std::size_t>(s_star)];
}

bool simulate_chain(const ChainParams& params, long long steps, RngStream& rng) {
    long long s = 0;
    for (long long t = 0; t < steps && s < params.s_star; ++t)
        if (rng.bernoulli(params.p[static_cast<std::size_t>(s)])) ++s;
    return s >= params.s_star;
}

long long simulate_absorption_steps(const ChainParams& params, RngStream& rng, long long cap) {
    long long s = 0;
    long long t = 0;
    while (s < params.s_star && t < cap) {
        if (rng.bernoulli(params.p[static_cast<std::size_t>(s)])) ++s;
        ++t;
    }
    return t;
}

ExpectedSteps expected_steps(const ChainParams& params) {
    ExpectedSteps out;
    for (double p : params.p) {
        if (!(p > 0.0)) {
            out.finite = false;
            out.ex = out.ey = std::numeric_limits<double>::infinity();
            return out;
        }
        const double q = 1.0 - p;
        out.ex += 1.0 / p;
        out.ey += (1.0 - std::pow(q, params.truncation)) / p;
    }
    return out;
}

double hoeffding_bound(const ScheduleValues& sv) {
    if (!sv.valid)
        throw ScheduleError("hoeffding bound needs alpha > 1 (schedule valid)");
    // exponent = k_bar * 2 eps^2 u^2 / (9 Delta^2), assembled in log-domain
    const double log_delta = std::log(sv.delta_sched);
    const double log_exponent = std::log(sv.k_bar) + std::log(2.0) + 2.0 * std::log(sv.eps) +
                                2.0 * std::log(sv.u) - std::log(9.0) - 2.0 * log_delta;
    return std::exp(-std::exp(log_exponent));
}

double hoeffding_bound(double k_bar, double delta_exp) {
    return hoeffding_bound(schedule(k_bar, delta_exp));
}

TheoremBound theorem_bound(int k, double delta_exp) {
    if (k < 2)
        throw ParameterError("theorem bound needs k >= 2");
    TheoremBound out;
    const double pow2 = std::ldexp(1.0, -k);
    if (k - 1 <= 1) {
        out.value = 1.0;
        out.schedule_valid = false;
        return out;
    }
    const ScheduleValues sv = schedule(static_cast<double>(k - 1), delta_exp);
    if (!sv.valid) {
        out.value = 1.0;
        out.schedule_valid = false;
        return out;
    }
    out.value = std::min(1.0, pow2 + hoeffding_bound(sv));
    out.schedule_valid = true;
    return out;
}

} // namespace kmpp
