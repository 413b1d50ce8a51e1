#pragma once

#include <cstdint>
#include <vector>

#include "kmpp/errors.hpp"
#include "kmpp/rng.hpp"

namespace kmpp {

// The k_bar-dependent parameter schedule. All logs are natural. Values
// that can blow past binary64 are carried in log-domain alongside.
struct ScheduleValues {
    double k_bar = 0.0;
    double delta_exp = 0.0;   // the exponent delta in (0, 1/120]
    double alpha = 0.0;       // delta_exp * log(k_bar)
    double eps = 0.0;         // log(alpha) / (120 * alpha)
    double log_delta_real = 0.0; // log of the pre-ceiling spacing
    double delta_real = 0.0;     // sqrt(alpha) * exp(20*alpha*(1+eps))
    double delta_sched = 0.0;    // ceil(delta_real) while < 2^53, else delta_real
    double u = 0.0;              // alpha / (2 * delta_sched^2)
    double s_star = 0.0;         // ceil(k_bar*(1-u)) clamped to [0, k_bar]
    bool valid = false;          // alpha > 1, i.e. eps > 0
};

// Throws ScheduleError unless k_bar > 1 and delta_exp in (0, 1/120].
// alpha <= 1 yields valid = false (the schedule only bites asymptotically)
// but still returns the values.
ScheduleValues schedule(double k_bar, double delta_exp);

struct ZP {
    double z = 0.0;
    double p = 0.0;
};

// z_s = (k_bar - s) * 80 * Delta^2 / (s - 1/2) and p_s = 1/(1 + 1/z_s).
// s = k_bar gives z = 0, p = 0. s = 0 is a convention error: use p_0 = 1.
ZP z_and_p(long long k_bar, double delta_geom, long long s);

struct InequalityFlags {
    bool i1 = false;
    bool i2 = false;
    bool i3 = false;
    bool i4 = false;
    bool i5 = false;
};

InequalityFlags check_inequalities(const ScheduleValues& sv);
InequalityFlags check_inequalities(double k_bar, double delta_exp);

// Linear chain v_0 .. v_{s_star} with forward probabilities p[s] and
// self-loops 1-p[s]; truncation doubles as the cap on Y_s.
struct ChainParams {
    long long s_star = 0;
    std::vector<double> p; // size s_star, p[0] = 1
    double truncation = 1.0;
};

ChainParams make_chain_params(long long k_bar, double delta_geom, long long s_star);

// Exact probability (up to roundoff) that the chain started at v_0 is
// absorbed at v_{s_star} within `steps` transitions.
double hitting_probability_dp(const ChainParams& params, long long steps);

bool simulate_chain(const ChainParams& params, long long steps, RngStream& rng);

// Steps until absorption for one walk, capped at `cap` (returns cap if the
// walk is still unabsorbed there).
long long simulate_absorption_steps(const ChainParams& params, RngStream& rng,
                                    long long cap);

struct ExpectedSteps {
    double ex = 0.0; // sum 1/p_s
    double ey = 0.0; // sum (1 - q_s^truncation) / p_s
    bool finite = true;
};

ExpectedSteps expected_steps(const ChainParams& params);

// exp(-k_bar * 2 eps^2 u^2 / (9 Delta^2)), evaluated in log-domain.
// Throws ScheduleError when the schedule is not valid (alpha <= 1).
double hoeffding_bound(const ScheduleValues& sv);
double hoeffding_bound(double k_bar, double delta_exp);

struct TheoremBound {
    double value = 1.0;
    bool schedule_valid = false;
};

// min(1, 2^-k + hoeffding_bound(k-1, delta)); value 1 with
// schedule_valid=false where the schedule does not apply.
TheoremBound theorem_bound(int k, double delta_exp);

} // namespace kmpp
