#pragma once

#include <span>
#include <vector>

#include "kmpp/instance.hpp"

namespace kmpp {

// Relative tolerance applied to every closed-form comparison before a
// violation is declared.
inline constexpr double kLemmaRelTol = 1e-9;

// Weighted sum of squared distances to the nearest center.
double potential(std::span<const Location> points, std::span<const Point> centers);
double potential(std::span<const Location> points, std::span<const int> center_indices);

struct CoverageState {
    std::vector<int> covered_groups; // ascending group ids holding >= 1 center
    int s = 0;   // covered among G_1..G_{k-1}
    int t = 0;   // centers among G_1..G_{k-1}
    bool xi = false;
};

CoverageState coverage_state(const Instance& instance, std::span<const int> centers);

// Potential split over G_1..G_{k-1}; G_0 is accounted separately so
// unconditioned center sets stay analyzable.
struct SplitPotential {
    double phi_c = 0.0;
    double phi_u = 0.0;
    double phi_g0 = 0.0;
};

SplitPotential split_potential(const Instance& instance, std::span<const int> centers);

struct LemmaReport {
    double phi_c = 0.0;
    double phi_u = 0.0;
    double phi_g0 = 0.0;
    int s = 0;
    int t = 0;
    double lower11 = 0.0; // (2s-1) * k*m*r^2 / 4
    double upper12 = 0.0; // 40k * (k-s-1) * m*r^2 * Delta^2
    double lower13 = 0.0; // 4k * (k-s-1) * m*r^2 * Delta^2
    double z_s = 0.0;     // +inf at s = 0 (p_0 = 1 convention)
    double p_s = 1.0;
    bool ok11 = false;
    bool ok12 = false;
    bool ok13 = false;
    bool ok_ps = false;
};

// Checks the covered/uncovered potential bounds for one center set.
// Requires a center at the origin site and at most k-1 centers outside
// G_0; throws ConditioningError otherwise. Checks report, they do not
// assert: flags are plain comparisons at kLemmaRelTol.
LemmaReport lemma_bound_report(const Instance& instance, std::span<const int> centers);

// potential / optimal_cost_closed_form; domain error for k = 1.
double approximation_ratio(const Instance& instance, std::span<const int> centers);
double approximation_ratio(const Instance& instance, std::span<const Point> centers);

// s* = ceil(k_bar * (1 - alpha / (2*Delta^2))) clamped to [0, k_bar]:
// the fewest covered groups among G_1..G_{k_bar} any alpha-approximate
// clustering can have.
long long min_covered_for_alpha(long long k_bar, double delta_geom, double alpha);

// Walks the prefix states of a center sequence and accumulates the lemma
// flags the way run_trials records them. Exposed for reuse by the trial
// driver and the tests.
struct LemmaScan {
    bool xi = false;
    int covered = 0;
    int t_centers = 0;
    double final_potential = 0.0;
    bool lemma11_ok = true;
    bool lemma12_ok = true;
    bool lemma13_ok = true;
    bool psbound_ok = true;
};

LemmaScan lemma_scan(const Instance& instance, std::span<const int> centers);

} // namespace kmpp
