#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kmpp/instance.hpp"
#include "kmpp/rng.hpp"

namespace kmpp {

// Draws an index with probability weights[i] / sum(weights). Zero-weight
// indices are never returned. Throws SamplingError on negative, NaN or
// all-zero weights.
std::size_t weighted_choice(std::span<const double> weights, RngStream& rng);

struct TraceStep {
    int chosen = -1;
    // Residual potential before this draw; +inf for the very first draw,
    // where no center exists yet and the draw is weight-proportional.
    double potential_before = 0.0;
    int covered_s = 0;  // covered groups among G_1..G_{k-1} after the draw
    int centers_t = 0;  // centers among G_1..G_{k-1} after the draw
};

struct SeedingTrace {
    bool xi = false; // first center sits at (0, 0)
    std::vector<TraceStep> steps;
};

struct SeedingResult {
    std::vector<int> centers; // location indices, in pick order
    SeedingTrace trace;
};

// One D^2 draw given fixed centers: probability proportional to
// weight * squared distance to the nearest center. Falls back to a
// weight-proportional draw over unchosen locations when the residual
// potential is exactly zero. Exposed so the one-step law is testable.
int sample_next_center(std::span<const Location> points,
                       std::span<const int> centers, RngStream& rng);

SeedingResult kmeanspp_seed(std::span<const Location> points, int k, RngStream& rng);

// Weighted Lloyd refinement from the given start centers. Assignment ties
// break toward the lowest center index; empty clusters keep their previous
// center. Stops when the potential improves by at most tol or after
// max_iters rounds.
std::vector<Point> lloyd(std::span<const Location> points, std::vector<Point> centers,
                         int max_iters, double tol);

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    bool xi = false;
    int covered = 0;
    int t_centers = 0;
    double ratio = 0.0;
    bool success = false;
    // Per-trial AND over all post-draw states; vacuously true when !xi.
    bool lemma11_ok = true;
    bool lemma12_ok = true;
    bool lemma13_ok = true;
    bool psbound_ok = true;
};

// Runs `trials` seeded k-means++ runs on the instance. Trial t draws from
// RngStream(base_seed, t), so records are independent of thread count and
// merge in trial order. success means ratio <= alpha.
std::vector<TrialRecord> run_trials(const Instance& instance, int trials,
                                    std::uint64_t base_seed, double alpha,
                                    int threads = 1);

} // namespace kmpp
