#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmpp/instance.hpp"

namespace kmpp {

struct PartitionResult {
    std::vector<int> assignment;  // cluster id per input location
    std::vector<Point> centers;   // weighted centroid of each cluster
    double cost = 0.0;
};

// Exact optimum by exhaustive partition enumeration (restricted-growth
// strings) over co-located-merged atoms, with branch-and-bound pruning.
// Centers are continuous weighted centroids. Ties break toward the
// lexicographically smallest growth string. Throws BudgetError when the
// merged atom count exceeds max_locations.
PartitionResult brute_force_optimal(std::span<const Location> points, int k,
                                    int max_locations = 16);

// probability of each location under the uniform (weight-proportional)
// first draw
std::vector<double> first_center_distribution(std::span<const Location> points);

struct SeedingOutcome {
    std::vector<int> sequence; // center location indices in pick order
    double prob = 0.0;
};

struct SeedingDistribution {
    std::vector<SeedingOutcome> outcomes;
};

// Full outcome tree of k rounds of D^2 sampling with exact sequence
// probabilities (zero-probability branches pruned). Uses the same
// zero-residual fallback as kmeanspp_seed. Throws BudgetError when
// (#locations)^k exceeds max_sequences.
SeedingDistribution exact_seeding_distribution(std::span<const Location> points, int k,
                                               std::uint64_t max_sequences = 1000000);

// Exact marginals over an outcome tree. pr_covered_at_least counts groups
// (G_0 included) holding at least one center.
double pr_xi(const SeedingDistribution& dist, std::span<const Location> points);
double pr_covered_at_least(const SeedingDistribution& dist, const Instance& instance, int c);
double pr_ratio_at_most(const SeedingDistribution& dist, const Instance& instance, double alpha);

} // namespace kmpp
