#include "kmpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kmpp/evaluation.hpp"

namespace kmpp {

namespace {

struct Atom {
    double x, y, weight;
    std::vector<int> members; // original location indices
};

// Co-located mass always has an optimal assignment that keeps it together,
// so merge it before enumerating partitions.
std::vector<Atom> merge_colocated(std::span<const Location> points) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool merged = false;
        for (Atom& a : atoms) {
            if (a.x == points[i].x && a.y == points[i].y) {
                a.weight += points[i].weight;
                a.members.push_back(static_cast<int>(i));
                merged = true;
                break;
            }
        }
        if (!merged)
            atoms.push_back(Atom{points[i].x, points[i].y, points[i].weight,
                                 {static_cast<int>(i)}});
    }
    return atoms;
}

// Accumulators for one cluster of a candidate partition. The weighted SSE
// about the centroid is sum w*(x^2+y^2) - (|sum w*x|^2 + |sum w*y|^2)/sum w.
struct ClusterAcc {
    double w = 0.0, wx = 0.0, wy = 0.0, wsq = 0.0;

    void add(const Atom& a) {
        w += a.weight;
        wx += a.weight * a.x;
        wy += a.weight * a.y;
        wsq += a.weight * (a.x * a.x + a.y * a.y);
    }
    void remove(const Atom& a) {
        w -= a.weight;
        wx -= a.weight * a.x;
        wy -= a.weight * a.y;
        wsq -= a.weight * (a.x * a.x + a.y * a.y);
    }
    double cost() const {
        if (!(w > 0.0)) return 0.0;
        const double c = wsq - (wx * wx + wy * wy) / w;
        return c > 0.0 ? c : 0.0;
    }
};

struct Enumerator {
    const std::vector<Atom>& atoms;
    int max_parts;
    std::vector<int> rgs;      // restricted growth string under construction
    std::vector<ClusterAcc> acc;
    std::vector<double> cost_of; // per-cluster cost cache
    double partial_cost = 0.0;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> best_rgs;

    Enumerator(const std::vector<Atom>& a, int k)
        : atoms(a), max_parts(k), rgs(a.size(), -1),
          acc(std::min<std::size_t>(a.size(), static_cast<std::size_t>(k))),
          cost_of(acc.size(), 0.0) {}

    void run() { descend(0, 0); }

    void descend(std::size_t i, int used) {
        if (i == atoms.size()) {
            // the running sum drifts over millions of push/pop updates, so
            // recompute the candidate exactly before comparing; strict
            // improvement keeps the lexicographically first optimum
            double exact = 0.0;
            for (int c = 0; c < used; ++c) exact += acc[static_cast<std::size_t>(c)].cost();
            if (exact < best_cost) {
                best_cost = exact;
                best_rgs = rgs;
            }
            return;
        }
        // adding atoms never lowers a cluster's SSE, so prune on the partial sum
        if (partial_cost > best_cost) return;
        const int limit = std::min(used, max_parts - 1);
        for (int c = 0; c <= limit; ++c) {
            const double old_cost = cost_of[static_cast<std::size_t>(c)];
            acc[static_cast<std::size_t>(c)].add(atoms[i]);
            const double new_cost = acc[static_cast<std::size_t>(c)].cost();
            cost_of[static_cast<std::size_t>(c)] = new_cost;
            partial_cost += new_cost - old_cost;
            rgs[i] = c;

            descend(i + 1, std::max(used, c + 1));

            partial_cost -= new_cost - old_cost;
            cost_of[static_cast<std::size_t>(c)] = old_cost;
            acc[static_cast<std::size_t>(c)].remove(atoms[i]);
            rgs[i] = -1;
        }
    }
};

} // namespace

PartitionResult brute_force_optimal(std::span<const Location> points, int k,
                                    int max_locations) {
    if (k < 1)
        throw ParameterError("k must be at least 1");
    if (points.empty())
        throw ParameterError("need at least one location");

    const std::vector<Atom> atoms = merge_colocated(points);
    if (static_cast<int>(atoms.size()) > max_locations)
        throw BudgetError("brute force refused: " + std::to_string(atoms.size()) +
                          " distinct locations exceed the budget of " +
                          std::to_string(max_locations));

    Enumerator e(atoms, k);
    e.run();

    PartitionResult result;
    result.cost = e.best_cost;
    result.assignment.assign(points.size(), 0);
    int parts = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        parts = std::max(parts, e.best_rgs[i] + 1);
        for (int member : atoms[i].members)
            result.assignment[static_cast<std::size_t>(member)] = e.best_rgs[i];
    }
    std::vector<ClusterAcc> acc(static_cast<std::size_t>(parts));
    for (std::size_t i = 0; i < atoms.size(); ++i)
        acc[static_cast<std::size_t>(e.best_rgs[i])].add(atoms[i]);
    for (const ClusterAcc& a : acc)
        result.centers.push_back(Point{a.wx / a.w, a.wy / a.w});
    return result;
}

std::vector<double> first_center_distribution(std::span<const Location> points) {
    double total = 0.0;
    for (const Location& p : points) {
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
            throw SamplingError("weights must be finite and nonnegative");
        total += p.weight;
    }
    if (!(total > 0.0))
        throw SamplingError("total weight must be positive");
    std::vector<double> probs;
    probs.reserve(points.size());
    for (const Location& p : points)
        probs.push_back(p.weight / total);
    return probs;
}

namespace {

struct TreeWalker {
    std::span<const Location> points;
    int k;
    SeedingDistribution dist;
    std::vector<int> sequence;

    void walk(const std::vector<double>& d2, double prob) {
        if (static_cast<int>(sequence.size()) == k) {
            dist.outcomes.push_back(SeedingOutcome{sequence, prob});
            return;
        }
        std::vector<double> weights(points.size(), 0.0);
        double total = 0.0;
        if (sequence.empty()) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                weights[i] = points[i].weight;
                total += weights[i];
            }
        } else {
            for (std::size_t i = 0; i < points.size(); ++i) {
                weights[i] = points[i].weight * d2[i];
                total += weights[i];
            }
            if (total == 0.0) {
                // zero residual: weight-proportional over unchosen locations,
                // matching kmeanspp_seed
                for (std::size_t i = 0; i < points.size(); ++i) {
                    const bool chosen =
                        std::find(sequence.begin(), sequence.end(), static_cast<int>(i)) !=
                        sequence.end();
                    weights[i] = chosen ? 0.0 : points[i].weight;
                    total += weights[i];
                }
            }
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            std::vector<double> next_d2(points.size());
            const Point cp{points[i].x, points[i].y};
            for (std::size_t j = 0; j < points.size(); ++j)
                next_d2[j] = std::min(d2[j], squared_distance(points[j], cp));
            sequence.push_back(static_cast<int>(i));
            walk(next_d2, prob * weights[i] / total);
            sequence.pop_back();
        }
    }
};

} // namespace

SeedingDistribution exact_seeding_distribution(std::span<const Location> points, int k,
                                               std::uint64_t max_sequences) {
    if (k < 1)
        throw ParameterError("k must be at least 1");
    if (static_cast<std::size_t>(k) > points.size())
        throw ParameterError("k exceeds the number of locations");
    const double budget = std::pow(static_cast<double>(points.size()), k);
    if (budget > static_cast<double>(max_sequences))
        throw BudgetError("exact seeding refused: " + std::to_string(points.size()) + "^" +
                          std::to_string(k) + " sequences exceed the budget of " +
                          std::to_string(max_sequences));

    TreeWalker walker{points, k, {}, {}};
    walker.walk(std::vector<double>(points.size(), std::numeric_limits<double>::infinity()),
                1.0);
    return walker.dist;
}

double pr_xi(const SeedingDistribution& dist, std::span<const Location> points) {
    double p = 0.0;
    for (const SeedingOutcome& o : dist.outcomes) {
        const Location& first = points[static_cast<std::size_t>(o.sequence.front())];
        if (first.x == 0.0 && first.y == 0.0) p += o.prob;
    }
    return p;
}

double pr_covered_at_least(const SeedingDistribution& dist, const Instance& instance, int c) {
    double p = 0.0;
    for (const SeedingOutcome& o : dist.outcomes) {
        std::vector<char> covered(static_cast<std::size_t>(instance.params.k), 0);
        int groups = 0;
        for (int idx : o.sequence) {
            const int g = instance.locations[static_cast<std::size_t>(idx)].group;
            if (g >= 0 && !covered[static_cast<std::size_t>(g)]) {
                covered[static_cast<std::size_t>(g)] = 1;
                ++groups;
            }
        }
        if (groups >= c) p += o.prob;
    }
    return p;
}

double pr_ratio_at_most(const SeedingDistribution& dist, const Instance& instance,
                        double alpha) {
    double p = 0.0;
    for (const SeedingOutcome& o : dist.outcomes) {
        const double ratio =
            approximation_ratio(instance, std::span<const int>(o.sequence));
        if (ratio <= alpha) p += o.prob;
    }
    return p;
}

} // namespace kmpp
