#include "kmpp/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "kmpp/evaluation.hpp"

namespace kmpp {

std::size_t weighted_choice(std::span<const double> weights, RngStream& rng) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw SamplingError("weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0))
        throw SamplingError("total weight must be positive");

    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (u < acc) return i;
    }
    // u landed on the rounding slack past the final cumulative sum
    return last_positive;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct D2State {
    std::vector<double> d2;       // squared distance to nearest chosen center
    std::vector<double> mass_d2;  // weight * d2, the sampling weights
    std::vector<bool> chosen;
    double potential = kInf;      // sum of mass_d2 once a center exists

    explicit D2State(std::span<const Location> points)
        : d2(points.size(), kInf), mass_d2(points.size(), 0.0), chosen(points.size(), false) {}

    void add_center(std::span<const Location> points, int c) {
        chosen[static_cast<std::size_t>(c)] = true;
        const Point cp{points[static_cast<std::size_t>(c)].x, points[static_cast<std::size_t>(c)].y};
        double pot = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double d = squared_distance(points[i], cp);
            if (d < d2[i]) d2[i] = d;
            mass_d2[i] = points[i].weight * d2[i];
            pot += mass_d2[i];
        }
        potential = pot;
    }
};

int draw_next(std::span<const Location> points, const D2State& state, RngStream& rng) {
    if (state.potential > 0.0)
        return static_cast<int>(weighted_choice(state.mass_d2, rng));
    // Residual potential is exactly zero: fall back to a weight-proportional
    // draw over the locations not chosen yet.
    std::vector<double> w(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!state.chosen[i]) w[i] = points[i].weight;
    return static_cast<int>(weighted_choice(w, rng));
}

} // namespace

int sample_next_center(std::span<const Location> points, std::span<const int> centers,
                       RngStream& rng) {
    D2State state(points);
    for (int c : centers) {
        if (c < 0 || static_cast<std::size_t>(c) >= points.size())
            throw ParameterError("center index out of range");
        state.add_center(points, c);
    }
    if (centers.empty()) {
        std::vector<double> w(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) w[i] = points[i].weight;
        return static_cast<int>(weighted_choice(w, rng));
    }
    return draw_next(points, state, rng);
}

SeedingResult kmeanspp_seed(std::span<const Location> points, int k, RngStream& rng) {
    if (k < 1)
        throw ParameterError("k must be at least 1");
    if (static_cast<std::size_t>(k) > points.size())
        throw ParameterError("k=" + std::to_string(k) + " exceeds the " +
                             std::to_string(points.size()) + " available locations");

    SeedingResult result;
    result.centers.reserve(static_cast<std::size_t>(k));
    result.trace.steps.reserve(static_cast<std::size_t>(k));

    D2State state(points);
    int covered_s = 0;
    int centers_t = 0;
    std::vector<bool> group_covered;

    for (int it = 0; it < k; ++it) {
        const double before = state.potential;
        int c;
        if (it == 0) {
            std::vector<double> w(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) w[i] = points[i].weight;
            c = static_cast<int>(weighted_choice(w, rng));
            result.trace.xi = points[static_cast<std::size_t>(c)].x == 0.0 &&
                              points[static_cast<std::size_t>(c)].y == 0.0;
        } else {
            c = draw_next(points, state, rng);
        }
        state.add_center(points, c);
        result.centers.push_back(c);

        const int g = points[static_cast<std::size_t>(c)].group;
        if (g >= 1) {
            ++centers_t;
            if (static_cast<std::size_t>(g) >= group_covered.size())
                group_covered.resize(static_cast<std::size_t>(g) + 1, false);
            if (!group_covered[static_cast<std::size_t>(g)]) {
                group_covered[static_cast<std::size_t>(g)] = true;
                ++covered_s;
            }
        }
        result.trace.steps.push_back(TraceStep{c, before, covered_s, centers_t});
    }
    return result;
}

std::vector<Point> lloyd(std::span<const Location> points, std::vector<Point> centers,
                         int max_iters, double tol) {
    if (centers.empty())
        throw ParameterError("lloyd needs at least one start center");
    if (!(tol >= 0.0))
        throw ParameterError("tol must be nonnegative");

    double prev = potential(points, std::span<const Point>(centers));
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> wsum(centers.size(), 0.0);
        std::vector<double> xsum(centers.size(), 0.0);
        std::vector<double> ysum(centers.size(), 0.0);
        for (const Location& p : points) {
            std::size_t best = 0;
            double bestd = kInf;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = squared_distance(p, centers[c]);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            wsum[best] += p.weight;
            xsum[best] += p.weight * p.x;
            ysum[best] += p.weight * p.y;
        }
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (wsum[c] > 0.0)
                centers[c] = Point{xsum[c] / wsum[c], ysum[c] / wsum[c]};
            // empty clusters keep their previous center
        }
        const double cur = potential(points, std::span<const Point>(centers));
        if (prev - cur <= tol) break;
        prev = cur;
    }
    return centers;
}

namespace {

TrialRecord run_one_trial(const Instance& instance, int trial, std::uint64_t base_seed,
                          double alpha) {
    RngStream rng(base_seed, static_cast<std::uint64_t>(trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = rng.derived_seed();

    const SeedingResult seeded =
        kmeanspp_seed(instance.locations, instance.params.k, rng);
    const LemmaScan scan = lemma_scan(instance, seeded.centers);

    rec.xi = scan.xi;
    rec.covered = scan.covered;
    rec.t_centers = scan.t_centers;
    const double opt = optimal_cost_closed_form(instance.params);
    rec.ratio = opt > 0.0 ? scan.final_potential / opt
                          : std::numeric_limits<double>::quiet_NaN();
    rec.success = rec.ratio <= alpha;
    rec.lemma11_ok = scan.lemma11_ok;
    rec.lemma12_ok = scan.lemma12_ok;
    rec.lemma13_ok = scan.lemma13_ok;
    rec.psbound_ok = scan.psbound_ok;
    return rec;
}

} // namespace

std::vector<TrialRecord> run_trials(const Instance& instance, int trials,
                                    std::uint64_t base_seed, double alpha, int threads) {
    if (trials < 1)
        throw ParameterError("trials must be at least 1");
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, trials);

    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
    if (threads == 1) {
        for (int t = 0; t < trials; ++t)
            records[static_cast<std::size_t>(t)] = run_one_trial(instance, t, base_seed, alpha);
        return records;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (int t = w; t < trials; t += threads)
                records[static_cast<std::size_t>(t)] = run_one_trial(instance, t, base_seed, alpha);
        });
    }
    for (std::thread& th : pool) th.join();
    return records;
}

} // namespace kmpp
