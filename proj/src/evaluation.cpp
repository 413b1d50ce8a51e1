#include "kmpp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kmpp/chain.hpp"

namespace kmpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// comparisons with symmetric relative slack; violations are only declared
// beyond kLemmaRelTol
bool leq_rel(double a, double b) {
    return a <= b + kLemmaRelTol * std::max(std::abs(a), std::abs(b));
}

bool geq_rel(double a, double b) { return leq_rel(b, a); }

void check_center_indices(std::size_t n_points, std::span<const int> centers) {
    for (int c : centers)
        if (c < 0 || static_cast<std::size_t>(c) >= n_points)
            throw ParameterError("center index " + std::to_string(c) + " out of range");
}

std::vector<Point> center_coords(std::span<const Location> points, std::span<const int> centers) {
    check_center_indices(points.size(), centers);
    std::vector<Point> coords;
    coords.reserve(centers.size());
    for (int c : centers) {
        const Location& loc = points[static_cast<std::size_t>(c)];
        coords.push_back(Point{loc.x, loc.y});
    }
    return coords;
}

bool at_origin(const Location& loc) { return loc.x == 0.0 && loc.y == 0.0; }

} // namespace

double potential(std::span<const Location> points, std::span<const Point> centers) {
    if (centers.empty())
        throw ParameterError("potential needs at least one center");
    double sum = 0.0;
    for (const Location& p : points) {
        double best = kInf;
        for (const Point& c : centers)
            best = std::min(best, squared_distance(p, c));
        sum += p.weight * best;
    }
    return sum;
}

double potential(std::span<const Location> points, std::span<const int> center_indices) {
    const std::vector<Point> coords = center_coords(points, center_indices);
    return potential(points, std::span<const Point>(coords));
}

CoverageState coverage_state(const Instance& instance, std::span<const int> centers) {
    check_center_indices(instance.locations.size(), centers);
    CoverageState state;
    std::vector<char> covered(static_cast<std::size_t>(instance.params.k), 0);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Location& loc = instance.locations[static_cast<std::size_t>(centers[i])];
        if (i == 0) state.xi = at_origin(loc);
        if (loc.group < 0) continue;
        if (loc.group >= 1) ++state.t;
        if (!covered[static_cast<std::size_t>(loc.group)]) {
            covered[static_cast<std::size_t>(loc.group)] = 1;
            if (loc.group >= 1) ++state.s;
        }
    }
    for (int g = 0; g < instance.params.k; ++g)
        if (covered[static_cast<std::size_t>(g)]) state.covered_groups.push_back(g);
    return state;
}

SplitPotential split_potential(const Instance& instance, std::span<const int> centers) {
    const std::vector<Point> coords = center_coords(instance.locations, centers);
    if (coords.empty())
        throw ParameterError("split_potential needs at least one center");
    std::vector<char> covered(static_cast<std::size_t>(instance.params.k), 0);
    for (int c : centers) {
        const int g = instance.locations[static_cast<std::size_t>(c)].group;
        if (g >= 0) covered[static_cast<std::size_t>(g)] = 1;
    }
    SplitPotential split;
    for (const Location& p : instance.locations) {
        double best = kInf;
        for (const Point& c : coords)
            best = std::min(best, squared_distance(p, c));
        const double contrib = p.weight * best;
        if (p.group == 0)
            split.phi_g0 += contrib;
        else if (covered[static_cast<std::size_t>(p.group)])
            split.phi_c += contrib;
        else
            split.phi_u += contrib;
    }
    return split;
}

namespace {

struct LemmaBounds {
    double lower11, upper12, lower13, z, p;
};

LemmaBounds bounds_at(const InstanceParams& params, int s) {
    const double k = params.k;
    const double mr2 = params.m * params.r * params.r;
    const double d2 = params.delta_geom * params.delta_geom;
    LemmaBounds b{};
    b.lower11 = (2.0 * s - 1.0) * k * mr2 / 4.0;
    b.upper12 = 40.0 * k * (k - s - 1.0) * mr2 * d2;
    b.lower13 = 4.0 * k * (k - s - 1.0) * mr2 * d2;
    if (s == 0) {
        b.z = kInf;
        b.p = 1.0; // p_0 = 1 convention instead of evaluating z at s = 0
    } else {
        const ZP zp = z_and_p(params.k - 1, params.delta_geom, s);
        b.z = zp.z;
        b.p = zp.p;
    }
    return b;
}

} // namespace

LemmaReport lemma_bound_report(const Instance& instance, std::span<const int> centers) {
    const CoverageState cov = coverage_state(instance, centers);
    bool origin_center = false;
    for (int c : centers)
        if (at_origin(instance.locations[static_cast<std::size_t>(c)])) origin_center = true;
    if (!origin_center)
        throw ConditioningError("lemma bounds are conditioned on a center at (0, 0)");
    if (cov.t > instance.params.k - 1)
        throw ConditioningError("more than k-1 centers outside the origin group");

    const SplitPotential split = split_potential(instance, centers);
    const LemmaBounds b = bounds_at(instance.params, cov.s);

    LemmaReport report;
    report.phi_c = split.phi_c;
    report.phi_u = split.phi_u;
    report.phi_g0 = split.phi_g0;
    report.s = cov.s;
    report.t = cov.t;
    report.lower11 = b.lower11;
    report.upper12 = b.upper12;
    report.lower13 = b.lower13;
    report.z_s = b.z;
    report.p_s = b.p;
    report.ok11 = geq_rel(split.phi_c, b.lower11);
    report.ok12 = leq_rel(split.phi_u, b.upper12);
    report.ok13 = geq_rel(split.phi_u, b.lower13);
    const double denom = split.phi_u + split.phi_c;
    const double uncovered_share = denom > 0.0 ? split.phi_u / denom : 0.0;
    report.ok_ps = leq_rel(uncovered_share, b.p);
    return report;
}

double approximation_ratio(const Instance& instance, std::span<const int> centers) {
    const std::vector<Point> coords = center_coords(instance.locations, centers);
    return approximation_ratio(instance, std::span<const Point>(coords));
}

double approximation_ratio(const Instance& instance, std::span<const Point> centers) {
    const double opt = optimal_cost_closed_form(instance.params);
    if (!(opt > 0.0))
        throw ParameterError("approximation ratio undefined for k=1 (zero optimal cost)");
    return potential(instance.locations, centers) / opt;
}

long long min_covered_for_alpha(long long k_bar, double delta_geom, double alpha) {
    if (k_bar < 0)
        throw ParameterError("k_bar must be nonnegative");
    if (!(delta_geom >= 1.0))
        throw ParameterError("delta must be >= 1");
    if (!(alpha > 0.0))
        throw ParameterError("alpha must be positive");
    const double u = alpha / (2.0 * delta_geom * delta_geom);
    const double raw = std::ceil(static_cast<double>(k_bar) * (1.0 - u));
    const double clamped = std::clamp(raw, 0.0, static_cast<double>(k_bar));
    return static_cast<long long>(clamped);
}

LemmaScan lemma_scan(const Instance& instance, std::span<const int> centers) {
    if (centers.empty())
        throw ParameterError("lemma_scan needs at least one center");
    check_center_indices(instance.locations.size(), centers);
    const int k = instance.params.k;
    const std::size_t n = instance.locations.size();

    LemmaScan out;
    out.xi = at_origin(instance.locations[static_cast<std::size_t>(centers[0])]);

    std::vector<double> d2(n, kInf);
    std::vector<double> group_pot(static_cast<std::size_t>(k), 0.0);
    std::vector<char> covered(static_cast<std::size_t>(k), 0);

    for (int c : centers) {
        const Location& cl = instance.locations[static_cast<std::size_t>(c)];
        if (cl.group < 0)
            throw ParameterError("lemma_scan needs family locations with group ids");
        const Point cp{cl.x, cl.y};

        std::fill(group_pot.begin(), group_pot.end(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(instance.locations[i], cp);
            if (d < d2[i]) d2[i] = d;
            const double contrib = instance.locations[i].weight * d2[i];
            group_pot[static_cast<std::size_t>(instance.locations[i].group)] += contrib;
            total += contrib;
        }
        out.final_potential = total;

        if (cl.group >= 1) {
            ++out.t_centers;
            if (!covered[static_cast<std::size_t>(cl.group)]) ++out.covered;
        }
        covered[static_cast<std::size_t>(cl.group)] = 1;

        if (!out.xi) continue;
        const int s = out.covered;
        double phi_c = 0.0, phi_u = 0.0;
        for (int g = 1; g < k; ++g) {
            if (covered[static_cast<std::size_t>(g)])
                phi_c += group_pot[static_cast<std::size_t>(g)];
            else
                phi_u += group_pot[static_cast<std::size_t>(g)];
        }
        const LemmaBounds b = bounds_at(instance.params, s);
        out.lemma11_ok = out.lemma11_ok && geq_rel(phi_c, b.lower11);
        out.lemma12_ok = out.lemma12_ok && leq_rel(phi_u, b.upper12);
        out.lemma13_ok = out.lemma13_ok && geq_rel(phi_u, b.lower13);
        const double denom = phi_u + phi_c;
        const double uncovered_share = denom > 0.0 ? phi_u / denom : 0.0;
        out.psbound_ok = out.psbound_ok && leq_rel(uncovered_share, b.p);
    }
    return out;
}

} // namespace kmpp
