#include "kmpp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kmpp {

double quarter_geom_sum(int terms) {
    double sum = 0.0;
    double term = 1.0;
    for (int i = 0; i < terms; ++i) {
        sum += term;
        term *= 0.25;
    }
    return sum;
}

void validate_params(const InstanceParams& params) {
    if (params.k < 1)
        throw ParameterError("k must be at least 1, got " + std::to_string(params.k));
    if (!(params.m > 0.0) || !std::isfinite(params.m))
        throw ParameterError("m must be a positive real");
    if (!(params.r > 0.0) || !std::isfinite(params.r))
        throw ParameterError("r must be a positive real");
    if (!(params.delta_geom >= 1.0) || !std::isfinite(params.delta_geom))
        throw ParameterError("delta must be a real >= 1");
}

namespace {

double group_x(const InstanceParams& params, int group) {
    // delta * (r_1 + ... + r_group) = delta * (2^group - 1) * r
    return params.delta_geom * (std::ldexp(1.0, group) - 1.0) * params.r;
}

double base_mass(const InstanceParams& params, int group) {
    // m_i = m / 4^{i-1}
    return params.m * std::ldexp(1.0, -2 * (group - 1));
}

} // namespace

Instance build_instance(const InstanceParams& params) {
    validate_params(params);
    const int k = params.k;

    Instance inst;
    inst.params = params;
    inst.locations.reserve(static_cast<std::size_t>(1 + (k - 1) * (2 * k + 1)));

    inst.locations.push_back(Location{0, 0, 0.0, 0.0, group_mass(params, 0)});

    for (int i = 1; i < k; ++i) {
        const double x = group_x(params, i);
        const double mi = base_mass(params, i);
        // levels -(i+k-1) .. -(i), 0, i .. i+k-1, ascending
        for (int off = k - 1; off >= 0; --off) {
            const int level = i + off;
            const double w = mi * std::ldexp(1.0, -2 * off);
            const double y = std::ldexp(1.0, level - 1) * params.r;
            inst.locations.push_back(Location{i, -level, x, -y, w});
        }
        inst.locations.push_back(Location{i, 0, x, 0.0, 4.0 * k * mi});
        for (int off = 0; off < k; ++off) {
            const int level = i + off;
            const double w = mi * std::ldexp(1.0, -2 * off);
            const double y = std::ldexp(1.0, level - 1) * params.r;
            inst.locations.push_back(Location{i, level, x, y, w});
        }
    }

    std::sort(inst.locations.begin(), inst.locations.end(),
              [](const Location& a, const Location& b) {
                  if (a.group != b.group) return a.group < b.group;
                  return a.level < b.level;
              });

    inst.group_masses.resize(static_cast<std::size_t>(k), 0.0);
    for (const Location& loc : inst.locations)
        inst.group_masses[static_cast<std::size_t>(loc.group)] += loc.weight;
    inst.total_mass = 0.0;
    for (double mass : inst.group_masses)
        inst.total_mass += mass;
    return inst;
}

std::vector<Point> optimal_centers(const InstanceParams& params) {
    validate_params(params);
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(params.k));
    for (int i = 0; i < params.k; ++i)
        centers.push_back(Point{group_x(params, i), 0.0});
    return centers;
}

double optimal_cost_closed_form(const InstanceParams& params) {
    validate_params(params);
    return 2.0 * params.k * (params.k - 1) * params.m * params.r * params.r;
}

double group_mass(const InstanceParams& params, int group) {
    validate_params(params);
    if (group < 0 || group >= params.k)
        throw ParameterError("group index " + std::to_string(group) + " out of range for k=" +
                             std::to_string(params.k));
    if (group == 0)
        return 12.0 * params.k * std::ldexp(1.0, params.k) * params.m;
    return base_mass(params, group) * (4.0 * params.k + 2.0 * quarter_geom_sum(params.k));
}

double level_weight(const InstanceParams& params, int group, int level) {
    validate_params(params);
    if (group < 0 || group >= params.k)
        throw ParameterError("group index " + std::to_string(group) + " out of range for k=" +
                             std::to_string(params.k));
    if (group == 0) {
        if (level != 0)
            throw ParameterError("group 0 has only the axis site");
        return group_mass(params, 0);
    }
    if (level == 0)
        return 4.0 * params.k * base_mass(params, group);
    const int a = std::abs(level);
    if (a < group || a > group + params.k - 1)
        return 0.0;
    return params.m * std::ldexp(1.0, -2 * (a - 1));
}

double squared_distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double squared_distance(const Location& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

} // namespace kmpp
