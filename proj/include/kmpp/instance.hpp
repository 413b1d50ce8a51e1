#pragma once

#include <span>
#include <vector>

#include "kmpp/errors.hpp"

namespace kmpp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Parameters of the planar instance family. delta_geom is the horizontal
// spacing multiplier of the groups; it is a free parameter here and only
// tied to the chain schedule when the caller asks for that.
struct InstanceParams {
    int k = 1;
    double m = 1.0;
    double r = 1.0;
    double delta_geom = 1.0;
};

// One atomic weighted site. group/level are -1 for generic point sets
// loaded from JSON that are not members of the family.
struct Location {
    int group = -1;
    int level = 0;
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
};

struct Instance {
    InstanceParams params;
    std::vector<Location> locations; // sorted by (group, level)
    double total_mass = 0.0;
    std::vector<double> group_masses; // M_0 .. M_{k-1}
};

// Truncated geometric series 1 + 1/4 + ... + 1/4^{terms-1}; 0 for terms <= 0.
double quarter_geom_sum(int terms);

// Throws ParameterError unless k >= 1, m > 0, r > 0, delta_geom >= 1.
void validate_params(const InstanceParams& params);

// Builds the weighted point set: group 0 is a single heavy site at the
// origin; group i >= 1 has an axis site plus symmetric off-axis levels with
// geometrically decaying weights. Location count is 1 + (k-1)*(2k+1).
Instance build_instance(const InstanceParams& params);

// The k optimal centers (x_i, 0) with x_i = delta_geom * (2^i - 1) * r.
std::vector<Point> optimal_centers(const InstanceParams& params);

// Cost of the optimal clustering: 2*k*(k-1)*m*r^2.
double optimal_cost_closed_form(const InstanceParams& params);

// Total weight of group i: M_0 = 12*k*2^k*m, M_i = m_i*(4k + 2*w(k)).
double group_mass(const InstanceParams& params, int group);

// Weight sitting at level `level` of group `group`. For level 0 this is the
// axis mass; for |level| in [group, group+k-1] it is m/4^{|level|-1}, else 0.
// group 0 carries only the axis site, so level != 0 there is a domain error.
double level_weight(const InstanceParams& params, int group, int level);

double squared_distance(const Point& a, const Point& b);
double squared_distance(const Location& a, const Point& b);

} // namespace kmpp
