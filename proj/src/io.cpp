#include "kmpp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kmpp {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string instance_to_json(const Instance& instance) {
    std::ostringstream out;
    out << "{\"k\":" << instance.params.k
        << ",\"m\":" << format_double(instance.params.m)
        << ",\"r\":" << format_double(instance.params.r)
        << ",\"delta\":" << format_double(instance.params.delta_geom)
        << ",\"locations\":[";
    for (std::size_t i = 0; i < instance.locations.size(); ++i) {
        const Location& loc = instance.locations[i];
        if (i) out << ",";
        out << "\n{\"group\":" << loc.group << ",\"level\":" << loc.level
            << ",\"x\":" << format_double(loc.x) << ",\"y\":" << format_double(loc.y)
            << ",\"weight\":" << format_double(loc.weight) << "}";
    }
    out << "\n]}\n";
    return out.str();
}

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw IoError("malformed JSON");
    return j;
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw IoError(std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

} // namespace

Instance instance_from_json(const std::string& text) {
    const json j = parse(text);
    Instance inst;
    inst.params.k = static_cast<int>(require_number(j, "k"));
    inst.params.m = require_number(j, "m");
    inst.params.r = require_number(j, "r");
    inst.params.delta_geom = require_number(j, "delta");
    if (!j.contains("locations") || !j.at("locations").is_array())
        throw IoError("missing 'locations' array");

    int max_group = -1;
    for (const json& e : j.at("locations")) {
        Location loc;
        loc.group = static_cast<int>(require_number(e, "group"));
        loc.level = static_cast<int>(require_number(e, "level"));
        loc.x = require_number(e, "x");
        loc.y = require_number(e, "y");
        loc.weight = require_number(e, "weight");
        max_group = std::max(max_group, loc.group);
        inst.locations.push_back(loc);
    }
    if (inst.locations.empty())
        throw IoError("instance has no locations");

    const int groups = std::max(inst.params.k, max_group + 1);
    inst.group_masses.assign(static_cast<std::size_t>(groups), 0.0);
    for (const Location& loc : inst.locations) {
        inst.total_mass += loc.weight;
        if (loc.group >= 0)
            inst.group_masses[static_cast<std::size_t>(loc.group)] += loc.weight;
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    return instance_from_json(load_text(path));
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

std::string load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::variant<std::vector<int>, std::vector<Point>> centers_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_array() || j.empty())
        throw IoError("centers JSON must be a nonempty array");
    if (j.front().is_array()) {
        std::vector<Point> coords;
        for (const json& e : j) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw IoError("coordinate centers must be [x, y] pairs");
            coords.push_back(Point{e[0].get<double>(), e[1].get<double>()});
        }
        return coords;
    }
    std::vector<int> indices;
    for (const json& e : j) {
        if (!e.is_number_integer())
            throw IoError("center indices must be integers");
        indices.push_back(e.get<int>());
    }
    return indices;
}

std::vector<int> resolve_centers(
    const Instance& instance,
    const std::variant<std::vector<int>, std::vector<Point>>& centers) {
    if (std::holds_alternative<std::vector<int>>(centers))
        return std::get<std::vector<int>>(centers);
    std::vector<int> indices;
    for (const Point& p : std::get<std::vector<Point>>(centers)) {
        int found = -1;
        for (std::size_t i = 0; i < instance.locations.size(); ++i) {
            if (instance.locations[i].x == p.x && instance.locations[i].y == p.y) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0)
            throw ParameterError("coordinate center (" + format_double(p.x) + ", " +
                                 format_double(p.y) + ") matches no instance site");
        indices.push_back(found);
    }
    return indices;
}

std::string lemma_report_to_json(const LemmaReport& report) {
    std::ostringstream out;
    out << "{\"phi_c\":" << format_double(report.phi_c)
        << ",\"phi_u\":" << format_double(report.phi_u)
        << ",\"phi_g0\":" << format_double(report.phi_g0)
        << ",\"s\":" << report.s << ",\"t\":" << report.t
        << ",\"lower11\":" << format_double(report.lower11)
        << ",\"upper12\":" << format_double(report.upper12)
        << ",\"lower13\":" << format_double(report.lower13);
    if (std::isinf(report.z_s))
        out << ",\"z_s\":null";
    else
        out << ",\"z_s\":" << format_double(report.z_s);
    out << ",\"p_s\":" << format_double(report.p_s)
        << ",\"ok11\":" << (report.ok11 ? "true" : "false")
        << ",\"ok12\":" << (report.ok12 ? "true" : "false")
        << ",\"ok13\":" << (report.ok13 ? "true" : "false")
        << ",\"ok_ps\":" << (report.ok_ps ? "true" : "false") << "}\n";
    return out.str();
}

std::string trials_to_csv(const Instance& instance, std::span<const TrialRecord> records) {
    std::ostringstream out;
    out << kTrialCsvHeader << "\n";
    const std::string shared = std::to_string(instance.params.k) + "," +
                               format_double(instance.params.m) + "," +
                               format_double(instance.params.r) + "," +
                               format_double(instance.params.delta_geom);
    for (const TrialRecord& rec : records) {
        out << rec.trial << "," << rec.seed << "," << shared << "," << (rec.xi ? 1 : 0) << ","
            << rec.covered << "," << rec.t_centers << "," << format_double(rec.ratio) << ","
            << (rec.success ? 1 : 0) << "," << (rec.lemma11_ok ? 1 : 0) << ","
            << (rec.lemma12_ok ? 1 : 0) << "," << (rec.lemma13_ok ? 1 : 0) << ","
            << (rec.psbound_ok ? 1 : 0) << "\n";
    }
    return out.str();
}

} // namespace kmpp
