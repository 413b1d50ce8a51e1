#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kmpp/evaluation.hpp"
#include "kmpp/instance.hpp"
#include "kmpp/seeding.hpp"

namespace kmpp {

// All artifact writers format floats with 17 significant digits so that
// every value round-trips exactly and identical inputs give identical bytes.
std::string format_double(double v);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

Instance load_instance(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

// Centers JSON: either a list of location indices [0, 3] or a list of
// coordinate pairs [[x, y], ...]. Coordinates must match instance sites
// exactly to be resolved to indices.
std::variant<std::vector<int>, std::vector<Point>> centers_from_json(const std::string& text);
std::vector<int> resolve_centers(const Instance& instance,
                                 const std::variant<std::vector<int>, std::vector<Point>>& centers);

std::string lemma_report_to_json(const LemmaReport& report);

inline constexpr const char* kTrialCsvHeader =
    "trial,seed,k,m,r,delta,xi,covered,t_centers,ratio,success,"
    "lemma11_ok,lemma12_ok,lemma13_ok,psbound_ok";

std::string trials_to_csv(const Instance& instance, std::span<const TrialRecord> records);

} // namespace kmpp
