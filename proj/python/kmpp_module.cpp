#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kmpp/chain.hpp"
#include "kmpp/evaluation.hpp"
#include "kmpp/experiment.hpp"
#include "kmpp/instance.hpp"
#include "kmpp/io.hpp"
#include "kmpp/oracle.hpp"
#include "kmpp/seeding.hpp"

namespace py = pybind11;
using namespace kmpp;

namespace {

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& xy) {
    std::vector<Point> pts;
    pts.reserve(xy.size());
    for (const auto& [x, y] : xy) pts.push_back(Point{x, y});
    return pts;
}

std::vector<std::pair<double, double>> from_points(const std::vector<Point>& pts) {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(pts.size());
    for (const Point& p : pts) xy.emplace_back(p.x, p.y);
    return xy;
}

} // namespace

PYBIND11_MODULE(_kmpp, m) {
    m.doc() = "k-means++ seeding experiments on a hard planar instance family";

    py::register_exception<ParameterError>(m, "ParameterError");
    py::register_exception<ScheduleError>(m, "ScheduleError");
    py::register_exception<BudgetError>(m, "BudgetError");

    py::class_<InstanceParams>(m, "InstanceParams")
        .def(py::init<int, double, double, double>(), py::arg("k"), py::arg("m") = 1.0,
             py::arg("r") = 1.0, py::arg("delta") = 4.0)
        .def_readwrite("k", &InstanceParams::k)
        .def_readwrite("m", &InstanceParams::m)
        .def_readwrite("r", &InstanceParams::r)
        .def_readwrite("delta", &InstanceParams::delta_geom);

    py::class_<Location>(m, "Location")
        .def(py::init([](int group, int level, double x, double y, double weight) {
                 return Location{group, level, x, y, weight};
             }),
             py::arg("group"), py::arg("level"), py::arg("x"), py::arg("y"), py::arg("weight"))
        .def_readonly("group", &Location::group)
        .def_readonly("level", &Location::level)
        .def_readonly("x", &Location::x)
        .def_readonly("y", &Location::y)
        .def_readonly("weight", &Location::weight);

    py::class_<Instance>(m, "Instance")
        .def_readonly("params", &Instance::params)
        .def_readonly("locations", &Instance::locations)
        .def_readonly("total_mass", &Instance::total_mass)
        .def_readonly("group_masses", &Instance::group_masses);

    m.def("build_instance", &build_instance, py::arg("params"));
    m.def("optimal_centers",
          [](const InstanceParams& p) { return from_points(optimal_centers(p)); });
    m.def("optimal_cost_closed_form", &optimal_cost_closed_form);
    m.def("group_mass", &group_mass, py::arg("params"), py::arg("group"));
    m.def("level_weight", &level_weight, py::arg("params"), py::arg("group"), py::arg("level"));

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("base_seed"),
             py::arg("stream_index"))
        .def("uniform", &RngStream::uniform)
        .def("next_u64", &RngStream::next_u64)
        .def_property_readonly("derived_seed", &RngStream::derived_seed);

    m.def("weighted_choice", [](const std::vector<double>& w, RngStream& rng) {
        return weighted_choice(w, rng);
    });

    py::class_<TraceStep>(m, "TraceStep")
        .def_readonly("chosen", &TraceStep::chosen)
        .def_readonly("potential_before", &TraceStep::potential_before)
        .def_readonly("covered_s", &TraceStep::covered_s)
        .def_readonly("centers_t", &TraceStep::centers_t);

    py::class_<SeedingTrace>(m, "SeedingTrace")
        .def_readonly("xi", &SeedingTrace::xi)
        .def_readonly("steps", &SeedingTrace::steps);

    py::class_<SeedingResult>(m, "SeedingResult")
        .def_readonly("centers", &SeedingResult::centers)
        .def_readonly("trace", &SeedingResult::trace);

    m.def("kmeanspp_seed",
          [](const std::vector<Location>& points, int k, RngStream& rng) {
              return kmeanspp_seed(points, k, rng);
          },
          py::arg("points"), py::arg("k"), py::arg("rng"));

    m.def("sample_next_center",
          [](const std::vector<Location>& points, const std::vector<int>& centers,
             RngStream& rng) { return sample_next_center(points, centers, rng); });

    m.def("lloyd",
          [](const std::vector<Location>& points,
             const std::vector<std::pair<double, double>>& centers, int max_iters,
             double tol) { return from_points(lloyd(points, to_points(centers), max_iters, tol)); },
          py::arg("points"), py::arg("centers"), py::arg("max_iters") = 100,
          py::arg("tol") = 0.0);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial", &TrialRecord::trial)
        .def_readonly("seed", &TrialRecord::seed)
        .def_readonly("xi", &TrialRecord::xi)
        .def_readonly("covered", &TrialRecord::covered)
        .def_readonly("t_centers", &TrialRecord::t_centers)
        .def_readonly("ratio", &TrialRecord::ratio)
        .def_readonly("success", &TrialRecord::success)
        .def_readonly("lemma11_ok", &TrialRecord::lemma11_ok)
        .def_readonly("lemma12_ok", &TrialRecord::lemma12_ok)
        .def_readonly("lemma13_ok", &TrialRecord::lemma13_ok)
        .def_readonly("psbound_ok", &TrialRecord::psbound_ok);

    m.def("run_trials", &run_trials, py::arg("instance"), py::arg("trials"),
          py::arg("base_seed"), py::arg("alpha"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("potential",
          [](const std::vector<Location>& points,
             const std::vector<std::pair<double, double>>& centers) {
              const std::vector<Point> ctr = to_points(centers);
              return potential(points, std::span<const Point>(ctr));
          });
    m.def("potential_at_indices",
          [](const std::vector<Location>& points, const std::vector<int>& centers) {
              return potential(points, std::span<const int>(centers));
          });

    py::class_<CoverageState>(m, "CoverageState")
        .def_readonly("covered_groups", &CoverageState::covered_groups)
        .def_readonly("s", &CoverageState::s)
        .def_readonly("t", &CoverageState::t)
        .def_readonly("xi", &CoverageState::xi);

    m.def("coverage_state", [](const Instance& inst, const std::vector<int>& centers) {
        return coverage_state(inst, centers);
    });

    py::class_<SplitPotential>(m, "SplitPotential")
        .def_readonly("phi_c", &SplitPotential::phi_c)
        .def_readonly("phi_u", &SplitPotential::phi_u)
        .def_readonly("phi_g0", &SplitPotential::phi_g0);

    m.def("split_potential", [](const Instance& inst, const std::vector<int>& centers) {
        return split_potential(inst, centers);
    });

    py::class_<LemmaReport>(m, "LemmaReport")
        .def_readonly("phi_c", &LemmaReport::phi_c)
        .def_readonly("phi_u", &LemmaReport::phi_u)
        .def_readonly("phi_g0", &LemmaReport::phi_g0)
        .def_readonly("s", &LemmaReport::s)
        .def_readonly("t", &LemmaReport::t)
        .def_readonly("lower11", &LemmaReport::lower11)
        .def_readonly("upper12", &LemmaReport::upper12)
        .def_readonly("lower13", &LemmaReport::lower13)
        .def_readonly("z_s", &LemmaReport::z_s)
        .def_readonly("p_s", &LemmaReport::p_s)
        .def_readonly("ok11", &LemmaReport::ok11)
        .def_readonly("ok12", &LemmaReport::ok12)
        .def_readonly("ok13", &LemmaReport::ok13)
        .def_readonly("ok_ps", &LemmaReport::ok_ps);

    m.def("lemma_bound_report", [](const Instance& inst, const std::vector<int>& centers) {
        return lemma_bound_report(inst, centers);
    });

    m.def("approximation_ratio", [](const Instance& inst, const std::vector<int>& centers) {
        return approximation_ratio(inst, std::span<const int>(centers));
    });
    m.def("min_covered_for_alpha", &min_covered_for_alpha, py::arg("k_bar"),
          py::arg("delta_geom"), py::arg("alpha"));

    py::class_<ScheduleValues>(m, "ScheduleValues")
        .def_readonly("k_bar", &ScheduleValues::k_bar)
        .def_readonly("delta_exp", &ScheduleValues::delta_exp)
        .def_readonly("alpha", &ScheduleValues::alpha)
        .def_readonly("eps", &ScheduleValues::eps)
        .def_readonly("log_delta_real", &ScheduleValues::log_delta_real)
        .def_readonly("delta_real", &ScheduleValues::delta_real)
        .def_readonly("delta_sched", &ScheduleValues::delta_sched)
        .def_readonly("u", &ScheduleValues::u)
        .def_readonly("s_star", &ScheduleValues::s_star)
        .def_readonly("valid", &ScheduleValues::valid);

    m.def("schedule", &schedule, py::arg("k_bar"), py::arg("delta_exp"));
    m.def("z_and_p", [](long long k_bar, double delta_geom, long long s) {
        const ZP zp = z_and_p(k_bar, delta_geom, s);
        return py::make_tuple(zp.z, zp.p);
    });

    py::class_<InequalityFlags>(m, "InequalityFlags")
        .def_readonly("i1", &InequalityFlags::i1)
        .def_readonly("i2", &InequalityFlags::i2)
        .def_readonly("i3", &InequalityFlags::i3)
        .def_readonly("i4", &InequalityFlags::i4)
        .def_readonly("i5", &InequalityFlags::i5);

    m.def("check_inequalities",
          py::overload_cast<double, double>(&check_inequalities), py::arg("k_bar"),
          py::arg("delta_exp"));

    py::class_<ChainParams>(m, "ChainParams")
        .def_readonly("s_star", &ChainParams::s_star)
        .def_readonly("p", &ChainParams::p)
        .def_readonly("truncation", &ChainParams::truncation);

    m.def("make_chain_params", &make_chain_params, py::arg("k_bar"), py::arg("delta_geom"),
          py::arg("s_star"));
    m.def("hitting_probability_dp", &hitting_probability_dp, py::arg("params"),
          py::arg("steps"));
    m.def("simulate_chain", &simulate_chain, py::arg("params"), py::arg("steps"),
          py::arg("rng"));

    py::class_<ExpectedSteps>(m, "ExpectedSteps")
        .def_readonly("ex", &ExpectedSteps::ex)
        .def_readonly("ey", &ExpectedSteps::ey)
        .def_readonly("finite", &ExpectedSteps::finite);

    m.def("expected_steps", &expected_steps, py::arg("params"));
    m.def("hoeffding_bound", py::overload_cast<double, double>(&hoeffding_bound),
          py::arg("k_bar"), py::arg("delta_exp"));

    py::class_<TheoremBound>(m, "TheoremBound")
        .def_readonly("value", &TheoremBound::value)
        .def_readonly("schedule_valid", &TheoremBound::schedule_valid);

    m.def("theorem_bound", &theorem_bound, py::arg("k"), py::arg("delta_exp"));

    py::class_<PartitionResult>(m, "PartitionResult")
        .def_readonly("assignment", &PartitionResult::assignment)
        .def_property_readonly("centers",
                               [](const PartitionResult& r) { return from_points(r.centers); })
        .def_readonly("cost", &PartitionResult::cost);

    m.def("brute_force_optimal",
          [](const std::vector<Location>& points, int k, int max_locations) {
              return brute_force_optimal(points, k, max_locations);
          },
          py::arg("points"), py::arg("k"), py::arg("max_locations") = 16,
          py::call_guard<py::gil_scoped_release>());

    m.def("first_center_distribution", [](const std::vector<Location>& points) {
        return first_center_distribution(points);
    });

    py::class_<SeedingOutcome>(m, "SeedingOutcome")
        .def_readonly("sequence", &SeedingOutcome::sequence)
        .def_readonly("prob", &SeedingOutcome::prob);

    py::class_<SeedingDistribution>(m, "SeedingDistribution")
        .def_readonly("outcomes", &SeedingDistribution::outcomes);

    m.def("exact_seeding_distribution",
          [](const std::vector<Location>& points, int k, std::uint64_t max_sequences) {
              return exact_seeding_distribution(points, k, max_sequences);
          },
          py::arg("points"), py::arg("k"), py::arg("max_sequences") = 1000000);
    m.def("pr_xi", [](const SeedingDistribution& d, const std::vector<Location>& points) {
        return pr_xi(d, points);
    });
    m.def("pr_covered_at_least", &pr_covered_at_least);
    m.def("pr_ratio_at_most", &pr_ratio_at_most);

    m.def("instance_to_json", &instance_to_json);
    m.def("instance_from_json", &instance_from_json);
    m.def("load_instance", &load_instance);
}
