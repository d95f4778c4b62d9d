#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "moeadstn/config_io.hpp"
#include "moeadstn/errors.hpp"
#include "moeadstn/harness.hpp"
#include "moeadstn/metrics.hpp"
#include "moeadstn/moead.hpp"
#include "moeadstn/problems.hpp"
#include "moeadstn/stn.hpp"

namespace py = pybind11;
using namespace moeadstn;

namespace {

py::array_t<double> to_array(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
    }
    return out;
}

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw InputError("expected a 2-D array");
    const auto view = a.unchecked<2>();
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    for (py::ssize_t r = 0; r < a.shape(0); ++r) {
        for (py::ssize_t c = 0; c < a.shape(1); ++c) m(r, c) = view(r, c);
    }
    return m;
}

py::array_t<double> weights_array(const std::vector<WeightVector>& ws) {
    Matrix m;
    for (const auto& w : ws) m.append_row(w.weights);
    return to_array(m);
}

Config resolve_config(const std::string& variant, const std::optional<std::string>& toml,
                      std::optional<std::size_t> budget) {
    Config c = variant_config(variant);
    if (toml) c = parse_config_toml(*toml, c);
    if (budget) c.budget = *budget;
    c.validate();
    return c;
}

std::vector<RunTrace> run_seeds(const Config& config, const ProblemInstance& p, const std::vector<std::uint64_t>& seeds) {
    std::vector<RunTrace> traces;
    py::gil_scoped_release release;
    for (std::uint64_t s : seeds) traces.push_back(run(config, p, s));
    return traces;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Component-wise MOEA/D on DASCMOP problems with search trajectory networks.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("problem_info", [](const std::string& name, int triplet) {
        const ProblemInstance p(parse_problem_id(name), triplet);
        py::dict d;
        d["name"] = p.name();
        d["num_objectives"] = p.num_objectives();
        d["num_constraints"] = p.num_constraints();
        d["num_variables"] = p.num_variables();
        std::vector<std::pair<double, double>> bounds;
        for (const auto& b : p.bounds()) bounds.emplace_back(b.lower, b.upper);
        d["bounds"] = bounds;
        return d;
    }, py::arg("problem"), py::arg("triplet") = ProblemInstance::default_triplet);

    m.def("evaluate", [](const std::string& name, const std::vector<double>& x, int triplet) {
        const Evaluation e = evaluate(ProblemInstance(parse_problem_id(name), triplet), x);
        py::dict d;
        d["objectives"] = e.objectives;
        d["constraints"] = e.constraint_values;
        d["violation"] = e.violation;
        return d;
    }, py::arg("problem"), py::arg("x"), py::arg("triplet") = ProblemInstance::default_triplet);

    m.def("reference_front", [](const std::string& name) {
        return to_array(reference_front(ProblemInstance(parse_problem_id(name))));
    }, py::arg("problem"));

    m.def("uniform_design", [](std::size_t n, std::size_t k) { return weights_array(generate_uniform_design(n, k)); },
          py::arg("n"), py::arg("m"));
    m.def("simplex_lattice", [](std::size_t h, std::size_t k) { return weights_array(generate_sld(h, k)); },
          py::arg("h"), py::arg("m"));
    m.def("sobol_weights", [](std::size_t n, std::size_t k) { return weights_array(generate_sobol(n, k)); },
          py::arg("n"), py::arg("m"));

    m.def("hypervolume", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts,
                            const std::vector<double>& ref) { return hypervolume(to_matrix(pts), ref); },
          py::arg("points"), py::arg("ref"));
    m.def("igd", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& approx,
                    const py::array_t<double, py::array::c_style | py::array::forcecast>& ref) {
        return igd(to_matrix(approx), to_matrix(ref));
    }, py::arg("approx"), py::arg("reference"));
    m.def("population_variance", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        return population_variance(to_matrix(x));
    }, py::arg("x"));

    m.def("variant_names", &variant_names);
    m.def("config_toml", [](const std::string& variant) { return config_to_toml(variant_config(variant)); },
          py::arg("variant") = "base");

    m.def("run", [](const std::string& name, std::uint64_t seed, const std::string& variant,
                    std::optional<std::size_t> budget, std::optional<std::string> toml) {
        const Config c = resolve_config(variant, toml, budget);
        const ProblemInstance p(parse_problem_id(name));
        RunTrace trace;
        {
            py::gil_scoped_release release;
            RunOptions opts;
            opts.record_iterations = false;
            trace = run(c, p, seed, opts);
        }
        py::dict d;
        d["problem"] = trace.problem;
        d["seed"] = trace.seed;
        d["evaluations"] = trace.evaluations;
        d["restarts"] = trace.restarts;
        d["archive"] = to_array(trace.archive.objectives().empty() ? Matrix(0, p.num_objectives())
                                                                  : trace.archive.objectives());
        d["final_x"] = to_array(trace.final_population.x);
        d["final_objectives"] = to_array(trace.final_population.objectives);
        d["final_violation"] = trace.final_population.violation;
        std::vector<std::tuple<std::size_t, double, std::size_t>> cps;
        for (const auto& r : checkpoint_rows(trace)) cps.emplace_back(r.evaluations, r.hv, r.archive_size);
        d["checkpoints"] = cps;
        d["accumulated_hv"] = anytime_accumulated_hv(trace);
        return d;
    }, py::arg("problem"), py::arg("seed"), py::arg("variant") = "base", py::arg("budget") = py::none(),
       py::arg("config_toml") = py::none());

    py::class_<StnGraph>(m, "StnGraph")
        .def_property_readonly("precision", [](const StnGraph& g) { return g.precision; })
        .def_property_readonly("trajectories", [](const StnGraph& g) { return g.trajectories; })
        .def_property_readonly("num_nodes", [](const StnGraph& g) { return stn_metrics(g).nodes; })
        .def_property_readonly("num_edges", [](const StnGraph& g) { return stn_metrics(g).edges; })
        .def_property_readonly("shared_nodes", [](const StnGraph& g) { return stn_metrics(g).shared; })
        .def("write_graphml", [](const StnGraph& g, const std::filesystem::path& p) { write_graphml(g, p); })
        .def("write_dot", [](const StnGraph& g, const std::filesystem::path& p) { write_dot(g, p); })
        .def_static("read_graphml", &read_graphml)
        .def("__eq__", [](const StnGraph& a, const StnGraph& b) { return a == b; });

    m.def("build_stn", [](const std::string& name, const std::vector<std::uint64_t>& seeds, const std::string& variant,
                          std::optional<std::size_t> budget, std::size_t vectors) {
        const ProblemInstance p(parse_problem_id(name));
        const Config c = resolve_config(variant, std::nullopt, budget);
        const auto traces = run_seeds(c, p, seeds);
        const Matrix front = reference_front(p);
        return build_stn(traces, stn_weights(vectors, p.num_objectives()), {}, &front);
    }, py::arg("problem"), py::arg("seeds"), py::arg("variant") = "base", py::arg("budget") = py::none(),
       py::arg("vectors") = 5);
    m.def("merge_stn", &merge_stn, py::arg("a"), py::arg("b"));

    m.def("run_experiment", [](const std::vector<std::string>& problems, const std::vector<std::string>& variants,
                               const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir,
                               std::optional<std::size_t> budget, std::size_t jobs) {
        ExperimentOptions opt;
        for (const auto& p : problems) opt.problems.push_back(parse_problem_id(p));
        opt.variants = variants;
        opt.seeds = seeds;
        opt.out_dir = out_dir;
        opt.jobs = jobs;
        opt.run.budget = budget;
        ExperimentResult r;
        {
            py::gil_scoped_release release;
            r = run_experiment(opt);
        }
        py::dict d;
        d["runs"] = r.rows.size();
        d["failures"] = r.failures;
        d["has_correlation"] = r.correlation.has_value();
        return d;
    }, py::arg("problems"), py::arg("variants"), py::arg("seeds"), py::arg("out_dir"), py::arg("budget") = py::none(),
       py::arg("jobs") = 1);
}
