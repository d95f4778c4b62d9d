#include "moeadstn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "moeadstn/errors.hpp"
#include "moeadstn/io.hpp"
#include "moeadstn/text.hpp"

namespace moeadstn {

namespace {

const std::string base_name = "base";

std::optional<std::size_t> cell_count(const std::string& cell, const std::filesystem::path& path) {
    if (cell.empty()) {
        return std::nullopt;
    }
    auto v = parse_integer(cell);
    if (!v || *v < 0) {
        throw ConfigError(path.string() + ": not a count: '" + cell + "'");
    }
    return static_cast<std::size_t>(*v);
}

std::string format_count(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

std::optional<double> difference(const std::optional<double>& a, const std::optional<double>& b) {
    if (!a || !b) {
        return std::nullopt;
    }
    return *a - *b;
}

std::optional<double> column_median(std::span<const MetricsRow> rows, const std::string& column) {
    std::vector<double> vals;
    for (const auto& r : rows) {
        if (auto v = metric_value(r, column); v && std::isfinite(*v)) {
            vals.push_back(*v);
        }
    }
    return median(std::move(vals));
}

} // namespace

const std::vector<std::string>& variant_names() {
    static const std::vector<std::string> names = {"base",         "decomposition", "popsize",   "update",
                                                   "neighborhood", "operators",     "no-restart"};
    return names;
}

Config base_config() {
    Config c;
    c.decomposition = DecompositionKind::uniform;
    c.population_size = 100;
    c.aggregation = AggregationKind::wt;
    c.update = {UpdateKind::restricted, 13};
    c.neighborhood_size = 18;
    c.delta = 0.5831;
    c.de_F = 0.705;
    c.pm_eta = 57.0443;
    c.pm_prob = 0.303;
    c.partial_update.reset();
    c.restart = true;
    c.restart_period = Config::default_restart_period;
    c.budget = Config::default_budget;
    c.cht = DynamicCht{};
    return c;
}

Config variant_config(std::string_view name) {
    Config c = base_config();
    if (name == "base") {
        return c;
    }
    if (name == "decomposition") {
        c.decomposition = DecompositionKind::sld;
    } else if (name == "popsize") {
        c.population_size = 300;
    } else if (name == "update") {
        c.update.nr = 2;
    } else if (name == "neighborhood") {
        c.neighborhood_size = 20;
        c.delta = 0.9;
    } else if (name == "operators") {
        c.de_F = 0.5;
        c.pm_eta = 20.0;
        c.pm_prob = 0.3;
    } else if (name == "no-restart") {
        c.restart = false;
    } else {
        throw InputError("unknown variant '" + std::string(name) + "'");
    }
    return c;
}

VariantSpec variant_spec(std::string_view name) { return {std::string(name), variant_config(name)}; }

std::vector<std::string> differing_groups(const Config& a, const Config& b) {
    std::vector<std::string> out;
    if (a.decomposition != b.decomposition) out.push_back("decomposition");
    if (a.population_size != b.population_size) out.push_back("popsize");
    if (a.aggregation != b.aggregation) out.push_back("aggregation");
    if (a.update != b.update) out.push_back("update");
    if (a.neighborhood_size != b.neighborhood_size || a.delta != b.delta) out.push_back("neighborhood");
    if (a.de_F != b.de_F || a.pm_eta != b.pm_eta || a.pm_prob != b.pm_prob) out.push_back("operators");
    if (a.partial_update != b.partial_update) out.push_back("partial_update");
    if (a.restart != b.restart || a.restart_period != b.restart_period) out.push_back("restart");
    if (a.budget != b.budget) out.push_back("budget");
    if (a.cht != b.cht) out.push_back("cht");
    return out;
}

std::vector<CheckpointRow> checkpoint_rows(const RunTrace& trace, double ref_value) {
    std::vector<CheckpointRow> rows;
    for (const auto& cp : trace.checkpoints) {
        const double hv =
            cp.objectives.empty() ? 0.0 : hypervolume(cp.objectives, uniform_reference(cp.objectives.cols(), ref_value));
        rows.push_back({cp.evaluations, hv, cp.size});
    }
    return rows;
}

std::string checkpoint_csv(std::span<const CheckpointRow> rows) {
    std::string out = "evals,hv,archive_size\n";
    for (const auto& r : rows) {
        out += std::to_string(r.evaluations) + ',' + format_double(r.hv) + ',' + std::to_string(r.archive_size) + '\n';
    }
    return out;
}

std::string trace_csv(const RunTrace& trace) {
    std::string out = "iteration,evaluations,restarted,member,birth_tick,violation";
    const std::size_t m = trace.iterations.empty() ? 0 : trace.iterations.front().objectives.cols();
    const std::size_t D = trace.iterations.empty() ? 0 : trace.iterations.front().x.cols();
    for (std::size_t i = 0; i < m; ++i) {
        out += ",f" + std::to_string(i + 1);
    }
    for (std::size_t d = 0; d < D; ++d) {
        out += ",x" + std::to_string(d + 1);
    }
    out += '\n';
    for (const auto& snap : trace.iterations) {
        const std::string prefix = std::to_string(snap.iteration) + ',' + std::to_string(snap.evaluations) + ',' +
                                   (snap.restarted ? "1" : "0") + ',';
        for (std::size_t r = 0; r < snap.x.rows(); ++r) {
            out += prefix;
            out += std::to_string(r);
            out += ',';
            out += std::to_string(snap.birth_tick[r]);
            out += ',';
            out += format_double(snap.violation[r]);
            for (double v : snap.objectives.row(r)) {
                out += ',';
                out += format_double(v);
            }
            for (double v : snap.x.row(r)) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    return out;
}

RunOutcome run_and_reduce(const Config& config, const ProblemInstance& problem, std::string_view variant,
                          std::uint64_t seed, const Matrix& reference, const RunSettings& settings) {
    Config c = config;
    if (settings.budget) {
        c.budget = *settings.budget;
    }
    const RunTrace trace = run(c, problem, seed);

    RunOutcome out;
    out.problem = problem.name();
    out.variant = std::string(variant);
    out.seed = seed;
    out.final_archive = trace.archive.objectives();
    out.checkpoints = checkpoint_rows(trace);
    out.accumulated_hv = anytime_accumulated_hv(trace);
    if (trace.final_population.size() >= 2) {
        out.population_variance = population_variance(trace.final_population.x);
    }
    if (!out.final_archive.empty() && !reference.empty()) {
        out.igd = igd(out.final_archive, reference);
    }
    const auto vectors = stn_weights(settings.stn_vectors, problem.num_objectives());
    auto trajectories =
        extract_trajectories(trace, vectors, seed, settings.trajectory, reference.empty() ? nullptr : &reference);
    out.graph = build_stn(trajectories, settings.trajectory.precision);
    if (settings.keep_trajectories) {
        out.trajectories = std::move(trajectories);
    }
    return out;
}

std::optional<double> median(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<DeltaRow> delta_table(std::span<const MetricsRow> base_rows, std::span<const MetricsRow> variant_rows,
                                  const std::map<std::string, std::size_t>& shared) {
    std::vector<std::string> problems;
    for (const auto& r : variant_rows) {
        if (std::find(problems.begin(), problems.end(), r.problem) == problems.end()) {
            problems.push_back(r.problem);
        }
    }
    std::vector<DeltaRow> out;
    for (const auto& p : problems) {
        std::vector<MetricsRow> b, v;
        std::copy_if(base_rows.begin(), base_rows.end(), std::back_inserter(b),
                     [&](const MetricsRow& r) { return r.problem == p; });
        std::copy_if(variant_rows.begin(), variant_rows.end(), std::back_inserter(v),
                     [&](const MetricsRow& r) { return r.problem == p; });
        DeltaRow d;
        d.problem = p;
        d.variant = v.front().variant;
        d.delta_hv = difference(column_median(v, "hv_over_max"), column_median(b, "hv_over_max"));
        d.delta_igd = difference(column_median(v, "igd"), column_median(b, "igd"));
        d.delta_nodes = difference(column_median(v, "stn_nodes"), column_median(b, "stn_nodes"));
        d.delta_variance =
            difference(column_median(v, "population_variance"), column_median(b, "population_variance"));
        if (auto it = shared.find(p); it != shared.end()) {
            d.shared = it->second;
        }
        out.push_back(std::move(d));
    }
    return out;
}

void write_delta_csv(const std::filesystem::path& path, std::span<const DeltaRow> rows) {
    std::string out = "problem,variant,delta_hv,delta_igd,delta_nodes,delta_variance,shared\n";
    for (const auto& r : rows) {
        out += r.problem + ',' + r.variant + ',' + format_optional(r.delta_hv) + ',' + format_optional(r.delta_igd) +
               ',' + format_optional(r.delta_nodes) + ',' + format_optional(r.delta_variance) + ',' +
               format_count(r.shared) + '\n';
    }
    write_text_file(path, out);
}

void write_stn_summary_csv(const std::filesystem::path& path, std::span<const StnSummaryRow> rows) {
    std::string out = "problem,variant,nodes,edges,merged_nodes,merged_edges,shared\n";
    for (const auto& r : rows) {
        out += r.problem + ',' + r.variant + ',' + std::to_string(r.nodes) + ',' + std::to_string(r.edges) + ',' +
               format_count(r.merged_nodes) + ',' + format_count(r.merged_edges) + ',' + format_count(r.shared) +
               '\n';
    }
    write_text_file(path, out);
}

std::vector<StnSummaryRow> read_stn_summary_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    const std::vector<std::string> header = {"problem",      "variant",      "nodes", "edges",
                                             "merged_nodes", "merged_edges", "shared"};
    if (!std::getline(in, line) || split_csv(line) != header) {
        throw ConfigError(path.string() + ": unexpected header");
    }
    std::vector<StnSummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw ConfigError(path.string() + ": wrong column count");
        }
        StnSummaryRow r;
        r.problem = cells[0];
        r.variant = cells[1];
        auto nodes = cell_count(cells[2], path);
        auto edges = cell_count(cells[3], path);
        if (!nodes || !edges) {
            throw ConfigError(path.string() + ": missing node or edge count");
        }
        r.nodes = *nodes;
        r.edges = *edges;
        r.merged_nodes = cell_count(cells[4], path);
        r.merged_edges = cell_count(cells[5], path);
        r.shared = cell_count(cells[6], path);
        rows.push_back(std::move(r));
    }
    return rows;
}

const std::vector<std::string>& correlation_columns() {
    static const std::vector<std::string> cols = {"hv_over_max", "igd",          "stn_nodes",
                                                  "stn_edges",   "shared_nodes", "population_variance"};
    return cols;
}

Report make_report(std::span<const MetricsRow> rows, std::span<const StnSummaryRow> stn) {
    Report report;
    std::vector<std::string> variants;
    for (const auto& name : variant_names()) {
        if (name == base_name) {
            continue;
        }
        if (std::any_of(rows.begin(), rows.end(), [&](const MetricsRow& r) { return r.variant == name; })) {
            variants.push_back(name);
        }
    }
    std::vector<MetricsRow> base_rows;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(base_rows),
                 [](const MetricsRow& r) { return r.variant == base_name; });
    for (const auto& name : variants) {
        std::vector<MetricsRow> vrows;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(vrows),
                     [&](const MetricsRow& r) { return r.variant == name; });
        std::map<std::string, std::size_t> shared;
        for (const auto& s : stn) {
            if (s.variant == name && s.shared) {
                shared[s.problem] = *s.shared;
            }
        }
        for (auto& d : delta_table(base_rows, vrows, shared)) {
            report.deltas.push_back(std::move(d));
        }
    }
    // Problem-major order, variants in their canonical order within a problem.
    std::stable_sort(report.deltas.begin(), report.deltas.end(), [](const DeltaRow& a, const DeltaRow& b) {
        return parse_problem_id(a.problem) < parse_problem_id(b.problem);
    });
    try {
        report.correlation = pearson_matrix(rows, correlation_columns());
    } catch (const InputError&) {
        report.correlation.reset();
    }
    return report;
}

Report report_directory(const std::filesystem::path& dir) {
    const auto rows = read_metrics_csv(dir / "metrics.csv");
    const auto stn = read_stn_summary_csv(dir / "stn_summary.csv");
    Report report = make_report(rows, stn);
    write_delta_csv(dir / "deltas.csv", report.deltas);
    if (report.correlation) {
        write_correlation_csv(dir / "correlation.csv", *report.correlation);
    } else {
        std::filesystem::remove(dir / "correlation.csv");
    }
    return report;
}

std::string run_file_name(std::string_view problem, std::string_view variant, std::uint64_t seed) {
    return std::string(problem) + "_" + std::string(variant) + "_" + std::to_string(seed) + ".csv";
}

std::string graph_file_name(std::string_view problem, std::string_view variant) {
    return std::string(problem) + "_" + std::string(variant) + ".graphml";
}

std::string merged_graph_file_name(std::string_view problem, std::string_view a, std::string_view b) {
    return std::string(problem) + "_" + std::string(a) + "_vs_" + std::string(b) + ".graphml";
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& part : split_csv(text)) {
        const std::size_t dots = part.find("..");
        auto bad = [&] { throw InputError("bad seed list '" + std::string(text) + "'"); };
        if (dots == std::string::npos) {
            auto v = parse_integer(part);
            if (!v || *v < 0) {
                bad();
            }
            seeds.push_back(static_cast<std::uint64_t>(*v));
            continue;
        }
        auto lo = parse_integer(std::string_view(part).substr(0, dots));
        auto hi = parse_integer(std::string_view(part).substr(dots + 2));
        if (!lo || !hi || *lo < 0 || *hi < *lo) {
            bad();
        }
        for (auto s = *lo; s <= *hi; ++s) {
            seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (seeds.empty()) {
        throw InputError("empty seed list");
    }
    return seeds;
}

ExperimentResult run_experiment(const ExperimentOptions& options) {
    if (options.seeds.empty()) {
        throw InputError("at least one seed is required");
    }
    for (const auto& v : options.variants) {
        (void)variant_config(v);
    }
    std::filesystem::create_directories(options.out_dir);
    const auto data_dir = options.data_dir.empty() ? default_data_dir() : options.data_dir;
    const bool have_base =
        std::find(options.variants.begin(), options.variants.end(), base_name) != options.variants.end();
    std::mutex log_mutex;
    auto log = [&](const std::string& msg) {
        if (options.progress) {
            std::lock_guard lock(log_mutex);
            options.progress(msg);
        }
    };

    ExperimentResult result;
    for (ProblemId pid : options.problems) {
        const ProblemInstance problem(pid);
        const Matrix reference = reference_front(problem, data_dir);
        const std::size_t m = problem.num_objectives();

        struct Task {
            std::string variant;
            std::uint64_t seed;
        };
        std::vector<Task> tasks;
        for (const auto& v : options.variants) {
            for (auto s : options.seeds) {
                tasks.push_back({v, s});
            }
        }
        std::vector<RunOutcome> outcomes(tasks.size());
        RunSettings settings = options.run;
        settings.keep_trajectories = options.write_trajectories;
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> done{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < tasks.size(); i = next++) {
                const auto& t = tasks[i];
                try {
                    outcomes[i] = run_and_reduce(variant_config(t.variant), problem, t.variant, t.seed, reference,
                                                 settings);
                } catch (const std::exception& e) {
                    outcomes[i].problem = problem.name();
                    outcomes[i].variant = t.variant;
                    outcomes[i].seed = t.seed;
                    outcomes[i].error = e.what();
                }
                log(problem.name() + " " + t.variant + " seed " + std::to_string(t.seed) + " (" +
                    std::to_string(++done) + "/" + std::to_string(tasks.size()) + ")");
            }
        };
        const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, tasks.size());
        std::vector<std::thread> pool;
        for (std::size_t j = 1; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& th : pool) {
            th.join();
        }

        // Common [0, 1] frame over every final archive of this problem.
        std::vector<Matrix> archives;
        for (const auto& o : outcomes) {
            if (!o.error) {
                archives.push_back(o.final_archive);
            }
        }
        const ScalingFrame frame = scaling_frame(archives);
        const auto ref = uniform_reference(m, 1.1);
        const double max_hv = std::pow(1.1, static_cast<double>(m));

        std::map<std::uint64_t, const StnGraph*> base_graph_by_seed;
        for (const auto& o : outcomes) {
            if (!o.error && o.variant == base_name) {
                base_graph_by_seed[o.seed] = &o.graph;
            }
        }

        std::map<std::string, StnGraph> variant_graphs;
        for (const auto& o : outcomes) {
            const std::string tag = o.problem + " " + o.variant + " seed " + std::to_string(o.seed);
            if (o.error) {
                result.failures.push_back(tag + ": " + *o.error);
                continue;
            }
            write_text_file(options.out_dir / run_file_name(o.problem, o.variant, o.seed), checkpoint_csv(o.checkpoints));
            MetricsRow row;
            row.problem = o.problem;
            row.variant = o.variant;
            row.seed = o.seed;
            row.final_hv = o.final_archive.empty() ? 0.0 : hypervolume(apply_frame(o.final_archive, frame), ref);
            row.hv_over_max = *row.final_hv / max_hv;
            row.accumulated_hv = o.accumulated_hv;
            row.igd = o.igd;
            row.population_variance = o.population_variance;
            const auto gm = stn_metrics(o.graph);
            row.stn_nodes = gm.nodes;
            row.stn_edges = gm.edges;
            if (o.variant != base_name) {
                if (auto it = base_graph_by_seed.find(o.seed); it != base_graph_by_seed.end()) {
                    row.shared_nodes = stn_metrics(merge_stn(o.graph, *it->second)).shared;
                }
            }
            result.rows.push_back(std::move(row));

            auto [git, fresh] = variant_graphs.try_emplace(o.variant);
            if (fresh) {
                git->second.precision = o.graph.precision;
            }
            accumulate(git->second, o.graph);
        }

        if (options.write_trajectories) {
            for (const auto& v : options.variants) {
                std::vector<Trajectory> all;
                for (const auto& o : outcomes) {
                    if (!o.error && o.variant == v) {
                        all.insert(all.end(), o.trajectories.begin(), o.trajectories.end());
                    }
                }
                write_trajectories_csv(options.out_dir / (problem.name() + "_" + v + "_trajectories.csv.gz"), all);
            }
        }

        for (const auto& v : options.variants) {
            auto it = variant_graphs.find(v);
            if (it == variant_graphs.end()) {
                continue;
            }
            const StnGraph& g = it->second;
            StnSummaryRow s;
            s.problem = problem.name();
            s.variant = v;
            s.nodes = g.nodes.size();
            s.edges = g.edges.size();
            if (options.write_graphs) {
                write_graphml(g, options.out_dir / graph_file_name(problem.name(), v));
            }
            if (v != base_name && have_base && variant_graphs.count(base_name)) {
                const StnGraph merged = merge_stn(g, variant_graphs.at(base_name));
                const auto mm = stn_metrics(merged);
                s.merged_nodes = mm.nodes;
                s.merged_edges = mm.edges;
                s.shared = mm.shared;
                if (options.write_graphs) {
                    write_graphml(merged, options.out_dir / merged_graph_file_name(problem.name(), v, base_name));
                }
            }
            result.stn.push_back(std::move(s));
        }
        log(problem.name() + " finished");
    }

    write_metrics_csv(options.out_dir / "metrics.csv", result.rows);
    write_stn_summary_csv(options.out_dir / "stn_summary.csv", result.stn);
    std::string failures;
    for (const auto& f : result.failures) {
        failures += f + '\n';
    }
    write_text_file(options.out_dir / "failures.txt", failures);
    Report report = report_directory(options.out_dir);
    result.deltas = std::move(report.deltas);
    result.correlation = std::move(report.correlation);
    return result;
}

} // namespace moeadstn
