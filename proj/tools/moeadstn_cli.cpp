// Command-line front end: single runs, the experiment grid, pairwise STNs
// and reports.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moeadstn/config_io.hpp"
#include "moeadstn/errors.hpp"
#include "moeadstn/harness.hpp"
#include "moeadstn/io.hpp"
#include "moeadstn/text.hpp"

using namespace moeadstn;

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("MOEADSTN_OUT");
    return env != nullptr && *env != '\0' ? env : "results";
}

std::vector<ProblemId> parse_problem_list(const std::string& text) {
    if (text == "all") {
        return {all_problems.begin(), all_problems.end()};
    }
    std::vector<ProblemId> out;
    for (const auto& part : split_csv(text)) {
        out.push_back(parse_problem_id(part));
    }
    return out;
}

std::vector<std::string> parse_variant_list(const std::string& text) {
    if (text == "all") {
        return variant_names();
    }
    auto out = split_csv(text);
    for (const auto& v : out) {
        (void)variant_config(v);
    }
    return out;
}

void print_stn(const std::string& label, const StnMetrics& m) {
    std::cout << label << ": nodes=" << m.nodes << " edges=" << m.edges << " shared=" << m.shared << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Component-wise MOEA/D with STN analysis"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "One seeded run; writes <problem>_<variant>_<seed>.csv");
    std::string problem_text = "DASCMOP1";
    std::string variant = "base";
    std::uint64_t seed = 1;
    std::optional<std::size_t> budget;
    std::string config_path;
    std::string out_dir = default_out_dir();
    bool write_trace = false;
    run_cmd->add_option("--problem", problem_text, "DASCMOP1..DASCMOP9")->required();
    run_cmd->add_option("--variant", variant, "base, decomposition, popsize, update, neighborhood, operators, no-restart");
    run_cmd->add_option("--seed", seed);
    run_cmd->add_option("--budget", budget, "Evaluation budget (default 100000)");
    run_cmd->add_option("--config", config_path, "TOML file overriding the variant configuration");
    run_cmd->add_option("--out", out_dir, "Output directory (default $MOEADSTN_OUT or ./results)");
    run_cmd->add_flag("--trace", write_trace, "Also write the per-iteration population trace (.csv.gz)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Full problem x variant x seed grid");
    std::string problems_text = "all";
    std::string variants_text = "all";
    std::string seeds_text = "1..10";
    std::size_t jobs = 1;
    bool trajectories = false;
    bool no_graphs = false;
    exp_cmd->add_option("--problems", problems_text, "'all' or a comma list");
    exp_cmd->add_option("--variants", variants_text, "'all' or a comma list");
    exp_cmd->add_option("--seeds", seeds_text, "e.g. 1..10 or 1,2,5");
    exp_cmd->add_option("--out", out_dir, "Output directory (default $MOEADSTN_OUT or ./results)");
    exp_cmd->add_option("--jobs", jobs, "Concurrent runs");
    exp_cmd->add_option("--budget", budget, "Evaluation budget per run");
    exp_cmd->add_flag("--trajectories", trajectories, "Write trajectory CSVs (.csv.gz)");
    exp_cmd->add_flag("--no-graphs", no_graphs, "Skip GraphML output");

    // stn
    auto* stn_cmd = app.add_subcommand("stn", "Merged STN of two variants on one problem");
    std::string against = "base";
    std::string graph_out;
    std::string dot_out;
    stn_cmd->add_option("--variant", variant)->required();
    stn_cmd->add_option("--against", against);
    stn_cmd->add_option("--problem", problem_text)->required();
    stn_cmd->add_option("--seeds", seeds_text);
    stn_cmd->add_option("--budget", budget);
    stn_cmd->add_option("--out", graph_out, "GraphML output file")->required();
    stn_cmd->add_option("--dot", dot_out, "Optional DOT output file");

    // report
    auto* report_cmd = app.add_subcommand("report", "Delta and correlation CSVs from an experiment directory");
    std::string in_dir = default_out_dir();
    report_cmd->add_option("--in", in_dir);

    // config
    auto* config_cmd = app.add_subcommand("config", "Print a variant configuration as TOML");
    config_cmd->add_option("--variant", variant);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const ProblemInstance problem(parse_problem_id(problem_text));
            Config config = variant_config(variant);
            if (!config_path.empty()) {
                config = read_config_toml(config_path, config);
            }
            if (budget) {
                config.budget = *budget;
            }
            RunOptions opts;
            opts.record_iterations = write_trace;
            const RunTrace trace = run(config, problem, seed, opts);
            std::filesystem::create_directories(out_dir);
            const auto rows = checkpoint_rows(trace);
            const auto path = std::filesystem::path(out_dir) / run_file_name(problem.name(), variant, seed);
            write_text_file(path, checkpoint_csv(rows));
            if (write_trace) {
                auto trace_path = path;
                trace_path.replace_extension();
                trace_path += "_trace.csv.gz";
                write_text_file(trace_path, trace_csv(trace));
            }
            std::cout << "wrote " << path.string() << '\n'
                      << "evaluations=" << trace.evaluations << " restarts=" << trace.restarts
                      << " archive=" << trace.archive.size()
                      << " final_hv11=" << format_double(rows.empty() ? 0.0 : rows.back().hv) << '\n';
        } else if (*exp_cmd) {
            ExperimentOptions opts;
            opts.problems = parse_problem_list(problems_text);
            opts.variants = parse_variant_list(variants_text);
            opts.seeds = parse_seed_list(seeds_text);
            opts.out_dir = out_dir;
            opts.jobs = jobs;
            opts.run.budget = budget;
            opts.write_trajectories = trajectories;
            opts.write_graphs = !no_graphs;
            opts.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
            const auto result = run_experiment(opts);
            std::cout << "rows=" << result.rows.size() << " failures=" << result.failures.size() << " out=" << out_dir
                      << '\n';
            return result.failures.empty() ? 0 : 3;
        } else if (*stn_cmd) {
            const ProblemInstance problem(parse_problem_id(problem_text));
            const Matrix reference = reference_front(problem);
            RunSettings settings;
            settings.budget = budget;
            auto build = [&](const std::string& name) {
                StnGraph g;
                for (auto s : parse_seed_list(seeds_text)) {
                    accumulate(g, run_and_reduce(variant_config(name), problem, name, s, reference, settings).graph);
                }
                return g;
            };
            const StnGraph a = build(variant);
            const StnGraph b = build(against);
            const StnGraph merged = merge_stn(a, b);
            write_graphml(merged, graph_out);
            if (!dot_out.empty()) {
                write_dot(merged, dot_out);
            }
            print_stn(variant, stn_metrics(a));
            print_stn(against, stn_metrics(b));
            print_stn("merged", stn_metrics(merged));
        } else if (*report_cmd) {
            const auto report = report_directory(in_dir);
            std::cout << "deltas=" << report.deltas.size()
                      << " correlation=" << (report.correlation ? "written" : "skipped (too few complete rows)")
                      << '\n'
                      << "Delta columns are variant minus base. A negative delta_igd means the variant reached a "
                         "lower IGD than base.\n";
        } else if (*config_cmd) {
            std::cout << config_to_toml(variant_config(variant));
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
