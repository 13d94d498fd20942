#include "secoda_cli.hpp"

#include "secoda/csv.hpp"
#include "secoda/datagen.hpp"
#include "secoda/engine.hpp"
#include "secoda/error.hpp"
#include "secoda/evaluation.hpp"
#include "secoda/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

namespace secoda::cli {
namespace {

constexpr int kUsage = 2;
constexpr int kRuntime = 3;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path));
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, std::string_view what) {
    std::vector<std::size_t> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto v = parse_real(std::string_view(text).substr(start, comma - start));
        if (!v || *v < 0 || *v != std::floor(*v) || *v > 1e12) {
            throw ParameterError(fmt::format("bad {} '{}'", what, text));
        }
        values.push_back(static_cast<std::size_t>(*v));
        start = comma + 1;
    }
    return values;
}

std::vector<double> parse_real_list(const std::string& text, std::string_view what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto v = parse_real(std::string_view(text).substr(start, comma - start));
        if (!v || !std::isfinite(*v)) throw ParameterError(fmt::format("bad {} '{}'", what, text));
        values.push_back(*v);
        start = comma + 1;
    }
    return values;
}

struct InputFlags {
    std::string path;
    std::string schema;
    bool auto_schema = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f) {
    cmd->add_option("--in", f.path, "Input table (comma-separated, header row)")->required();
    auto* schema = cmd->add_option("--schema", f.schema, "Column kinds, e.g. x:num,color:cat");
    auto* automatic = cmd->add_flag("--auto-schema", f.auto_schema, "Infer every column kind");
    schema->excludes(automatic);
}

// A trailing anomaly_type column is split off and ignored.
Dataset load_input(const InputFlags& f) {
    LoadOptions options;
    if (!f.schema.empty()) options.schema = parse_schema(f.schema);
    auto in = open_in(f.path);
    auto loaded = load_table_with_optional_labels(in, options);
    if (loaded.data.empty()) throw InputError(fmt::format("'{}' has no cases", f.path));
    return std::move(loaded.data);
}

struct EngineFlags {
    std::string method = "equiwidth";
    bool no_pruning = false;
    std::size_t max_iter = EngineConfig{}.max_iterations;
    std::size_t min_iter = EngineConfig{}.min_iterations;
    std::string schedule;
    std::size_t partitions = 1;
    bool seedless = false;
    CLI::Option* min_option = nullptr;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
    cmd->add_option("--method", f.method, "equiwidth or equidepth")->capture_default_str();
    cmd->add_flag("--no-pruning", f.no_pruning, "Score every case in every iteration");
    cmd->add_option("--max-iter", f.max_iter, "Maximum number of iterations")->capture_default_str();
    f.min_option = cmd->add_option("--min-iter", f.min_iter, "Minimum number of iterations")->capture_default_str();
    cmd->add_option("--arity-schedule", f.schedule, "Explicit arities, e.g. 2,4,8");
    cmd->add_option("--partitions", f.partitions, "Concurrent counting partitions")->capture_default_str();
    cmd->add_flag("--seedless", f.seedless, "Accepted for clarity; detection never draws random numbers");
}

EngineConfig engine_config(const EngineFlags& f) {
    EngineConfig config;
    config.method = parse_binning_method(f.method);
    config.pruning_enabled = !f.no_pruning;
    config.max_iterations = f.max_iter;
    config.min_iterations = f.min_iter;
    // A lone --max-iter below the default minimum lowers the minimum with it.
    if (f.min_option->count() == 0) config.min_iterations = std::min(f.min_iter, f.max_iter);
    if (!f.schedule.empty()) config.arity_schedule = parse_size_list(f.schedule, "arity schedule");
    config.counting_partitions = f.partitions;
    config.validate();
    return config;
}

std::string planted_summary(const std::vector<AnomalyLabel>& labels) {
    const auto h = label_histogram(labels);
    std::string text;
    for (const auto label : kAllLabels) {
        if (label == AnomalyLabel::Normal || h[label_index(label)] == 0) continue;
        if (!text.empty()) text += ' ';
        text += fmt::format("{}={}", label_token(label), h[label_index(label)]);
    }
    return text.empty() ? "none" : text;
}

std::size_t default_k(std::size_t n) { return std::max<std::size_t>(1, (n + 99) / 100); }

// Scores `data`, writes the score file and returns the manifest describing the run.
RunManifest detect_and_write(const Dataset& data, const EngineConfig& config, const std::string& input,
                             const std::string& out_path) {
    const auto start = std::chrono::steady_clock::now();
    const auto scores = run_secoda(data, config);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto out = open_out(out_path);
    write_scores(out, scores);
    out.close();
    if (!out) throw IoError(fmt::format("failed to write '{}'", out_path));

    RunManifest manifest;
    manifest.input = input;
    manifest.schema = format_schema(data.schema());
    manifest.config = config;
    manifest.scores_path = out_path;
    manifest.iterations = scores.iterations;
    manifest.wall_time_seconds = elapsed;
    return manifest;
}

LoadedTable load_any(const std::string& path) {
    auto in = open_in(path);
    return load_table_with_optional_labels(in);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constellation-frequency anomaly detection for mixed numeric/categorical tables", "secoda"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    std::function<void()> action;

    // generate
    GenSpec gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic benchmark set with planted anomalies");
    generate->add_option("--dataset", gen.name, "classcircle, mountain, noisymix, sword or helix")->required();
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--out", gen_out, "Output path (default <name>_<seed>.csv)");
    generate->callback([&] {
        action = [&] {
            const auto data = secoda::generate(gen);
            const auto path = gen_out.empty() ? default_file_name(gen) : gen_out;
            auto file = open_out(path);
            write_labeled(file, data);
            file.close();
            if (!file) throw IoError(fmt::format("failed to write '{}'", path));
            out << fmt::format("wrote {} cases to {}; planted: {}\n", data.data.n_cases(), path,
                               planted_summary(data.labels));
        };
    });

    // detect
    InputFlags detect_in;
    EngineFlags detect_engine;
    std::string detect_out;
    std::string manifest_path;
    auto* detect = app.add_subcommand("detect", "Score every case; lower scores are more anomalous");
    add_input_flags(detect, detect_in);
    add_engine_flags(detect, detect_engine);
    detect->add_option("--out", detect_out, "Score file to write")->required();
    detect->add_option("--manifest", manifest_path, "Run manifest path (default <out>.manifest.json)");
    detect->callback([&] {
        action = [&] {
            const auto config = engine_config(detect_engine);
            const auto data = load_input(detect_in);
            const auto manifest = detect_and_write(data, config, detect_in.path, detect_out);
            const auto path = manifest_path.empty() ? detect_out + ".manifest.json" : manifest_path;
            auto file = open_out(path);
            write_manifest(file, manifest);
            out << fmt::format("scored {} cases in {} iterations; wrote {} and {}\n", data.n_cases(),
                               manifest.iterations, detect_out, path);
        };
    });

    // replay
    std::string replay_manifest;
    std::string replay_out;
    auto* replay = app.add_subcommand("replay", "Repeat a detect run from its manifest");
    replay->add_option("--manifest", replay_manifest, "Manifest written by detect")->required();
    replay->add_option("--out", replay_out, "Score file to write (default: the manifest's output path)");
    replay->callback([&] {
        action = [&] {
            auto file = open_in(replay_manifest);
            const auto manifest = read_manifest(file);
            InputFlags flags{manifest.input, manifest.schema, false};
            const auto data = load_input(flags);
            const auto path = replay_out.empty() ? manifest.scores_path : replay_out;
            detect_and_write(data, manifest.config, manifest.input, path);
            out << fmt::format("replayed {} into {}\n", replay_manifest, path);
        };
    });

    // evaluate
    std::string eval_scores, eval_data, eval_prefix, eval_floors = "0.9,0.95,0.99", eval_task = "any";
    std::size_t eval_k = 0;
    auto* evaluate = app.add_subcommand("evaluate", "Score a detection run against ground-truth labels");
    evaluate->add_option("--scores", eval_scores, "Score file written by detect")->required();
    evaluate->add_option("--data", eval_data, "Labelled table (trailing anomaly_type column)")->required();
    evaluate->add_option("--k", eval_k, "Top-k cut-off (default: 1% of cases, rounded up)");
    evaluate->add_option("--floors", eval_floors, "Specificity floors for partial AUC")->capture_default_str();
    evaluate->add_option("--task", eval_task, "Positive types: any, or a list such as II,V,VI")->capture_default_str();
    evaluate->add_option("--out", eval_prefix, "Writes PREFIX.txt and PREFIX.json")->required();
    evaluate->callback([&] {
        action = [&] {
            const auto task = parse_task(eval_task);
            const auto floors = parse_real_list(eval_floors, "floors");
            auto score_file = open_in(eval_scores);
            const auto scores = read_scores(score_file);
            auto data_file = open_in(eval_data);
            const auto data = load_labeled(data_file);
            if (scores.size() != data.labels.size()) {
                throw InputError(fmt::format("score file has {} cases but '{}' has {}", scores.size(), eval_data,
                                             data.labels.size()));
            }
            const auto k = eval_k == 0 ? default_k(scores.size()) : eval_k;
            const auto report = secoda::evaluate(scores, data.labels, task, k, floors);
            auto text = open_out(eval_prefix + ".txt");
            write_report_text(text, report);
            auto json = open_out(eval_prefix + ".json");
            write_report_json(json, report);
            write_report_text(out, report);
        };
    });

    // compare
    std::string cmp_data;
    std::size_t cmp_k = 0;
    EngineFlags cmp_engine;
    auto* compare = app.add_subcommand("compare", "Equiwidth versus equidepth, per anomaly type");
    compare->add_option("--data", cmp_data, "Labelled table")->required();
    compare->add_option("--k", cmp_k, "Top-k cut-off (default: 1% of cases, rounded up)");
    add_engine_flags(compare, cmp_engine);
    compare->callback([&] {
        action = [&] {
            const auto config = engine_config(cmp_engine);
            auto file = open_in(cmp_data);
            const auto data = load_labeled(file);
            if (data.data.empty()) throw InputError(fmt::format("'{}' has no cases", cmp_data));
            const auto k = cmp_k == 0 ? default_k(data.labels.size()) : cmp_k;
            write_comparison(out, compare_methods(data, config, k));
        };
    });

    // plotdata
    std::string plot_data, plot_scores, plot_out;
    std::size_t plot_k = 0;
    auto* plotdata = app.add_subcommand("plotdata", "Emit per-case plot records as newline-delimited JSON");
    plotdata->add_option("--data", plot_data, "Input table, labelled or not")->required();
    plotdata->add_option("--scores", plot_scores, "Score file written by detect")->required();
    plotdata->add_option("--top-k", plot_k, "Flag the k best-ranked cases")->capture_default_str();
    plotdata->add_option("--out", plot_out, "Output path")->required();
    plotdata->callback([&] {
        action = [&] {
            const auto table = load_any(plot_data);
            auto score_file = open_in(plot_scores);
            const auto scores = read_scores(score_file);
            if (scores.size() != table.data.n_cases()) {
                throw InputError(fmt::format("score file has {} cases but '{}' has {}", scores.size(), plot_data,
                                             table.data.n_cases()));
            }
            auto file = open_out(plot_out);
            write_plot_records(file, table.data, table.labels ? &*table.labels : nullptr, scores, plot_k);
            file.close();
            if (!file) throw IoError(fmt::format("failed to write '{}'", plot_out));
            out << fmt::format("wrote {} records to {}\n", scores.size(), plot_out);
        };
    });

    // explain
    InputFlags explain_in;
    EngineFlags explain_engine;
    CaseId explain_case_id = 0;
    auto* explain = app.add_subcommand("explain", "Show why one case got its score");
    add_input_flags(explain, explain_in);
    add_engine_flags(explain, explain_engine);
    explain->add_option("--case", explain_case_id, "0-based case id")->required();
    explain->callback([&] {
        action = [&] {
            const auto config = engine_config(explain_engine);
            const auto data = load_input(explain_in);
            const auto scores = run_secoda(data, config);
            out << secoda::explain_case(data, scores, explain_case_id).to_text(data);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (action) action();
        return 0;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace secoda::cli
