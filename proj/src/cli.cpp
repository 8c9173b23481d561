#include "fuselab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "fuselab/fusion.hpp"
#include "fuselab/metrics.hpp"
#include "fuselab/pool.hpp"
#include "fuselab/trec_io.hpp"
#include "fuselab/tuner.hpp"
#include "fuselab/types.hpp"

namespace fuselab::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Run load_run(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open run file '" + path + "'");
    try {
        return parse_run(in);
    } catch (const ParseError& e) {
        throw ParseError(e.kind, e.line_no, path + ": " + e.what(), e.query_id, e.doc_id);
    }
}

std::vector<Run> load_runs(const std::vector<std::string>& paths) {
    std::vector<Run> runs;
    runs.reserve(paths.size());
    for (const auto& path : paths) runs.push_back(load_run(path));
    return runs;
}

Qrels load_qrels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open qrels file '" + path + "'");
    try {
        return parse_qrels(in);
    } catch (const ParseError& e) {
        throw ParseError(e.kind, e.line_no, path + ": " + e.what(), e.query_id, e.doc_id);
    }
}

// Runs `writer` against --output (or `fallback` when no path was given).
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open output file '" + path + "'");
    writer(file);
    file.flush();
    if (!file) throw IoError("failed writing output file '" + path + "'");
}

FusionMethod parse_method(const std::string& name) {
    if (auto m = method_from_name(name)) return *m;
    throw CLI::ValidationError("--method", "unknown fusion method '" + name + "'");
}

Normalization parse_normalization(const std::string& name) {
    if (auto n = normalization_from_name(name)) return *n;
    throw CLI::ValidationError("--normalization", "unknown normalization '" + name + "'");
}

struct Options {
    std::vector<std::string> run_paths;
    std::string run_path;
    std::string qrels_path;
    std::string output_path;

    std::string method = "linear";
    std::vector<double> weights;
    int depth = 1000;
    std::string normalization;
    double rrf_k = 60.0;
    std::optional<int> output_depth;

    std::string metrics = "mrr,ndcg@5,ndcg@10,recall@10,recall@100,map@1000";
    bool percent = false;
    std::string format = "table";

    double step = 0.1;
    std::string objective = "ndcg@5";

    int pool_depth = 10;
    std::string oracle_qrels_path;
    std::string simulated_qrels_path;

    int judged_k = 20;

    std::string target_tag;
    int bias_depth = 20;
    std::string bias_objective = "recall@20";
};

FusionConfig fusion_config_from(const Options& opt, std::size_t num_runs) {
    FusionConfig config;
    config.method = parse_method(opt.method);
    config.depth = opt.depth;
    config.rrf_k = opt.rrf_k;
    config.output_depth = opt.output_depth;
    if (!opt.normalization.empty())
        config.normalization = parse_normalization(opt.normalization);
    if (!opt.weights.empty()) {
        if (config.method != FusionMethod::linear)
            throw CLI::ValidationError("--weights",
                                       "weights only apply to --method linear");
        config.weights = opt.weights;
    } else if (config.method == FusionMethod::linear) {
        config.weights.assign(num_runs, 1.0 / static_cast<double>(num_runs));
    }
    return config;
}

int do_fuse(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    auto config = fusion_config_from(opt, runs.size());
    Run fused = fuse_runs(runs, config);
    with_output(opt.output_path, out, [&](std::ostream& os) { write_run(fused, os); });
    return 0;
}

int do_eval(const Options& opt, std::ostream& out, std::ostream& err) {
    auto run = load_run(opt.run_path);
    auto qrels = load_qrels(opt.qrels_path);
    auto specs = parse_metric_list(opt.metrics);
    if (specs.empty()) throw UnknownMetric("no metrics requested");
    MetricReport report = evaluate(run, qrels, specs);
    if (!report.skipped_query_ids.empty()) {
        err << "# skipped " << report.skipped_query_ids.size() << " queries:";
        for (const auto& q : report.skipped_query_ids) err << ' ' << q;
        err << '\n';
    }
    with_output(opt.output_path, out, [&](std::ostream& os) {
        if (opt.format == "tsv")
            write_report_tsv(report, os, opt.percent);
        else
            write_report_table(report, os, opt.percent);
    });
    return 0;
}

int do_tune(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    auto qrels = load_qrels(opt.qrels_path);
    GridSpec grid{opt.step, parse_metric_spec(opt.objective)};
    FusionConfig base;
    base.depth = opt.depth;
    if (!opt.normalization.empty()) base.normalization = parse_normalization(opt.normalization);
    TuneReport report = grid_search(runs, qrels, grid, base);
    with_output(opt.output_path, out, [&](std::ostream& os) { write_tune_report(report, os); });
    return 0;
}

int do_pool(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    Pool pool = build_pool(runs, opt.pool_depth);
    if (!opt.oracle_qrels_path.empty()) {
        Qrels restricted = simulate_qrels(pool, load_qrels(opt.oracle_qrels_path));
        std::ofstream file(opt.simulated_qrels_path, std::ios::binary);
        if (!file)
            throw IoError("cannot open output file '" + opt.simulated_qrels_path + "'");
        write_qrels(restricted, file);
    }
    with_output(opt.output_path, out, [&](std::ostream& os) { write_pool(pool, os); });
    return 0;
}

int do_judged(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    auto qrels = load_qrels(opt.qrels_path);
    with_output(opt.output_path, out, [&](std::ostream& os) {
        os << "run_tag\tquery_id\tjudged_count\tjudged_fraction\n";
        for (const auto& run : runs) {
            long total = 0;
            double fraction_sum = 0.0;
            int queries = 0;
            for (const auto& [query_id, list] : run.lists) {
                auto jt = qrels.judgments.find(query_id);
                if (jt == qrels.judgments.end()) continue;
                JudgedAtK j = judged_at_k(list, jt->second, opt.judged_k);
                os << run.run_tag << '\t' << query_id << '\t' << j.count << '\t'
                   << format_score(j.fraction) << '\n';
                total += j.count;
                fraction_sum += j.fraction;
                ++queries;
            }
            const double mean_count = queries > 0 ? static_cast<double>(total) / queries : 0.0;
            const double mean_fraction = queries > 0 ? fraction_sum / queries : 0.0;
            os << run.run_tag << "\tall\t" << format_score(mean_count) << '\t'
               << format_score(mean_fraction) << '\n';
        }
    });
    return 0;
}

int do_bias(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    auto qrels = load_qrels(opt.qrels_path);
    BiasReport report = leave_one_out_bias(runs, opt.target_tag, qrels, opt.bias_depth,
                                           parse_metric_spec(opt.bias_objective));
    with_output(opt.output_path, out, [&](std::ostream& os) { write_bias_report(report, os); });
    return 0;
}

int do_stats(const Options& opt, std::ostream& out) {
    auto runs = load_runs(opt.run_paths);
    auto qrels = load_qrels(opt.qrels_path);
    CollectionStats stats = collection_stats(runs, qrels);
    with_output(opt.output_path, out,
                [&](std::ostream& os) { write_collection_stats(stats, os); });
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank-fusion and retrieval-evaluation toolkit for TREC-style runs"};
    app.require_subcommand(1);
    const char* env_config = std::getenv("FUSELAB_CONFIG");
    app.set_config("--config", env_config ? env_config : "",
                   "Config file mirroring the flags ([subcommand] sections, key=value)");

    Options opt;

    auto* fuse = app.add_subcommand("fuse", "Fuse run files into one run")->configurable();
    fuse->add_option("runs", opt.run_paths, "Input run files")->required();
    fuse->add_option("--method", opt.method,
                     "linear|combsum|combmnz|rrf|borda|condorcet|roundrobin")
        ->capture_default_str();
    fuse->add_option("--weights", opt.weights, "Comma-separated linear weights, one per run")
        ->delimiter(',');
    fuse->add_option("--depth", opt.depth, "Per-list depth used for fusion")
        ->capture_default_str();
    fuse->add_option("--normalization", opt.normalization,
                     "none|minmax|zscore|rank (default depends on method)");
    fuse->add_option("--rrf-k", opt.rrf_k, "RRF constant")->capture_default_str();
    fuse->add_option("--output-depth", opt.output_depth, "Fused list length (default: depth)");
    fuse->add_option("--output,-o", opt.output_path, "Write the fused run here");

    auto* eval = app.add_subcommand("eval", "Evaluate a run against qrels")->configurable();
    eval->add_option("run", opt.run_path, "Run file")->required();
    eval->add_option("--qrels", opt.qrels_path, "Qrels file")->required();
    eval->add_option("--metrics", opt.metrics, "Comma-separated metric specs")
        ->capture_default_str();
    eval->add_flag("--percent", opt.percent, "Display values multiplied by 100");
    eval->add_option("--format", opt.format, "table|tsv")->capture_default_str();
    eval->add_option("--output,-o", opt.output_path, "Write the report here");

    auto* tune = app.add_subcommand("tune", "Grid-search linear fusion weights")->configurable();
    tune->add_option("runs", opt.run_paths, "Input run files")->required()->expected(2, -1);
    tune->add_option("--qrels", opt.qrels_path, "Qrels file")->required();
    tune->add_option("--step", opt.step, "Grid step; 1/step must be an integer")
        ->capture_default_str();
    tune->add_option("--objective", opt.objective, "Metric to maximize")
        ->capture_default_str();
    tune->add_option("--depth", opt.depth, "Per-list depth used for fusion")
        ->capture_default_str();
    tune->add_option("--normalization", opt.normalization, "none|minmax|zscore|rank");
    tune->add_option("--output,-o", opt.output_path, "Write the tuning report here");

    auto* pool = app.add_subcommand("pool", "Build a judgment pool from runs")->configurable();
    pool->add_option("runs", opt.run_paths, "Input run files")->required();
    pool->add_option("--depth", opt.pool_depth, "Pool depth")->capture_default_str();
    auto* oracle_opt = pool->add_option("--oracle-qrels", opt.oracle_qrels_path,
                                        "Ground-truth qrels to restrict to the pool");
    pool->add_option("--simulated-qrels", opt.simulated_qrels_path,
                     "Where to write the restricted qrels")
        ->needs(oracle_opt);
    oracle_opt->needs(pool->get_option("--simulated-qrels"));
    pool->add_option("--output,-o", opt.output_path, "Write the pool here");

    auto* judged = app.add_subcommand("judged", "Judged@k table per run")->configurable();
    judged->add_option("runs", opt.run_paths, "Input run files")->required();
    judged->add_option("--qrels", opt.qrels_path, "Qrels file")->required();
    judged->add_option("--k", opt.judged_k, "Cutoff")->capture_default_str();
    judged->add_option("--output,-o", opt.output_path, "Write the table here");

    auto* bias = app.add_subcommand("bias", "Leave-one-run-out assessment-bias report")
                     ->configurable();
    bias->add_option("runs", opt.run_paths, "Input run files")->required();
    bias->add_option("--target", opt.target_tag, "Run tag to hold out")->required();
    bias->add_option("--qrels", opt.qrels_path, "Ground-truth qrels")->required();
    bias->add_option("--depth", opt.bias_depth, "Pool depth")->capture_default_str();
    bias->add_option("--objective", opt.bias_objective, "Metric to compare")
        ->capture_default_str();
    bias->add_option("--output,-o", opt.output_path, "Write the report here");

    auto* stats = app.add_subcommand("stats", "Collection statistics")->configurable();
    stats->add_option("runs", opt.run_paths, "Input run files")->required();
    stats->add_option("--qrels", opt.qrels_path, "Qrels file")->required();
    stats->add_option("--output,-o", opt.output_path, "Write the statistics here");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fuselab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::FileError& e) {
        app.exit(e, out, err);
        return 1;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (app.got_subcommand(fuse)) return do_fuse(opt, out);
        if (app.got_subcommand(eval)) return do_eval(opt, out, err);
        if (app.got_subcommand(tune)) return do_tune(opt, out);
        if (app.got_subcommand(pool)) return do_pool(opt, out);
        if (app.got_subcommand(judged)) return do_judged(opt, out);
        if (app.got_subcommand(bias)) return do_bias(opt, out);
        if (app.got_subcommand(stats)) return do_stats(opt, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const NoEvaluableQueries& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.get_name() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        // UnknownMetric, WeightArityMismatch, InvalidGridStep, UnknownRunTag,
        // EmptyInput and config validation all signal a usage problem.
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace fuselab::cli
