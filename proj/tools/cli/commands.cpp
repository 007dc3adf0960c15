#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "config.hpp"
#include "nocs/clustering.hpp"
#include "nocs/ids.hpp"
#include "nocs/monitor.hpp"
#include "nocs/noc.hpp"

namespace nocs::cli {

namespace {

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

/// Runs `body`, mapping every failure to the usage exit code.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what();
        if (e.line() > 0) err << " (line " << e.line() << ")";
        err << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kUsage;
}

TrafficTrace load_trace_with_labels(const std::filesystem::path& path) {
    auto trace = read_trace(path);
    const auto labels = default_labels_path(path);
    if (std::filesystem::exists(labels)) read_labels(labels, trace);
    return trace;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = parse_config_file(args.config);
        if (auto seed = seed_from_env()) {
            cfg.mesh.seed = *seed;
            cfg.traffic.seed = *seed;
        }
        const Horizon horizon{cfg.mesh.quantum_cycles, cfg.mesh.total_quanta};
        const auto schedule = generate(cfg.mesh.dims(), cfg.traffic, horizon);
        const auto result = run_simulation(cfg.mesh, schedule, cfg.attacks, describe(cfg.traffic));

        write_trace(result.trace, args.out);
        const auto labels = args.labels.value_or(default_labels_path(args.out));
        write_labels(result.trace, labels);

        const auto& s = result.status;
        out << "outcome=" << outcome_name(s.outcome) << " cycles=" << s.cycles_run
            << " quanta=" << result.trace.quanta() << " injected=" << s.packets_injected
            << " delivered=" << s.packets_delivered << " dropped=" << s.packets_dropped
            << " in_flight=" << s.packets_in_flight() << '\n';
        out << "trace=" << args.out.string() << " labels=" << labels.string() << '\n';
        switch (s.outcome) {
            case SimOutcome::Completed: return static_cast<int>(kOk);
            case SimOutcome::Deadlock: return static_cast<int>(kDeadlock);
            case SimOutcome::Livelock: return static_cast<int>(kLivelock);
        }
        return static_cast<int>(kOk);
    });
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.traces.empty()) throw InvalidArgument("train needs at least one --trace");
        IdsParams ids;
        if (args.config) ids = parse_config_file(*args.config).ids;

        TrainOptions opt;
        opt.window = ids.window;
        opt.k = ids.k;
        opt.metric = ids.metric;
        opt.algorithm = ids.algorithm;
        opt.linkage = ids.linkage;
        opt.percentile = ids.percentile;
        opt.floor = ids.floor;
        opt.seed = ids.seed;
        if (args.width) opt.window.width = *args.width;
        if (args.stride) opt.window.stride = *args.stride;
        if (args.k) opt.k = *args.k;
        if (args.metric) opt.metric = Metric::parse(*args.metric);
        if (args.algorithm) opt.algorithm = parse_algorithm(*args.algorithm);
        if (args.normalization) opt.window.normalization = parse_normalization(*args.normalization);
        if (args.linkage) opt.linkage = parse_linkage(*args.linkage);
        if (args.percentile) opt.percentile = *args.percentile;
        if (args.seed) opt.seed = *args.seed;
        if (auto seed = seed_from_env()) opt.seed = *seed;

        std::vector<TrafficTrace> traces;
        std::string fingerprint = "traces=";
        for (std::size_t i = 0; i < args.traces.size(); ++i) {
            traces.push_back(load_trace_with_labels(args.traces[i]));
            fingerprint += (i ? "/" : "") + args.traces[i].filename().string() + "@" +
                           std::to_string(traces.back().meta().seed);
        }
        opt.fingerprint = fingerprint;

        const auto dict = train_dictionary(traces, opt);
        write_dictionary(dict, args.out);
        out << "dictionary=" << args.out.string() << " k=" << dict.k << " metric=" << dict.metric.name()
            << " algorithm=" << algorithm_name(dict.algorithm) << " w=" << dict.spec.width
            << " s=" << dict.spec.stride << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto dict = read_dictionary(args.dictionary);
        const auto trace = read_trace(args.trace);
        const auto report = detect(trace, dict);
        write_report(report, args.out);

        if (args.residuals_dir) {
            std::filesystem::create_directories(*args.residuals_dir);
            for (const auto& rec : report.records) {
                if (!rec.anomalous) continue;
                const auto name = "residual_x" + std::to_string(rec.router.x) + "_y" + std::to_string(rec.router.y) +
                                  "_q" + std::to_string(rec.window_start) + ".csv";
                std::ofstream f(*args.residuals_dir / name, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + (*args.residuals_dir / name).string());
                write_residuals(rec, f);
            }
        }
        out << "windows=" << report.records.size() << " anomalies=" << report.anomalies() << '\n';
        return static_cast<int>(report.anomalies() > 0 ? kAnomaly : kOk);
    });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto report = read_report(args.report);
        const auto labels = read_label_grid(args.labels);
        const auto m = evaluate_detection(report, labels);
        out << "tp=" << m.tp << " fp=" << m.fp << " tn=" << m.tn << " fn=" << m.fn << '\n'
            << "precision=" << fixed3(m.precision) << " recall=" << fixed3(m.recall)
            << " accuracy=" << fixed3(m.accuracy) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_bench_shapes(const BenchShapesArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ShapeBenchmarkOptions opt;
        opt.families = args.families;
        opt.per_family = args.count;
        opt.noise = args.noise;
        opt.width = args.width;
        opt.seed = args.seed;
        const auto bench = gen_shape_benchmark(opt);

        const Metric metrics[] = {Metric::manhattan(), Metric::euclidean(), Metric::kl(), Metric::dtw()};
        const Algorithm algorithms[] = {Algorithm::KMeans, Algorithm::KMedoids, Algorithm::Agglomerative};

        out << "algorithm,metric,rand,jaccard,fowlkes_mallows,status\n";
        for (auto algo : algorithms) {
            for (const auto& metric : metrics) {
                out << algorithm_name(algo) << ',' << metric.name() << ',';
                Clustering c;
                try {
                    switch (algo) {
                        case Algorithm::KMeans: c = kmeans(bench.data, {args.families, metric, args.seed, 100, 0.0}); break;
                        case Algorithm::KMedoids: c = kmedoids(bench.data, {args.families, metric, args.seed, 100}); break;
                        case Algorithm::Agglomerative:
                            c = agglomerative(bench.data, metric, Linkage::Average, args.families);
                            break;
                    }
                } catch (const UnsupportedMetric&) {
                    out << ",,,unsupported\n";
                    continue;
                }
                const auto idx = external_indices(pair_counts(c.assignment, bench.labels));
                out << fixed3(idx.rand) << ',' << fixed3(idx.jaccard) << ',' << fixed3(idx.fowlkes_mallows) << ",ok\n";
            }
        }
        return static_cast<int>(kOk);
    });
}

}  // namespace nocs::cli
