#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace nocs::cli;

    CLI::App app{"noc-sentinel: NoC simulator and shape-dictionary intrusion detector"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a configured simulation and write trace + labels");
    simulate->add_option("--config", sim.config, "Config file")->required();
    simulate->add_option("--out", sim.out, "Trace CSV to write")->required();
    simulate->add_option("--labels", sim.labels, "Label sidecar (default: <out>.labels.csv)");

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Build a shape dictionary from attack-free traces");
    train->add_option("--trace", tr.traces, "Training trace (repeatable)")->required();
    train->add_option("--out", tr.out, "Dictionary file to write")->required();
    train->add_option("--config", tr.config, "Config whose [ids] section supplies defaults");
    train->add_option("--width", tr.width, "Window width in quanta");
    train->add_option("--stride", tr.stride, "Window stride in quanta");
    train->add_option("--k", tr.k, "Number of shapes");
    train->add_option("--metric", tr.metric, "manhattan|euclidean|minkowski:P|kl|dtw");
    train->add_option("--algo", tr.algorithm, "kmeans|kmedoids|agglomerative");
    train->add_option("--normalization", tr.normalization, "none|minmax");
    train->add_option("--linkage", tr.linkage, "single|complete|average");
    train->add_option("--percentile", tr.percentile, "Threshold percentile in (0,100]");
    train->add_option("--seed", tr.seed, "Clustering seed");

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Flag windows whose reconstruction error exceeds the threshold");
    detect->add_option("--trace", det.trace, "Trace to inspect")->required();
    detect->add_option("--dict", det.dictionary, "Dictionary file")->required();
    detect->add_option("--out", det.out, "Report CSV to write")->required();
    detect->add_option("--residuals", det.residuals_dir, "Directory for per-window residual CSVs");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Score a report against ground-truth labels");
    evaluate->add_option("--report", ev.report, "Report CSV")->required();
    evaluate->add_option("--labels", ev.labels, "Label sidecar")->required();

    BenchShapesArgs bench;
    auto* bench_shapes = app.add_subcommand("bench-shapes", "Cluster the synthetic shape set and print indices");
    bench_shapes->add_option("--families", bench.families, "Shape families (2-6)");
    bench_shapes->add_option("--count", bench.count, "Items per family");
    bench_shapes->add_option("--noise", bench.noise, "Noise sigma relative to amplitude");
    bench_shapes->add_option("--width", bench.width, "Samples per item");
    bench_shapes->add_option("--seed", bench.seed, "Generator and clustering seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (*simulate) return cmd_simulate(sim, std::cout, std::cerr);
    if (*train) return cmd_train(tr, std::cout, std::cerr);
    if (*detect) return cmd_detect(det, std::cout, std::cerr);
    if (*evaluate) return cmd_evaluate(ev, std::cout, std::cerr);
    if (*bench_shapes) return cmd_bench_shapes(bench, std::cout, std::cerr);
    return kUsage;
}
