// Command-line front end: embed, evaluate, render, query-rect.

#include "lvsde/lvsde.hpp"
#include "lvsde/io/dataset.hpp"
#include "lvsde/io/document.hpp"
#include "lvsde/io/query.hpp"
#include "lvsde/io/render.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace lvsde;

namespace {

struct EmbedArgs {
    std::string input;
    std::string output;
    std::string format = "vectors";
    std::optional<int> label_column;
    bool no_header = false;
    std::string metric = "euclidean";
    std::string mode = "faithful";
    std::vector<int> iterations;
    bool select_best = false;
    bool verbose = false;
    RunConfig cfg;
};

fs::path snapshot_path(const fs::path& output, int iteration) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ".iter%04d", iteration);
    fs::path p = output;
    p.replace_filename(output.stem().string() + buf + output.extension().string());
    return p;
}

int run_embed(EmbedArgs& a) {
    io::LoadOptions load;
    load.format = a.format == "distance_matrix" ? io::InputFormat::DistanceMatrix
                                                : io::InputFormat::Vectors;
    load.label_column = a.label_column;
    if (a.no_header) load.header = false;
    std::vector<std::string> warnings;
    const DataSet<double> data = io::load_dataset(a.input, load, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    static const std::map<std::string, Metric> metrics{{"euclidean", Metric::Euclidean},
                                                       {"cosine", Metric::Cosine},
                                                       {"precomputed", Metric::Precomputed}};
    a.cfg.metric = metrics.at(a.metric);
    if (load.format == io::InputFormat::DistanceMatrix) a.cfg.metric = Metric::Precomputed;
    a.cfg.mode = a.mode == "aggregate" ? RepulsionMode::Aggregate : RepulsionMode::Faithful;
    if (!a.iterations.empty()) {
        if (a.iterations.size() != 4) throw InvalidInput("--iterations takes four values");
        std::copy(a.iterations.begin(), a.iterations.end(), a.cfg.phase_iterations.begin());
    }

    ProgressCallback progress;
    if (a.verbose) {
        progress = [](const Progress& p) {
            if (p.global_iteration % 100 == 0)
                std::cerr << "iteration " << p.global_iteration << " phase " << p.phase
                          << " temperature " << p.temperature << " points " << p.point_count
                          << "\n";
        };
    }
    RunTrace<double> trace = lvsde::run(data, a.cfg, progress);
    if (a.select_best) {
        if (!data.has_labels()) throw InvalidInput("--select-best needs a label column");
        LambdaSpec spec;
        spec.evaluation = LayerSet::red_only();
        spec.classification = LayerSet::red_only();
        const double value = select_best_snapshot(trace, data.labels, spec);
        std::cerr << "selected iteration " << trace.selected.global_iteration
                  << " (red/red measure " << value << ")\n";
    }

    const std::string sum = io::file_checksum(a.input);
    auto doc = io::make_document(trace.selected.points, data.labels);
    io::annotate(doc, a.cfg, trace.stats, trace.selected.frame, sum);
    doc.set("selected_iteration", std::to_string(trace.selected.global_iteration));
    io::write_document(a.output, doc);

    for (const auto& snap : trace.snapshots) {
        auto sdoc = io::make_document(snap.points, data.labels);
        io::annotate(sdoc, a.cfg, trace.stats, snap.frame, sum);
        sdoc.set("selected_iteration", std::to_string(snap.global_iteration));
        io::write_document(snapshot_path(a.output, snap.global_iteration), sdoc);
    }
    if (a.verbose)
        std::cerr << "gray budget " << trace.stats.gray_budget << ", duplications "
                  << trace.stats.duplications_succeeded << " ("
                  << trace.stats.duplications_failed << " failed)\n";
    return 0;
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f%%", v * 100.0);
    return buf;
}

int run_evaluate(const std::string& input, int k, bool include_own) {
    const auto doc = io::read_document(input);
    const auto labels = io::instance_labels(doc);
    if (labels.empty()) throw InvalidInput("document carries no labels for every instance");
    const auto points = io::to_points(doc);
    std::printf("%-12s %-15s %s\n", "evaluation", "classification", "lambda");
    for (const auto& [eval_layers, class_layers] : standard_layer_pairs()) {
        LambdaSpec spec;
        spec.evaluation = eval_layers;
        spec.classification = class_layers;
        spec.k = k;
        spec.exclude_own_instance = !include_own;
        std::string cell;
        try {
            cell = percent(lambda_measure(points, labels, spec));
        } catch (const InvalidInput& e) {
            cell = std::string("n/a (") + e.what() + ")";
        }
        std::printf("%-12s %-15s %s\n", eval_layers.name().c_str(), class_layers.name().c_str(),
                    cell.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layered vertex-splitting data embedding"};
    app.require_subcommand(1);
    // Options go under an [embed] section; flags on the command line win.
    app.set_config("--config", "", "Configuration file");
    app.fallthrough();

    EmbedArgs ea;
    auto* embed = app.add_subcommand("embed", "Embed a data set into two layers");
    embed->add_option("--input,-i", ea.input, "Input table")->required()->check(CLI::ExistingFile);
    embed->add_option("--output,-o", ea.output, "Embedding document to write")->required();
    embed->add_option("--format", ea.format, "Input format")
        ->check(CLI::IsMember({"vectors", "distance_matrix"}));
    embed->add_option("--label-column", ea.label_column,
                      "Column holding class labels (negative counts from the end)");
    embed->add_flag("--no-header", ea.no_header, "Never treat the first row as a header");
    embed->add_option("--metric", ea.metric)->check(CLI::IsMember({"euclidean", "cosine", "precomputed"}));
    embed->add_option("--b", ea.cfg.b, "Visual density adjustment");
    embed->add_option("--p-hat", ea.cfg.p_hat, "Neighbourhood graph out-degree");
    embed->add_option("--z", ea.cfg.z, "Neighbour rank used by the distance transform");
    embed->add_option("--u-bar", ea.cfg.u_bar, "Maximum temperature");
    embed->add_option("--iterations", ea.iterations, "Iterations of the four phases")->expected(4);
    embed->add_option("--width", ea.cfg.width);
    embed->add_option("--height", ea.cfg.height);
    embed->add_option("--seed", ea.cfg.seed);
    embed->add_option("--frame-margin", ea.cfg.frame_margin_fraction,
                      "Frame padding as a fraction of the layout extent");
    embed->add_option("--snapshots", ea.cfg.snapshot_every, "Also write every k-th iteration");
    embed->add_flag("--parallel", ea.cfg.parallel);
    embed->add_option("--threads", ea.cfg.threads, "Worker threads with --parallel (0 = all)");
    embed->add_option("--mode", ea.mode)->check(CLI::IsMember({"faithful", "aggregate"}));
    embed->add_flag("--select-best", ea.select_best,
                    "Output the snapshot with the best red/red measure");
    embed->add_flag("--verbose,-v", ea.verbose);

    std::string eval_input;
    int eval_k = 15;
    bool include_own = false;
    auto* evaluate = app.add_subcommand("evaluate", "Print layered KNN accuracy table");
    evaluate->add_option("--input,-i", eval_input)->required()->check(CLI::ExistingFile);
    evaluate->add_option("--k", eval_k, "Evaluation neighbourhood size")->check(CLI::PositiveNumber);
    evaluate->add_flag("--include-own-projections", include_own,
                       "Let an instance's other projection vote for it");

    std::string render_input, render_output, metaphor = "circle";
    io::RenderOptions ropts;
    bool no_legend = false;
    auto* render = app.add_subcommand("render", "Write an SVG scatter plot");
    render->add_option("--input,-i", render_input)->required()->check(CLI::ExistingFile);
    render->add_option("--output,-o", render_output)->required();
    render->add_option("--metaphor", metaphor)->check(CLI::IsMember({"circle", "small-gray"}));
    render->add_option("--width", ropts.width);
    render->add_option("--height", ropts.height);
    render->add_option("--point-radius", ropts.point_radius);
    render->add_option("--title", ropts.title);
    render->add_flag("--no-legend", no_legend);

    std::string query_input, rect_text;
    auto* query = app.add_subcommand("query-rect", "List duplicates of points inside a rectangle");
    query->add_option("--input,-i", query_input)->required()->check(CLI::ExistingFile);
    query->add_option("--rect", rect_text, "x0,y0,x1,y1")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*embed) return run_embed(ea);
        if (*evaluate) return run_evaluate(eval_input, eval_k, include_own);
        if (*render) {
            ropts.metaphor = metaphor == "small-gray" ? io::LayerMetaphor::SmallGray
                                                      : io::LayerMetaphor::CircleGray;
            ropts.legend = !no_legend;
            const auto svg = io::render_svg(io::read_document(render_input), ropts);
            std::ofstream out(render_output, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + render_output);
            out << svg;
            return 0;
        }
        if (*query) {
            const auto result =
                io::query_rect(io::read_document(query_input), io::parse_rect(rect_text));
            std::cout << io::format_query(result);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
