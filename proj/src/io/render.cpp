#include "lvsde/io/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

namespace lvsde::io {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

const std::vector<std::string>& class_palette() {
    static const std::vector<std::string> palette = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
    return palette;
}

std::string render_svg(const EmbeddingDocument& doc, const RenderOptions& options) {
    const auto& palette = class_palette();
    std::map<std::string, std::string> colour_of;
    bool labelled = !doc.points.empty();
    for (const auto& p : doc.points)
        if (p.label.empty()) labelled = false;
    if (labelled) {
        for (const auto& p : doc.points) colour_of.emplace(p.label, "");
        std::size_t k = 0;
        for (auto& [_, colour] : colour_of) colour = palette[k++ % palette.size()];
    }

    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const auto& p : doc.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    if (doc.points.empty()) min_x = min_y = 0, max_x = max_y = 1;
    const double legend_w = options.legend ? 150.0 : 0.0;
    const double plot_w = std::max(1.0, options.width - 2 * options.margin - legend_w);
    const double plot_h = std::max(1.0, options.height - 2 * options.margin);
    const double span_x = max_x > min_x ? max_x - min_x : 1.0;
    const double span_y = max_y > min_y ? max_y - min_y : 1.0;
    const double scale = std::min(plot_w / span_x, plot_h / span_y);
    auto sx = [&](double x) { return options.margin + (x - min_x) * scale; };
    // Visual-space y grows upward.
    auto sy = [&](double y) { return options.margin + plot_h - (y - min_y) * scale; };

    const double r = options.point_radius;
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(options.width) +
           "\" height=\"" + num(options.height) + "\" viewBox=\"0 0 " + num(options.width) + " " +
           num(options.height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(options.width) + "\" height=\"" +
           num(options.height) + "\" fill=\"white\"/>\n";
    if (!options.title.empty())
        svg += "<text x=\"" + num(options.margin) + "\" y=\"" + num(options.margin * 0.7) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(options.title) +
               "</text>\n";

    // Red layer first so gray markers stay visible on top.
    for (Layer pass : {Layer::Red, Layer::Gray}) {
        svg += pass == Layer::Red ? "<g id=\"red-layer\">\n" : "<g id=\"gray-layer\">\n";
        for (const auto& p : doc.points) {
            if (p.layer != pass) continue;
            const std::string fill =
                labelled ? colour_of.at(p.label) : (p.layer == Layer::Red ? "#d62728" : "#9a9a9a");
            const bool gray = p.layer == Layer::Gray;
            const double radius =
                gray && options.metaphor == LayerMetaphor::SmallGray ? r * 0.55 : r;
            svg += "<circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) + "\" r=\"" +
                   num(radius) + "\" fill=\"" + fill + "\"";
            if (gray && options.metaphor == LayerMetaphor::CircleGray)
                svg += " stroke=\"black\" stroke-width=\"1.2\"";
            svg += "/>\n";
            if (p.second_projection)
                svg += "<circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) + "\" r=\"" +
                       num(std::max(0.8, radius * 0.35)) + "\" fill=\"black\"/>\n";
        }
        svg += "</g>\n";
    }

    if (options.legend) {
        double lx = options.width - legend_w + 8;
        double ly = options.margin + 8;
        svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
        auto entry = [&](const std::string& swatch, const std::string& text) {
            svg += swatch;
            svg += "<text x=\"" + num(lx + 14) + "\" y=\"" + num(ly + 4) + "\">" + escape(text) +
                   "</text>\n";
            ly += 18;
        };
        const std::string c = num(lx + 4);
        if (labelled) {
            for (const auto& [label, colour] : colour_of)
                entry("<circle cx=\"" + c + "\" cy=\"" + num(ly) + "\" r=\"" + num(r) +
                          "\" fill=\"" + colour + "\"/>\n",
                      label);
        } else {
            entry("<circle cx=\"" + c + "\" cy=\"" + num(ly) + "\" r=\"" + num(r) +
                      "\" fill=\"#d62728\"/>\n",
                  "red layer");
        }
        const std::string gray_swatch =
            options.metaphor == LayerMetaphor::CircleGray
                ? "<circle cx=\"" + c + "\" cy=\"" + num(ly) + "\" r=\"" + num(r) +
                      "\" fill=\"" + (labelled ? "white" : "#9a9a9a") +
                      "\" stroke=\"black\" stroke-width=\"1.2\"/>\n"
                : "<circle cx=\"" + c + "\" cy=\"" + num(ly) + "\" r=\"" + num(r * 0.55) +
                      "\" fill=\"#9a9a9a\"/>\n";
        entry(gray_swatch, "gray layer");
        entry("<circle cx=\"" + c + "\" cy=\"" + num(ly) + "\" r=\"" + num(r) +
                  "\" fill=\"white\" stroke=\"#555\"/>\n<circle cx=\"" + c + "\" cy=\"" + num(ly) +
                  "\" r=\"" + num(std::max(0.8, r * 0.35)) + "\" fill=\"black\"/>\n",
              "second projection");
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace lvsde::io
