#include "lvsde/io/document.hpp"
#include "lvsde/io/dataset.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lvsde::io {

namespace {

constexpr std::string_view kMagic = "# lvsde-embedding 1";
constexpr std::string_view kColumns = "instance,x,y,layer,second,mass,label";

double parse_real(std::string_view s, std::size_t line, std::size_t column) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad number '" + std::string(s) + "'", line, column);
    return v;
}

Index parse_index(std::string_view s, std::size_t line, std::size_t column) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
        throw ParseError("bad instance id '" + std::string(s) + "'", line, column);
    return static_cast<Index>(v);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join_ints(const std::array<int, 4>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

} // namespace

const std::string* EmbeddingDocument::find(std::string_view key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return &v;
    return nullptr;
}

void EmbeddingDocument::set(std::string key, std::string value) {
    for (auto& [k, v] : meta)
        if (k == key) {
            v = std::move(value);
            return;
        }
    meta.emplace_back(std::move(key), std::move(value));
}

std::string format_real(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("cannot format number");
    return std::string(buf.data(), ptr);
}

std::string serialize(const EmbeddingDocument& doc) {
    std::string out;
    out += kMagic;
    out += '\n';
    for (const auto& [key, value] : doc.meta) {
        if (key.empty() || key.find_first_of("=\n") != std::string::npos ||
            value.find('\n') != std::string::npos)
            throw InvalidInput("metadata key/value not representable: '" + key + "'");
        out += "# " + key + "=" + value + "\n";
    }
    out += kColumns;
    out += '\n';
    for (const auto& p : doc.points) {
        if (p.label.find_first_of(",\n\r") != std::string::npos)
            throw InvalidInput("labels may not contain commas or line breaks: '" + p.label + "'");
        out += std::to_string(p.instance);
        out += ',' + format_real(p.x);
        out += ',' + format_real(p.y);
        out += ',';
        out += to_string(p.layer);
        out += p.second_projection ? ",1," : ",0,";
        out += format_real(p.mass);
        out += ',' + p.label;
        out += '\n';
    }
    return out;
}

EmbeddingDocument parse_document(std::string_view text) {
    EmbeddingDocument doc;
    std::size_t line_no = 0;
    bool seen_magic = false;
    bool seen_columns = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!seen_magic) {
            if (line != kMagic) throw ParseError("not an embedding document", line_no, 0);
            seen_magic = true;
            continue;
        }
        if (!seen_columns) {
            if (line.starts_with("# ")) {
                const std::string_view body = line.substr(2);
                const std::size_t eq = body.find('=');
                if (eq == std::string_view::npos || eq == 0)
                    throw ParseError("metadata line must be '# key=value'", line_no, 0);
                doc.meta.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
                continue;
            }
            if (line != kColumns) throw ParseError("missing column header", line_no, 0);
            seen_columns = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 7)
            throw ParseError("expected 7 fields, found " + std::to_string(f.size()), line_no, 0);
        DocumentPoint p;
        p.instance = parse_index(f[0], line_no, 1);
        p.x = parse_real(f[1], line_no, 2);
        p.y = parse_real(f[2], line_no, 3);
        if (f[3] == "red")
            p.layer = Layer::Red;
        else if (f[3] == "gray")
            p.layer = Layer::Gray;
        else
            throw ParseError("layer must be red or gray", line_no, 4);
        if (f[4] != "0" && f[4] != "1") throw ParseError("second must be 0 or 1", line_no, 5);
        p.second_projection = f[4] == "1";
        p.mass = parse_real(f[5], line_no, 6);
        p.label = std::string(f[6]);
        doc.points.push_back(std::move(p));
    }
    if (!seen_columns) throw ParseError("truncated embedding document", line_no, 0);
    return doc;
}

void write_document(const std::filesystem::path& path, const EmbeddingDocument& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize(doc);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

EmbeddingDocument read_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

EmbeddingDocument make_document(const std::vector<ProjectedPoint<double>>& points,
                                const std::vector<std::string>& labels) {
    EmbeddingDocument doc;
    doc.points.reserve(points.size());
    for (const auto& p : points) {
        DocumentPoint d;
        d.instance = p.instance;
        d.x = p.position.x();
        d.y = p.position.y();
        d.layer = p.layer;
        d.second_projection = p.second_projection;
        d.mass = p.mass;
        if (!labels.empty()) d.label = labels.at(static_cast<std::size_t>(p.instance));
        doc.points.push_back(std::move(d));
    }
    return doc;
}

void annotate(EmbeddingDocument& doc, const RunConfig& cfg, const RunStatistics& stats,
              const std::optional<Frame<double>>& frame, const std::string& data_checksum) {
    doc.set("seed", std::to_string(cfg.seed));
    doc.set("metric", to_string(cfg.metric));
    doc.set("mode", to_string(cfg.mode));
    doc.set("b", format_real(cfg.b));
    doc.set("p_hat", std::to_string(cfg.p_hat));
    doc.set("z", std::to_string(cfg.z));
    doc.set("u_bar", format_real(cfg.u_bar));
    doc.set("width", format_real(cfg.width));
    doc.set("height", format_real(cfg.height));
    doc.set("phase_iterations", join_ints(cfg.phase_iterations));
    doc.set("frame_margin", format_real(cfg.frame_margin_fraction));
    doc.set("gray_sigma_factor", format_real(cfg.gray_sigma_factor));
    doc.set("gray_cap_fraction", format_real(cfg.gray_cap_fraction));
    doc.set("axis_count", std::to_string(cfg.axis_count));
    doc.set("max_projections", std::to_string(cfg.max_projections));
    doc.set("iterations", std::to_string(stats.iterations));
    doc.set("gray_budget", std::to_string(stats.gray_budget));
    doc.set("duplications", std::to_string(stats.duplications_succeeded));
    doc.set("failed_duplications", std::to_string(stats.duplications_failed));
    if (frame)
        doc.set("frame", format_real(frame->min().x()) + "," + format_real(frame->min().y()) +
                             "," + format_real(frame->max().x()) + "," +
                             format_real(frame->max().y()));
    doc.set("data_checksum", data_checksum);
}

std::vector<ProjectedPoint<double>> to_points(const EmbeddingDocument& doc) {
    std::vector<ProjectedPoint<double>> out;
    out.reserve(doc.points.size());
    for (const auto& d : doc.points) {
        ProjectedPoint<double> p;
        p.instance = d.instance;
        p.position = {d.x, d.y};
        p.layer = d.layer;
        p.second_projection = d.second_projection;
        p.mass = d.mass;
        out.push_back(p);
    }
    return out;
}

std::vector<std::string> instance_labels(const EmbeddingDocument& doc) {
    Index n = 0;
    for (const auto& p : doc.points) n = std::max(n, p.instance + 1);
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& p : doc.points) {
        if (p.label.empty()) return {};
        labels[static_cast<std::size_t>(p.instance)] = p.label;
        seen[static_cast<std::size_t>(p.instance)] = 1;
    }
    for (char s : seen)
        if (!s) return {};
    return labels;
}

} // namespace lvsde::io
