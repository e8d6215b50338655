#include "lvsde/io/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace lvsde::io {

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(row == 0 ? what
                                  : "line " + std::to_string(row) +
                                        (column ? ", column " + std::to_string(column) : "") +
                                        ": " + what),
      row_(row), column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

struct RawRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

} // namespace

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            out.emplace_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

DataSet<double> parse_dataset(std::istream& in, const LoadOptions& options,
                              std::vector<std::string>* warnings) {
    std::vector<RawRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.push_back({line_no, split_fields(t)});
    }
    if (rows.empty()) throw ParseError("input contains no data rows", 0, 0);

    const std::size_t width = rows.front().fields.size();
    std::optional<std::size_t> label_col;
    if (options.label_column) {
        int c = *options.label_column;
        if (c < 0) c += static_cast<int>(width);
        if (c < 0 || c >= static_cast<int>(width))
            throw ParseError("label column " + std::to_string(*options.label_column) +
                                 " is outside the table",
                             rows.front().line, 0);
        label_col = static_cast<std::size_t>(c);
    }

    bool header = false;
    if (options.header) {
        header = *options.header;
    } else {
        const auto& first = rows.front().fields;
        for (std::size_t c = 0; c < first.size(); ++c)
            if (c != label_col && !parse_number(first[c])) header = true;
    }
    if (header) rows.erase(rows.begin());
    if (rows.empty()) throw ParseError("input contains a header but no data rows", 0, 0);

    const std::size_t numeric_cols = width - (label_col ? 1 : 0);
    if (numeric_cols == 0) throw ParseError("no numeric columns", rows.front().line, 0);
    const auto n = static_cast<Index>(rows.size());

    MatrixX<double> values(n, static_cast<Index>(numeric_cols));
    std::vector<std::string> labels;
    for (Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (row.fields.size() != width)
            throw ParseError("expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(row.fields.size()),
                             row.line, 0);
        Index out_col = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col) {
                labels.push_back(row.fields[c]);
                continue;
            }
            const auto v = parse_number(row.fields[c]);
            if (!v)
                throw ParseError("non-numeric value '" + row.fields[c] + "'", row.line, c + 1);
            values(r, out_col++) = *v;
        }
    }

    DataSet<double> data;
    data.labels = std::move(labels);
    if (options.format == InputFormat::Vectors) {
        data.instances = std::move(values);
        return data;
    }

    if (values.rows() != values.cols())
        throw ParseError("distance matrix is not square (" + std::to_string(values.rows()) + "x" +
                             std::to_string(values.cols()) + ")",
                         0, 0);
    const auto data_col = [&](Index c) {
        std::size_t col = static_cast<std::size_t>(c);
        if (label_col && col >= *label_col) ++col;
        return col + 1;
    };
    for (Index r = 0; r < n; ++r) {
        const std::size_t line = rows[static_cast<std::size_t>(r)].line;
        if (values(r, r) != 0.0)
            throw ParseError("distance matrix diagonal must be zero", line, data_col(r));
        for (Index c = 0; c < n; ++c)
            if (values(r, c) < 0.0)
                throw ParseError("negative distance", line, data_col(c));
    }
    if (warnings && (values.array() == 0.0).all())
        warnings->push_back("all distances are zero: every instance coincides");
    data.precomputed_distances = std::move(values);
    return data;
}

DataSet<double> load_dataset(const std::filesystem::path& path, const LoadOptions& options,
                             std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    return parse_dataset(in, options, warnings);
}

std::string checksum(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return checksum(ss.str());
}

} // namespace lvsde::io
