#pragma once

// Text serialization of a finished embedding.
//
// The format is a comma-separated table preceded by commented header lines:
//
//   # lvsde-embedding 1
//   # seed=7
//   # ... more key=value metadata lines ...
//   instance,x,y,layer,second,mass,label
//   0,412.5,87.25,red,0,1,setosa
//
// Reals are written in shortest round-trip form, so parse(serialize(d)) == d.

#include "lvsde/core.hpp"
#include "lvsde/phases.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lvsde::io {

struct DocumentPoint {
    Index instance = 0;
    double x = 0;
    double y = 0;
    Layer layer = Layer::Red;
    bool second_projection = false;
    double mass = 1;
    std::string label;

    friend bool operator==(const DocumentPoint&, const DocumentPoint&) = default;
};

struct EmbeddingDocument {
    /// Ordered key=value metadata: config echo, seed, checksum, run statistics.
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<DocumentPoint> points;

    const std::string* find(std::string_view key) const;
    void set(std::string key, std::string value);

    friend bool operator==(const EmbeddingDocument&, const EmbeddingDocument&) = default;
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_real(double v);

std::string serialize(const EmbeddingDocument& doc);
EmbeddingDocument parse_document(std::string_view text);

void write_document(const std::filesystem::path& path, const EmbeddingDocument& doc);
EmbeddingDocument read_document(const std::filesystem::path& path);

/// Builds a document from a set of points; `labels` may be empty.
EmbeddingDocument make_document(const std::vector<ProjectedPoint<double>>& points,
                                const std::vector<std::string>& labels);

/// Adds the run configuration, statistics and data checksum to `doc`.
void annotate(EmbeddingDocument& doc, const RunConfig& cfg, const RunStatistics& stats,
              const std::optional<Frame<double>>& frame, const std::string& data_checksum);

std::vector<ProjectedPoint<double>> to_points(const EmbeddingDocument& doc);

/// Per-instance labels recovered from the points; empty if any is missing.
std::vector<std::string> instance_labels(const EmbeddingDocument& doc);

} // namespace lvsde::io
