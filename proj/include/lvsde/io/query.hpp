#pragma once

#include "lvsde/io/document.hpp"

#include <string>

namespace lvsde::io {

/// Axis-aligned query rectangle; corners may be given in any order.
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(double x, double y) const;
};

Rect parse_rect(std::string_view text);

struct Correspondence {
    Index point = 0;
    Index instance = 0;
    double x = 0, y = 0;
    Index sibling = 0;
    double sibling_x = 0, sibling_y = 0;

    friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

struct RectQuery {
    /// Document row indices of every point inside the rectangle (borders included).
    std::vector<Index> contained;
    /// One entry per contained point whose instance has another projection.
    std::vector<Correspondence> correspondences;
    std::vector<DocumentPoint> points;
};

RectQuery query_rect(const EmbeddingDocument& doc, const Rect& rect);

/// One row per contained point; sibling columns are blank for instances
/// with a single projection.
std::string format_query(const RectQuery& result);

} // namespace lvsde::io
