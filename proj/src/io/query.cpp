#include "lvsde/io/query.hpp"
#include "lvsde/io/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace lvsde::io {

bool Rect::contains(double x, double y) const {
    return x >= std::min(x0, x1) && x <= std::max(x0, x1) && y >= std::min(y0, y1) &&
           y <= std::max(y0, y1);
}

Rect parse_rect(std::string_view text) {
    const auto fields = split_fields(text);
    if (fields.size() != 4) throw InvalidInput("rectangle must be x0,y0,x1,y1");
    double v[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string& f = fields[i];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
        if (ec != std::errc() || ptr != f.data() + f.size())
            throw InvalidInput("bad rectangle coordinate '" + f + "'");
    }
    return {v[0], v[1], v[2], v[3]};
}

RectQuery query_rect(const EmbeddingDocument& doc, const Rect& rect) {
    std::map<Index, std::vector<Index>> rows_of;
    for (Index r = 0; r < static_cast<Index>(doc.points.size()); ++r)
        rows_of[doc.points[static_cast<std::size_t>(r)].instance].push_back(r);

    RectQuery out;
    out.points = doc.points;
    for (Index r = 0; r < static_cast<Index>(doc.points.size()); ++r) {
        const auto& p = doc.points[static_cast<std::size_t>(r)];
        if (!rect.contains(p.x, p.y)) continue;
        out.contained.push_back(r);
        for (Index s : rows_of.at(p.instance)) {
            if (s == r) continue;
            const auto& sib = doc.points[static_cast<std::size_t>(s)];
            out.correspondences.push_back({r, p.instance, p.x, p.y, s, sib.x, sib.y});
        }
    }
    return out;
}

std::string format_query(const RectQuery& result) {
    std::string out = "# points_in_rect=" + std::to_string(result.contained.size()) +
                      " correspondences=" + std::to_string(result.correspondences.size()) + "\n";
    out += "point,instance,x,y,sibling,sibling_x,sibling_y\n";
    std::size_t next = 0;
    for (Index r : result.contained) {
        bool listed = false;
        for (; next < result.correspondences.size() && result.correspondences[next].point == r; ++next) {
            const auto& c = result.correspondences[next];
            out += std::to_string(c.point) + ',' + std::to_string(c.instance) + ',' +
                   format_real(c.x) + ',' + format_real(c.y) + ',' + std::to_string(c.sibling) +
                   ',' + format_real(c.sibling_x) + ',' + format_real(c.sibling_y) + '\n';
            listed = true;
        }
        if (listed) continue;
        const auto& c = result.points[static_cast<std::size_t>(r)];
        out += std::to_string(r) + ',' + std::to_string(c.instance) + ',' + format_real(c.x) + ',' +
               format_real(c.y) + ",,,\n";
    }
    return out;
}

} // namespace lvsde::io
