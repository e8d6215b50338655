#pragma once

#include "lvsde/io/document.hpp"

#include <string>

namespace lvsde::io {

enum class LayerMetaphor {
    /// Gray-layer points get a black outline.
    CircleGray,
    /// Gray-layer points are drawn at reduced size.
    SmallGray,
};

struct RenderOptions {
    double width = 800;
    double height = 800;
    double margin = 24;
    double point_radius = 4;
    LayerMetaphor metaphor = LayerMetaphor::CircleGray;
    bool legend = true;
    std::string title;
};

/// Fixed 12-colour palette; labels take colours in sorted label order.
const std::vector<std::string>& class_palette();

/// SVG scatter plot. Class colours when labels exist, otherwise red/gray by
/// layer; second projections carry a black centre dot. Output bytes depend
/// only on the document and options.
std::string render_svg(const EmbeddingDocument& doc, const RenderOptions& options = {});

} // namespace lvsde::io
