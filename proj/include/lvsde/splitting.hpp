#pragma once

// Replication pressure over radial axes and vertex splitting (duplication)
// of projected points with out-neighbour rewiring and mass redistribution.

#include "lvsde/core.hpp"
#include "lvsde/distances.hpp"

#include <numbers>
#include <span>

namespace lvsde {

template <typename Scalar>
struct PressureResult {
    Scalar pressure = Scalar(0);
    /// Axis angle in radians, reduced to [0, pi).
    Scalar best_axis_angle = Scalar(0);
    int best_axis = 0;
    Scalar positive_pressure = Scalar(0);
    Scalar negative_pressure = Scalar(0);
    /// Unit vector along the maximizing axis, oriented toward whichever side
    /// carried the larger summed projection (ties keep the axis direction).
    Vector2<Scalar> split_direction = Vector2<Scalar>::UnitX();
};

/// Unit directions of `axis_count` axes spaced 360/axis_count degrees apart.
/// For an even count the second half is the exact negation of the first, so
/// an axis and its opposite yield bitwise-equal pressures.
template <typename Scalar>
std::vector<Vector2<Scalar>> radial_axes(int axis_count) {
    if (axis_count < 1) throw InvalidInput("axis_count must be >= 1");
    std::vector<Vector2<Scalar>> axes(static_cast<std::size_t>(axis_count));
    const int half = axis_count % 2 == 0 ? axis_count / 2 : axis_count;
    for (int k = 0; k < axis_count; ++k) {
        if (k >= half) {
            axes[static_cast<std::size_t>(k)] = -axes[static_cast<std::size_t>(k - half)];
            continue;
        }
        const double angle = 2.0 * std::numbers::pi * k / axis_count;
        axes[static_cast<std::size_t>(k)] =
            Vector2<Scalar>(static_cast<Scalar>(std::cos(angle)), static_cast<Scalar>(std::sin(angle)));
    }
    return axes;
}

/// For each axis, sums the magnitudes of the perpendicular projections of
/// every force on its positive and negative sides; the point's pressure is
/// the largest positive + negative total. Ties go to the smallest angle.
template <typename Scalar>
PressureResult<Scalar> replication_pressure(std::span<const Vector2<Scalar>> forces,
                                            int axis_count = 36) {
    const auto axes = radial_axes<Scalar>(axis_count);
    PressureResult<Scalar> best;
    bool have = false;
    for (int k = 0; k < axis_count; ++k) {
        const Vector2<Scalar>& axis = axes[static_cast<std::size_t>(k)];
        Scalar pos = 0;
        Scalar neg = 0;
        for (const auto& f : forces) {
            const Scalar c = f.dot(axis);
            if (c > 0)
                pos += c;
            else if (c < 0)
                neg -= c;
        }
        const Scalar total = pos + neg;
        if (!have || total > best.pressure) {
            have = true;
            best.pressure = total;
            best.best_axis = k;
            best.positive_pressure = pos;
            best.negative_pressure = neg;
            best.split_direction = pos >= neg ? axis : Vector2<Scalar>(-axis);
        }
    }
    double angle = 2.0 * std::numbers::pi * best.best_axis / axis_count;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    best.best_axis_angle = static_cast<Scalar>(angle);
    return best;
}

template <typename Scalar>
PressureResult<Scalar> replication_pressure(const std::vector<Vector2<Scalar>>& forces,
                                            int axis_count = 36) {
    return replication_pressure(std::span<const Vector2<Scalar>>(forces), axis_count);
}

/// Number of points allowed into the gray layer: the count of pressures
/// strictly outside mean +- sigma_factor * sigma (population sigma), capped
/// at floor(n * cap_fraction).
template <typename Scalar>
Index select_gray_budget(std::span<const Scalar> pressures, Index n, double sigma_factor = 1.2,
                         double cap_fraction = 0.25) {
    const auto cap = static_cast<Index>(std::floor(static_cast<double>(n) * cap_fraction));
    if (pressures.empty()) return 0;
    Eigen::Map<const VectorX<Scalar>> v(pressures.data(), static_cast<Index>(pressures.size()));
    const Scalar mean = v.mean();
    using std::sqrt;
    const Scalar sigma = sqrt((v.array() - mean).square().mean());
    const Scalar lo = mean - static_cast<Scalar>(sigma_factor) * sigma;
    const Scalar hi = mean + static_cast<Scalar>(sigma_factor) * sigma;
    const auto outside = static_cast<Index>((v.array() < lo || v.array() > hi).count());
    return std::min(outside, cap);
}

template <typename Scalar>
Index select_gray_budget(const std::vector<Scalar>& pressures, Index n, double sigma_factor = 1.2,
                         double cap_fraction = 0.25) {
    return select_gray_budget(std::span<const Scalar>(pressures), n, sigma_factor, cap_fraction);
}

enum class DuplicationOutcome {
    Success,
    /// One side of the split would be left without neighbours; nothing changed.
    Failed,
    /// The point is not eligible (not gray, or its instance is already at the
    /// projection limit); nothing changed.
    Rejected,
};

struct DuplicationReport {
    DuplicationOutcome outcome = DuplicationOutcome::Rejected;
    Index new_point = -1;
    std::size_t c1 = 0, c2 = 0, c3 = 0;
    explicit operator bool() const { return outcome == DuplicationOutcome::Success; }
};

/// Splits `point` into two projections of the same instance.
///
/// Out-neighbours strictly on the `split_direction` side of the line through
/// the point (perpendicular to that direction) move to a new second point,
/// which is then placed at their centroid; any remaining out-neighbour
/// strictly closer to the second point moves as well. Masses scale by the
/// retained share of the original out-degree. Edges into the point are left
/// untouched. State and graph are only modified on success.
template <typename Scalar>
DuplicationReport duplicate_point(EmbeddingState<Scalar>& state, NeighbourhoodGraph& graph,
                                  Index point, const Vector2<Scalar>& split_direction,
                                  int max_projections = 2) {
    DuplicationReport report;
    if (point < 0 || point >= state.point_count())
        throw InvalidInput("duplicate_point: point index out of range");
    if (graph.vertex_count() != state.point_count())
        throw InvalidInput("graph and embedding disagree on the number of points");

    const auto& first = state.points[static_cast<std::size_t>(point)];
    const auto& owned = state.projections_of[static_cast<std::size_t>(first.instance)];
    if (first.layer != Layer::Gray || static_cast<int>(owned.size()) >= max_projections)
        return report;

    const auto& out = graph.out_neighbours[static_cast<std::size_t>(point)];
    report.c1 = out.size();
    const Vector2<Scalar> origin = first.position;
    auto pos = [&](Index q) -> const Vector2<Scalar>& {
        return state.points[static_cast<std::size_t>(q)].position;
    };

    std::vector<Index> keep;
    std::vector<Index> moved;
    for (Index q : out) {
        if ((pos(q) - origin).dot(split_direction) > 0)
            moved.push_back(q);
        else
            keep.push_back(q);
    }
    report.outcome = DuplicationOutcome::Failed;
    if (moved.empty() || keep.empty()) {
        report.c2 = keep.size();
        report.c3 = moved.size();
        return report;
    }

    Vector2<Scalar> centroid = Vector2<Scalar>::Zero();
    for (Index q : moved) centroid += pos(q);
    centroid /= static_cast<Scalar>(moved.size());

    std::vector<Index> still_kept;
    for (Index q : keep) {
        if ((pos(q) - centroid).squaredNorm() < (pos(q) - origin).squaredNorm())
            moved.push_back(q);
        else
            still_kept.push_back(q);
    }
    report.c2 = still_kept.size();
    report.c3 = moved.size();
    if (still_kept.empty()) return report;

    // Commit.
    const Scalar mass = first.mass;
    const Scalar c1 = static_cast<Scalar>(report.c1);
    ProjectedPoint<Scalar> second = first;
    second.position = centroid;
    second.layer = Layer::Gray;
    second.second_projection = true;
    second.mass = mass * (static_cast<Scalar>(report.c3) / c1);

    const Index id = state.point_count();
    state.points[static_cast<std::size_t>(point)].mass = mass * (static_cast<Scalar>(report.c2) / c1);
    state.points.push_back(second);
    state.projections_of[static_cast<std::size_t>(second.instance)].push_back(id);
    graph.out_neighbours[static_cast<std::size_t>(point)] = std::move(still_kept);
    graph.out_neighbours.push_back(std::move(moved));

    report.outcome = DuplicationOutcome::Success;
    report.new_point = id;
    return report;
}

/// Overload taking the axis angle; the positive side of the axis is used.
template <typename Scalar>
DuplicationReport duplicate_point(EmbeddingState<Scalar>& state, NeighbourhoodGraph& graph,
                                  Index point, Scalar axis_angle, int max_projections = 2) {
    using std::cos;
    using std::sin;
    return duplicate_point(state, graph, point, Vector2<Scalar>(cos(axis_angle), sin(axis_angle)),
                           max_projections);
}

} // namespace lvsde
