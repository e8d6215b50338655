#pragma once

// One iteration's worth of force application: the repulsive pass over all
// projected-point pairs and the attractive pass over neighbourhood-graph
// edges, both capped by the current temperature and clamped to the frame.

#include "lvsde/core.hpp"
#include "lvsde/distances.hpp"
#include "lvsde/parallel.hpp"

#include <numbers>

namespace lvsde {

/// Per-point force vectors applied during the current iteration, kept only
/// while replication pressure is needed. Attractive entries are stored before
/// division by mass.
template <typename Scalar>
struct ForceRecord {
    bool enabled = false;
    std::vector<std::vector<Vector2<Scalar>>> attractive;
    std::vector<std::vector<Vector2<Scalar>>> repulsive;

    void reset(Index point_count) {
        attractive.assign(static_cast<std::size_t>(point_count), {});
        repulsive.assign(static_cast<std::size_t>(point_count), {});
    }

    std::vector<Vector2<Scalar>> all(Index point) const {
        std::vector<Vector2<Scalar>> out;
        const auto p = static_cast<std::size_t>(point);
        if (p >= attractive.size()) return out;
        out.reserve(attractive[p].size() + repulsive[p].size());
        out.insert(out.end(), attractive[p].begin(), attractive[p].end());
        out.insert(out.end(), repulsive[p].begin(), repulsive[p].end());
        return out;
    }
};

struct PassOptions {
    RepulsionMode mode = RepulsionMode::Faithful;
    unsigned threads = 1;
};

/// Displacement length substituted for coincident points.
inline constexpr double kCoincidentEpsilon = 1e-9;

/// Phase temperature schedules, clamped below at zero.
inline double temperature_for(int phase, long mu, double u_bar) {
    if (phase < 1 || phase > 4) throw InvalidInput("phase must be 1..4");
    if (mu < 0) throw InvalidInput("iteration index must be >= 0");
    double elapsed = static_cast<double>(mu);
    if (phase == 2) elapsed += 500.0;
    if (phase >= 3) elapsed += 510.0;
    return std::max(0.0, (1000.0 - elapsed) * u_bar / 1000.0);
}

/// Base attractive magnitude (D_v / Gamma)^(1 - b).
template <typename Scalar>
Scalar attraction_magnitude(Scalar visual_distance, Scalar gamma, Scalar b) {
    using std::pow;
    return pow(visual_distance / gamma, Scalar(1) - b);
}

/// h = delta / delta_max - D_v / D_v_max.
template <typename Scalar>
Scalar distance_correction(Scalar transformed, Scalar delta_max, Scalar visual_distance,
                           Scalar dv_max) {
    return transformed / delta_max - visual_distance / dv_max;
}

/// psi adjusted by h, with the adjustment limited to half of |psi|.
template <typename Scalar>
Scalar adjusted_attraction(Scalar psi, Scalar h) {
    using std::abs;
    const Scalar half = abs(psi) / Scalar(2);
    return h > 0 ? psi + std::min(half, h) : psi + std::max(-half, h);
}

template <typename Scalar>
Vector2<Scalar> clamp_to_frame(const Vector2<Scalar>& position, const Frame<Scalar>& frame) {
    return position.cwiseMax(frame.min()).cwiseMin(frame.max());
}

/// Move limited to `temperature` in length.
template <typename Scalar>
Vector2<Scalar> capped_step(const Vector2<Scalar>& total, Scalar temperature) {
    const Scalar len = total.norm();
    if (len <= temperature) return total;
    return total / len * temperature;
}

/// Offset standing in for (to - from) when two points coincide: length
/// kCoincidentEpsilon, direction keyed on (seed, tick, from, to).
template <typename Scalar>
Vector2<Scalar> coincident_offset(std::uint64_t seed, std::uint64_t tick, Index from, Index to) {
    const std::uint64_t h = hash_key(seed, tick, static_cast<std::uint64_t>(from),
                                     static_cast<std::uint64_t>(to));
    const double angle = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
    return Vector2<Scalar>(static_cast<Scalar>(std::cos(angle) * kCoincidentEpsilon),
                           static_cast<Scalar>(std::sin(angle) * kCoincidentEpsilon));
}

/// Separation vector target - source, with the coincident fallback applied.
template <typename Scalar>
Vector2<Scalar> separation(const EmbeddingState<Scalar>& state, Index source, Index target,
                           const Vector2<Scalar>& source_pos, const Vector2<Scalar>& target_pos) {
    Vector2<Scalar> d = target_pos - source_pos;
    if (d.squaredNorm() == Scalar(0)) d = coincident_offset<Scalar>(state.seed, state.tick, source, target);
    return d;
}

/// Repulsion exerted on a point by another point displaced by `d`:
/// -Gamma^2 d / |d|^2, magnitude Gamma^2 / |d|.
template <typename Scalar>
Vector2<Scalar> repulsive_force(const Vector2<Scalar>& d, Scalar gamma) {
    return -(gamma * gamma) * d / d.squaredNorm();
}

/// Point indices in ascending instance order, then ascending projection order.
template <typename Scalar>
std::vector<Index> visit_order(const EmbeddingState<Scalar>& state) {
    std::vector<Index> order;
    order.reserve(state.points.size());
    for (const auto& owned : state.projections_of)
        order.insert(order.end(), owned.begin(), owned.end());
    return order;
}

namespace detail {

template <typename Scalar>
void apply_move(EmbeddingState<Scalar>& state, Index p, const Vector2<Scalar>& total) {
    auto& pt = state.points[static_cast<std::size_t>(p)];
    pt.position += capped_step(total, state.temperature);
    if (state.frame && !state.frame->contains(pt.position))
        pt.position = clamp_to_frame(pt.position, *state.frame);
}

template <typename Scalar>
void repulsive_faithful(EmbeddingState<Scalar>& state, ForceRecord<Scalar>* record) {
    const Index n = state.instance_count();
    auto& pts = state.points;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index p : state.projections_of[static_cast<std::size_t>(i)]) {
                auto& moving = pts[static_cast<std::size_t>(p)];
                if (moving.frozen) continue;
                Vector2<Scalar> total = Vector2<Scalar>::Zero();
                for (Index q : state.projections_of[static_cast<std::size_t>(j)]) {
                    if (q == p) continue;
                    const auto& other = pts[static_cast<std::size_t>(q)];
                    if (other.ineffective) continue;
                    const Vector2<Scalar> f = repulsive_force(
                        separation(state, p, q, moving.position, other.position), state.gamma);
                    total += f;
                    if (record) record->repulsive[static_cast<std::size_t>(p)].push_back(f);
                }
                apply_move(state, p, total);
            }
        }
    }
}

template <typename Scalar>
void repulsive_aggregate(EmbeddingState<Scalar>& state, ForceRecord<Scalar>* record,
                         unsigned threads) {
    const std::vector<Index> order = visit_order(state);
    const auto count = static_cast<std::size_t>(state.points.size());
    std::vector<Vector2<Scalar>> totals(count, Vector2<Scalar>::Zero());
    const auto& pts = state.points;
    parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Index p = order[k];
            const auto& moving = pts[static_cast<std::size_t>(p)];
            if (moving.frozen) continue;
            Vector2<Scalar> total = Vector2<Scalar>::Zero();
            for (Index q : order) {
                if (q == p) continue;
                const auto& other = pts[static_cast<std::size_t>(q)];
                if (other.ineffective) continue;
                const Vector2<Scalar> f = repulsive_force(
                    separation(state, p, q, moving.position, other.position), state.gamma);
                total += f;
                if (record) record->repulsive[static_cast<std::size_t>(p)].push_back(f);
            }
            totals[static_cast<std::size_t>(p)] = total;
        }
    });
    for (Index p : order)
        if (!pts[static_cast<std::size_t>(p)].frozen)
            apply_move(state, p, totals[static_cast<std::size_t>(p)]);
}

} // namespace detail

/// Repulsion between every ordered pair of projected points. Frozen points
/// do not move; ineffective points exert nothing. Repulsion uses unit mass.
template <typename Scalar>
void repulsive_pass(EmbeddingState<Scalar>& state, ForceRecord<Scalar>* record = nullptr,
                    const PassOptions& options = {}) {
    if (record && !record->enabled) record = nullptr;
    if (options.mode == RepulsionMode::Faithful)
        detail::repulsive_faithful(state, record);
    else
        detail::repulsive_aggregate(state, record, options.threads);
}

/// Attraction along every directed edge whose source is mobile and whose
/// target is effective. Both endpoints accumulate, each divided by its own
/// mass; all points move once after accumulation.
template <typename Scalar>
void attractive_pass(EmbeddingState<Scalar>& state, const NeighbourhoodGraph& graph,
                     const DistanceModel<Scalar>& model, Scalar b,
                     ForceRecord<Scalar>* record = nullptr, const PassOptions& options = {}) {
    if (record && !record->enabled) record = nullptr;
    if (graph.vertex_count() != state.point_count())
        throw InvalidInput("graph and embedding disagree on the number of points");

    const std::vector<Index> order = visit_order(state);
    const auto& pts = state.points;
    // psi_hat * unit(target - source) per out-edge, in out-list order.
    std::vector<std::vector<Vector2<Scalar>>> edge_forces(pts.size());
    std::vector<std::vector<char>> edge_active(pts.size());

    parallel_for(order.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Index p = order[k];
            const auto& src = pts[static_cast<std::size_t>(p)];
            const auto& out = graph.out_neighbours[static_cast<std::size_t>(p)];
            auto& forces = edge_forces[static_cast<std::size_t>(p)];
            auto& active = edge_active[static_cast<std::size_t>(p)];
            forces.assign(out.size(), Vector2<Scalar>::Zero());
            active.assign(out.size(), 0);
            if (src.frozen) continue;
            for (std::size_t e = 0; e < out.size(); ++e) {
                const Index q = out[e];
                const auto& dst = pts[static_cast<std::size_t>(q)];
                if (dst.ineffective) continue;
                const Vector2<Scalar> d = separation(state, p, q, src.position, dst.position);
                const Scalar dv = d.norm();
                const Scalar psi = attraction_magnitude(dv, state.gamma, b);
                const Scalar h = distance_correction(model.transformed(src.instance, dst.instance),
                                                     model.delta_max, dv, state.dv_max);
                forces[e] = adjusted_attraction(psi, h) * (d / dv);
                active[e] = 1;
            }
        }
    });

    std::vector<Vector2<Scalar>> totals(pts.size(), Vector2<Scalar>::Zero());
    for (Index p : order) {
        const auto& out = graph.out_neighbours[static_cast<std::size_t>(p)];
        const auto& forces = edge_forces[static_cast<std::size_t>(p)];
        const auto& active = edge_active[static_cast<std::size_t>(p)];
        for (std::size_t e = 0; e < out.size(); ++e) {
            if (!active[e]) continue;
            const Index q = out[e];
            const Vector2<Scalar>& f = forces[e];
            totals[static_cast<std::size_t>(p)] += f / pts[static_cast<std::size_t>(p)].mass;
            totals[static_cast<std::size_t>(q)] += (-f) / pts[static_cast<std::size_t>(q)].mass;
            if (record) {
                record->attractive[static_cast<std::size_t>(p)].push_back(f);
                if (!pts[static_cast<std::size_t>(q)].frozen)
                    record->attractive[static_cast<std::size_t>(q)].push_back(-f);
            }
        }
    }

    for (Index p : order)
        if (!pts[static_cast<std::size_t>(p)].frozen)
            detail::apply_move(state, p, totals[static_cast<std::size_t>(p)]);
}

} // namespace lvsde
