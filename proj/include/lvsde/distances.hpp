#pragma once

// Raw distances, the neighbourhood-normalized arctangent transform and the
// initial directed p-nearest-neighbour graph.

#include "lvsde/core.hpp"

#include <algorithm>
#include <numeric>

namespace lvsde {

template <typename Scalar>
struct DistanceModel {
    MatrixX<Scalar> raw;
    VectorX<Scalar> normalizers;
    /// Entries lie in [0, pi/2); not symmetric when `raw` is not.
    MatrixX<Scalar> transformed;
    Scalar delta_max = Scalar(0);
};

/// Directed graph over projected points. Indices refer to
/// EmbeddingState::points, not to instances.
struct NeighbourhoodGraph {
    std::vector<std::vector<Index>> out_neighbours;

    Index vertex_count() const { return static_cast<Index>(out_neighbours.size()); }
    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& list : out_neighbours) total += list.size();
        return total;
    }
    friend bool operator==(const NeighbourhoodGraph&, const NeighbourhoodGraph&) = default;
};

template <typename Scalar>
MatrixX<Scalar> compute_raw_distances(const DataSet<Scalar>& data, Metric metric) {
    if (metric == Metric::Precomputed) {
        if (!data.precomputed_distances)
            throw InvalidInput("precomputed metric requested but no distance matrix was given");
        MatrixX<Scalar> out = *data.precomputed_distances;
        if (out.rows() != out.cols()) throw InvalidInput("distance matrix must be square");
        for (Index i = 0; i < out.rows(); ++i)
            for (Index j = 0; j < out.cols(); ++j)
                if (!(out(i, j) >= Scalar(0)))
                    throw InvalidInput("negative distance at (" + std::to_string(i) + ", " +
                                       std::to_string(j) + ")");
        out.diagonal().setZero();
        return out;
    }
    if (data.precomputed_distances)
        throw InvalidInput("a distance matrix input only supports the precomputed metric");

    const auto& x = data.instances;
    const Index n = x.rows();
    MatrixX<Scalar> out(n, n);
    if (metric == Metric::Euclidean) {
        for (Index i = 0; i < n; ++i) {
            out(i, i) = Scalar(0);
            for (Index j = i + 1; j < n; ++j) {
                const Scalar d = (x.row(i) - x.row(j)).norm();
                out(i, j) = d;
                out(j, i) = d;
            }
        }
        return out;
    }

    const VectorX<Scalar> norms = x.rowwise().norm();
    for (Index i = 0; i < n; ++i)
        if (!(norms(i) > 0))
            throw InvalidInput("cosine distance undefined for zero vector at row " +
                               std::to_string(i));
    // 1 - cos(u, v) = |u/|u| - v/|v||^2 / 2, exact for identical directions.
    const MatrixX<Scalar> unit = norms.asDiagonal().inverse() * x;
    for (Index i = 0; i < n; ++i) {
        out(i, i) = Scalar(0);
        for (Index j = i + 1; j < n; ++j) {
            const Scalar d = (unit.row(i) - unit.row(j)).squaredNorm() / Scalar(2);
            out(i, j) = d;
            out(j, i) = d;
        }
    }
    return out;
}

/// Distance from instance i to its z-th nearest *other* instance along row i.
template <typename Scalar>
Scalar zth_neighbour_distance(const MatrixX<Scalar>& raw, Index i, int z) {
    const Index n = raw.rows();
    if (z < 1 || z > n - 1) throw InvalidInput("z must lie in [1, n-1]");
    std::vector<Scalar> row;
    row.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j)
        if (j != i) row.push_back(raw(i, j));
    auto nth = row.begin() + (z - 1);
    std::nth_element(row.begin(), nth, row.end());
    return *nth;
}

/// m_i = tan(1) / d_iz, so that atan(d_iz * m_i) = 1.
template <typename Scalar>
VectorX<Scalar> compute_normalizers(const MatrixX<Scalar>& raw, int z) {
    const Index n = raw.rows();
    VectorX<Scalar> m(n);
    using std::tan;
    const Scalar tan1 = tan(Scalar(1));
    for (Index i = 0; i < n; ++i) {
        const Scalar dz = zth_neighbour_distance(raw, i, z);
        if (!(dz > 0))
            throw DegenerateInput("instance " + std::to_string(i) + " coincides with its " +
                                      std::to_string(z) + "-th nearest neighbour; reduce z or "
                                      "deduplicate the input",
                                  i);
        m(i) = tan1 / dz;
    }
    return m;
}

/// delta(i,j) = (atan(raw(i,j) m_i) + atan(raw(i,j) m_j)) / 2.
/// Both terms use raw(i,j); asymmetric input stays asymmetric.
template <typename Scalar>
MatrixX<Scalar> transform_distances(const MatrixX<Scalar>& raw, const VectorX<Scalar>& normalizers) {
    if (raw.rows() != normalizers.size() || raw.cols() != normalizers.size())
        throw InvalidInput("normalizer count must match the distance matrix");
    if ((normalizers.array() <= 0).any()) throw InvalidInput("normalizers must be positive");
    const auto by_row = (raw.array().colwise() * normalizers.array()).atan();
    const auto by_col = (raw.array().rowwise() * normalizers.transpose().array()).atan();
    return ((by_row + by_col) / Scalar(2)).matrix();
}

template <typename Scalar>
DistanceModel<Scalar> build_distance_model(MatrixX<Scalar> raw, int z) {
    DistanceModel<Scalar> model;
    model.normalizers = compute_normalizers(raw, z);
    model.transformed = transform_distances(raw, model.normalizers);
    model.delta_max = model.transformed.maxCoeff();
    model.raw = std::move(raw);
    if (!(model.delta_max > 0)) throw DegenerateInput("all transformed distances are zero", 0);
    return model;
}

template <typename Scalar>
DistanceModel<Scalar> build_distance_model(const DataSet<Scalar>& data, Metric metric, int z) {
    return build_distance_model(compute_raw_distances(data, metric), z);
}

/// Each instance points at its p_hat nearest others under `transformed`,
/// ties broken by lower index. Edges are directed and never symmetrized.
template <typename Scalar>
NeighbourhoodGraph build_neighbourhood_graph(const MatrixX<Scalar>& transformed, int p_hat) {
    const Index n = transformed.rows();
    if (p_hat < 1 || p_hat > n - 1) throw InvalidInput("p_hat must lie in [1, n-1]");
    NeighbourhoodGraph graph;
    graph.out_neighbours.resize(static_cast<std::size_t>(n));
    std::vector<Index> order;
    for (Index i = 0; i < n; ++i) {
        order.clear();
        for (Index j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::partial_sort(order.begin(), order.begin() + p_hat, order.end(),
                          [&](Index a, Index b) {
                              const Scalar da = transformed(i, a);
                              const Scalar db = transformed(i, b);
                              return da < db || (da == db && a < b);
                          });
        graph.out_neighbours[static_cast<std::size_t>(i)].assign(order.begin(),
                                                                 order.begin() + p_hat);
    }
    return graph;
}

} // namespace lvsde
