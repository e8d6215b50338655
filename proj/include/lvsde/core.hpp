#pragma once

// Domain types shared by every stage of the layered vertex-splitting embedder,
// plus construction of the initial random layout.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lvsde {

using Index = Eigen::Index;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Frame = Eigen::AlignedBox<Scalar, 2>;

/// Thrown when inputs violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the data are valid in shape but numerically unusable, e.g.
/// an instance whose z-th nearest neighbour coincides with it.
class DegenerateInput : public std::runtime_error {
public:
    DegenerateInput(const std::string& what, Index instance)
        : std::runtime_error(what), instance_(instance) {}
    Index instance() const { return instance_; }

private:
    Index instance_;
};

enum class Layer : std::uint8_t { Red, Gray };

enum class Metric { Euclidean, Cosine, Precomputed };

enum class RepulsionMode {
    /// Moves each point once per (i, j) instance pair, in index order.
    Faithful,
    /// Sums all repulsion on a point before moving it; order independent.
    Aggregate,
};

inline const char* to_string(Layer layer) { return layer == Layer::Red ? "red" : "gray"; }

inline const char* to_string(Metric metric) {
    switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Cosine: return "cosine";
    case Metric::Precomputed: return "precomputed";
    }
    return "?";
}

inline const char* to_string(RepulsionMode mode) {
    return mode == RepulsionMode::Faithful ? "faithful" : "aggregate";
}

/// Input instances. Rows of `instances` are the data vectors; when a
/// precomputed distance matrix is present it takes priority.
template <typename Scalar>
struct DataSet {
    MatrixX<Scalar> instances;
    std::optional<MatrixX<Scalar>> precomputed_distances;
    std::vector<std::string> labels;

    Index size() const {
        return precomputed_distances ? precomputed_distances->rows() : instances.rows();
    }
    bool has_labels() const { return !labels.empty(); }

    void validate() const {
        if (precomputed_distances) {
            const auto& d = *precomputed_distances;
            if (d.rows() != d.cols())
                throw InvalidInput("distance matrix must be square");
            for (Index i = 0; i < d.rows(); ++i) {
                if (d(i, i) != Scalar(0))
                    throw InvalidInput("distance matrix diagonal must be zero (row " +
                                       std::to_string(i) + ")");
                for (Index j = 0; j < d.cols(); ++j)
                    if (!(d(i, j) >= Scalar(0)))
                        throw InvalidInput("negative or NaN distance at (" + std::to_string(i) +
                                           ", " + std::to_string(j) + ")");
            }
            if (instances.size() != 0 && instances.rows() != d.rows())
                throw InvalidInput("instance count disagrees with distance matrix size");
        } else if (instances.rows() == 0) {
            throw InvalidInput("data set is empty");
        }
        if (!labels.empty() && static_cast<Index>(labels.size()) != size())
            throw InvalidInput("label count must equal instance count");
    }
};

struct RunConfig {
    double b = 0.9;
    int p_hat = 20;
    int z = 20;
    double u_bar = 100.0;
    double width = 1000.0;
    double height = 1000.0;
    std::array<int, 4> phase_iterations{500, 450, 390, 490};
    double frame_margin_fraction = 0.05;
    Metric metric = Metric::Euclidean;
    std::uint64_t seed = 0;
    double gray_sigma_factor = 1.2;
    double gray_cap_fraction = 0.25;
    int axis_count = 36;
    int max_projections = 2;
    RepulsionMode mode = RepulsionMode::Faithful;
    bool parallel = false;
    /// Worker count when `parallel` is set; 0 picks the hardware concurrency.
    unsigned threads = 0;
    /// Keep every k-th iteration in the run trace; 0 keeps only the result.
    int snapshot_every = 0;

    int total_iterations() const {
        return phase_iterations[0] + phase_iterations[1] + phase_iterations[2] +
               phase_iterations[3];
    }

    void validate(Index n) const {
        if (n < 2) throw InvalidInput("at least two instances are required");
        if (p_hat < 1 || p_hat > n - 1)
            throw InvalidInput("p_hat must lie in [1, n-1], got " + std::to_string(p_hat));
        if (z < 1 || z > n - 1)
            throw InvalidInput("z must lie in [1, n-1], got " + std::to_string(z));
        if (!(u_bar > 0)) throw InvalidInput("u_bar must be positive");
        if (!(width > 0) || !(height > 0)) throw InvalidInput("width and height must be positive");
        for (int it : phase_iterations)
            if (it < 1) throw InvalidInput("every phase needs at least one iteration");
        if (!(frame_margin_fraction >= 0)) throw InvalidInput("frame margin must be >= 0");
        if (axis_count < 1) throw InvalidInput("axis_count must be >= 1");
        if (max_projections < 1 || max_projections > 2)
            throw InvalidInput("max_projections must be 1 or 2");
        if (!std::isfinite(b)) throw InvalidInput("b must be finite");
    }
};

template <typename Scalar>
struct ProjectedPoint {
    Index instance = 0;
    Vector2<Scalar> position = Vector2<Scalar>::Zero();
    Layer layer = Layer::Red;
    Scalar mass = Scalar(1);
    bool frozen = false;
    /// Ineffective points are frozen and exert no force.
    bool ineffective = false;
    bool second_projection = false;

    void mark_ineffective() {
        ineffective = true;
        frozen = true;
    }
};

template <typename Scalar>
struct EmbeddingState {
    std::vector<ProjectedPoint<Scalar>> points;
    /// projections_of[i] lists the point indices projecting instance i.
    std::vector<std::vector<Index>> projections_of;
    std::optional<Frame<Scalar>> frame;
    Scalar temperature = Scalar(0);
    Scalar dv_max = Scalar(0);
    Scalar gamma = Scalar(0);
    int phase = 1;
    int iteration_in_phase = 0;
    /// Global iteration counter, used to key deterministic tie-breaking noise.
    std::uint64_t tick = 0;
    std::uint64_t seed = 0;

    Index instance_count() const { return static_cast<Index>(projections_of.size()); }
    Index point_count() const { return static_cast<Index>(points.size()); }
};

/// Optimal inter-point distance: sqrt(width * height / n) with n the number
/// of data instances, not the number of projected points.
template <typename Scalar>
Scalar optimal_distance(Scalar width, Scalar height, Index n) {
    if (!(width > 0) || !(height > 0) || n <= 0)
        throw InvalidInput("optimal_distance needs positive width, height and n");
    using std::sqrt;
    return sqrt(width * height / static_cast<Scalar>(n));
}

/// Largest pairwise Euclidean distance among the current points.
template <typename Scalar>
Scalar max_pairwise_distance(const EmbeddingState<Scalar>& state) {
    Scalar best2 = 0;
    const auto& pts = state.points;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            best2 = std::max(best2, (pts[a].position - pts[b].position).squaredNorm());
    using std::sqrt;
    return sqrt(best2);
}

/// One red, mobile, unit-mass projection per instance, uniformly placed over
/// [0, width] x [0, height] from a generator seeded with `cfg.seed`.
template <typename Scalar>
EmbeddingState<Scalar> init_random_embedding(Index n, const RunConfig& cfg) {
    if (n < 2) throw InvalidInput("at least two instances are required to embed");

    EmbeddingState<Scalar> state;
    state.seed = cfg.seed;
    state.points.resize(static_cast<std::size_t>(n));
    state.projections_of.resize(static_cast<std::size_t>(n));

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ux(0.0, cfg.width);
    std::uniform_real_distribution<double> uy(0.0, cfg.height);
    for (Index i = 0; i < n; ++i) {
        auto& p = state.points[static_cast<std::size_t>(i)];
        p.instance = i;
        const double x = ux(rng);
        const double y = uy(rng);
        p.position = Vector2<Scalar>(static_cast<Scalar>(x), static_cast<Scalar>(y));
        state.projections_of[static_cast<std::size_t>(i)] = {i};
    }
    state.gamma = optimal_distance<Scalar>(static_cast<Scalar>(cfg.width),
                                           static_cast<Scalar>(cfg.height), n);
    state.dv_max = max_pairwise_distance(state);
    if (!(state.dv_max > 0))
        throw DegenerateInput("initial layout collapsed to a single location", 0);
    return state;
}

template <typename Scalar>
EmbeddingState<Scalar> init_random_embedding(const DataSet<Scalar>& data, const RunConfig& cfg) {
    return init_random_embedding<Scalar>(data.size(), cfg);
}

/// Checks |S_i| in [1, max_projections] and the strict red/gray rule.
/// Returns an empty string when the state is consistent.
template <typename Scalar>
std::string check_strict_red_gray(const EmbeddingState<Scalar>& state, int max_projections = 2) {
    for (Index i = 0; i < state.instance_count(); ++i) {
        const auto& owned = state.projections_of[static_cast<std::size_t>(i)];
        if (owned.empty() || static_cast<int>(owned.size()) > max_projections)
            return "instance " + std::to_string(i) + " has " + std::to_string(owned.size()) +
                   " projections";
        for (Index p : owned) {
            const auto& pt = state.points[static_cast<std::size_t>(p)];
            if (pt.instance != i) return "point " + std::to_string(p) + " misfiled";
            if (owned.size() >= 2 && pt.layer != Layer::Gray)
                return "duplicated instance " + std::to_string(i) + " has a red projection";
            if (pt.second_projection && pt.layer != Layer::Gray)
                return "second projection " + std::to_string(p) + " is red";
            if (pt.ineffective && !pt.frozen)
                return "point " + std::to_string(p) + " is ineffective but not frozen";
            if (!(pt.mass > 0)) return "point " + std::to_string(p) + " has non-positive mass";
        }
    }
    return {};
}

template <typename Scalar>
bool all_inside_frame(const EmbeddingState<Scalar>& state) {
    if (!state.frame) return true;
    for (const auto& p : state.points)
        if (!state.frame->contains(p.position)) return false;
    return true;
}

} // namespace lvsde
