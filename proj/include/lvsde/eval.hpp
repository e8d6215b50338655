#pragma once

// Layered KNN classification accuracy over a multi-point, two-layer embedding.

#include "lvsde/core.hpp"
#include "lvsde/phases.hpp"

#include <map>
#include <span>

namespace lvsde {

struct LayerSet {
    bool red = true;
    bool gray = true;

    static constexpr LayerSet red_only() { return {true, false}; }
    static constexpr LayerSet gray_only() { return {false, true}; }
    static constexpr LayerSet both() { return {true, true}; }

    bool contains(Layer layer) const { return layer == Layer::Red ? red : gray; }
    bool empty() const { return !red && !gray; }
    std::string name() const { return red && gray ? "red+gray" : red ? "red" : gray ? "gray" : "none"; }
};

struct LambdaSpec {
    /// Layers whose projections are evaluated (L).
    LayerSet evaluation = LayerSet::both();
    /// Layers whose projections may vote (L-hat).
    LayerSet classification = LayerSet::both();
    int k = 15;
    /// Drop every projection of the query's own instance from its neighbours.
    bool exclude_own_instance = true;
};

namespace detail {

inline std::vector<int> encode_labels(const std::vector<std::string>& labels) {
    std::map<std::string, int> ids;
    for (const auto& l : labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& [_, id] : ids) id = next++;
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(ids.at(l));
    return out;
}

} // namespace detail

/// Fraction of instances with a projection in the evaluation layers for which
/// at least one such projection's k nearest classification-layer neighbours
/// give a plurality (ties included) to the instance's own label.
/// Neighbour ties at equal distance favour the lower point index.
template <typename Scalar>
double lambda_measure(std::span<const ProjectedPoint<Scalar>> points,
                      const std::vector<std::string>& labels, const LambdaSpec& spec) {
    if (spec.k < 1) throw InvalidInput("k must be >= 1");
    if (spec.evaluation.empty() || spec.classification.empty())
        throw InvalidInput("evaluation and classification layer sets must be non-empty");
    const auto n = static_cast<Index>(labels.size());
    if (n == 0) throw InvalidInput("the evaluation measure needs class labels");
    for (const auto& p : points)
        if (p.instance < 0 || p.instance >= n)
            throw InvalidInput("point refers to instance " + std::to_string(p.instance) +
                               " without a label");

    const std::vector<int> label_id = detail::encode_labels(labels);
    const int label_count = label_id.empty() ? 0 : *std::max_element(label_id.begin(), label_id.end()) + 1;

    std::vector<Index> voters;
    for (Index q = 0; q < static_cast<Index>(points.size()); ++q)
        if (spec.classification.contains(points[static_cast<std::size_t>(q)].layer)) voters.push_back(q);

    std::vector<char> evaluated(static_cast<std::size_t>(n), 0);
    std::vector<char> correct(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<Scalar, Index>> cand;
    std::vector<int> votes(static_cast<std::size_t>(label_count));

    for (Index p = 0; p < static_cast<Index>(points.size()); ++p) {
        const auto& query = points[static_cast<std::size_t>(p)];
        if (!spec.evaluation.contains(query.layer)) continue;
        const auto inst = static_cast<std::size_t>(query.instance);
        evaluated[inst] = 1;
        if (correct[inst]) continue;

        cand.clear();
        for (Index q : voters) {
            if (q == p) continue;
            const auto& other = points[static_cast<std::size_t>(q)];
            if (spec.exclude_own_instance && other.instance == query.instance) continue;
            cand.emplace_back((other.position - query.position).squaredNorm(), q);
        }
        if (static_cast<int>(cand.size()) < spec.k)
            throw InvalidInput("only " + std::to_string(cand.size()) +
                               " classification-layer neighbours are available for point " +
                               std::to_string(p) + "; use a smaller k");
        std::partial_sort(cand.begin(), cand.begin() + spec.k, cand.end());

        std::fill(votes.begin(), votes.end(), 0);
        for (int r = 0; r < spec.k; ++r)
            ++votes[static_cast<std::size_t>(
                label_id[static_cast<std::size_t>(points[static_cast<std::size_t>(cand[static_cast<std::size_t>(r)].second)].instance)])];
        const int top = *std::max_element(votes.begin(), votes.end());
        if (votes[static_cast<std::size_t>(label_id[inst])] == top) correct[inst] = 1;
    }

    const auto e = std::count(evaluated.begin(), evaluated.end(), 1);
    if (e == 0) throw InvalidInput("no instance has a projection in the evaluation layers");
    const auto c = std::count(correct.begin(), correct.end(), 1);
    return static_cast<double>(c) / static_cast<double>(e);
}

template <typename Scalar>
double lambda_measure(const std::vector<ProjectedPoint<Scalar>>& points,
                      const std::vector<std::string>& labels, const LambdaSpec& spec) {
    return lambda_measure(std::span<const ProjectedPoint<Scalar>>(points), labels, spec);
}

template <typename Scalar>
double lambda_measure(const EmbeddingState<Scalar>& state, const std::vector<std::string>& labels,
                      const LambdaSpec& spec) {
    return lambda_measure(std::span<const ProjectedPoint<Scalar>>(state.points), labels, spec);
}

/// The six evaluation/classification layer pairings reported per embedding.
inline std::vector<std::pair<LayerSet, LayerSet>> standard_layer_pairs() {
    return {{LayerSet::both(), LayerSet::both()},     {LayerSet::both(), LayerSet::red_only()},
            {LayerSet::red_only(), LayerSet::red_only()}, {LayerSet::gray_only(), LayerSet::gray_only()},
            {LayerSet::gray_only(), LayerSet::red_only()}, {LayerSet::gray_only(), LayerSet::both()}};
}

/// Re-selects the trace's result as the snapshot (or final state) with the
/// highest measure; earlier iterations win ties. Returns the chosen value.
template <typename Scalar>
double select_best_snapshot(RunTrace<Scalar>& trace, const std::vector<std::string>& labels,
                            const LambdaSpec& spec) {
    double best = lambda_measure(trace.selected.points, labels, spec);
    const Snapshot<Scalar>* pick = nullptr;
    for (const auto& snap : trace.snapshots) {
        double value = 0;
        try {
            value = lambda_measure(snap.points, labels, spec);
        } catch (const InvalidInput&) {
            continue;
        }
        if (value > best || (value == best && pick == nullptr &&
                             snap.global_iteration < trace.selected.global_iteration)) {
            best = value;
            pick = &snap;
        }
    }
    if (pick) trace.selected = *pick;
    return best;
}

} // namespace lvsde
