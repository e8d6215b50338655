#pragma once

// The four-phase controller: plain layout, gray selection with freezing,
// reversed freezing, then the duplication sweep and final refinement.

#include "lvsde/core.hpp"
#include "lvsde/distances.hpp"
#include "lvsde/forces.hpp"
#include "lvsde/splitting.hpp"

#include <functional>

namespace lvsde {

struct Progress {
    int phase = 1;
    int iteration = 0;
    int global_iteration = 0;
    double temperature = 0;
    Index point_count = 0;
};

using ProgressCallback = std::function<void(const Progress&)>;

template <typename Scalar>
struct Snapshot {
    int phase = 1;
    int iteration = 0;
    int global_iteration = 0;
    std::vector<ProjectedPoint<Scalar>> points;
    std::optional<Frame<Scalar>> frame;
};

struct RunStatistics {
    Index gray_budget = 0;
    Index marked_gray = 0;
    Index duplications_succeeded = 0;
    Index duplications_failed = 0;
    Index duplications_rejected = 0;
    int iterations = 0;
};

template <typename Scalar>
struct RunTrace {
    /// Every `snapshot_every`-th iteration, when requested.
    std::vector<Snapshot<Scalar>> snapshots;
    /// The run's output; the final iteration unless re-selected.
    Snapshot<Scalar> selected;
    EmbeddingState<Scalar> final_state;
    NeighbourhoodGraph final_graph;
    RunStatistics stats;
};

template <typename Scalar>
Snapshot<Scalar> take_snapshot(const EmbeddingState<Scalar>& state, int global_iteration) {
    return {state.phase, state.iteration_in_phase, global_iteration, state.points, state.frame};
}

/// Bounding box of all points, grown by `margin_fraction` of its extent on
/// every side.
template <typename Scalar>
Frame<Scalar> frame_around(const EmbeddingState<Scalar>& state, double margin_fraction) {
    Frame<Scalar> box;
    for (const auto& p : state.points) box.extend(p.position);
    const Vector2<Scalar> pad = box.sizes() * static_cast<Scalar>(margin_fraction);
    return Frame<Scalar>(box.min() - pad, box.max() + pad);
}

template <typename Scalar>
class LayeredEmbedder {
public:
    LayeredEmbedder(DistanceModel<Scalar> model, const RunConfig& cfg)
        : cfg_(cfg), model_(std::move(model)) {
        const Index n = model_.transformed.rows();
        cfg_.validate(n);
        graph_ = build_neighbourhood_graph(model_.transformed, cfg_.p_hat);
        state_ = init_random_embedding<Scalar>(n, cfg_);
        options_.mode = cfg_.mode;
        options_.threads = cfg_.parallel ? resolve_threads(cfg_.threads) : 1u;
    }

    static LayeredEmbedder from_data(const DataSet<Scalar>& data, const RunConfig& cfg) {
        data.validate();
        cfg.validate(data.size());
        return LayeredEmbedder(build_distance_model(data, cfg.metric, cfg.z), cfg);
    }

    const EmbeddingState<Scalar>& state() const { return state_; }
    const NeighbourhoodGraph& graph() const { return graph_; }
    const DistanceModel<Scalar>& model() const { return model_; }
    const RunConfig& config() const { return cfg_; }
    const RunStatistics& stats() const { return stats_; }

    void set_progress(ProgressCallback cb) { progress_ = std::move(cb); }

    /// Phase 1: unframed layout of one red projection per instance.
    void run_phase1() {
        begin_phase(1);
        for (int mu = 0; mu < cfg_.phase_iterations[0]; ++mu) iterate(mu, false);
    }

    /// Phase 2: frame the layout, then each iteration turn the highest
    /// pressure point gray and ineffective until the budget is spent.
    void run_phase2() {
        begin_phase(2);
        state_.frame = frame_around(state_, cfg_.frame_margin_fraction);
        bool budget_known = false;
        for (int mu = 0; mu < cfg_.phase_iterations[1]; ++mu) {
            const bool need_pressure = !budget_known || stats_.marked_gray < stats_.gray_budget;
            iterate(mu, need_pressure);
            if (!need_pressure) continue;

            const std::vector<Scalar> pressures = all_pressures();
            if (!budget_known) {
                stats_.gray_budget = select_gray_budget(pressures, state_.instance_count(),
                                                        cfg_.gray_sigma_factor,
                                                        cfg_.gray_cap_fraction);
                budget_known = true;
            }
            if (stats_.marked_gray >= stats_.gray_budget) continue;
            Index pick = -1;
            for (Index p = 0; p < state_.point_count(); ++p) {
                if (state_.points[static_cast<std::size_t>(p)].ineffective) continue;
                if (pick < 0 || pressures[static_cast<std::size_t>(p)] >
                                    pressures[static_cast<std::size_t>(pick)])
                    pick = p;
            }
            if (pick < 0) continue;
            auto& pt = state_.points[static_cast<std::size_t>(pick)];
            pt.mark_ineffective();
            pt.layer = Layer::Gray;
            ++stats_.marked_gray;
        }
    }

    /// Phase 3: gray points become effective and mobile, red points freeze.
    void run_phase3() {
        begin_phase(3);
        for (auto& p : state_.points) {
            if (p.layer == Layer::Gray) {
                p.ineffective = false;
                p.frozen = false;
            } else {
                p.frozen = true;
            }
        }
        for (int mu = 0; mu < cfg_.phase_iterations[2]; ++mu) iterate(mu, false);
    }

    /// Phase 4: the first iteration records forces and then attempts to
    /// duplicate every gray point; the remaining iterations refine.
    void run_phase4() {
        begin_phase(4);
        for (int mu = 0; mu < cfg_.phase_iterations[3]; ++mu) {
            const bool sweep = mu == 0 && cfg_.max_projections >= 2;
            iterate(mu, sweep);
            if (sweep) duplication_sweep();
        }
    }

    RunTrace<Scalar> run() {
        run_phase1();
        run_phase2();
        run_phase3();
        run_phase4();
        RunTrace<Scalar> trace;
        trace.snapshots = std::move(snapshots_);
        trace.selected = take_snapshot(state_, stats_.iterations);
        trace.final_state = state_;
        trace.final_graph = graph_;
        trace.stats = stats_;
        return trace;
    }

private:
    void begin_phase(int phase) {
        state_.phase = phase;
        state_.iteration_in_phase = 0;
    }

    void iterate(int mu, bool record_forces) {
        state_.iteration_in_phase = mu;
        state_.temperature =
            static_cast<Scalar>(temperature_for(state_.phase, mu, cfg_.u_bar));
        record_.enabled = record_forces;
        if (record_forces) record_.reset(state_.point_count());
        ForceRecord<Scalar>* rec = record_forces ? &record_ : nullptr;

        repulsive_pass(state_, rec, options_);
        attractive_pass(state_, graph_, model_, static_cast<Scalar>(cfg_.b), rec, options_);

        ++state_.tick;
        ++stats_.iterations;
        if (cfg_.snapshot_every > 0 && stats_.iterations % cfg_.snapshot_every == 0)
            snapshots_.push_back(take_snapshot(state_, stats_.iterations));
        if (progress_)
            progress_({state_.phase, mu, stats_.iterations, static_cast<double>(state_.temperature),
                       state_.point_count()});
    }

    std::vector<Scalar> all_pressures() const {
        std::vector<Scalar> out(state_.points.size(), Scalar(0));
        for (Index p = 0; p < state_.point_count(); ++p)
            out[static_cast<std::size_t>(p)] =
                replication_pressure(record_.all(p), cfg_.axis_count).pressure;
        return out;
    }

    void duplication_sweep() {
        const Index existing = state_.point_count();
        for (Index p = 0; p < existing; ++p) {
            if (state_.points[static_cast<std::size_t>(p)].layer != Layer::Gray) continue;
            const auto pressure = replication_pressure(record_.all(p), cfg_.axis_count);
            const auto report = duplicate_point(state_, graph_, p, pressure.split_direction,
                                                cfg_.max_projections);
            switch (report.outcome) {
            case DuplicationOutcome::Success: ++stats_.duplications_succeeded; break;
            case DuplicationOutcome::Failed: ++stats_.duplications_failed; break;
            case DuplicationOutcome::Rejected: ++stats_.duplications_rejected; break;
            }
        }
        record_.enabled = false;
    }

    RunConfig cfg_;
    DistanceModel<Scalar> model_;
    NeighbourhoodGraph graph_;
    EmbeddingState<Scalar> state_;
    ForceRecord<Scalar> record_;
    PassOptions options_;
    RunStatistics stats_;
    std::vector<Snapshot<Scalar>> snapshots_;
    ProgressCallback progress_;
};

/// Runs the preliminary steps and all four phases on `data`.
template <typename Scalar>
RunTrace<Scalar> run(const DataSet<Scalar>& data, const RunConfig& cfg,
                     ProgressCallback progress = {}) {
    auto embedder = LayeredEmbedder<Scalar>::from_data(data, cfg);
    embedder.set_progress(std::move(progress));
    return embedder.run();
}

} // namespace lvsde
