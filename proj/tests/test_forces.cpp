#include "lvsde/forces.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace lvsde;

namespace {

ForceRecord<double>* const kNoRecord = nullptr;

EmbeddingState<double> two_points(double separation_in_gamma) {
    RunConfig cfg;
    auto s = init_random_embedding<double>(2, cfg);
    s.points[0].position = {400, 500};
    s.points[1].position = {400 + separation_in_gamma * s.gamma, 500};
    s.temperature = std::numeric_limits<double>::infinity();
    return s;
}

DistanceModel<double> flat_model(Index n, double delta) {
    DistanceModel<double> m;
    m.transformed = MatrixX<double>::Constant(n, n, delta);
    m.transformed.diagonal().setZero();
    m.raw = m.transformed;
    m.normalizers = VectorX<double>::Ones(n);
    m.delta_max = 1.0;
    return m;
}

} // namespace

TEST_CASE("temperature schedules") {
    CHECK(temperature_for(1, 0, 100) == 100.0);
    CHECK(temperature_for(2, 0, 100) == 50.0);
    CHECK(temperature_for(3, 490, 100) == 0.0);
    CHECK(temperature_for(4, 0, 100) == doctest::Approx(49.0));
    CHECK(temperature_for(1, 2000, 100) == 0.0);
    CHECK_THROWS_AS(temperature_for(5, 0, 100), InvalidInput);
}

TEST_CASE("attraction scalars") {
    CHECK(attraction_magnitude(7.0, 7.0, -0.1) == 1.0);
    CHECK(attraction_magnitude(3.0, 7.0, 1.0) == 1.0);
    CHECK(attraction_magnitude(14.0, 7.0, 0.0) == 2.0);
    CHECK(adjusted_attraction(1.0, 0.8) == 1.5);
    CHECK(adjusted_attraction(1.0, -0.3) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(adjusted_attraction(1.0, -2.0) == 0.5);
    CHECK(adjusted_attraction(1.0, 0.2) == 1.2);
    CHECK(distance_correction(0.5, 1.0, 25.0, 100.0) == 0.25);
}

TEST_CASE("frame clamp") {
    const Frame<double> f(Vector2<double>(0, 0), Vector2<double>(10, 20));
    CHECK(clamp_to_frame(Vector2<double>(3, 4), f) == Vector2<double>(3, 4));
    CHECK(clamp_to_frame(Vector2<double>(-3, 4), f) == Vector2<double>(0, 4));
    CHECK(clamp_to_frame(Vector2<double>(30, -4), f) == Vector2<double>(10, 0));
}

TEST_CASE("repulsion between two points") {
    SUBCASE("aggregate mode pushes both by gamma") {
        auto s = two_points(1.0);
        const double g = s.gamma;
        repulsive_pass(s, kNoRecord, {RepulsionMode::Aggregate, 1});
        CHECK(s.points[0].position.x() == doctest::Approx(400 - g).epsilon(1e-14));
        CHECK(s.points[1].position.x() == doctest::Approx(400 + 2 * g).epsilon(1e-14));
        CHECK(s.points[0].position.y() == 500.0);
    }
    SUBCASE("faithful mode moves inside the pair loop") {
        auto s = two_points(1.0);
        const double g = s.gamma;
        repulsive_pass(s);
        // The first point moves by gamma; the second then sees distance 2 gamma.
        CHECK(s.points[0].position.x() == doctest::Approx(400 - g).epsilon(1e-14));
        CHECK(s.points[1].position.x() == doctest::Approx(400 + g + g / 2).epsilon(1e-14));
    }
    SUBCASE("frozen point stays") {
        auto s = two_points(1.0);
        s.points[0].frozen = true;
        const auto before = s.points[0].position;
        repulsive_pass(s);
        CHECK(s.points[0].position == before);
        CHECK(s.points[1].position.x() > 400 + s.gamma);
    }
    SUBCASE("ineffective point exerts nothing") {
        auto s = two_points(1.0);
        s.points[0].mark_ineffective();
        const auto p0 = s.points[0].position;
        const auto p1 = s.points[1].position;
        ForceRecord<double> rec;
        rec.enabled = true;
        rec.reset(2);
        repulsive_pass(s, &rec);
        CHECK(s.points[0].position == p0);
        CHECK(s.points[1].position == p1);
        CHECK(rec.all(1).empty());
    }
    SUBCASE("temperature caps each step") {
        auto s = two_points(0.1);
        s.temperature = 3;
        repulsive_pass(s, kNoRecord, {RepulsionMode::Aggregate, 1});
        CHECK(s.points[0].position.x() == doctest::Approx(397.0).epsilon(1e-14));
    }
    SUBCASE("coincident points separate deterministically") {
        auto s = two_points(0.0);
        auto t = s;
        repulsive_pass(s);
        repulsive_pass(t);
        CHECK(s.points[0].position == t.points[0].position);
        CHECK(s.points[0].position != s.points[1].position);
    }
    SUBCASE("points stay in the frame") {
        auto s = two_points(1.0);
        s.frame = Frame<double>(Vector2<double>(300, 400), Vector2<double>(600, 600));
        repulsive_pass(s);
        CHECK(s.points[0].position == Vector2<double>(300, 500));
        CHECK(all_inside_frame(s));
    }
}

TEST_CASE("attraction along one edge") {
    auto s = two_points(2.0);
    s.dv_max = 4 * s.gamma;
    const auto model = flat_model(2, 0.5); // h = 0.5 - 0.5 = 0
    NeighbourhoodGraph g;
    g.out_neighbours = {{1}, {}};
    s.points[1].mass = 0.5;
    ForceRecord<double> rec;
    rec.enabled = true;
    rec.reset(2);
    const double psi = std::pow(2.0, 1.0 - 0.9);
    attractive_pass(s, g, model, 0.9, &rec);
    CHECK(s.points[0].position.x() == doctest::Approx(400 + psi).epsilon(1e-14));
    CHECK(s.points[1].position.x() == doctest::Approx(400 + 2 * s.gamma - psi / 0.5).epsilon(1e-14));
    REQUIRE(rec.attractive[0].size() == 1);
    REQUIRE(rec.attractive[1].size() == 1);
    CHECK(rec.attractive[0][0] == -rec.attractive[1][0]);
    CHECK(rec.attractive[0][0].x() == doctest::Approx(psi).epsilon(1e-14));
}

TEST_CASE("attraction gates") {
    auto s = two_points(2.0);
    s.dv_max = 4 * s.gamma;
    const auto model = flat_model(2, 0.5);
    NeighbourhoodGraph g;
    g.out_neighbours = {{1}, {}};

    SUBCASE("frozen source contributes nothing") {
        s.points[0].frozen = true;
        const auto before = s.points;
        attractive_pass(s, g, model, 0.9);
        CHECK(s.points[0].position == before[0].position);
        CHECK(s.points[1].position == before[1].position);
    }
    SUBCASE("ineffective target is ignored") {
        s.points[1].mark_ineffective();
        const auto before = s.points;
        attractive_pass(s, g, model, 0.9);
        CHECK(s.points[0].position == before[0].position);
    }
    SUBCASE("frozen target pulls without moving") {
        s.points[1].frozen = true;
        const auto before = s.points;
        attractive_pass(s, g, model, 0.9);
        CHECK(s.points[1].position == before[1].position);
        CHECK(s.points[0].position.x() > before[0].position.x());
    }
    SUBCASE("accumulated move is capped") {
        s.temperature = 0.25;
        attractive_pass(s, g, model, 0.9);
        CHECK(s.points[0].position.x() == doctest::Approx(400.25).epsilon(1e-14));
    }
    SUBCASE("graph size must match") {
        g.out_neighbours.push_back({});
        CHECK_THROWS_AS(attractive_pass(s, g, model, 0.9), InvalidInput);
    }
}

TEST_CASE("frozen points never move in a full iteration") {
    RunConfig cfg;
    cfg.seed = 5;
    auto s = init_random_embedding<double>(12, cfg);
    s.temperature = 50;
    for (std::size_t p = 0; p < s.points.size(); p += 3) s.points[p].frozen = true;
    const auto before = s.points;
    NeighbourhoodGraph g;
    for (Index i = 0; i < 12; ++i) g.out_neighbours.push_back({(i + 1) % 12, (i + 5) % 12});
    const auto model = flat_model(12, 0.7);
    for (const auto mode : {RepulsionMode::Faithful, RepulsionMode::Aggregate}) {
        auto t = s;
        repulsive_pass(t, kNoRecord, {mode, 1});
        attractive_pass(t, g, model, 0.9, kNoRecord, {mode, 1});
        for (std::size_t p = 0; p < t.points.size(); ++p)
            if (before[p].frozen) CHECK(t.points[p].position == before[p].position);
    }
}

TEST_CASE("aggregate passes are thread-count invariant") {
    RunConfig cfg;
    cfg.seed = 8;
    auto s = init_random_embedding<double>(40, cfg);
    s.temperature = 60;
    NeighbourhoodGraph g;
    for (Index i = 0; i < 40; ++i) g.out_neighbours.push_back({(i + 1) % 40, (i + 7) % 40, (i + 13) % 40});
    const auto model = flat_model(40, 0.6);
    auto a = s;
    auto b = s;
    repulsive_pass(a, kNoRecord, {RepulsionMode::Aggregate, 1});
    attractive_pass(a, g, model, 0.9, kNoRecord, {RepulsionMode::Aggregate, 1});
    repulsive_pass(b, kNoRecord, {RepulsionMode::Aggregate, 4});
    attractive_pass(b, g, model, 0.9, kNoRecord, {RepulsionMode::Aggregate, 4});
    for (std::size_t p = 0; p < a.points.size(); ++p) CHECK(a.points[p].position == b.points[p].position);
}
