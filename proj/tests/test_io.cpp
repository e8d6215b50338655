#include "lvsde/io/dataset.hpp"
#include "lvsde/io/document.hpp"
#include "lvsde/io/query.hpp"
#include "lvsde/io/render.hpp"

#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

using namespace lvsde;
using namespace lvsde::io;

namespace {

DataSet<double> parse(const std::string& text, LoadOptions opts = {},
                      std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_dataset(in, opts, warnings);
}

DocumentPoint dp(Index instance, double x, double y, Layer layer = Layer::Red, bool second = false) {
    return {instance, x, y, layer, second, 1.0, ""};
}

} // namespace

TEST_CASE("iris table") {
    LoadOptions opts;
    opts.label_column = -1;
    const auto d = load_dataset(LVSDE_DATA_DIR "/iris.csv", opts);
    CHECK(d.size() == 150);
    CHECK(d.instances.cols() == 4);
    CHECK(d.labels.size() == 150);
    CHECK(d.labels.front() == "setosa");
    CHECK(d.labels.back() == "virginica");
    CHECK(d.instances(0, 0) == 5.1);
}

TEST_CASE("vector tables") {
    SUBCASE("whitespace, comments and no header") {
        const auto d = parse("# comment\n1 2 3\n\n4 5 6\n");
        CHECK(d.instances.rows() == 2);
        CHECK(d.instances(1, 2) == 6.0);
    }
    SUBCASE("label column in the middle") {
        LoadOptions o;
        o.label_column = 1;
        const auto d = parse("a,b,c\n1,x,2\n3,y,4\n", o);
        CHECK(d.labels == std::vector<std::string>{"x", "y"});
        CHECK(d.instances(1, 1) == 4.0);
    }
    SUBCASE("ragged rows") {
        try {
            parse("1,2\n3\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.row() == 2);
        }
    }
    SUBCASE("non-numeric cell") {
        try {
            parse("1,2\n3,abc\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.row() == 2);
            CHECK(e.column() == 2);
        }
    }
}

TEST_CASE("distance matrices") {
    LoadOptions o;
    o.format = InputFormat::DistanceMatrix;
    SUBCASE("all zero warns but loads") {
        std::vector<std::string> warnings;
        const auto d = parse("0 0 0\n0 0 0\n0 0 0\n", o, &warnings);
        CHECK(d.size() == 3);
        CHECK(warnings.size() == 1);
    }
    SUBCASE("not square") {
        CHECK_THROWS_AS(parse("0,1,2,3,4\n1,0,2,3,4\n2,2,0,3,4\n3,3,3,0,4\n", o), ParseError);
    }
    SUBCASE("nonzero diagonal") {
        try {
            parse("0,1\n1,2\n", o);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.row() == 2);
            CHECK(e.column() == 2);
        }
    }
    SUBCASE("negative entry") { CHECK_THROWS_AS(parse("0,-1\n1,0\n", o), ParseError); }
}

TEST_CASE("checksum") {
    CHECK(checksum("") == "cbf29ce484222325");
    CHECK(checksum("a") == "af63dc4c8601ec8c");
}

TEST_CASE("document round trip") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        EmbeddingDocument doc;
        doc.set("seed", std::to_string(trial));
        doc.set("note", "a b=c");
        const int n = 1 + trial % 17;
        for (int i = 0; i < n; ++i) {
            DocumentPoint p = dp(i, u(rng), u(rng), coin(rng) ? Layer::Gray : Layer::Red, coin(rng));
            p.mass = std::ldexp(u(rng), -coin(rng) * 40);
            p.label = trial % 3 == 0 ? "" : "class " + std::to_string(i % 4);
            doc.points.push_back(p);
        }
        doc.points.front().x = std::numeric_limits<double>::denorm_min();
        doc.points.back().y = -0.0;
        const auto text = serialize(doc);
        CHECK(parse_document(text) == doc);
        CHECK(serialize(parse_document(text)) == text);
    }
}

TEST_CASE("document rejects malformed input") {
    CHECK_THROWS(parse_document("instance,x,y\n"));
    CHECK_THROWS(parse_document("# lvsde-embedding 1\ninstance,x,y,layer,second,mass,label\n0,1,2,blue,0,1,\n"));
    EmbeddingDocument doc;
    doc.points.push_back(dp(0, 1, 2));
    doc.points.back().label = "a,b";
    CHECK_THROWS_AS(serialize(doc), InvalidInput);
}

TEST_CASE("points and labels from documents") {
    EmbeddingDocument doc;
    doc.points = {dp(0, 0, 0, Layer::Gray), dp(1, 1, 1), dp(0, 2, 2, Layer::Gray, true)};
    for (auto& p : doc.points) p.label = p.instance == 0 ? "u" : "v";
    CHECK(instance_labels(doc) == std::vector<std::string>{"u", "v"});
    const auto pts = to_points(doc);
    REQUIRE(pts.size() == 3);
    CHECK(pts[2].second_projection);
    CHECK(pts[2].layer == Layer::Gray);
    const auto back = make_document(pts, {"u", "v"});
    CHECK(back.points == doc.points);
}

TEST_CASE("rectangle query") {
    EmbeddingDocument doc;
    doc.points = {dp(0, 0, 0, Layer::Gray), dp(1, 5, 5), dp(0, 10, 10, Layer::Gray, true),
                  dp(2, 20, 20, Layer::Gray), dp(2, 30, 30, Layer::Gray, true)};

    SUBCASE("no duplicated instance inside") {
        const auto r = query_rect(doc, parse_rect("4,4,6,6"));
        CHECK(r.contained == std::vector<Index>{1});
        CHECK(r.correspondences.empty());
        CHECK(format_query(r) ==
              "# points_in_rect=1 correspondences=0\n"
              "point,instance,x,y,sibling,sibling_x,sibling_y\n"
              "1,1,5,5,,,\n");
    }
    SUBCASE("whole frame") {
        const auto r = query_rect(doc, parse_rect("-1,-1,100,100"));
        CHECK(r.contained.size() == 5);
        CHECK(r.correspondences.size() == 4);
    }
    SUBCASE("around one duplicate") {
        const auto r = query_rect(doc, parse_rect("11,11,9,9"));
        REQUIRE(r.correspondences.size() == 1);
        CHECK(r.correspondences[0] == Correspondence{2, 0, 10, 10, 0, 0, 0});
        CHECK(format_query(r) ==
              "# points_in_rect=1 correspondences=1\n"
              "point,instance,x,y,sibling,sibling_x,sibling_y\n"
              "2,0,10,10,0,0,0\n");
    }
    SUBCASE("bad rectangles") {
        CHECK_THROWS_AS(parse_rect("1,2,3"), InvalidInput);
        CHECK_THROWS_AS(parse_rect("1,2,3,x"), InvalidInput);
    }
}

TEST_CASE("svg rendering") {
    EmbeddingDocument doc;
    doc.points = {dp(0, 0, 0, Layer::Gray), dp(1, 5, 5), dp(0, 10, 10, Layer::Gray, true)};
    doc.points[0].label = doc.points[2].label = "b";
    doc.points[1].label = "a";
    RenderOptions opts;
    opts.title = "t & <u>";
    const auto svg = render_svg(doc, opts);
    CHECK(svg == render_svg(doc, opts));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("t &amp; &lt;u&gt;") != std::string::npos);
    CHECK(svg.find(class_palette()[0]) != std::string::npos);
    CHECK(svg.find(class_palette()[1]) != std::string::npos);
    opts.metaphor = LayerMetaphor::SmallGray;
    CHECK(render_svg(doc, opts) != svg);
}
