#include "textforge/overlay.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace textforge;

TEST_CASE("emit_overlay denormalizes boxes to pixels") {
    const std::string svg =
        emit_overlay("page.png", 1000, 800, {{"title", {0.1, 0.1, 0.5, 0.5}}});
    CHECK(svg.find("<rect class=\"pred\" x=\"100\" y=\"80\" width=\"400\" height=\"320\"/>") !=
          std::string::npos);
    CHECK(svg.find("href=\"page.png\"") != std::string::npos);
    CHECK(svg.find(">title</text>") != std::string::npos);
    CHECK(fixtures::xml_balanced(svg));
}

TEST_CASE("emit_overlay with no spans is still a valid document") {
    const std::string svg = emit_overlay("img.png", 640, 480, {});
    CHECK(svg.find("<image") != std::string::npos);
    CHECK(svg.find("<rect") == std::string::npos);
    CHECK(fixtures::xml_balanced(svg));
}

TEST_CASE("emit_overlay distinguishes predictions from ground truth") {
    const std::string svg = emit_overlay("img.png", 100, 100, {{"p", {0, 0, 0.5, 0.5}}},
                                         {{0.5, 0.5, 1, 1}});
    CHECK(svg.find("class=\"pred\"") != std::string::npos);
    CHECK(svg.find("class=\"gt\"") != std::string::npos);
    CHECK(fixtures::xml_balanced(svg));
}

TEST_CASE("emit_overlay escapes markup in labels and references") {
    const std::string svg = emit_overlay("a<b>&\".png", 10, 10, {{"x<y>&\"z", {0, 0, 1, 1}}});
    CHECK(svg.find("a&lt;b&gt;&amp;&quot;.png") != std::string::npos);
    CHECK(svg.find("x&lt;y&gt;&amp;&quot;z") != std::string::npos);
    CHECK(fixtures::xml_balanced(svg));
}

TEST_CASE("emit_overlay rejects degenerate dimensions") {
    CHECK_THROWS_AS(emit_overlay("i", 0, 10, {}), invalid_geometry_error);
    CHECK_THROWS_AS(emit_overlay("i", 10, -1, {}), invalid_geometry_error);
}

TEST_CASE("overlay rectangles renormalize to the input boxes within a pixel quantum") {
    const int width = 1234, height = 771;
    const std::vector<grounded_span> spans = {{"a", {0.084, 0.049, 0.934, 0.298}},
                                              {"b", {0.123, 0.5, 0.9, 0.617}}};
    const std::string svg = emit_overlay("img.png", width, height, spans);
    std::size_t pos = 0;
    for (const grounded_span & s : spans) {
        pos = svg.find("<rect class=\"pred\"", pos);
        REQUIRE(pos != std::string::npos);
        auto attr = [&](const char * name) {
            const std::string needle = std::string(name) + "=\"";
            const std::size_t a = svg.find(needle, pos) + needle.size();
            return std::stod(svg.substr(a, svg.find('"', a) - a));
        };
        CHECK(attr("x") / width == doctest::Approx(s.box.x_min).epsilon(1.0 / width));
        CHECK(attr("y") / height == doctest::Approx(s.box.y_min).epsilon(1.0 / height));
        CHECK(attr("width") / width ==
              doctest::Approx(s.box.x_max - s.box.x_min).epsilon(1.0 / width));
        CHECK(attr("height") / height ==
              doctest::Approx(s.box.y_max - s.box.y_min).epsilon(1.0 / height));
        ++pos;
    }
}
