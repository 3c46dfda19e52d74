#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lrfpp/errors.hpp"
#include "lrfpp/render.hpp"

using namespace lrfpp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("single-site snapshot is a 1x1 image of the first class color") {
    const std::vector<std::pair<Site, double>> occ{{Site{0, 0}, 0.0}};
    const SnapshotImage image = render_snapshot(occ, 0.0);
    CHECK(image.width == 1);
    CHECK(image.height == 1);
    const auto first = class_color(0, 6);
    CHECK(image.rgb == std::vector<unsigned char>{first[0], first[1], first[2]});
}

TEST_CASE("geometry: origin centered, one site per pixel, white background") {
    // Asymmetric cloud: the canvas still spans [-R, R]^2 around the origin.
    const std::vector<std::pair<Site, double>> occ{
        {Site{0, 0}, 0.0}, {Site{3, 1}, 1.0}, {Site{-1, 2}, 5.0}};
    const SnapshotImage image = render_snapshot(occ, 2.0);  // third site excluded
    CHECK(image.width == 7);   // R = max(|3|, |1|, ...) over included = 3
    CHECK(image.height == 7);
    auto pixel = [&](Coord x, Coord y) {
        const int col = static_cast<int>(x) + 3;
        const int row = 3 - static_cast<int>(y);
        const std::size_t at = static_cast<std::size_t>((row * 7 + col) * 3);
        return std::array<unsigned char, 3>{image.rgb[at], image.rgb[at + 1],
                                            image.rgb[at + 2]};
    };
    CHECK(pixel(0, 0) == class_color(0, 6));   // joined at time 0
    CHECK(pixel(3, 1) == class_color(3, 6));   // time 1 of 2 -> bin floor(6 * 0.5) = 3
    CHECK(pixel(1, 1) == std::array<unsigned char, 3>{255, 255, 255});  // background
    CHECK(pixel(-1, 2) == std::array<unsigned char, 3>{255, 255, 255});  // not yet joined
}

TEST_CASE("palette: endpoints fixed, classes distinct, bad indices rejected") {
    CHECK(class_color(0, 6) == std::array<unsigned char, 3>{68, 1, 84});
    CHECK(class_color(5, 6) == std::array<unsigned char, 3>{253, 231, 37});
    for (int i = 1; i < 6; ++i) CHECK(class_color(i, 6) != class_color(i - 1, 6));
    CHECK_THROWS_AS(class_color(6, 6), DomainError);
    CHECK_THROWS_AS(class_color(-1, 6), DomainError);
}

TEST_CASE("PPM output is deterministic and well-formed") {
    const std::vector<std::pair<Site, double>> occ{
        {Site{0, 0}, 0.0}, {Site{1, 0}, 0.4}, {Site{0, -1}, 0.9}};
    const SnapshotImage image = render_snapshot(occ, 1.0);
    const std::string dir = "/tmp/lrfpp_test_render";
    std::filesystem::create_directories(dir);
    write_ppm(image, dir + "/a.ppm");
    write_ppm(image, dir + "/b.ppm");
    const std::string a = slurp(dir + "/a.ppm");
    CHECK(a == slurp(dir + "/b.ppm"));
    // Header: P6, 3x3, maxval 255, then 27 raw bytes.
    CHECK(a.rfind("P6\n3 3\n255\n", 0) == 0);
    CHECK(a.size() == 11 + 27);  // "P6\n3 3\n255\n" + 9 pixels
}

TEST_CASE("rendering requires d = 2 and an occupied canvas") {
    CHECK_THROWS_AS(render_snapshot({{Site{1}, 0.0}}, 1.0), DomainError);
    CHECK_THROWS_AS(render_snapshot({{Site{1, 2, 3}, 0.0}}, 1.0), DomainError);
    CHECK_THROWS_AS(render_snapshot({}, 1.0), DomainError);
    CHECK_THROWS_AS(render_snapshot({{Site{0, 0}, 5.0}}, 1.0), DomainError);
    CHECK_THROWS_AS(render_snapshot({{Site{0, 0}, 0.0}}, -1.0), DomainError);
}

TEST_CASE("4-connected component counting") {
    // Two plus-shapes far apart, plus one diagonal satellite (diagonals do
    // not connect).
    std::vector<std::pair<Site, double>> occ;
    for (const Coord cx : {0, 100}) {
        occ.push_back({Site{cx, 0}, 0.0});
        occ.push_back({Site{cx + 1, 0}, 1.0});
        occ.push_back({Site{cx - 1, 0}, 1.0});
        occ.push_back({Site{cx, 1}, 2.0});
        occ.push_back({Site{cx, -1}, 2.0});
    }
    occ.push_back({Site{50, 50}, 3.0});
    occ.push_back({Site{51, 51}, 3.0});
    CHECK(count_components(occ, 10.0) == 4);
    CHECK(count_components(occ, 1.5) == 2);   // only the two horizontal bars
    CHECK(count_components(occ, 0.0) == 2);   // two isolated centers
    CHECK(count_components({{Site{0, 0}, 0.0}}, 0.0) == 1);
}
