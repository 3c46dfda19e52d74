#include "lrfpp/render.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <unordered_map>

#include "lrfpp/errors.hpp"

namespace lrfpp {

namespace {

// 6-stop gradient, dark blue to yellow; interpolated for other class counts.
constexpr std::array<std::array<unsigned char, 3>, 6> kStops = {{{68, 1, 84},
                                                                 {65, 68, 135},
                                                                 {42, 120, 142},
                                                                 {34, 168, 132},
                                                                 {122, 209, 81},
                                                                 {253, 231, 37}}};

std::vector<std::pair<Site, double>> filter_included(
    const std::vector<std::pair<Site, double>>& times, double t) {
    if (times.empty()) throw DomainError("snapshot: no recorded sites");
    if (!(t >= 0.0)) throw DomainError("snapshot: time must be >= 0");
    std::vector<std::pair<Site, double>> included;
    for (const auto& [site, when] : times) {
        if (site.dim() != 2) throw DomainError("snapshot rendering supports d = 2 only");
        if (when <= t) included.push_back({site, when});
    }
    if (included.empty())
        throw DomainError("snapshot: no site is occupied by the requested time");
    return included;
}

std::uint64_t pack_xy(Coord x, Coord y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
}

}  // namespace

std::array<unsigned char, 3> class_color(int index, int classes) {
    if (classes < 1 || index < 0 || index >= classes)
        throw DomainError("time class out of range");
    if (classes == 1) return kStops.front();
    const double u = static_cast<double>(index) / (classes - 1) * (kStops.size() - 1);
    const int lo = std::min(static_cast<int>(u), static_cast<int>(kStops.size()) - 2);
    const double w = u - lo;
    std::array<unsigned char, 3> rgb{};
    for (int c = 0; c < 3; ++c)
        rgb[static_cast<std::size_t>(c)] = static_cast<unsigned char>(
            kStops[lo][c] + w * (kStops[lo + 1][c] - kStops[lo][c]) + 0.5);
    return rgb;
}

SnapshotImage render_snapshot(const std::vector<std::pair<Site, double>>& times, double t,
                              int classes) {
    if (classes < 1 || classes > 64) throw DomainError("class count must be in [1, 64]");
    const auto included = filter_included(times, t);

    Coord radius = 0;
    for (const auto& [site, when] : included)
        radius = std::max(radius, std::max(std::abs(site[0]), std::abs(site[1])));
    const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;
    if (side > 8192)
        throw BudgetExceeded("snapshot spans more than 8192 pixels across");

    SnapshotImage image;
    image.width = static_cast<int>(side);
    image.height = static_cast<int>(side);
    image.rgb.assign(static_cast<std::size_t>(side * side * 3), 255);

    for (const auto& [site, when] : included) {
        // Bin joining times into `classes` equispaced classes over [0, t];
        // the upper endpoint folds into the last class.
        int bin = 0;
        if (t > 0.0) bin = std::min(classes - 1, static_cast<int>(when / t * classes));
        const auto rgb = class_color(bin, classes);
        // Image row 0 is the top of the picture (largest y).
        const std::int64_t col = site[0] + radius;
        const std::int64_t row = radius - site[1];
        const std::size_t at = static_cast<std::size_t>((row * side + col) * 3);
        std::copy(rgb.begin(), rgb.end(), image.rgb.begin() + at);
    }
    return image;
}

void write_ppm(const SnapshotImage& image, const std::string& path) {
    if (image.width < 1 || image.height < 1 ||
        image.rgb.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        throw DomainError("malformed image buffer");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write image '" + path + "'");
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
}

int count_components(const std::vector<std::pair<Site, double>>& times, double t) {
    const auto included = filter_included(times, t);
    std::unordered_map<std::uint64_t, int> index;
    index.reserve(included.size() * 2);
    for (const auto& [site, when] : included) {
        if (std::max(std::abs(site[0]), std::abs(site[1])) > 0x7FFFFFFF)
            throw BudgetExceeded("component count: coordinates exceed 32 bits");
        index.emplace(pack_xy(site[0], site[1]), static_cast<int>(index.size()));
    }

    std::vector<bool> seen(index.size(), false);
    std::vector<std::uint64_t> stack;
    int components = 0;
    for (const auto& [site, when] : included) {
        const std::uint64_t start = pack_xy(site[0], site[1]);
        if (seen[static_cast<std::size_t>(index.at(start))]) continue;
        ++components;
        stack.push_back(start);
        seen[static_cast<std::size_t>(index.at(start))] = true;
        while (!stack.empty()) {
            const std::uint64_t key = stack.back();
            stack.pop_back();
            const Coord x = static_cast<std::int32_t>(key >> 32);
            const Coord y = static_cast<std::int32_t>(key & 0xFFFFFFFFull);
            const std::uint64_t next[4] = {pack_xy(x + 1, y), pack_xy(x - 1, y),
                                           pack_xy(x, y + 1), pack_xy(x, y - 1)};
            for (std::uint64_t n : next) {
                auto it = index.find(n);
                if (it != index.end() && !seen[static_cast<std::size_t>(it->second)]) {
                    seen[static_cast<std::size_t>(it->second)] = true;
                    stack.push_back(n);
                }
            }
        }
    }
    return components;
}

}  // namespace lrfpp
