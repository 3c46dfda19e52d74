// render.hpp — raster snapshots of d = 2 growth sets.
//
// A snapshot at time t paints every occupied site (occupation time <= t) on
// a white canvas, one site per pixel, origin at the center.  Sites are
// colored by which of `classes` equispaced time bins of [0, t] they joined
// in (6 classes by default), with a fixed dark-blue-to-yellow palette, so
// repeated renders of the same record are byte-identical.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lrfpp/site.hpp"

namespace lrfpp {

struct SnapshotImage {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> rgb;  // row-major, 3 bytes per pixel

    bool operator==(const SnapshotImage&) const = default;
};

// Color of time-class `index` out of `classes` (linear interpolation of a
// fixed 6-stop gradient).
std::array<unsigned char, 3> class_color(int index, int classes);

// Rasterize the sites with occupation time <= t.  Throws DomainError unless
// the sites are 2-dimensional, t >= 0, and at least one site qualifies
// (time 0 = the origin always does for growth records).
SnapshotImage render_snapshot(const std::vector<std::pair<Site, double>>& times, double t,
                              int classes = 6);

// Binary NetPBM P6 writer.
void write_ppm(const SnapshotImage& image, const std::string& path);

// Number of 4-connected components of {sites with time <= t}; the
// quantitative proxy for "satellite clusters versus one compact blob".
// Throws DomainError unless the sites are 2-dimensional.
int count_components(const std::vector<std::pair<Site, double>>& times, double t);

}  // namespace lrfpp
