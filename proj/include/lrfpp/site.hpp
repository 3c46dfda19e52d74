// site.hpp — lattice points of Z^d (d <= 8) with l1/linf norms.
//
// Coordinates are signed 64-bit: heavy-tailed displacement radii can reach
// ~2^61 in the small-alpha regimes, far beyond 32 bits.  Callers that
// accumulate coordinates (the growth module) enforce a magnitude budget so
// that l1 sums over d <= 8 lanes cannot overflow.
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

#include "lrfpp/errors.hpp"

namespace lrfpp {

using Coord = std::int64_t;

inline constexpr int kMaxDim = 8;

class Site {
  public:
    Site() : d_(1) {}
    explicit Site(int d) : d_(d) { check_dim(d); }
    Site(std::initializer_list<Coord> coords);
    explicit Site(const std::vector<Coord>& coords);
    Site(const Coord* coords, int d);

    static Site origin(int d) { return Site(d); }

    int dim() const { return d_; }
    Coord operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Coord& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const Coord* data() const { return c_.data(); }

    std::int64_t l1() const;
    std::int64_t linf() const;
    bool is_origin() const { return l1() == 0; }

    Site operator+(const Site& o) const;
    Site operator-(const Site& o) const;
    bool operator==(const Site& o) const;
    bool operator!=(const Site& o) const { return !(*this == o); }

    std::vector<Coord> coords() const { return {c_.begin(), c_.begin() + d_}; }

  private:
    static void check_dim(int d) {
        if (d < 1 || d > kMaxDim) throw DomainError("site dimension must be in [1, 8]");
    }
    std::array<Coord, kMaxDim> c_{};
    int d_;
};

std::int64_t l1_dist(const Site& a, const Site& b);

std::ostream& operator<<(std::ostream& os, const Site& s);

}  // namespace lrfpp
