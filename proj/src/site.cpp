#include "lrfpp/site.hpp"

#include <cstdlib>
#include <ostream>

namespace lrfpp {

Site::Site(std::initializer_list<Coord> coords) : d_(static_cast<int>(coords.size())) {
    check_dim(d_);
    int i = 0;
    for (Coord c : coords) c_[static_cast<std::size_t>(i++)] = c;
}

Site::Site(const std::vector<Coord>& coords) : d_(static_cast<int>(coords.size())) {
    check_dim(d_);
    for (int i = 0; i < d_; ++i) c_[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
}

Site::Site(const Coord* coords, int d) : d_(d) {
    check_dim(d_);
    for (int i = 0; i < d_; ++i) c_[static_cast<std::size_t>(i)] = coords[i];
}

std::int64_t Site::l1() const {
    std::int64_t s = 0;
    for (int i = 0; i < d_; ++i) s += std::abs(c_[static_cast<std::size_t>(i)]);
    return s;
}

std::int64_t Site::linf() const {
    std::int64_t m = 0;
    for (int i = 0; i < d_; ++i) {
        std::int64_t a = std::abs(c_[static_cast<std::size_t>(i)]);
        if (a > m) m = a;
    }
    return m;
}

Site Site::operator+(const Site& o) const {
    if (d_ != o.d_) throw DomainError("site dimension mismatch");
    Site r(d_);
    for (int i = 0; i < d_; ++i) r[i] = c_[static_cast<std::size_t>(i)] + o[i];
    return r;
}

Site Site::operator-(const Site& o) const {
    if (d_ != o.d_) throw DomainError("site dimension mismatch");
    Site r(d_);
    for (int i = 0; i < d_; ++i) r[i] = c_[static_cast<std::size_t>(i)] - o[i];
    return r;
}

bool Site::operator==(const Site& o) const {
    if (d_ != o.d_) return false;
    for (int i = 0; i < d_; ++i)
        if (c_[static_cast<std::size_t>(i)] != o[i]) return false;
    return true;
}

std::int64_t l1_dist(const Site& a, const Site& b) { return (a - b).l1(); }

std::ostream& operator<<(std::ostream& os, const Site& s) {
    os << '(';
    for (int i = 0; i < s.dim(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    return os << ')';
}

}  // namespace lrfpp
