#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "lrfpp/rng.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp::detail {

// Open-addressing hash set of lattice sites with stable insertion indices.
// Coordinates are stored flat (d per record) to keep the hot path cache-lean;
// slots hold record_index + 1 (0 = empty) with linear probing at load <= 0.5.
class SiteTable {
public:
    static constexpr std::uint32_t npos = 0xFFFFFFFFu;

    explicit SiteTable(int d, std::size_t expected = 1024) : d_(d) {
        std::size_t cap = 64;
        while (cap < expected * 2) cap <<= 1;
        slots_.assign(cap, 0);
        mask_ = cap - 1;
    }

    std::uint32_t find(const Coord* c) const {
        std::size_t h = hash(c) & mask_;
        while (true) {
            std::uint32_t s = slots_[h];
            if (s == 0) return npos;
            if (equal(c, s - 1)) return s - 1;
            h = (h + 1) & mask_;
        }
    }

    // Returns {record index, true if newly inserted}.
    std::pair<std::uint32_t, bool> insert(const Coord* c) {
        if ((count_ + 1) * 2 > slots_.size()) grow();
        std::size_t h = hash(c) & mask_;
        while (true) {
            std::uint32_t s = slots_[h];
            if (s == 0) {
                std::uint32_t idx = static_cast<std::uint32_t>(count_++);
                flat_.insert(flat_.end(), c, c + d_);
                slots_[h] = idx + 1;
                return {idx, true};
            }
            if (equal(c, s - 1)) return {s - 1, false};
            h = (h + 1) & mask_;
        }
    }

    std::size_t size() const { return count_; }
    int dim() const { return d_; }
    const Coord* coords(std::uint32_t idx) const { return flat_.data() + static_cast<std::size_t>(idx) * d_; }

private:
    bool equal(const Coord* c, std::uint32_t idx) const {
        return std::memcmp(c, coords(idx), sizeof(Coord) * static_cast<std::size_t>(d_)) == 0;
    }

    std::size_t hash(const Coord* c) const {
        std::uint64_t h = 0x243F6A8885A308D3ull;  // arbitrary odd constant
        for (int i = 0; i < d_; ++i) h = detail::mix64(h ^ static_cast<std::uint64_t>(c[i]));
        return static_cast<std::size_t>(h);
    }

    void grow() {
        std::vector<std::uint32_t> old;
        old.swap(slots_);
        slots_.assign(old.size() * 2, 0);
        mask_ = slots_.size() - 1;
        for (std::uint32_t idx = 0; idx < count_; ++idx) {
            std::size_t h = hash(coords(idx)) & mask_;
            while (slots_[h] != 0) h = (h + 1) & mask_;
            slots_[h] = idx + 1;
        }
    }

    int d_;
    std::vector<Coord> flat_;
    std::vector<std::uint32_t> slots_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

}  // namespace lrfpp::detail
