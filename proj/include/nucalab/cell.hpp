#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace nucalab {

// A cell of the lattice Z^d, d in {1,2}. One-dimensional cells keep y == 0;
// the ambient dimension travels with the containing set or analysis context.
struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(const Cell&, const Cell&) = default;

    // Canonical order: row-major, y before x. All deterministic scans,
    // pattern encodings and search orders derive from this.
    friend constexpr std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
        if (a.y != b.y) return a.y <=> b.y;
        return a.x <=> b.x;
    }

    constexpr Cell operator+(const Cell& o) const { return {x + o.x, y + o.y}; }
    constexpr Cell operator-(const Cell& o) const { return {x - o.x, y - o.y}; }
    constexpr Cell operator-() const { return {-x, -y}; }

    constexpr std::int64_t dot(const Cell& o) const { return x * o.x + y * o.y; }
    constexpr std::int64_t cross(const Cell& o) const { return x * o.y - y * o.x; }
};

inline constexpr Cell origin{0, 0};

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
        std::uint64_t h = std::uint64_t(c.x) * 0x9e3779b97f4a7c15ULL;
        h ^= std::uint64_t(c.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return std::size_t(h);
    }
};

// "(x)" for d=1, "(x,y)" for d=2.
std::string to_string(const Cell& c, int dim);

}  // namespace nucalab
