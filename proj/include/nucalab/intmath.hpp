#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace nucalab {

using std::int64_t;
using std::uint64_t;
using u128 = unsigned __int128;

// Floor division/remainder (C++ '/' truncates toward zero).
constexpr int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr int64_t floor_mod(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

// g = gcd(a,b) together with x,y such that a*x + b*y = g.
struct ExtGcd {
    int64_t g, x, y;
};

constexpr ExtGcd ext_gcd(int64_t a, int64_t b) {
    if (b == 0) {
        if (a < 0) return {-a, -1, 0};
        return {a, 1, 0};
    }
    ExtGcd r = ext_gcd(b, floor_mod(a, b));
    return {r.g, r.y, r.x - floor_div(a, b) * r.y};
}

// q^e if it fits into the positive int64 range, nullopt otherwise.
constexpr std::optional<uint64_t> checked_pow(uint64_t base, uint64_t exp) {
    uint64_t r = 1;
    const uint64_t limit = uint64_t(1) << 62;
    for (uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > limit / base) return std::nullopt;
        r *= base;
    }
    return r;
}

std::string u128_to_string(u128 v);

}  // namespace nucalab
