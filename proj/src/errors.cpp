#include "nucalab/errors.hpp"

namespace nucalab {

std::uint64_t Budget::require_enum_pow(std::uint64_t base, std::uint64_t exp,
                                       const char* what) const {
    auto n = checked_pow(base, exp);
    if (!n || *n > max_enum)
        throw BudgetExceeded(std::string(what) + ": enumeration of " + std::to_string(base) +
                             "^" + std::to_string(exp) + " inputs exceeds max_enum=" +
                             std::to_string(max_enum));
    return *n;
}

void Budget::require_enum(u128 steps, const char* what) const {
    if (steps > u128(max_enum))
        throw BudgetExceeded(std::string(what) + ": " + u128_to_string(steps) +
                             " steps exceed max_enum=" + std::to_string(max_enum));
}

void Budget::require_patterns(std::uint64_t n, const char* what) const {
    if (n > max_patterns)
        throw BudgetExceeded(std::string(what) + ": " + std::to_string(n) +
                             " patterns exceed max_patterns=" + std::to_string(max_patterns));
}

void Budget::check_time(const char* what) const {
    if (time_limit_ms <= 0) return;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    if (elapsed > time_limit_ms)
        throw BudgetExceeded(std::string(what) + ": time limit of " +
                             std::to_string(time_limit_ms) + " ms exceeded");
}

}  // namespace nucalab
