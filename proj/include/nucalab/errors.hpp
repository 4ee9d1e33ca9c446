#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "nucalab/intmath.hpp"

namespace nucalab {

// Input-file / expression grammar error with position information.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_, col_;
};

// Enumeration refused or aborted; carries the exhausted sub-range so callers
// can report a partial certificate instead of a silent truncation.
class BudgetExceeded : public std::runtime_error {
  public:
    explicit BudgetExceeded(const std::string& msg, std::string exhausted = {})
        : std::runtime_error(msg), exhausted_(std::move(exhausted)) {}
    const std::string& exhausted() const { return exhausted_; }

  private:
    std::string exhausted_;
};

class PreconditionFailed : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Caps for exact enumerations. Checks are made before or during a loop; an
// exceeded cap always surfaces as BudgetExceeded, never as a truncated result.
struct Budget {
    std::uint64_t max_enum = std::uint64_t(1) << 26;
    std::uint64_t max_patterns = std::uint64_t(1) << 22;
    int threads = 1;
    std::int64_t time_limit_ms = 0;  // 0: unlimited
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    // q^cells as a pre-flight enumeration size; throws when above max_enum.
    std::uint64_t require_enum_pow(std::uint64_t base, std::uint64_t exp,
                                   const char* what) const;
    void require_enum(u128 steps, const char* what) const;
    void require_patterns(std::uint64_t n, const char* what) const;
    void check_time(const char* what) const;
};

}  // namespace nucalab
