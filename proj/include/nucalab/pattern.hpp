#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nucalab/finite_set.hpp"
#include "nucalab/intmath.hpp"

namespace nucalab {

using Symbol = std::uint8_t;

// A finite assignment of symbols to cells; values aligned with the canonical
// order of the support.
class Pattern {
  public:
    Pattern() = default;
    Pattern(FiniteSet support, std::vector<Symbol> values);
    static Pattern constant(const FiniteSet& support, Symbol s);

    const FiniteSet& support() const { return support_; }
    std::size_t size() const { return values_.size(); }
    Symbol value_at_index(std::size_t i) const { return values_[i]; }
    // Throws std::out_of_range if c is not in the support.
    Symbol at(const Cell& c) const;
    std::optional<Symbol> try_at(const Cell& c) const;

    Pattern restricted_to(const FiniteSet& F) const;  // F must be a subset of support
    Pattern translated(const Cell& g) const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
    // Lexicographic on (support, values); total order for deterministic output.
    friend bool operator<(const Pattern& a, const Pattern& b);

    // Mixed-radix code over alphabet q, most significant digit first in
    // canonical support order; requires q^(size) to fit (checked).
    std::uint64_t encode(int q) const;
    static Pattern decode(const FiniteSet& support, int q, std::uint64_t code);

    // Symbols as digits '0'..'9' plus 'a'.. for q > 10; d=2 supports rendered
    // row by row ('/' between rows) when the support is a full box, otherwise
    // cell-by-cell.
    std::string to_text(int dim) const;

  private:
    FiniteSet support_;
    std::vector<Symbol> values_;
};

// A set of patterns over one fixed support, kept as sorted codes.
struct PatternSet {
    FiniteSet support;
    int alphabet = 2;
    std::vector<std::uint64_t> codes;  // sorted ascending, unique

    std::size_t size() const { return codes.size(); }
    bool contains_code(std::uint64_t code) const;
    Pattern pattern(std::size_t i) const { return Pattern::decode(support, alphabet, codes[i]); }
};

}  // namespace nucalab
