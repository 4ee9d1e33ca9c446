#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "nucalab/cell.hpp"

namespace nucalab {

// A finite subset of Z^d, stored sorted and deduplicated in canonical cell order.
class FiniteSet {
  public:
    FiniteSet() = default;
    explicit FiniteSet(int dim) : dim_(dim) { check_dim(dim); }
    FiniteSet(int dim, std::vector<Cell> cells);
    FiniteSet(int dim, std::initializer_list<Cell> cells)
        : FiniteSet(dim, std::vector<Cell>(cells)) {}

    // Boxes. box1: [lo,hi] in Z; box2: [lo.x,hi.x] x [lo.y,hi.y] in Z^2.
    static FiniteSet box1(std::int64_t lo, std::int64_t hi);
    static FiniteSet box2(Cell lo, Cell hi);
    // Centered box [-k,k]^d.
    static FiniteSet centered_box(int dim, std::int64_t k);

    int dim() const { return dim_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    std::span<const Cell> cells() const { return cells_; }
    const Cell& at(std::size_t i) const { return cells_[i]; }

    bool contains(const Cell& c) const {
        return std::binary_search(cells_.begin(), cells_.end(), c);
    }
    // Index of c in canonical order, or npos.
    static constexpr std::size_t npos = std::size_t(-1);
    std::size_t index_of(const Cell& c) const;

    FiniteSet translated(const Cell& g) const;

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

  private:
    static void check_dim(int dim);
    int dim_ = 1;
    std::vector<Cell> cells_;
};

// Throws std::invalid_argument on dimension mismatch.
void require_same_dim(const FiniteSet& a, const FiniteSet& b);

// FM = {f + m : f in F, m in M}.
FiniteSet minkowski(const FiniteSet& F, const FiniteSet& M);
// F^{-M} = {g in F : g + M subset of F}.
FiniteSet interior(const FiniteSet& F, const FiniteSet& M);
// FM \ F^{-M}.
FiniteSet boundary(const FiniteSet& F, const FiniteSet& M);

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_difference(const FiniteSet& a, const FiniteSet& b);

// {-m : m in M}.
FiniteSet negated(const FiniteSet& M);
// M u -M u {0}; the symmetric closure used for verification windows.
FiniteSet symmetrized(const FiniteSet& M);

}  // namespace nucalab
