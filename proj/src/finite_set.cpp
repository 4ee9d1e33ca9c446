#include "nucalab/finite_set.hpp"

#include <stdexcept>
#include <unordered_set>

namespace nucalab {

void FiniteSet::check_dim(int dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

FiniteSet::FiniteSet(int dim, std::vector<Cell> cells) : dim_(dim), cells_(std::move(cells)) {
    check_dim(dim);
    if (dim_ == 1) {
        for (const Cell& c : cells_) {
            if (c.y != 0) throw std::invalid_argument("1-dimensional cell with nonzero y");
        }
    }
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

FiniteSet FiniteSet::box1(std::int64_t lo, std::int64_t hi) {
    std::vector<Cell> cells;
    for (std::int64_t x = lo; x <= hi; ++x) cells.push_back({x, 0});
    return FiniteSet(1, std::move(cells));
}

FiniteSet FiniteSet::box2(Cell lo, Cell hi) {
    std::vector<Cell> cells;
    for (std::int64_t y = lo.y; y <= hi.y; ++y)
        for (std::int64_t x = lo.x; x <= hi.x; ++x) cells.push_back({x, y});
    return FiniteSet(2, std::move(cells));
}

FiniteSet FiniteSet::centered_box(int dim, std::int64_t k) {
    return dim == 1 ? box1(-k, k) : box2({-k, -k}, {k, k});
}

std::size_t FiniteSet::index_of(const Cell& c) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
    if (it == cells_.end() || *it != c) return npos;
    return std::size_t(it - cells_.begin());
}

FiniteSet FiniteSet::translated(const Cell& g) const {
    std::vector<Cell> cells;
    cells.reserve(cells_.size());
    for (const Cell& c : cells_) cells.push_back(c + g);
    FiniteSet r(dim_);
    r.cells_ = std::move(cells);  // translation preserves canonical order
    return r;
}

void require_same_dim(const FiniteSet& a, const FiniteSet& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
}

FiniteSet minkowski(const FiniteSet& F, const FiniteSet& M) {
    require_same_dim(F, M);
    std::vector<Cell> cells;
    cells.reserve(F.size() * M.size());
    for (const Cell& f : F)
        for (const Cell& m : M) cells.push_back(f + m);
    return FiniteSet(F.dim(), std::move(cells));
}

FiniteSet interior(const FiniteSet& F, const FiniteSet& M) {
    require_same_dim(F, M);
    std::vector<Cell> cells;
    for (const Cell& g : F) {
        bool inside = true;
        for (const Cell& m : M) {
            if (!F.contains(g + m)) {
                inside = false;
                break;
            }
        }
        if (inside) cells.push_back(g);
    }
    FiniteSet r(F.dim(), std::move(cells));
    return r;
}

FiniteSet boundary(const FiniteSet& F, const FiniteSet& M) {
    return set_difference(minkowski(F, M), interior(F, M));
}

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b) {
    require_same_dim(a, b);
    std::vector<Cell> cells;
    cells.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(cells));
    return FiniteSet(a.dim(), std::move(cells));
}

FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b) {
    require_same_dim(a, b);
    std::vector<Cell> cells;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(cells));
    return FiniteSet(a.dim(), std::move(cells));
}

FiniteSet set_difference(const FiniteSet& a, const FiniteSet& b) {
    require_same_dim(a, b);
    std::vector<Cell> cells;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(cells));
    return FiniteSet(a.dim(), std::move(cells));
}

FiniteSet negated(const FiniteSet& M) {
    std::vector<Cell> cells;
    cells.reserve(M.size());
    for (const Cell& m : M) cells.push_back(-m);
    return FiniteSet(M.dim(), std::move(cells));
}

FiniteSet symmetrized(const FiniteSet& M) {
    FiniteSet r = set_union(M, negated(M));
    return set_union(r, FiniteSet(M.dim(), {origin}));
}

}  // namespace nucalab
