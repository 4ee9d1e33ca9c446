#include "nucalab/quasitiling.hpp"

#include <algorithm>

#include "nucalab/errors.hpp"

namespace nucalab {

Construction construct_quasitiling(const std::vector<FiniteSet>& shapes, const Rat& epsilon,
                                   const FiniteSet& memory, const FiniteSet& region) {
    if (shapes.empty()) throw std::invalid_argument("no shapes");
    if (epsilon <= Rat(0) || epsilon >= Rat(1))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    for (std::size_t i = 1; i < shapes.size(); ++i)
        if (shapes[i].size() < shapes[i - 1].size())
            throw std::invalid_argument("shapes must be ordered by increasing size");

    const int dim = region.dim();
    QuasiTiling tiling;
    tiling.dim = dim;
    tiling.memory = memory;
    tiling.region = region;
    tiling.shapes = shapes;

    std::vector<char> covered(region.size(), 0);
    std::vector<char> in_interior(region.size(), 0);
    bool any_fit = false;

    for (std::size_t si = shapes.size(); si-- > 0;) {
        const FiniteSet& shape = shapes[si];
        if (shape.size() > region.size()) continue;
        const FiniteSet shape_interior = interior(shape, memory);
        for (const Cell& g : region) {
            FiniteSet t = shape.translated(g);
            bool inside = true;
            std::int64_t overlap = 0;
            for (const Cell& c : t) {
                std::size_t idx = region.index_of(c);
                if (idx == FiniteSet::npos) {
                    inside = false;
                    break;
                }
                if (covered[idx]) ++overlap;
            }
            if (!inside) continue;
            any_fit = true;
            if (Rat(overlap) > epsilon * Rat(std::int64_t(t.size()))) continue;
            FiniteSet t_int = shape_interior.translated(g);
            bool clash = false;
            for (const Cell& c : t_int) {
                std::size_t idx = region.index_of(c);
                if (idx != FiniteSet::npos && in_interior[idx]) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
            for (const Cell& c : t) covered[region.index_of(c)] = 1;
            for (const Cell& c : t_int) {
                std::size_t idx = region.index_of(c);
                if (idx != FiniteSet::npos) in_interior[idx] = 1;
            }
            tiling.tiles.push_back(Tile{g, si, std::move(t), std::move(t_int)});
        }
    }
    if (!any_fit) throw PreconditionFailed("every shape is too large for the region");

    ConstructStats stats;
    std::int64_t covered_count = std::int64_t(std::count(covered.begin(), covered.end(), 1));
    stats.covering = Rat(covered_count, std::int64_t(region.size()));
    for (const Tile& t : tiling.tiles) {
        Rat deficit =
            Rat(1) - Rat(std::int64_t(t.interior.size()), std::int64_t(t.cells.size()));
        stats.max_interior_deficit = std::max(stats.max_interior_deficit, deficit);
    }
    Rat want = Rat(1) - epsilon;
    stats.covering_deficit = stats.covering >= want ? Rat(0) : want - stats.covering;
    return Construction{std::move(tiling), stats};
}

namespace {

Rat covering_fraction(const QuasiTiling& t, bool interiors_only) {
    std::vector<char> covered(t.region.size(), 0);
    for (const Tile& tile : t.tiles)
        for (const Cell& c : (interiors_only ? tile.interior : tile.cells)) {
            std::size_t idx = t.region.index_of(c);
            if (idx != FiniteSet::npos) covered[idx] = 1;
        }
    std::int64_t n = std::int64_t(std::count(covered.begin(), covered.end(), 1));
    return Rat(n, std::int64_t(t.region.size()));
}

bool interiors_pairwise_disjoint(const QuasiTiling& t, std::string* violation) {
    std::vector<char> seen(t.region.size(), 0);
    for (std::size_t i = 0; i < t.tiles.size(); ++i) {
        for (const Cell& c : t.tiles[i].interior) {
            std::size_t idx = t.region.index_of(c);
            if (idx == FiniteSet::npos) continue;
            if (seen[idx]) {
                if (violation)
                    *violation = "interior overlap at " + to_string(c, t.dim) + " (tile " +
                                 std::to_string(i) + ")";
                return false;
            }
            seen[idx] = 1;
        }
    }
    return true;
}

}  // namespace

VerifyResult verify_quasitiling(const QuasiTiling& t, const Rat& alpha, const Rat& beta) {
    VerifyResult r;
    r.interior_fraction_ok = true;
    for (std::size_t i = 0; i < t.tiles.size(); ++i) {
        const Tile& tile = t.tiles[i];
        if (!(Rat(std::int64_t(tile.interior.size())) >
              (Rat(1) - alpha) * Rat(std::int64_t(tile.cells.size())))) {
            r.interior_fraction_ok = false;
            if (r.first_violation.empty())
                r.first_violation = "tile " + std::to_string(i) + " interior not a (1-alpha)-subset";
            break;
        }
    }
    r.interiors_disjoint =
        interiors_pairwise_disjoint(t, r.first_violation.empty() ? &r.first_violation : nullptr);
    r.measured_covering = covering_fraction(t, false);
    r.covering_ok = r.measured_covering >= beta * Rat(1);
    if (!r.covering_ok && r.first_violation.empty())
        r.first_violation = "covering fraction " + to_string(r.measured_covering) +
                            " below beta = " + to_string(beta);
    return r;
}

AbCoverResult ab_covering_check(const QuasiTiling& t, const Rat& alpha, const Rat& beta) {
    // hypothesis: (1-alpha)-disjoint (non-strict reading) and beta-covering
    for (std::size_t i = 0; i < t.tiles.size(); ++i) {
        const Tile& tile = t.tiles[i];
        if (Rat(std::int64_t(tile.interior.size())) <
            alpha * Rat(std::int64_t(tile.cells.size())))
            throw PreconditionFailed("tile " + std::to_string(i) +
                                     " interior below the alpha fraction");
    }
    std::string violation;
    if (!interiors_pairwise_disjoint(t, &violation))
        throw PreconditionFailed("interiors not disjoint: " + violation);
    Rat cover = covering_fraction(t, false);
    if (cover < beta)
        throw PreconditionFailed("tiling covers " + to_string(cover) + " < beta = " +
                                 to_string(beta));
    AbCoverResult r;
    r.measured_interior_covering = covering_fraction(t, true);
    r.target = alpha * beta;
    r.pass = r.measured_interior_covering >= r.target;
    return r;
}

}  // namespace nucalab
