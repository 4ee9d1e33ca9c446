#pragma once

#include <string>
#include <vector>

#include "nucalab/finite_set.hpp"
#include "nucalab/rational.hpp"

namespace nucalab {

struct Tile {
    Cell center;
    std::size_t shape_index = 0;
    FiniteSet cells;     // T = center + shape
    FiniteSet interior;  // T^{-M}
};

struct QuasiTiling {
    int dim = 1;
    FiniteSet memory;
    FiniteSet region;
    std::vector<FiniteSet> shapes;
    std::vector<Tile> tiles;
};

struct ConstructStats {
    Rat covering{0};              // |(U T_i) n region| / |region|
    Rat max_interior_deficit{0};  // max over tiles of 1 - |T°|/|T|
    Rat covering_deficit{0};      // max(0, (1 - epsilon) - covering)
};

struct Construction {
    QuasiTiling tiling;
    ConstructStats stats;
};

// Greedy multi-scale placement, largest shapes first, centers scanned in
// canonical order: a tile is placed when its interior is disjoint from all
// placed interiors and the tile overlaps previously covered cells in at most
// an epsilon fraction. Deterministic. Throws PreconditionFailed when no shape
// fits into the region.
Construction construct_quasitiling(const std::vector<FiniteSet>& shapes, const Rat& epsilon,
                                   const FiniteSet& memory, const FiniteSet& region);

struct VerifyResult {
    bool interior_fraction_ok = false;  // (i) |T_i°| > (1-alpha) |T_i| for every tile
    bool interiors_disjoint = false;    // (ii)
    bool covering_ok = false;           // (iii) |(U T_i) n region| >= beta |region|
    Rat measured_covering{0};
    std::string first_violation;
    bool pass() const { return interior_fraction_ok && interiors_disjoint && covering_ok; }
};

VerifyResult verify_quasitiling(const QuasiTiling& t, const Rat& alpha, const Rat& beta);

struct AbCoverResult {
    Rat measured_interior_covering{0};
    Rat target{0};  // alpha * beta
    bool pass = false;
};

// Finite-region form of the interior-covering lemma: a (1-alpha)-disjoint
// (read non-strictly: |T_i°| >= alpha |T_i|) and beta-covering tiling has
// interiors covering at least alpha*beta of the region. Throws
// PreconditionFailed when the hypothesis does not hold.
AbCoverResult ab_covering_check(const QuasiTiling& t, const Rat& alpha, const Rat& beta);

}  // namespace nucalab
