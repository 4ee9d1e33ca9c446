#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nucalab/folner.hpp"
#include "nucalab/lattice_set.hpp"
#include "nucalab/rational.hpp"

namespace nucalab {

struct Interval {
    Rat lo{0}, hi{1};
    bool exact() const { return lo == hi; }
};

// Sound enclosures for the four densities of a set: lower/upper Banach and
// lower/upper natural (along centered-box Folner sequences). Degenerate
// intervals are exact values.
struct DensityBounds {
    Interval lower_banach, upper_banach, lower_nat, upper_nat;
};

// A set that is, up to a set of zero Banach density, periodic with axis
// period L: all four densities equal |residues| / L^d exactly.
struct PeriodicClass {
    int dim = 1;
    std::int64_t axis_period = 1;
    std::vector<bool> residues;  // over [0,L)^d in canonical cell order
    Rat density() const;
    bool residue_contains(const Cell& c) const;
};

using DensityClass = std::variant<PeriodicClass, DensityBounds>;

// Structural analysis of the expression tree. Boolean combinations of cosets
// and finite sets stay in the periodic tier; half-spaces and oversized common
// periods fall back to interval bounds.
DensityClass classify_density(const LatticeSet& s,
                              std::int64_t max_period_cells = std::int64_t(1) << 22);

DensityBounds to_bounds(const DensityClass& c);

struct WindowRatio {
    int n = 0;
    std::int64_t count = 0;
    std::int64_t window = 1;
    Rat ratio{0};
};

struct ValueOrEstimate {
    Rat value{0};
    bool exact = false;
};

struct DensityReport {
    std::vector<WindowRatio> window_ratios;
    ValueOrEstimate upper_natural, lower_natural;
    Interval upper_banach, lower_banach;
    bool banach_closed_form = false;  // both Banach intervals degenerate
};

// Exact membership counts along the Folner boxes; exact natural densities
// when the classifier supports them, tail max/min estimates otherwise.
DensityReport natural_density(const LatticeSet& S, const BoxFolner& folner, int n_max);

// Banach densities are net-independent; no Folner parameter. window_ratios is
// left empty. Non-closed-form sets come back with bracketing intervals and
// banach_closed_form == false, never a silently wrong exact value.
DensityReport banach_density(const LatticeSet& S);

struct LawsVerdict {
    bool pass = true;
    std::string first_violation;  // empty when pass
};

// Complement identity, subadditivity of upper densities and the chain
// 0 <= lower Banach <= lower natural <= upper natural <= upper Banach <= 1,
// checked per window ratio and on exact values where available.
LawsVerdict density_laws_check(const LatticeSet& S, const LatticeSet& T,
                               const BoxFolner& folner, int n_max);

}  // namespace nucalab
