#pragma once

#include <cstdint>
#include <vector>

#include "nucalab/cell.hpp"
#include "nucalab/finite_set.hpp"
#include "nucalab/pattern.hpp"

namespace nucalab {

// A full-rank sublattice H of Z^d given by d generator columns, normalized to
// a Hermite-style basis {(e,0), (f,g)} (d=2) or {(a)} (d=1). The index
// [Z^d : H] equals |det| and every cell reduces to a unique residue in the
// fundamental box [0,e) x [0,g).
class PeriodLattice {
  public:
    // d=1: H = a*Z, a != 0.
    static PeriodLattice one_dim(std::int64_t a);
    // d=2: H spanned by g1, g2 with g1.cross(g2) != 0.
    static PeriodLattice two_dim(Cell g1, Cell g2);
    // (2k)Z^d style scaled lattices.
    static PeriodLattice scaled(int dim, std::int64_t scale);

    int dim() const { return dim_; }
    std::int64_t index() const;  // |det|
    Cell reduce(const Cell& c) const;
    bool contains(const Cell& c) const { return reduce(c) == origin; }
    // The fundamental box [0,e) x [0,g) in canonical order.
    FiniteSet fundamental_cells() const;

    std::int64_t e() const { return e_; }
    std::int64_t f() const { return f_; }
    std::int64_t g() const { return g_; }

    friend bool operator==(const PeriodLattice&, const PeriodLattice&) = default;

  private:
    int dim_ = 1;
    // Basis {(e,0),(f,g)}; d=1 uses e only.
    std::int64_t e_ = 1, f_ = 0, g_ = 1;
};

// A total assignment Z^d -> A: a structured background (constant symbol or a
// fully periodic tiling by a fundamental-domain pattern) plus finitely many
// overrides. Queryable at every cell.
class Configuration {
  public:
    static Configuration constant(int dim, Symbol s);
    // fundamental must be supported exactly on lattice.fundamental_cells().
    static Configuration periodic(PeriodLattice lattice, Pattern fundamental);

    Configuration with_overrides(Pattern overrides) const;

    int dim() const { return dim_; }
    Symbol at(const Cell& c) const;
    Symbol background_at(const Cell& c) const;

    bool is_constant_background() const { return !periodic_; }
    Symbol constant_symbol() const { return const_sym_; }
    const PeriodLattice& lattice() const { return lattice_; }
    const Pattern& fundamental() const { return fundamental_; }
    const Pattern& overrides() const { return overrides_; }

  private:
    int dim_ = 1;
    bool periodic_ = false;
    Symbol const_sym_ = 0;
    PeriodLattice lattice_ = PeriodLattice::one_dim(1);
    Pattern fundamental_;
    Pattern overrides_;
};

// y(h) = x(h - g): the translate of x by g.
Configuration shift(const Configuration& x, const Cell& g);
// x|_F.
Pattern restrict_to(const Configuration& x, const FiniteSet& F);

}  // namespace nucalab
