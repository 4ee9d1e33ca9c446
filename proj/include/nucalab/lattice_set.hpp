#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nucalab/configuration.hpp"
#include "nucalab/finite_set.hpp"

namespace nucalab {

// A subset of Z^d with exact, terminating membership: an expression tree over
// the atoms {finite set, coset of a subgroup given by integer generators,
// half-space} closed under union, intersection, complement and difference.
//
// Textual grammar (see README):
//   expr     := atom | union(expr,...) | inter(expr,...) | compl(expr)
//             | diff(expr,expr) | empty | all
//   atom     := finite{cell,...} | coset | halfspace
//   coset    := coset(a,b)                              (d=1: aZ + b)
//             | coset([cell,...];cell)                  (generators; offset)
//   halfspace:= halfspace(a;op;c) | halfspace(a1,a2;op;c)   op in {>=,<=}
//   cell     := (x) | (x,y)
class LatticeSet {
  public:
    struct FiniteAtom {
        FiniteSet set;
    };
    struct CosetAtom {
        int dim = 1;
        std::vector<Cell> gens;  // as written, for printing
        Cell offset;
        // Normalized subgroup: rank 0 (= {0}), rank 1 (mult * dir * Z with dir
        // primitive), or full rank (lattice).
        int rank = 0;
        Cell dir;
        std::int64_t mult = 1;
        std::optional<PeriodLattice> lattice;
    };
    struct HalfspaceAtom {
        int dim = 1;
        Cell normal;  // != 0
        std::int64_t c = 0;
        // membership: normal . x >= c
    };
    struct UnionNode;
    struct InterNode;
    struct ComplNode;
    struct DiffNode;
    using Node = std::variant<FiniteAtom, CosetAtom, HalfspaceAtom, UnionNode, InterNode,
                              ComplNode, DiffNode>;
    struct UnionNode {
        std::vector<LatticeSet> parts;
    };
    struct InterNode {
        std::vector<LatticeSet> parts;
    };
    struct ComplNode {
        std::vector<LatticeSet> part;  // exactly one; vector keeps Node regular
    };
    struct DiffNode {
        std::vector<LatticeSet> parts;  // exactly two
    };

    static LatticeSet finite(FiniteSet cells);
    static LatticeSet empty(int dim) { return finite(FiniteSet(dim)); }
    static LatticeSet all(int dim);
    static LatticeSet coset(int dim, std::vector<Cell> gens, Cell offset);
    static LatticeSet halfspace(int dim, Cell normal, std::int64_t c);
    static LatticeSet unite(std::vector<LatticeSet> parts);
    static LatticeSet intersect(std::vector<LatticeSet> parts);
    static LatticeSet complement(LatticeSet s);
    static LatticeSet difference(LatticeSet a, LatticeSet b);

    int dim() const { return dim_; }
    bool contains(const Cell& c) const;
    LatticeSet translated(const Cell& g) const;

    // Cells of S inside the window F.
    FiniteSet intersect_window(const FiniteSet& F) const;
    std::int64_t count_in(const FiniteSet& F) const;

    // The cells, when the expression is a plain finite atom.
    std::optional<FiniteSet> as_finite_atom() const;

    const Node& node() const { return *node_; }

    std::string to_text() const;
    // Throws ParseError (see formats.hpp) with offset information.
    static LatticeSet parse(std::string_view text);

  private:
    LatticeSet(int dim, std::shared_ptr<const Node> node)
        : dim_(dim), node_(std::move(node)) {}
    int dim_ = 1;
    std::shared_ptr<const Node> node_;
};

}  // namespace nucalab
