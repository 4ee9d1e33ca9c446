#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nucalab/engine.hpp"
#include "nucalab/folner.hpp"
#include "nucalab/fq.hpp"
#include "nucalab/lattice_set.hpp"
#include "nucalab/quasitiling.hpp"
#include "nucalab/rational.hpp"

namespace nucalab {

// A linear local rule: one k x k matrix over F_q per memory offset; the cell
// update is x(g) -> sum_m B_m x(g+m).
struct LinearRule {
    std::vector<FqMatrix> coeffs;  // aligned with the canonical memory order
};

class LinearAssignment {
  public:
    LinearAssignment(int dim, FieldSpec field, int vdim, FiniteSet memory,
                     LinearRule default_rule,
                     std::vector<std::pair<LatticeSet, LinearRule>> regions = {});

    int dim() const { return dim_; }
    const FieldSpec& field() const { return field_; }
    int vdim() const { return vdim_; }
    const FiniteSet& memory() const { return memory_; }
    const LinearRule& default_rule() const { return default_; }
    const std::vector<std::pair<LatticeSet, LinearRule>>& regions() const { return regions_; }

    const LinearRule& rule_at(const Cell& g) const;

    // tau(x)(g), with per-cell vector values via callback Cell -> const Symbol*.
    template <class ValueFn>
    std::vector<Symbol> apply_at(const Cell& g, ValueFn&& value) const {
        const LinearRule& rule = rule_at(g);
        std::vector<Symbol> out(std::size_t(vdim_), 0);
        std::vector<int> acc(std::size_t(vdim_), 0);
        std::size_t mi = 0;
        for (const Cell& m : memory_) {
            const Symbol* v = value(g + m);
            const FqMatrix& B = rule.coeffs[mi++];
            for (int r = 0; r < vdim_; ++r)
                for (int c = 0; c < vdim_; ++c)
                    acc[std::size_t(r)] += int(B.at(std::size_t(r), std::size_t(c))) * int(v[c]);
        }
        for (int r = 0; r < vdim_; ++r) out[std::size_t(r)] = Symbol(acc[std::size_t(r)] % field_.q);
        return out;
    }

  private:
    int dim_;
    FieldSpec field_;
    int vdim_;
    FiniteSet memory_;
    LinearRule default_;
    std::vector<std::pair<LatticeSet, LinearRule>> regions_;
};

// The matrix of the induced linear map A^{FM} -> A^F; rows indexed by
// F x [0,k), columns by FM x [0,k), canonical cell order.
struct WindowMatrix {
    FiniteSet row_cells;
    FiniteSet col_cells;
    int vdim = 1;
    FqMatrix matrix;
};

WindowMatrix window_matrix(const LinearAssignment& nuca, const FiniteSet& F);

// tau(x)|_F from an input vector aligned with FM x [0,k).
std::vector<Symbol> linear_evaluate_window(const LinearAssignment& nuca, const FiniteSet& F,
                                           const std::vector<Symbol>& input_on_fm);

// Table expansion over the alphabet A = F_q^k (symbols = mixed-radix codes of
// the k field components); for cross-engine agreement checks.
RuleAssignment to_rule_assignment(const LinearAssignment& nuca, const Budget& budget);

struct MdimRow {
    int n = 0;
    std::uint64_t window_size = 0;
    std::size_t rank = 0;
    Rat ratio{0};  // rank / (|F_n| * k)
};

struct MdimReport {
    std::vector<MdimRow> rows;
    bool truncated = false;
    std::string truncation_reason;
};

MdimReport mdim_sequence(const LinearAssignment& nuca, const BoxFolner& folner, int n_max,
                         const Budget& budget);

// A nonzero finitely-supported configuration, zero on S, with tau(v) = 0; it
// extends by zero to a global kernel element.
struct KernelWitness {
    FiniteSet support;            // box E minus S
    std::vector<Symbol> values;   // k per support cell, canonical order
};

struct KernelSearchResult {
    std::optional<KernelWitness> witness;
    bool complete = true;
    std::string exhausted;
};

// Exact null-space search over all boxes E inside [-R,R]^d with |E| <=
// support_bound, increasing volume then lexicographic. Soundness of a
// returned witness is unconditional; absence is "none up to bound".
KernelSearchResult kernel_preinjectivity(const LinearAssignment& nuca, const LatticeSet& S,
                                         int support_bound, std::int64_t radius,
                                         const Budget& budget);

struct TileVerdict {
    std::size_t tile_index = 0;
    std::size_t input_cells = 0;  // |E_i M|
    std::size_t kernel_dim = 0;
    std::size_t pinned_cells = 0;  // |S_i|
    bool injective_after_pin = false;
};

struct LocusResult {
    FiniteSet pinned;       // S within the working region
    Rat measured_density{0};
    std::vector<TileVerdict> tiles;
    std::vector<std::size_t> skipped_tiles;  // E_i empty: tile too small for M
    bool density_target_met = false;
    bool vdim_warning = false;  // extraction requested with k > 1
    bool all_tiles_injective = false;
};

// Per tile: E_i = T_i^{-M^2}, tile map on inputs supported in E_i M with
// outputs on E_i, null space, pivot pinning S_i, injectivity re-check; S is
// the complement of U (E_i M \ S_i) within the region.
LocusResult preinjectivity_locus(const LinearAssignment& nuca, const QuasiTiling& tiling,
                                 const Rat& density_target, const Budget& budget);

}  // namespace nucalab
