#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nucalab/configuration.hpp"
#include "nucalab/errors.hpp"
#include "nucalab/lattice_set.hpp"
#include "nucalab/pattern.hpp"

namespace nucalab {

// A total local transition map A^M -> A, stored as the output column indexed
// by the mixed-radix code of the input pattern in canonical memory order.
class RuleTable {
  public:
    RuleTable() = default;
    RuleTable(int alphabet, std::size_t memory_size, std::vector<Symbol> out);

    static RuleTable projection(int alphabet, std::size_t memory_size, std::size_t index);
    static RuleTable constant_rule(int alphabet, std::size_t memory_size, Symbol s);

    Symbol apply_code(std::uint64_t code) const { return out_[code]; }
    std::size_t table_size() const { return out_.size(); }
    const std::vector<Symbol>& entries() const { return out_; }

    friend bool operator==(const RuleTable&, const RuleTable&) = default;

  private:
    std::vector<Symbol> out_;
};

// The configuration of local transition maps: region-wise tables with a
// required default. The rule at a cell is the table of the first region
// containing it. All tables share one memory set.
class RuleAssignment {
  public:
    RuleAssignment(int dim, int alphabet, FiniteSet memory, RuleTable default_table,
                   std::vector<std::pair<LatticeSet, RuleTable>> regions = {});

    int dim() const { return dim_; }
    int alphabet() const { return alphabet_; }
    const FiniteSet& memory() const { return memory_; }
    const RuleTable& default_table() const { return default_; }
    const std::vector<std::pair<LatticeSet, RuleTable>>& regions() const { return regions_; }
    bool is_constant() const { return regions_.empty(); }

    const RuleTable& rule_at(const Cell& g) const;

    // tau(x)(g) with input values supplied by a callback Cell -> Symbol.
    template <class ValueFn>
    Symbol apply_at(const Cell& g, ValueFn&& value) const {
        const RuleTable& t = rule_at(g);
        std::uint64_t code = 0;
        for (const Cell& m : memory_) code = code * std::uint64_t(alphabet_) + value(g + m);
        return t.apply_code(code);
    }

  private:
    int dim_;
    int alphabet_;
    FiniteSet memory_;
    RuleTable default_;
    std::vector<std::pair<LatticeSet, RuleTable>> regions_;
};

// tau(x)|_F over callback-supplied input values.
template <class ValueFn>
std::vector<Symbol> evaluate_values(const RuleAssignment& nuca, const FiniteSet& F,
                                    ValueFn&& value) {
    std::vector<Symbol> out;
    out.reserve(F.size());
    for (const Cell& g : F) out.push_back(nuca.apply_at(g, value));
    return out;
}

// tau(x)|_F; reads x only on FM.
Pattern evaluate_window(const RuleAssignment& nuca, const Configuration& x, const FiniteSet& F);

// The cylinder U = {p} x A^{G \ S}: values pinned on S (background symbol plus
// finite overrides), free elsewhere.
struct Cylinder {
    LatticeSet pinned;
    Symbol background = 0;
    Pattern overrides;

    static Cylinder full_shift(int dim);

    bool pins(const Cell& c) const { return pinned.contains(c); }
    Symbol value_at(const Cell& c) const {
        if (auto v = overrides.try_at(c)) return *v;
        return background;
    }
};

// The exact window image {tau(x)|_F : x in A^G} (x restricted to agree with
// the cylinder when one is given), by enumeration of inputs on FM.
PatternSet image_window(const RuleAssignment& nuca, const FiniteSet& F,
                        const std::optional<Cylinder>& u, const Budget& budget);

// A pre-injectivity violation: two completions that agree off E, lie in U,
// differ on E, and share their image. Verification data travels with it.
struct PreinjWitness {
    FiniteSet support;        // E, disjoint from S
    Pattern q1, q2;           // on E, q1 != q2
    Pattern context;          // on (E - M + M) \ E \ S, shared by both completions
    Symbol filler = 0;        // value everywhere else off S
    FiniteSet verify_window;  // E - M: every output outside it is equal automatically
};

struct WitnessSearchResult {
    std::optional<PreinjWitness> witness;
    bool complete = true;   // exhaustive up to the bounds
    std::string exhausted;  // searched sub-range when complete == false
    std::uint64_t candidates = 0;
};

// Deterministic exhaustive search: supports E of size <= support_bound inside
// [-R,R]^d \ S in increasing size then lexicographic order, then pattern
// pairs, then contexts. A returned witness is unconditionally sound; absence
// is only "none up to bound".
WitnessSearchResult preinjectivity_witness(const RuleAssignment& nuca, const Cylinder& u,
                                           int support_bound, std::int64_t search_radius,
                                           const Budget& budget, Symbol filler = 0);

// Replays a witness: both completions evaluate equal on the verification
// window and the completions differ.
bool verify_witness(const RuleAssignment& nuca, const Cylinder& u, const PreinjWitness& w);

// Searches for q in A^E such that {q} x A^{W\E} lies inside the window image
// on W: finite-scale evidence that the image contains an open set.
std::optional<Pattern> image_open_probe(const RuleAssignment& nuca, const FiniteSet& E,
                                        const FiniteSet& W, const Budget& budget);

}  // namespace nucalab
