#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nucalab/engine.hpp"
#include "nucalab/folner.hpp"
#include "nucalab/intmath.hpp"
#include "nucalab/rational.hpp"

namespace nucalab {

struct EntropyWindow {
    int n = 0;
    std::uint64_t window_size = 0;
    u128 count = 0;        // exact pattern count on F_n
    double value = 0.0;    // log(count) / |F_n|, natural log
};

struct EntropyReport {
    std::vector<EntropyWindow> windows;
    int alphabet = 2;
    bool truncated = false;
    std::string truncation_reason;
};

// Exact pattern count of some language on a window.
using WindowCounter = std::function<u128(const FiniteSet&)>;

// Counts via image_window (restricted to a cylinder when given).
WindowCounter image_window_counter(const RuleAssignment& nuca, std::optional<Cylinder> u,
                                   Budget budget);

// log(count(F_n)) / |F_n| along the Folner boxes; a budget failure at some n
// truncates the report to the computed prefix.
EntropyReport entropy_sequence(const WindowCounter& counter, int alphabet,
                               const BoxFolner& folner, int n_max);

double base_alphabet_value(double natural_value, int alphabet);

struct CertBResult {
    bool pass = false;
    std::uint64_t family_size = 0;  // |Z| = |A|^{|F \ S|}
    std::uint64_t image_size = 0;   // |tau(Z)|
    std::optional<PreinjWitness> witness;
    FiniteSet free_cells;  // F \ S
};

// Enumerates Z = {p} x A^{F\S} x {filler}^{rest} and counts |tau(Z)| exactly.
// PASS iff |tau(Z)| = |A|^{|F\S|}; otherwise the first collision pair in
// enumeration order becomes a replayable witness.
CertBResult theoremB_window_certificate(const RuleAssignment& nuca, const Cylinder& u,
                                        const FiniteSet& F, Symbol filler,
                                        const Budget& budget);

struct BoundCompareRow {
    int n = 0;
    std::uint64_t window_size = 0;
    std::int64_t pinned_in_window = 0;
    u128 image_count = 0;
    double entropy_value = 0.0;
    double bound_value = 0.0;  // (1 - |S n F_n| / |F_n|) log |A|
    bool cert_pass = false;
};

struct BoundCompareReport {
    std::vector<BoundCompareRow> rows;
    int alphabet = 2;
    bool truncated = false;
    std::string truncation_reason;
};

// Side-by-side per-window data: restricted-image entropy values against the
// pinned-density bound, with the window certificate verdict. Claims nothing
// asymptotic.
BoundCompareReport theoremB_bound_compare(const RuleAssignment& nuca, const Cylinder& u,
                                          const BoxFolner& folner, int n_max, Symbol filler,
                                          const Budget& budget);

}  // namespace nucalab
