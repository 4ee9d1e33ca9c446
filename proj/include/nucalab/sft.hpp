#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nucalab/configuration.hpp"
#include "nucalab/engine.hpp"
#include "nucalab/errors.hpp"
#include "nucalab/intmath.hpp"
#include "nucalab/pattern.hpp"

namespace nucalab {

// Subshift of finite type with box window D = [-r,r]^d and an allowed-pattern
// set over D. A configuration belongs to the subshift iff every translate's
// D-restriction is allowed.
class Sft {
  public:
    Sft(int dim, int radius, int alphabet, std::vector<std::uint64_t> allowed_codes);
    static Sft from_allowed(int dim, int radius, int alphabet,
                            const std::vector<Pattern>& allowed);
    static Sft from_forbidden(int dim, int radius, int alphabet,
                              const std::vector<Pattern>& forbidden);
    static Sft full_shift(int dim, int radius, int alphabet);

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    int alphabet() const { return alphabet_; }
    const FiniteSet& window() const { return window_; }
    const std::vector<std::uint64_t>& allowed() const { return allowed_; }
    bool allows_code(std::uint64_t code) const;

  private:
    int dim_, radius_, alphabet_;
    FiniteSet window_;
    std::vector<std::uint64_t> allowed_;  // sorted
};

// d=1 transfer automaton: vertices are allowed window blocks, edges are
// one-step overlaps, trimmed to the bi-extendable core. Path words of the
// trimmed graph are exactly the globally admissible words.
struct SftAutomaton {
    int alphabet = 2;
    int width = 1;  // 2r+1
    std::vector<std::uint64_t> vertices;
    std::vector<std::vector<std::uint32_t>> out_edges;
};

SftAutomaton build_automaton(const Sft& sft);

struct LanguageResult {
    PatternSet patterns;
    bool exact = true;  // d=2 padded mode reports an upper approximation
    int padding = 0;    // d=2: number of radius-r layers padded around F
};

// d=1: exact globally admissible patterns. d=2: locally admissible patterns
// on F from admissible fillings of the padded hull, labeled with the padding.
LanguageResult language(const Sft& sft, const FiniteSet& F, const Budget& budget,
                        int d2_padding = 1);

// d=1 exact count of globally admissible words on an interval of this length.
u128 count_language_interval(const Sft& sft, std::int64_t length);

// Exact: assignments on a fundamental domain of H whose H-periodic extension
// has every window allowed (wraparound checks).
std::vector<Configuration> periodic_points(const Sft& sft, const PeriodLattice& H,
                                           const Budget& budget);

struct IrreducibilityVerdict {
    bool pass = true;
    bool exact = true;
    std::string failing;  // description of the first failing pair
};

// For all admissible pattern pairs on test boxes S, T within the radius with
// S Delta' disjoint from T: does a joint completion exist in the language of
// the covering window?
IrreducibilityVerdict delta_irreducibility_check(const Sft& sft, const FiniteSet& delta_prime,
                                                 std::int64_t radius, const Budget& budget);

struct PeriodicApproxResult {
    std::int64_t k_n = 0;
    std::int64_t period = 0;  // 2 k_n + 4 r
    bool equal = false;
    u128 periodic_restriction_count = 0;
    u128 language_count = 0;
    bool exact = true;
};

// Checks (Fix((2k_n+4r)Z^d) n X)|_{F_n} = X_{F_n} with k_n = (n*n0-2r)*(n0+1),
// after verifying the total-period-2n0 hypothesis. d=1 is exact via boundary
// classes of the transfer automaton.
PeriodicApproxResult periodic_approximation_check(const Sft& sft, int n0, int r, int n,
                                                  const Budget& budget);

struct TheoremCResult {
    bool injective = false;
    std::optional<std::pair<Pattern, Pattern>> collision;  // fundamental-domain patterns
    u128 gamma_count = 0;    // |Gamma_{F_n D^2}| for Gamma = tau(X)
    u128 q_count = 0;        // |Q_n|
    u128 tau_q_count = 0;    // |tau(Q_n)|
    u128 x_count = 0;        // |X_{F_n}|
    std::uint64_t a_pow_sdelta = 1;
    bool chain_ok = false;
    std::int64_t k_n = 0;
    std::int64_t period = 0;
};

// Counting certificate for a CA (constant rule assignment) on the subshift and
// a cylinder pinned on finitely many cells: builds Q_n (H_n-periodic points
// matching p), tests injectivity of tau on Q_n by direct evaluation, and
// verifies |Gamma_{F_n D^2}| >= |tau(Q_n)| = |Q_n| >= |X_{F_n}| / |A|^{|S D|}.
// Throws PreconditionFailed when tau does not preserve the subshift on the
// test window or the rule assignment is not constant.
TheoremCResult theoremC_certificate(const RuleAssignment& ca, const Sft& sft,
                                    const FiniteSet& pinned_cells, const Pattern& p, int n,
                                    int n0, int r, const Budget& budget);

}  // namespace nucalab
