#include "nucalab/sft.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace nucalab {

Sft::Sft(int dim, int radius, int alphabet, std::vector<std::uint64_t> allowed_codes)
    : dim_(dim), radius_(radius), alphabet_(alphabet), allowed_(std::move(allowed_codes)) {
    if (radius < 0) throw std::invalid_argument("window radius must be >= 0");
    if (alphabet < 1) throw std::invalid_argument("alphabet must be nonempty");
    window_ = FiniteSet::centered_box(dim, radius);
    auto total = checked_pow(std::uint64_t(alphabet), window_.size());
    if (!total) throw std::invalid_argument("window too large");
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
    for (std::uint64_t c : allowed_)
        if (c >= *total) throw std::invalid_argument("allowed code out of range");
}

Sft Sft::from_allowed(int dim, int radius, int alphabet, const std::vector<Pattern>& allowed) {
    std::vector<std::uint64_t> codes;
    codes.reserve(allowed.size());
    FiniteSet window = FiniteSet::centered_box(dim, radius);
    for (const Pattern& p : allowed) {
        if (p.support() != window) throw std::invalid_argument("pattern not on the window");
        codes.push_back(p.encode(alphabet));
    }
    return Sft(dim, radius, alphabet, std::move(codes));
}

Sft Sft::from_forbidden(int dim, int radius, int alphabet,
                        const std::vector<Pattern>& forbidden) {
    FiniteSet window = FiniteSet::centered_box(dim, radius);
    std::uint64_t total = *checked_pow(std::uint64_t(alphabet), window.size());
    std::vector<bool> bad(total, false);
    for (const Pattern& p : forbidden) {
        if (p.support() != window) throw std::invalid_argument("pattern not on the window");
        bad[p.encode(alphabet)] = true;
    }
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < total; ++c)
        if (!bad[c]) codes.push_back(c);
    return Sft(dim, radius, alphabet, std::move(codes));
}

Sft Sft::full_shift(int dim, int radius, int alphabet) {
    return from_forbidden(dim, radius, alphabet, {});
}

bool Sft::allows_code(std::uint64_t code) const {
    return std::binary_search(allowed_.begin(), allowed_.end(), code);
}

SftAutomaton build_automaton(const Sft& sft) {
    if (sft.dim() != 1) throw std::invalid_argument("transfer automaton requires d = 1");
    const int q = sft.alphabet();
    const int width = 2 * sft.radius() + 1;
    std::uint64_t suffix_mod = *checked_pow(std::uint64_t(q), std::size_t(width - 1));

    std::vector<std::uint64_t> verts = sft.allowed();
    // trim: repeatedly drop vertices without successors or predecessors
    while (true) {
        std::unordered_set<std::uint64_t> present(verts.begin(), verts.end());
        std::unordered_set<std::uint64_t> has_out, has_in;
        for (std::uint64_t v : verts) {
            std::uint64_t suffix = v % suffix_mod;
            for (int a = 0; a < q; ++a) {
                std::uint64_t w = suffix * std::uint64_t(q) + std::uint64_t(a);
                if (present.count(w)) {
                    has_out.insert(v);
                    has_in.insert(w);
                }
            }
        }
        std::vector<std::uint64_t> kept;
        for (std::uint64_t v : verts)
            if (has_out.count(v) && has_in.count(v)) kept.push_back(v);
        if (kept.size() == verts.size()) break;
        verts = std::move(kept);
    }

    SftAutomaton g;
    g.alphabet = q;
    g.width = width;
    g.vertices = verts;
    g.out_edges.resize(verts.size());
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = std::uint32_t(i);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        std::uint64_t suffix = verts[i] % suffix_mod;
        for (int a = 0; a < q; ++a) {
            auto it = index.find(suffix * std::uint64_t(q) + std::uint64_t(a));
            if (it != index.end()) g.out_edges[i].push_back(it->second);
        }
    }
    return g;
}

namespace {

// All globally admissible words of this length (d=1), as codes.
std::vector<std::uint64_t> enumerate_words(const SftAutomaton& g, std::int64_t length,
                                           const Budget& budget) {
    std::vector<std::uint64_t> out;
    if (g.vertices.empty()) return out;
    const std::uint64_t q = std::uint64_t(g.alphabet);
    if (length < g.width) {
        std::uint64_t keep = *checked_pow(q, std::size_t(length));
        std::unordered_set<std::uint64_t> set;
        for (std::uint64_t v : g.vertices) {
            // all length-L subwords of the width-W vertex word
            std::uint64_t w = v;
            for (int shift = 0; shift <= g.width - int(length); ++shift) {
                std::uint64_t div = *checked_pow(q, std::size_t(shift));
                set.insert((w / div) % keep);
            }
        }
        out.assign(set.begin(), set.end());
        std::sort(out.begin(), out.end());
        return out;
    }
    // DFS over paths of length - width edges
    std::uint64_t steps = 0;
    struct Frame {
        std::uint32_t v;
        std::uint64_t code;
        std::int64_t remaining;
    };
    std::vector<Frame> stack;
    for (std::size_t i = g.vertices.size(); i-- > 0;)
        stack.push_back({std::uint32_t(i), g.vertices[i], length - g.width});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (++steps > budget.max_enum)
            throw BudgetExceeded("language enumeration: step budget exceeded");
        if ((steps & 0xffff) == 0) budget.check_time("language enumeration");
        if (f.remaining == 0) {
            out.push_back(f.code);
            budget.require_patterns(out.size(), "language enumeration");
            continue;
        }
        for (std::size_t j = g.out_edges[f.v].size(); j-- > 0;) {
            std::uint32_t w = g.out_edges[f.v][j];
            stack.push_back(
                {w, f.code * q + g.vertices[w] % q, f.remaining - 1});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct WindowChecker {
    // per assignment position: windows (as index lists into the cell order)
    // that become fully assigned there
    std::vector<std::vector<std::vector<std::uint32_t>>> ready;
    const Sft* sft;

    // cells: the cells being assigned, canonical order; positions: where the
    // centered window may sit (each must lie fully inside `cells`).
    WindowChecker(const Sft& s, const FiniteSet& cells, const std::vector<Cell>& centers)
        : sft(&s) {
        ready.resize(cells.size());
        for (const Cell& c : centers) {
            std::vector<std::uint32_t> idx;
            std::size_t last = 0;
            bool ok = true;
            for (const Cell& d : s.window()) {
                std::size_t i = cells.index_of(c + d);
                if (i == FiniteSet::npos) {
                    ok = false;
                    break;
                }
                idx.push_back(std::uint32_t(i));
                last = std::max(last, i);
            }
            if (ok) ready[last].push_back(std::move(idx));
        }
    }

    bool check_at(std::size_t pos, const std::vector<Symbol>& values) const {
        for (const auto& idx : ready[pos]) {
            std::uint64_t code = 0;
            for (std::uint32_t i : idx)
                code = code * std::uint64_t(sft->alphabet()) + values[i];
            if (!sft->allows_code(code)) return false;
        }
        return true;
    }
};

// DFS all assignments on `cells` passing the checker; calls sink(values).
template <class Sink>
void admissible_fillings(const Sft& sft, const FiniteSet& cells, const WindowChecker& checker,
                         const Budget& budget, Sink&& sink,
                         const std::vector<std::optional<Symbol>>& pinned = {}) {
    const int q = sft.alphabet();
    std::vector<Symbol> values(cells.size(), 0);
    std::uint64_t steps = 0;
    // iterative DFS with explicit symbol counters
    std::vector<int> choice(cells.size() + 1, 0);
    std::size_t pos = 0;
    while (true) {
        if (pos == cells.size()) {
            sink(values);
            budget.check_time("admissible_fillings");
            if (pos == 0) return;  // empty support: single empty assignment
            --pos;
            ++choice[pos];
            continue;
        }
        bool is_pinned = pos < pinned.size() && pinned[pos].has_value();
        int limit = is_pinned ? 1 : q;
        if (choice[pos] >= limit) {
            if (pos == 0) return;
            choice[pos] = 0;
            --pos;
            ++choice[pos];
            continue;
        }
        values[pos] = is_pinned ? *pinned[pos] : Symbol(choice[pos]);
        if (++steps > budget.max_enum)
            throw BudgetExceeded("admissible_fillings: step budget exceeded");
        if ((steps & 0xffff) == 0) budget.check_time("admissible_fillings");
        if (checker.check_at(pos, values)) {
            ++pos;
            choice[pos] = 0;
        } else {
            ++choice[pos];
        }
    }
}

}  // namespace

LanguageResult language(const Sft& sft, const FiniteSet& F, const Budget& budget,
                        int d2_padding) {
    LanguageResult result;
    result.patterns.support = F;
    result.patterns.alphabet = sft.alphabet();
    if (F.empty()) {
        result.patterns.codes = {0};  // the empty pattern
        return result;
    }
    if (sft.dim() == 1) {
        std::int64_t lo = F.cells().front().x, hi = F.cells().back().x;
        std::int64_t len = hi - lo + 1;
        SftAutomaton g = build_automaton(sft);
        std::vector<std::uint64_t> hull_words = enumerate_words(g, len, budget);
        if (std::size_t(len) == F.size()) {
            result.patterns.codes = std::move(hull_words);
            return result;
        }
        // restrict hull words to F
        FiniteSet hull = FiniteSet::box1(lo, hi);
        std::vector<std::size_t> keep;
        for (const Cell& c : F) keep.push_back(hull.index_of(c));
        std::unordered_set<std::uint64_t> set;
        std::vector<Symbol> buf(hull.size());
        for (std::uint64_t w : hull_words) {
            std::uint64_t c = w;
            for (std::size_t i = buf.size(); i-- > 0;) {
                buf[i] = Symbol(c % std::uint64_t(sft.alphabet()));
                c /= std::uint64_t(sft.alphabet());
            }
            std::uint64_t code = 0;
            for (std::size_t i : keep) code = code * std::uint64_t(sft.alphabet()) + buf[i];
            set.insert(code);
        }
        result.patterns.codes.assign(set.begin(), set.end());
        std::sort(result.patterns.codes.begin(), result.patterns.codes.end());
        return result;
    }

    // d=2: padded local admissibility (upper approximation of the language)
    result.exact = false;
    result.padding = d2_padding;
    auto cells = F.cells();
    std::int64_t pad = std::int64_t(d2_padding) * sft.radius();
    Cell lo{cells[0].x, cells[0].y}, hi{cells[0].x, cells[0].y};
    for (const Cell& c : cells) {
        lo.x = std::min(lo.x, c.x), lo.y = std::min(lo.y, c.y);
        hi.x = std::max(hi.x, c.x), hi.y = std::max(hi.y, c.y);
    }
    FiniteSet padded = FiniteSet::box2({lo.x - pad, lo.y - pad}, {hi.x + pad, hi.y + pad});
    std::vector<Cell> centers;
    for (const Cell& c : padded) centers.push_back(c);
    WindowChecker checker(sft, padded, centers);
    std::vector<std::size_t> keep;
    for (const Cell& c : F) keep.push_back(padded.index_of(c));
    std::unordered_set<std::uint64_t> set;
    admissible_fillings(sft, padded, checker, budget, [&](const std::vector<Symbol>& values) {
        std::uint64_t code = 0;
        for (std::size_t i : keep) code = code * std::uint64_t(sft.alphabet()) + values[i];
        set.insert(code);
        budget.require_patterns(set.size(), "language (padded)");
    });
    result.patterns.codes.assign(set.begin(), set.end());
    std::sort(result.patterns.codes.begin(), result.patterns.codes.end());
    return result;
}

u128 count_language_interval(const Sft& sft, std::int64_t length) {
    if (sft.dim() != 1) throw std::invalid_argument("interval counting requires d = 1");
    if (length <= 0) return 1;
    SftAutomaton g = build_automaton(sft);
    if (g.vertices.empty()) return 0;
    const std::uint64_t q = std::uint64_t(g.alphabet);
    if (length < g.width) {
        std::uint64_t keep = *checked_pow(q, std::size_t(length));
        std::unordered_set<std::uint64_t> set;
        for (std::uint64_t v : g.vertices)
            for (int shift = 0; shift <= g.width - int(length); ++shift)
                set.insert((v / *checked_pow(q, std::size_t(shift))) % keep);
        return u128(set.size());
    }
    std::vector<u128> cur(g.vertices.size(), 1);
    for (std::int64_t step = 0; step < length - g.width; ++step) {
        std::vector<u128> next(g.vertices.size(), 0);
        for (std::size_t i = 0; i < g.vertices.size(); ++i)
            for (std::uint32_t w : g.out_edges[i]) next[w] += cur[i];
        cur = std::move(next);
    }
    u128 total = 0;
    for (u128 c : cur) total += c;
    return total;
}

std::vector<Configuration> periodic_points(const Sft& sft, const PeriodLattice& H,
                                           const Budget& budget) {
    if (H.dim() != sft.dim()) throw std::invalid_argument("dimension mismatch");
    FiniteSet domain = H.fundamental_cells();
    budget.require_enum_pow(std::uint64_t(sft.alphabet()), domain.size(), "periodic_points");

    // windows centered at each fundamental cell, with cells reduced mod H
    std::vector<std::vector<std::vector<std::uint32_t>>> ready(domain.size());
    for (const Cell& c : domain) {
        std::vector<std::uint32_t> idx;
        std::size_t last = 0;
        for (const Cell& d : sft.window()) {
            std::size_t i = domain.index_of(H.reduce(c + d));
            idx.push_back(std::uint32_t(i));
            last = std::max(last, i);
        }
        ready[last].push_back(std::move(idx));
    }

    std::vector<Configuration> out;
    const int q = sft.alphabet();
    std::vector<Symbol> values(domain.size(), 0);
    std::vector<int> choice(domain.size() + 1, 0);
    std::size_t pos = 0;
    std::uint64_t steps = 0;
    auto check = [&](std::size_t p) {
        for (const auto& idx : ready[p]) {
            std::uint64_t code = 0;
            for (std::uint32_t i : idx) code = code * std::uint64_t(q) + values[i];
            if (!sft.allows_code(code)) return false;
        }
        return true;
    };
    while (true) {
        if (pos == domain.size()) {
            out.push_back(Configuration::periodic(H, Pattern(domain, values)));
            budget.require_patterns(out.size(), "periodic_points");
            if (pos == 0) return out;
            --pos;
            ++choice[pos];
            continue;
        }
        if (choice[pos] >= q) {
            if (pos == 0) return out;
            choice[pos] = 0;
            --pos;
            ++choice[pos];
            continue;
        }
        values[pos] = Symbol(choice[pos]);
        if (++steps > budget.max_enum)
            throw BudgetExceeded("periodic_points: step budget exceeded");
        if ((steps & 0xffff) == 0) budget.check_time("periodic_points");
        if (check(pos)) {
            ++pos;
            choice[pos] = 0;
        } else {
            ++choice[pos];
        }
    }
}

IrreducibilityVerdict delta_irreducibility_check(const Sft& sft, const FiniteSet& delta_prime,
                                                 std::int64_t radius, const Budget& budget) {
    IrreducibilityVerdict verdict;
    verdict.exact = (sft.dim() == 1);
    // test boxes within the radius
    std::vector<FiniteSet> boxes;
    if (sft.dim() == 1) {
        for (std::int64_t a = -radius; a <= radius; ++a)
            for (std::int64_t b = a; b <= radius; ++b) boxes.push_back(FiniteSet::box1(a, b));
    } else {
        for (std::int64_t ax = -radius; ax <= radius; ++ax)
            for (std::int64_t bx = ax; bx <= radius; ++bx)
                for (std::int64_t ay = -radius; ay <= radius; ++ay)
                    for (std::int64_t by = ay; by <= radius; ++by)
                        boxes.push_back(FiniteSet::box2({ax, ay}, {bx, by}));
    }

    for (const FiniteSet& S : boxes) {
        FiniteSet s_delta = minkowski(S, delta_prime);
        for (const FiniteSet& T : boxes) {
            if (!set_intersection(s_delta, T).empty()) continue;
            budget.check_time("delta_irreducibility_check");
            FiniteSet hull_set = set_union(S, T);
            LanguageResult joint = language(sft, hull_set, budget);
            LanguageResult lang_s = language(sft, S, budget);
            LanguageResult lang_t = language(sft, T, budget);
            // achieved (x,y) pairs from joint completions
            std::unordered_set<std::uint64_t> achieved;
            std::vector<std::size_t> spos, tpos;
            for (const Cell& c : S) spos.push_back(hull_set.index_of(c));
            for (const Cell& c : T) tpos.push_back(hull_set.index_of(c));
            const std::uint64_t q = std::uint64_t(sft.alphabet());
            std::uint64_t t_codes = *checked_pow(q, T.size());
            std::vector<Symbol> buf(hull_set.size());
            for (std::uint64_t w : joint.patterns.codes) {
                std::uint64_t c = w;
                for (std::size_t i = buf.size(); i-- > 0;) {
                    buf[i] = Symbol(c % q);
                    c /= q;
                }
                std::uint64_t sc = 0, tc = 0;
                for (std::size_t i : spos) sc = sc * q + buf[i];
                for (std::size_t i : tpos) tc = tc * q + buf[i];
                achieved.insert(sc * t_codes + tc);
            }
            if (achieved.size() == lang_s.patterns.size() * lang_t.patterns.size()) continue;
            // find the first missing pair for the report
            for (std::uint64_t sc : lang_s.patterns.codes) {
                for (std::uint64_t tc : lang_t.patterns.codes) {
                    if (!achieved.count(sc * t_codes + tc)) {
                        verdict.pass = false;
                        verdict.failing =
                            "S=" + to_string(S.cells().front(), sft.dim()) + ".." +
                            to_string(S.cells().back(), sft.dim()) + " x=" +
                            Pattern::decode(S, sft.alphabet(), sc).to_text(sft.dim()) +
                            "  T=" + to_string(T.cells().front(), sft.dim()) + ".." +
                            to_string(T.cells().back(), sft.dim()) + " y=" +
                            Pattern::decode(T, sft.alphabet(), tc).to_text(sft.dim());
                        return verdict;
                    }
                }
            }
        }
    }
    return verdict;
}

namespace {

// Windows of the cyclic word u . c . v (suffix, free seam cells, prefix);
// returns true when some filling c makes all of them allowed.
bool seam_completable(const Sft& sft, std::uint64_t suffix_code, std::uint64_t prefix_code,
                      int two_r) {
    const int q = sft.alphabet();
    const int width = 2 * sft.radius() + 1;
    const int free_cells = 2 * two_r - 1;  // 4r - 1
    const int total = two_r + free_cells + two_r;
    std::vector<Symbol> word(std::size_t(total));
    for (int i = two_r; i-- > 0;) {
        word[std::size_t(i)] = Symbol(suffix_code % std::uint64_t(q));
        suffix_code /= std::uint64_t(q);
    }
    for (int i = two_r; i-- > 0;) {
        word[std::size_t(total - two_r + i)] = Symbol(prefix_code % std::uint64_t(q));
        prefix_code /= std::uint64_t(q);
    }
    std::uint64_t n_free = *checked_pow(std::uint64_t(q), std::size_t(free_cells));
    for (std::uint64_t fc = 0; fc < n_free; ++fc) {
        std::uint64_t c = fc;
        for (int i = free_cells; i-- > 0;) {
            word[std::size_t(two_r + i)] = Symbol(c % std::uint64_t(q));
            c /= std::uint64_t(q);
        }
        bool ok = true;
        for (int s = 0; s + width <= total && ok; ++s) {
            std::uint64_t code = 0;
            for (int i = 0; i < width; ++i)
                code = code * std::uint64_t(q) + word[std::size_t(s + i)];
            if (!sft.allows_code(code)) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

PeriodicApproxResult periodic_approximation_check(const Sft& sft, int n0, int r, int n,
                                                  const Budget& budget) {
    if (r != sft.radius())
        throw PreconditionFailed("r parameter must match the subshift window radius");
    if (r < 1) throw PreconditionFailed("periodic approximation requires radius >= 1");
    if (2 * n0 <= 2 * r)
        throw PreconditionFailed("need total period 2 n0 > 2 r");
    // hypothesis: a configuration of total period 2 n0
    {
        std::vector<Configuration> pts =
            periodic_points(sft, PeriodLattice::scaled(sft.dim(), 2 * n0), budget);
        if (pts.empty())
            throw PreconditionFailed("subshift has no configuration of total period 2 n0");
    }

    PeriodicApproxResult result;
    result.k_n = (std::int64_t(n) * n0 - 2 * r) * (n0 + 1);
    if (result.k_n < 2 * r) throw PreconditionFailed("window parameter n too small");
    result.period = 2 * result.k_n + 4 * r;

    if (sft.dim() == 1) {
        const std::int64_t N = 2 * result.k_n + 1;
        SftAutomaton g = build_automaton(sft);
        if (g.vertices.empty()) {
            result.equal = true;  // empty language equals empty restriction set
            return result;
        }
        const std::uint64_t q = std::uint64_t(g.alphabet);
        const int two_r = 2 * r;
        std::uint64_t class_mod = *checked_pow(q, std::size_t(two_r));
        // path counts per (start vertex class, end vertex class)
        std::unordered_map<std::uint64_t, u128> class_counts;  // key: pc * class_mod + sc
        for (std::size_t start = 0; start < g.vertices.size(); ++start) {
            std::vector<u128> cur(g.vertices.size(), 0);
            cur[start] = 1;
            for (std::int64_t step = 0; step < N - g.width; ++step) {
                std::vector<u128> next(g.vertices.size(), 0);
                for (std::size_t i = 0; i < g.vertices.size(); ++i) {
                    if (cur[i] == 0) continue;
                    for (std::uint32_t w : g.out_edges[i]) next[w] += cur[i];
                }
                cur = std::move(next);
            }
            std::uint64_t prefix_class = g.vertices[start] / q;  // first 2r symbols
            for (std::size_t end = 0; end < g.vertices.size(); ++end) {
                if (cur[end] == 0) continue;
                std::uint64_t suffix_class = g.vertices[end] % class_mod;
                class_counts[prefix_class * class_mod + suffix_class] += cur[end];
            }
        }
        result.equal = true;
        for (const auto& [key, count] : class_counts) {
            std::uint64_t prefix_class = key / class_mod;
            std::uint64_t suffix_class = key % class_mod;
            result.language_count += count;
            if (seam_completable(sft, suffix_class, prefix_class, two_r))
                result.periodic_restriction_count += count;
            else
                result.equal = false;
            budget.check_time("periodic_approximation_check");
        }
        return result;
    }

    // d=2: exact periodic side against the padded language approximation.
    result.exact = false;
    FiniteSet F = FiniteSet::centered_box(sft.dim(), result.k_n);
    PeriodLattice H = PeriodLattice::scaled(sft.dim(), result.period);
    std::vector<Configuration> pts = periodic_points(sft, H, budget);
    std::unordered_set<std::uint64_t> restrictions;
    for (const Configuration& x : pts)
        restrictions.insert(restrict_to(x, F).encode(sft.alphabet()));
    LanguageResult lang = language(sft, F, budget);
    result.periodic_restriction_count = u128(restrictions.size());
    result.language_count = u128(lang.patterns.size());
    result.equal = restrictions.size() == lang.patterns.size();
    return result;
}

namespace {

// tau applied to a periodic configuration given by fundamental-domain values.
std::vector<Symbol> apply_on_domain(const RuleAssignment& ca, const PeriodLattice& H,
                                    const FiniteSet& domain,
                                    const std::vector<std::vector<std::uint32_t>>& reads,
                                    const std::vector<Symbol>& values) {
    std::vector<Symbol> out(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        std::uint64_t code = 0;
        for (std::uint32_t j : reads[i])
            code = code * std::uint64_t(ca.alphabet()) + values[j];
        out[i] = ca.default_table().apply_code(code);
    }
    (void)H;
    return out;
}

}  // namespace

TheoremCResult theoremC_certificate(const RuleAssignment& ca, const Sft& sft,
                                    const FiniteSet& pinned_cells, const Pattern& p, int n,
                                    int n0, int r, const Budget& budget) {
    if (!ca.is_constant())
        throw PreconditionFailed("certificate requires a constant rule assignment");
    if (ca.dim() != sft.dim() || ca.alphabet() != sft.alphabet())
        throw PreconditionFailed("rule assignment and subshift must share dimension/alphabet");
    if (r != sft.radius())
        throw PreconditionFailed("r parameter must match the subshift window radius");
    if (p.support() != pinned_cells)
        throw std::invalid_argument("pinned pattern must be supported on the pinned cells");

    // closure: does tau map the subshift into itself, on a test window?
    std::int64_t mem_reach = 0;
    for (const Cell& m : ca.memory())
        mem_reach = std::max({mem_reach, m.x < 0 ? -m.x : m.x, m.y < 0 ? -m.y : m.y});
    {
        FiniteSet W0 = FiniteSet::centered_box(sft.dim(), 2 * r + mem_reach);
        FiniteSet W0M = minkowski(W0, ca.memory());
        LanguageResult lang_in = language(sft, W0M, budget);
        LanguageResult lang_out = language(sft, W0, budget);
        std::unordered_set<std::uint64_t> ok(lang_out.patterns.codes.begin(),
                                             lang_out.patterns.codes.end());
        std::vector<Symbol> buf(W0M.size());
        for (std::uint64_t w : lang_in.patterns.codes) {
            std::uint64_t c = w;
            for (std::size_t i = buf.size(); i-- > 0;) {
                buf[i] = Symbol(c % std::uint64_t(sft.alphabet()));
                c /= std::uint64_t(sft.alphabet());
            }
            auto value = [&](const Cell& cc) { return buf[W0M.index_of(cc)]; };
            std::vector<Symbol> out = evaluate_values(ca, W0, value);
            std::uint64_t code = 0;
            for (Symbol s : out) code = code * std::uint64_t(sft.alphabet()) + s;
            if (!ok.count(code))
                throw PreconditionFailed(
                    "rule assignment does not preserve the subshift on the test window");
        }
    }

    TheoremCResult result;
    result.k_n = (std::int64_t(n) * n0 - 2 * r) * (n0 + 1);
    result.period = 2 * result.k_n + 4 * r;
    PeriodLattice H = PeriodLattice::scaled(sft.dim(), result.period);
    FiniteSet domain = H.fundamental_cells();

    // Q_n: H-periodic points of X matching p on the pinned cells
    std::vector<std::optional<Symbol>> pins(domain.size());
    for (std::size_t i = 0; i < pinned_cells.size(); ++i) {
        std::size_t j = domain.index_of(H.reduce(pinned_cells.at(i)));
        Symbol v = p.value_at_index(i);
        if (pins[j] && *pins[j] != v) {
            // contradictory pins: Q_n is empty
            result.q_count = 0;
            result.tau_q_count = 0;
            result.injective = true;
            result.x_count = sft.dim() == 1
                                 ? count_language_interval(sft, 2 * result.k_n + 1)
                                 : 0;
            return result;
        }
        pins[j] = v;
    }

    std::vector<std::vector<std::vector<std::uint32_t>>> ready(domain.size());
    for (const Cell& c : domain) {
        std::vector<std::uint32_t> idx;
        std::size_t last = 0;
        for (const Cell& d : sft.window()) {
            std::size_t i = domain.index_of(H.reduce(c + d));
            idx.push_back(std::uint32_t(i));
            last = std::max(last, i);
        }
        ready[last].push_back(std::move(idx));
    }
    // neighbor reads for tau on the quotient
    std::vector<std::vector<std::uint32_t>> reads(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i)
        for (const Cell& m : ca.memory())
            reads[i].push_back(std::uint32_t(domain.index_of(H.reduce(domain.at(i) + m))));

    std::unordered_map<std::uint64_t, std::uint64_t> image_first;  // image code -> input code
    const int q = sft.alphabet();
    std::vector<Symbol> values(domain.size(), 0);
    std::vector<int> choice(domain.size() + 1, 0);
    std::size_t pos = 0;
    std::uint64_t steps = 0;
    auto window_ok = [&](std::size_t pp) {
        for (const auto& idx : ready[pp]) {
            std::uint64_t code = 0;
            for (std::uint32_t i : idx) code = code * std::uint64_t(q) + values[i];
            if (!sft.allows_code(code)) return false;
        }
        return true;
    };
    result.injective = true;
    while (true) {
        if (pos == domain.size()) {
            ++result.q_count;
            std::vector<Symbol> image =
                apply_on_domain(ca, H, domain, reads, values);
            std::uint64_t icode = 0, vcode = 0;
            for (Symbol s : image) icode = icode * std::uint64_t(q) + s;
            for (Symbol s : values) vcode = vcode * std::uint64_t(q) + s;
            auto [it, inserted] = image_first.emplace(icode, vcode);
            if (!inserted && result.injective) {
                result.injective = false;
                result.collision = {Pattern::decode(domain, q, it->second),
                                    Pattern(domain, values)};
            }
            --pos;
            ++choice[pos];
            continue;
        }
        bool pinned = pins[pos].has_value();
        int limit = pinned ? 1 : q;
        if (choice[pos] >= limit) {
            if (pos == 0) break;
            choice[pos] = 0;
            --pos;
            ++choice[pos];
            continue;
        }
        values[pos] = pinned ? *pins[pos] : Symbol(choice[pos]);
        if (++steps > budget.max_enum)
            throw BudgetExceeded("theoremC_certificate: step budget exceeded");
        if ((steps & 0xffff) == 0) budget.check_time("theoremC_certificate");
        if (window_ok(pos)) {
            ++pos;
            choice[pos] = 0;
        } else {
            ++choice[pos];
        }
    }
    result.tau_q_count = u128(image_first.size());

    // |Gamma_{F_n D^2}| for Gamma = tau(X), and |X_{F_n}|
    FiniteSet F = FiniteSet::centered_box(sft.dim(), result.k_n);
    FiniteSet delta2 = minkowski(sft.window(), sft.window());
    FiniteSet F2 = minkowski(F, delta2);
    FiniteSet F2M = minkowski(F2, ca.memory());
    {
        LanguageResult lang_in = language(sft, F2M, budget);
        std::vector<std::vector<std::uint32_t>> rd(F2.size());
        for (std::size_t i = 0; i < F2.size(); ++i)
            for (const Cell& m : ca.memory())
                rd[i].push_back(std::uint32_t(F2M.index_of(F2.at(i) + m)));
        std::unordered_set<std::uint64_t> gamma;
        std::vector<Symbol> buf(F2M.size());
        for (std::uint64_t w : lang_in.patterns.codes) {
            std::uint64_t c = w;
            for (std::size_t i = buf.size(); i-- > 0;) {
                buf[i] = Symbol(c % std::uint64_t(q));
                c /= std::uint64_t(q);
            }
            std::uint64_t code = 0;
            for (std::size_t i = 0; i < F2.size(); ++i) {
                std::uint64_t in = 0;
                for (std::uint32_t j : rd[i]) in = in * std::uint64_t(q) + buf[j];
                code = code * std::uint64_t(q) + ca.default_table().apply_code(in);
            }
            gamma.insert(code);
        }
        result.gamma_count = u128(gamma.size());
    }
    result.x_count = sft.dim() == 1 ? count_language_interval(sft, 2 * result.k_n + 1)
                                    : u128(language(sft, F, budget).patterns.size());

    FiniteSet s_delta = pinned_cells.empty()
                            ? FiniteSet(sft.dim())
                            : minkowski(pinned_cells, sft.window());
    auto apow = checked_pow(std::uint64_t(q), s_delta.size());
    if (!apow) throw BudgetExceeded("theoremC_certificate: |A|^{|S D|} overflows");
    result.a_pow_sdelta = *apow;

    result.chain_ok = result.gamma_count >= result.tau_q_count &&
                      result.tau_q_count == result.q_count &&
                      result.q_count * u128(result.a_pow_sdelta) >= result.x_count;
    return result;
}

}  // namespace nucalab
