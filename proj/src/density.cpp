#include "nucalab/density.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nucalab/errors.hpp"
#include "nucalab/intmath.hpp"

namespace nucalab {

std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

Rat parse_rational(std::string_view text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rat(std::stoll(std::string(text)));
        std::int64_t num = std::stoll(std::string(text.substr(0, slash)));
        std::int64_t den = std::stoll(std::string(text.substr(slash + 1)));
        return Rat(num, den);
    } catch (const std::exception&) {
        throw ParseError("malformed rational '" + std::string(text) + "'", 1, 1);
    }
}

Rat PeriodicClass::density() const {
    std::int64_t cnt = std::int64_t(std::count(residues.begin(), residues.end(), true));
    std::int64_t total = std::int64_t(residues.size());
    return Rat(cnt, total);
}

bool PeriodicClass::residue_contains(const Cell& c) const {
    std::int64_t L = axis_period;
    std::int64_t rx = floor_mod(c.x, L);
    if (dim == 1) return residues[std::size_t(rx)];
    std::int64_t ry = floor_mod(c.y, L);
    return residues[std::size_t(ry * L + rx)];
}

namespace {

Interval clamp01(Interval v) {
    v.lo = std::max(v.lo, Rat(0));
    v.hi = std::min(v.hi, Rat(1));
    if (v.hi < v.lo) v.hi = v.lo;  // defensive; combination rules keep lo <= hi
    return v;
}

DensityBounds chain_clamp(DensityBounds b) {
    b.lower_banach = clamp01(b.lower_banach);
    b.lower_nat = clamp01(b.lower_nat);
    b.upper_nat = clamp01(b.upper_nat);
    b.upper_banach = clamp01(b.upper_banach);
    // upper bounds flow down the chain, lower bounds flow up
    b.upper_nat.hi = std::min(b.upper_nat.hi, b.upper_banach.hi);
    b.lower_nat.hi = std::min(b.lower_nat.hi, b.upper_nat.hi);
    b.lower_banach.hi = std::min(b.lower_banach.hi, b.lower_nat.hi);
    b.lower_nat.lo = std::max(b.lower_nat.lo, b.lower_banach.lo);
    b.upper_nat.lo = std::max(b.upper_nat.lo, b.lower_nat.lo);
    b.upper_banach.lo = std::max(b.upper_banach.lo, b.upper_nat.lo);
    return b;
}

DensityBounds exact_bounds(const Rat& rho) {
    Interval v{rho, rho};
    return DensityBounds{v, v, v, v};
}

DensityBounds complement_bounds(const DensityBounds& a) {
    auto dual = [](const Interval& v) { return Interval{Rat(1) - v.hi, Rat(1) - v.lo}; };
    DensityBounds r;
    r.lower_banach = dual(a.upper_banach);
    r.upper_banach = dual(a.lower_banach);
    r.lower_nat = dual(a.upper_nat);
    r.upper_nat = dual(a.lower_nat);
    return chain_clamp(r);
}

DensityBounds union_bounds(const DensityBounds& a, const DensityBounds& b) {
    DensityBounds r;
    r.upper_nat = {std::max(a.upper_nat.lo, b.upper_nat.lo),
                   a.upper_nat.hi + b.upper_nat.hi};
    r.upper_banach = {std::max(a.upper_banach.lo, b.upper_banach.lo),
                      a.upper_banach.hi + b.upper_banach.hi};
    r.lower_nat = {std::max(a.lower_nat.lo, b.lower_nat.lo),
                   std::min(a.lower_nat.hi + b.upper_nat.hi, b.lower_nat.hi + a.upper_nat.hi)};
    r.lower_banach = {std::max(a.lower_banach.lo, b.lower_banach.lo), Rat(1)};
    return chain_clamp(r);
}

DensityBounds intersection_bounds(const DensityBounds& a, const DensityBounds& b) {
    return complement_bounds(union_bounds(complement_bounds(a), complement_bounds(b)));
}

DensityBounds halfspace_bounds() {
    DensityBounds r;
    r.lower_banach = {Rat(0), Rat(0)};
    r.upper_banach = {Rat(1), Rat(1)};
    // Centered boxes are symmetric about the origin, so the window fraction of
    // any half-space tends to 1/2 for every box schedule.
    r.lower_nat = {Rat(1, 2), Rat(1, 2)};
    r.upper_nat = {Rat(1, 2), Rat(1, 2)};
    return r;
}

struct Classifier {
    std::int64_t max_period_cells;

    DensityClass run(const LatticeSet& s) {
        return std::visit(
            [&](const auto& n) -> DensityClass {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, LatticeSet::FiniteAtom>) {
                    return null_class(s.dim());
                } else if constexpr (std::is_same_v<T, LatticeSet::CosetAtom>) {
                    if (n.rank < s.dim() || (n.rank == 1 && n.mult == 0))
                        return null_class(s.dim());
                    std::int64_t L = n.lattice->index();
                    return periodic_from(s, s.dim(), L);
                } else if constexpr (std::is_same_v<T, LatticeSet::HalfspaceAtom>) {
                    return halfspace_bounds();
                } else if constexpr (std::is_same_v<T, LatticeSet::UnionNode>) {
                    return combine(s, n.parts, Op::Union);
                } else if constexpr (std::is_same_v<T, LatticeSet::InterNode>) {
                    return combine(s, n.parts, Op::Inter);
                } else if constexpr (std::is_same_v<T, LatticeSet::ComplNode>) {
                    DensityClass c = run(n.part[0]);
                    if (auto* p = std::get_if<PeriodicClass>(&c)) {
                        PeriodicClass r = *p;
                        r.residues.flip();
                        return r;
                    }
                    return complement_bounds(std::get<DensityBounds>(c));
                } else {
                    // diff(a,b) = a inter compl(b)
                    std::vector<LatticeSet> parts = {
                        std::get<LatticeSet::DiffNode>(s.node()).parts[0],
                        LatticeSet::complement(std::get<LatticeSet::DiffNode>(s.node()).parts[1])};
                    return combine(s, parts, Op::Inter);
                }
            },
            s.node());
    }

  private:
    enum class Op { Union, Inter };

    static PeriodicClass null_class(int dim) {
        return PeriodicClass{dim, 1, std::vector<bool>{false}};
    }

    // Build the residue table of a set known to be L-periodic modulo null.
    PeriodicClass periodic_from(const LatticeSet& s, int dim, std::int64_t L) {
        PeriodicClass r;
        r.dim = dim;
        r.axis_period = L;
        std::int64_t total = dim == 1 ? L : L * L;
        r.residues.resize(std::size_t(total));
        std::size_t i = 0;
        if (dim == 1) {
            for (std::int64_t x = 0; x < L; ++x) r.residues[i++] = s.contains({x, 0});
        } else {
            for (std::int64_t y = 0; y < L; ++y)
                for (std::int64_t x = 0; x < L; ++x) r.residues[i++] = s.contains({x, y});
        }
        return r;
    }

    DensityClass combine(const LatticeSet& s, const std::vector<LatticeSet>& parts, Op op) {
        std::vector<DensityClass> kids;
        kids.reserve(parts.size());
        bool all_periodic = true;
        for (const auto& p : parts) {
            kids.push_back(run(p));
            all_periodic = all_periodic && std::holds_alternative<PeriodicClass>(kids.back());
        }
        if (all_periodic) {
            std::int64_t L = 1;
            bool fits = true;
            for (const auto& k : kids) {
                std::int64_t lk = std::get<PeriodicClass>(k).axis_period;
                L = std::lcm(L, lk);
                std::int64_t cells = s.dim() == 1 ? L : L * L;
                if (L > max_period_cells || cells > max_period_cells) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                PeriodicClass r;
                r.dim = s.dim();
                r.axis_period = L;
                std::int64_t total = s.dim() == 1 ? L : L * L;
                r.residues.resize(std::size_t(total));
                std::size_t i = 0;
                auto eval = [&](const Cell& c) {
                    bool acc = (op == Op::Inter);
                    for (const auto& k : kids) {
                        bool v = std::get<PeriodicClass>(k).residue_contains(c);
                        acc = (op == Op::Union) ? (acc || v) : (acc && v);
                    }
                    return acc;
                };
                if (s.dim() == 1) {
                    for (std::int64_t x = 0; x < L; ++x) r.residues[i++] = eval({x, 0});
                } else {
                    for (std::int64_t y = 0; y < L; ++y)
                        for (std::int64_t x = 0; x < L; ++x) r.residues[i++] = eval({x, y});
                }
                return r;
            }
        }
        DensityBounds acc = to_bounds(kids[0]);
        for (std::size_t i = 1; i < kids.size(); ++i) {
            DensityBounds k = to_bounds(kids[i]);
            acc = (op == Op::Union) ? union_bounds(acc, k) : intersection_bounds(acc, k);
        }
        return acc;
    }
};

}  // namespace

DensityBounds to_bounds(const DensityClass& c) {
    if (const auto* p = std::get_if<PeriodicClass>(&c)) return exact_bounds(p->density());
    return std::get<DensityBounds>(c);
}

DensityClass classify_density(const LatticeSet& s, std::int64_t max_period_cells) {
    return Classifier{max_period_cells}.run(s);
}

namespace {

std::vector<WindowRatio> window_ratios_of(const LatticeSet& S, const BoxFolner& folner,
                                          int n_max) {
    std::vector<WindowRatio> out;
    out.reserve(std::size_t(n_max));
    for (int n = 1; n <= n_max; ++n) {
        FiniteSet F = folner.box(n);
        std::int64_t count = S.count_in(F);
        std::int64_t total = std::int64_t(F.size());
        out.push_back({n, count, total, Rat(count, total)});
    }
    return out;
}

}  // namespace

DensityReport natural_density(const LatticeSet& S, const BoxFolner& folner, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    DensityReport r;
    r.window_ratios = window_ratios_of(S, folner, n_max);
    DensityBounds b = to_bounds(classify_density(S));
    r.lower_banach = b.lower_banach;
    r.upper_banach = b.upper_banach;
    r.banach_closed_form = b.lower_banach.exact() && b.upper_banach.exact();
    if (b.upper_nat.exact() && b.lower_nat.exact()) {
        r.upper_natural = {b.upper_nat.lo, true};
        r.lower_natural = {b.lower_nat.lo, true};
    } else {
        // tail statistics over the second half of the computed prefix
        std::size_t from = r.window_ratios.size() / 2;
        Rat hi = r.window_ratios[from].ratio, lo = r.window_ratios[from].ratio;
        for (std::size_t i = from; i < r.window_ratios.size(); ++i) {
            hi = std::max(hi, r.window_ratios[i].ratio);
            lo = std::min(lo, r.window_ratios[i].ratio);
        }
        r.upper_natural = {hi, false};
        r.lower_natural = {lo, false};
    }
    return r;
}

DensityReport banach_density(const LatticeSet& S) {
    DensityReport r;
    DensityBounds b = to_bounds(classify_density(S));
    r.lower_banach = b.lower_banach;
    r.upper_banach = b.upper_banach;
    r.banach_closed_form = b.lower_banach.exact() && b.upper_banach.exact();
    if (b.upper_nat.exact() && b.lower_nat.exact()) {
        r.upper_natural = {b.upper_nat.lo, true};
        r.lower_natural = {b.lower_nat.lo, true};
    }
    return r;
}

namespace {

std::string describe_window(const char* what, int n) {
    std::ostringstream os;
    os << what << " violated at window n=" << n;
    return os.str();
}

}  // namespace

LawsVerdict density_laws_check(const LatticeSet& S, const LatticeSet& T,
                               const BoxFolner& folner, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    LatticeSet complement_S = LatticeSet::complement(S);
    LatticeSet union_ST = LatticeSet::unite({S, T});

    for (int n = 1; n <= n_max; ++n) {
        FiniteSet F = folner.box(n);
        std::int64_t total = std::int64_t(F.size());
        std::int64_t cS = S.count_in(F);
        std::int64_t cT = T.count_in(F);
        std::int64_t cSc = complement_S.count_in(F);
        std::int64_t cU = union_ST.count_in(F);
        if (cS + cSc != total) return {false, describe_window("window complement identity", n)};
        if (cU > cS + cT) return {false, describe_window("window subadditivity", n)};
    }

    auto check_chain = [](const DensityBounds& b, const char* who) -> LawsVerdict {
        if (b.lower_banach.exact() && b.lower_nat.exact() &&
            b.lower_banach.lo > b.lower_nat.lo)
            return {false, std::string("chain lower Banach <= lower natural fails for ") + who};
        if (b.lower_nat.exact() && b.upper_nat.exact() && b.lower_nat.lo > b.upper_nat.lo)
            return {false, std::string("chain lower natural <= upper natural fails for ") + who};
        if (b.upper_nat.exact() && b.upper_banach.exact() && b.upper_nat.lo > b.upper_banach.lo)
            return {false, std::string("chain upper natural <= upper Banach fails for ") + who};
        if (b.lower_banach.lo < 0 || b.upper_banach.hi > 1)
            return {false, std::string("densities escape [0,1] for ") + who};
        return {true, {}};
    };

    DensityBounds bS = to_bounds(classify_density(S));
    DensityBounds bT = to_bounds(classify_density(T));
    DensityBounds bSc = to_bounds(classify_density(complement_S));
    DensityBounds bU = to_bounds(classify_density(union_ST));
    for (auto& [b, who] : {std::pair<const DensityBounds&, const char*>{bS, "S"},
                           {bT, "T"},
                           {bSc, "compl(S)"},
                           {bU, "union(S,T)"}}) {
        LawsVerdict v = check_chain(b, who);
        if (!v.pass) return v;
    }
    // complement identity on exact values
    if (bS.upper_nat.exact() && bSc.lower_nat.exact() &&
        bS.upper_nat.lo + bSc.lower_nat.lo != Rat(1))
        return {false, "exact complement identity (natural) fails"};
    if (bS.upper_banach.exact() && bSc.lower_banach.exact() &&
        bS.upper_banach.lo + bSc.lower_banach.lo != Rat(1))
        return {false, "exact complement identity (Banach) fails"};
    // subadditivity on exact upper densities
    if (bS.upper_nat.exact() && bT.upper_nat.exact() && bU.upper_nat.exact() &&
        bU.upper_nat.lo > bS.upper_nat.lo + bT.upper_nat.lo)
        return {false, "exact subadditivity (natural) fails"};
    if (bS.upper_banach.exact() && bT.upper_banach.exact() && bU.upper_banach.exact() &&
        bU.upper_banach.lo > bS.upper_banach.lo + bT.upper_banach.lo)
        return {false, "exact subadditivity (Banach) fails"};
    return {true, {}};
}

}  // namespace nucalab
