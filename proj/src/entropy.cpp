#include "nucalab/entropy.hpp"

#include <cmath>
#include <unordered_map>

namespace nucalab {

namespace {

double log_u128(u128 v) {
    // exact for the integer counts we produce; long double carries 64-bit mantissa
    return double(std::log((long double)(v)));
}

struct SymbolVecHash {
    std::size_t operator()(const std::vector<Symbol>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (Symbol s : v) {
            h ^= s;
            h *= 1099511628211ULL;
        }
        return std::size_t(h);
    }
};

}  // namespace

WindowCounter image_window_counter(const RuleAssignment& nuca, std::optional<Cylinder> u,
                                   Budget budget) {
    return [nuca, u, budget](const FiniteSet& F) -> u128 {
        return u128(image_window(nuca, F, u, budget).size());
    };
}

EntropyReport entropy_sequence(const WindowCounter& counter, int alphabet,
                               const BoxFolner& folner, int n_max) {
    EntropyReport report;
    report.alphabet = alphabet;
    for (int n = 1; n <= n_max; ++n) {
        FiniteSet F = folner.box(n);
        u128 count = 0;
        try {
            count = counter(F);
        } catch (const BudgetExceeded& b) {
            report.truncated = true;
            report.truncation_reason = b.what();
            break;
        }
        EntropyWindow w;
        w.n = n;
        w.window_size = F.size();
        w.count = count;
        w.value = count == 0 ? 0.0 : log_u128(count) / double(F.size());
        report.windows.push_back(w);
    }
    return report;
}

double base_alphabet_value(double natural_value, int alphabet) {
    return natural_value / std::log(double(alphabet));
}

CertBResult theoremB_window_certificate(const RuleAssignment& nuca, const Cylinder& u,
                                        const FiniteSet& F, Symbol filler,
                                        const Budget& budget) {
    const int q = nuca.alphabet();
    std::vector<Cell> free;
    for (const Cell& c : F)
        if (!u.pins(c)) free.push_back(c);
    FiniteSet free_set(nuca.dim(), std::move(free));

    std::uint64_t family = budget.require_enum_pow(std::uint64_t(q), free_set.size(),
                                                   "theoremB_window_certificate");

    const FiniteSet neg_m = negated(nuca.memory());
    // tau(z) and tau(z') agree off this set for all members of Z
    FiniteSet affected = minkowski(free_set, neg_m);

    std::vector<Symbol> zvals(free_set.size());
    auto value_of = [&](const std::vector<Symbol>& zv) {
        return [&free_set, &zv, &u, filler](const Cell& c) -> Symbol {
            if (std::size_t i = free_set.index_of(c); i != FiniteSet::npos) return zv[i];
            if (u.pins(c)) return u.value_at(c);
            return filler;
        };
    };

    std::unordered_map<std::vector<Symbol>, std::uint64_t, SymbolVecHash> images;
    images.reserve(family);
    CertBResult result;
    result.family_size = family;
    result.free_cells = free_set;
    for (std::uint64_t code = 0; code < family; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = zvals.size(); i-- > 0;) {
            zvals[i] = Symbol(c % std::uint64_t(q));
            c /= std::uint64_t(q);
        }
        std::vector<Symbol> out = evaluate_values(nuca, affected, value_of(zvals));
        auto [it, inserted] = images.emplace(std::move(out), code);
        if (!inserted && !result.witness) {
            // first collision in enumeration order becomes the witness
            std::uint64_t code1 = it->second;
            std::vector<Symbol> z1(free_set.size()), z2 = zvals;
            std::uint64_t cc = code1;
            for (std::size_t i = z1.size(); i-- > 0;) {
                z1[i] = Symbol(cc % std::uint64_t(q));
                cc /= std::uint64_t(q);
            }
            std::vector<Cell> diff;
            for (std::size_t i = 0; i < free_set.size(); ++i)
                if (z1[i] != z2[i]) diff.push_back(free_set.at(i));
            FiniteSet E(nuca.dim(), std::move(diff));
            std::vector<Symbol> q1v, q2v;
            for (const Cell& cdiff : E) {
                std::size_t i = free_set.index_of(cdiff);
                q1v.push_back(z1[i]);
                q2v.push_back(z2[i]);
            }
            FiniteSet verify = minkowski(E, neg_m);
            FiniteSet reads = minkowski(verify, nuca.memory());
            std::vector<Cell> ctx_cells_v;
            for (const Cell& cread : set_difference(reads, E))
                if (!u.pins(cread)) ctx_cells_v.push_back(cread);
            FiniteSet ctx_cells(nuca.dim(), std::move(ctx_cells_v));
            std::vector<Symbol> ctx;
            auto z1_value = value_of(z1);
            for (const Cell& cc2 : ctx_cells) ctx.push_back(z1_value(cc2));
            result.witness = PreinjWitness{E, Pattern(E, q1v), Pattern(E, q2v),
                                           Pattern(ctx_cells, ctx), filler, verify};
        }
        if ((code & 0xfff) == 0) budget.check_time("theoremB_window_certificate");
    }
    result.image_size = images.size();
    result.pass = (result.image_size == result.family_size);
    return result;
}

BoundCompareReport theoremB_bound_compare(const RuleAssignment& nuca, const Cylinder& u,
                                          const BoxFolner& folner, int n_max, Symbol filler,
                                          const Budget& budget) {
    BoundCompareReport report;
    report.alphabet = nuca.alphabet();
    const double log_alpha = std::log(double(nuca.alphabet()));
    for (int n = 1; n <= n_max; ++n) {
        FiniteSet F = folner.box(n);
        BoundCompareRow row;
        row.n = n;
        row.window_size = F.size();
        row.pinned_in_window = u.pinned.count_in(F);
        try {
            PatternSet gamma = image_window(nuca, F, u, budget);
            row.image_count = u128(gamma.size());
            row.entropy_value =
                gamma.size() == 0 ? 0.0 : std::log(double(gamma.size())) / double(F.size());
            row.cert_pass = theoremB_window_certificate(nuca, u, F, filler, budget).pass;
        } catch (const BudgetExceeded& b) {
            report.truncated = true;
            report.truncation_reason = b.what();
            break;
        }
        row.bound_value =
            (1.0 - double(row.pinned_in_window) / double(F.size())) * log_alpha;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace nucalab
