#include "nucalab/engine.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <unordered_set>

#include "nucalab/intmath.hpp"

namespace nucalab {

RuleTable::RuleTable(int alphabet, std::size_t memory_size, std::vector<Symbol> out)
    : out_(std::move(out)) {
    auto expected = checked_pow(std::uint64_t(alphabet), memory_size);
    if (!expected || out_.size() != *expected)
        throw std::invalid_argument("rule table must be total over A^M");
    for (Symbol s : out_)
        if (s >= alphabet) throw std::invalid_argument("rule table output out of alphabet");
}

RuleTable RuleTable::projection(int alphabet, std::size_t memory_size, std::size_t index) {
    std::uint64_t n = *checked_pow(std::uint64_t(alphabet), memory_size);
    std::vector<Symbol> out(n);
    std::uint64_t div = *checked_pow(std::uint64_t(alphabet), memory_size - 1 - index);
    for (std::uint64_t code = 0; code < n; ++code)
        out[code] = Symbol((code / div) % std::uint64_t(alphabet));
    return RuleTable(alphabet, memory_size, std::move(out));
}

RuleTable RuleTable::constant_rule(int alphabet, std::size_t memory_size, Symbol s) {
    std::uint64_t n = *checked_pow(std::uint64_t(alphabet), memory_size);
    return RuleTable(alphabet, memory_size, std::vector<Symbol>(n, s));
}

RuleAssignment::RuleAssignment(int dim, int alphabet, FiniteSet memory, RuleTable default_table,
                               std::vector<std::pair<LatticeSet, RuleTable>> regions)
    : dim_(dim),
      alphabet_(alphabet),
      memory_(std::move(memory)),
      default_(std::move(default_table)),
      regions_(std::move(regions)) {
    if (alphabet_ < 1) throw std::invalid_argument("alphabet must be nonempty");
    if (memory_.dim() != dim_) throw std::invalid_argument("memory dimension mismatch");
    auto table_cells = checked_pow(std::uint64_t(alphabet_), memory_.size());
    if (!table_cells) throw std::invalid_argument("memory too large for explicit tables");
    auto check = [&](const RuleTable& t) {
        if (t.table_size() != *table_cells)
            throw std::invalid_argument("rule table size does not match shared memory");
    };
    check(default_);
    for (const auto& [region, table] : regions_) {
        if (region.dim() != dim_) throw std::invalid_argument("region dimension mismatch");
        check(table);
    }
}

const RuleTable& RuleAssignment::rule_at(const Cell& g) const {
    for (const auto& [region, table] : regions_)
        if (region.contains(g)) return table;
    return default_;
}

Pattern evaluate_window(const RuleAssignment& nuca, const Configuration& x,
                        const FiniteSet& F) {
    if (x.dim() != nuca.dim() || F.dim() != nuca.dim())
        throw std::invalid_argument("dimension mismatch");
    return Pattern(F, evaluate_values(nuca, F, [&](const Cell& c) { return x.at(c); }));
}

Cylinder Cylinder::full_shift(int dim) { return Cylinder{LatticeSet::empty(dim), 0, {}}; }

namespace {

// Shared plumbing for window enumerations: input cells split into pinned and
// free, output cells pre-resolved to (table, input indices).
struct WindowEnum {
    FiniteSet input_cells;                    // FM
    std::vector<Symbol> fixed;                // values for pinned cells, 0 for free
    std::vector<std::size_t> free_idx;        // indices into input_cells
    std::vector<const RuleTable*> tables;     // per output cell
    std::vector<std::vector<std::size_t>> reads;  // per output cell: input indices
    int alphabet;

    WindowEnum(const RuleAssignment& nuca, const FiniteSet& outputs,
               const std::optional<Cylinder>& u) {
        alphabet = nuca.alphabet();
        input_cells = minkowski(outputs, nuca.memory());
        fixed.assign(input_cells.size(), 0);
        for (std::size_t i = 0; i < input_cells.size(); ++i) {
            const Cell& c = input_cells.at(i);
            if (u && u->pins(c))
                fixed[i] = u->value_at(c);
            else
                free_idx.push_back(i);
        }
        tables.reserve(outputs.size());
        reads.reserve(outputs.size());
        for (const Cell& g : outputs) {
            tables.push_back(&nuca.rule_at(g));
            std::vector<std::size_t> r;
            r.reserve(nuca.memory().size());
            for (const Cell& m : nuca.memory()) r.push_back(input_cells.index_of(g + m));
            reads.push_back(std::move(r));
        }
    }

    // Decode a free-cell assignment into the value vector (MSB first).
    void fill(std::uint64_t code, std::vector<Symbol>& values) const {
        values = fixed;
        for (std::size_t i = free_idx.size(); i-- > 0;) {
            values[free_idx[i]] = Symbol(code % std::uint64_t(alphabet));
            code /= std::uint64_t(alphabet);
        }
    }

    std::uint64_t output_code(const std::vector<Symbol>& values) const {
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < tables.size(); ++j) {
            std::uint64_t in = 0;
            for (std::size_t idx : reads[j]) in = in * std::uint64_t(alphabet) + values[idx];
            code = code * std::uint64_t(alphabet) + tables[j]->apply_code(in);
        }
        return code;
    }
};

}  // namespace

PatternSet image_window(const RuleAssignment& nuca, const FiniteSet& F,
                        const std::optional<Cylinder>& u, const Budget& budget) {
    if (F.dim() != nuca.dim()) throw std::invalid_argument("dimension mismatch");
    WindowEnum we(nuca, F, u);
    std::uint64_t total = budget.require_enum_pow(std::uint64_t(nuca.alphabet()),
                                                  we.free_idx.size(), "image_window");

    int threads = std::max(1, budget.threads);
    if (std::uint64_t(threads) > total) threads = int(total);
    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        std::unordered_set<std::uint64_t> local;
        std::vector<Symbol> values;
        for (std::uint64_t code = lo; code < hi; ++code) {
            we.fill(code, values);
            local.insert(we.output_code(values));
            if ((code & 0xfff) == 0) {
                budget.check_time("image_window");
                budget.require_patterns(local.size(), "image_window");
            }
        }
        return local;
    };

    std::unordered_set<std::uint64_t> merged;
    if (threads <= 1) {
        merged = worker(0, total);
    } else {
        std::vector<std::future<std::unordered_set<std::uint64_t>>> futs;
        std::uint64_t chunk = (total + std::uint64_t(threads) - 1) / std::uint64_t(threads);
        for (int t = 0; t < threads; ++t) {
            std::uint64_t lo = std::uint64_t(t) * chunk;
            std::uint64_t hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, worker, lo, hi));
        }
        for (auto& f : futs) merged.merge(f.get());
    }
    budget.require_patterns(merged.size(), "image_window");

    PatternSet out;
    out.support = F;
    out.alphabet = nuca.alphabet();
    out.codes.assign(merged.begin(), merged.end());
    std::sort(out.codes.begin(), out.codes.end());
    return out;
}

namespace {

struct CompletionView {
    const Cylinder* u;
    const FiniteSet* support;      // E
    const std::vector<Symbol>* q;  // values on E
    const FiniteSet* ctx_cells;
    const std::vector<Symbol>* ctx;
    Symbol filler;

    Symbol operator()(const Cell& c) const {
        if (std::size_t i = support->index_of(c); i != FiniteSet::npos) return (*q)[i];
        if (u->pins(c)) return u->value_at(c);
        if (std::size_t i = ctx_cells->index_of(c); i != FiniteSet::npos) return (*ctx)[i];
        return filler;
    }
};

void decode_into(std::uint64_t code, int q, std::vector<Symbol>& vals) {
    for (std::size_t i = vals.size(); i-- > 0;) {
        vals[i] = Symbol(code % std::uint64_t(q));
        code /= std::uint64_t(q);
    }
}

}  // namespace

WitnessSearchResult preinjectivity_witness(const RuleAssignment& nuca, const Cylinder& u,
                                           int support_bound, std::int64_t search_radius,
                                           const Budget& budget, Symbol filler) {
    if (support_bound < 1) throw std::invalid_argument("support_bound must be >= 1");
    const int q = nuca.alphabet();
    const FiniteSet neg_m = negated(nuca.memory());

    std::vector<Cell> cells;
    for (const Cell& c : FiniteSet::centered_box(nuca.dim(), search_radius))
        if (!u.pins(c)) cells.push_back(c);

    WitnessSearchResult result;
    std::vector<std::size_t> pick;

    // Enumerates e-subsets of cells in lexicographic order.
    auto for_supports = [&](int e, auto&& body) {
        pick.assign(std::size_t(e), 0);
        for (int i = 0; i < e; ++i) pick[std::size_t(i)] = std::size_t(i);
        if (cells.size() < std::size_t(e)) return true;
        while (true) {
            if (!body()) return false;
            int i = e - 1;
            while (i >= 0 && pick[std::size_t(i)] == cells.size() - std::size_t(e - i)) --i;
            if (i < 0) return true;
            ++pick[std::size_t(i)];
            for (int j = i + 1; j < e; ++j) pick[std::size_t(j)] = pick[std::size_t(j - 1)] + 1;
        }
    };

    std::string last_examined;
    try {
        for (int e = 1; e <= support_bound; ++e) {
            std::uint64_t n_codes = budget.require_enum_pow(std::uint64_t(q), std::size_t(e),
                                                            "preinjectivity_witness");
            bool done = for_supports(e, [&]() -> bool {
                std::vector<Cell> support_cells;
                support_cells.reserve(std::size_t(e));
                for (std::size_t i : pick) support_cells.push_back(cells[i]);
                FiniteSet E(nuca.dim(), support_cells);
                FiniteSet affected = minkowski(E, neg_m);
                FiniteSet reads = minkowski(affected, nuca.memory());
                FiniteSet ctx_cells(nuca.dim());
                {
                    std::vector<Cell> c2;
                    for (const Cell& c : set_difference(reads, E))
                        if (!u.pins(c)) c2.push_back(c);
                    ctx_cells = FiniteSet(nuca.dim(), std::move(c2));
                }
                std::uint64_t n_ctx =
                    budget.require_enum_pow(std::uint64_t(q), ctx_cells.size(),
                                            "preinjectivity_witness contexts");

                std::vector<Symbol> v1(std::size_t(e)), v2(std::size_t(e)),
                    ctx(ctx_cells.size());
                for (std::uint64_t c1 = 0; c1 < n_codes; ++c1) {
                    decode_into(c1, q, v1);
                    for (std::uint64_t c2 = c1 + 1; c2 < n_codes; ++c2) {
                        decode_into(c2, q, v2);
                        bool differ_everywhere = true;
                        for (int i = 0; i < e; ++i)
                            if (v1[std::size_t(i)] == v2[std::size_t(i)]) {
                                differ_everywhere = false;
                                break;
                            }
                        if (!differ_everywhere) continue;  // covered at a smaller support
                        for (std::uint64_t cc = 0; cc < n_ctx; ++cc) {
                            decode_into(cc, q, ctx);
                            ++result.candidates;
                            if ((result.candidates & 0xfff) == 0)
                                budget.check_time("preinjectivity_witness");
                            if (result.candidates > budget.max_enum)
                                throw BudgetExceeded("preinjectivity_witness: step budget");
                            CompletionView x{&u, &E, &v1, &ctx_cells, &ctx, filler};
                            CompletionView y{&u, &E, &v2, &ctx_cells, &ctx, filler};
                            bool equal = true;
                            for (const Cell& g : affected) {
                                if (nuca.apply_at(g, x) != nuca.apply_at(g, y)) {
                                    equal = false;
                                    break;
                                }
                            }
                            if (equal) {
                                result.witness = PreinjWitness{
                                    E, Pattern(E, v1), Pattern(E, v2),
                                    Pattern(ctx_cells, ctx), filler, affected};
                                return false;
                            }
                        }
                    }
                }
                last_examined = "|E|=" + std::to_string(e) + " E ending at " +
                                to_string(support_cells.back(), nuca.dim());
                return true;
            });
            if (!done && result.witness) return result;
            if (!done) break;
        }
    } catch (const BudgetExceeded& b) {
        result.complete = false;
        result.exhausted = std::string(b.what()) + "; searched through " +
                           (last_examined.empty() ? std::string("nothing") : last_examined);
        return result;
    }
    return result;
}

bool verify_witness(const RuleAssignment& nuca, const Cylinder& u, const PreinjWitness& w) {
    std::vector<Symbol> q1(w.support.size()), q2(w.support.size());
    for (std::size_t i = 0; i < w.support.size(); ++i) {
        q1[i] = w.q1.value_at_index(i);
        q2[i] = w.q2.value_at_index(i);
    }
    std::vector<Symbol> ctx(w.context.size());
    for (std::size_t i = 0; i < w.context.size(); ++i) ctx[i] = w.context.value_at_index(i);
    FiniteSet ctx_cells = w.context.support();
    CompletionView x{&u, &w.support, &q1, &ctx_cells, &ctx, w.filler};
    CompletionView y{&u, &w.support, &q2, &ctx_cells, &ctx, w.filler};
    if (q1 == q2) return false;
    for (const Cell& c : w.support)
        if (u.pins(c)) return false;
    for (const Cell& g : w.verify_window)
        if (nuca.apply_at(g, x) != nuca.apply_at(g, y)) return false;
    return true;
}

std::optional<Pattern> image_open_probe(const RuleAssignment& nuca, const FiniteSet& E,
                                        const FiniteSet& W, const Budget& budget) {
    if (!set_difference(E, W).empty())
        throw std::invalid_argument("image_open_probe requires E inside W");
    const int q = nuca.alphabet();
    budget.require_enum_pow(std::uint64_t(q), W.size(), "image_open_probe");
    PatternSet gamma = image_window(nuca, W, std::nullopt, budget);
    std::unordered_set<std::uint64_t> member(gamma.codes.begin(), gamma.codes.end());

    FiniteSet ext_cells = set_difference(W, E);
    std::uint64_t n_q = *checked_pow(std::uint64_t(q), E.size());
    std::uint64_t n_ext = *checked_pow(std::uint64_t(q), ext_cells.size());

    // positions of E / extension cells inside W, canonical order
    std::vector<std::size_t> epos, xpos;
    for (std::size_t i = 0; i < W.size(); ++i) {
        if (E.contains(W.at(i)))
            epos.push_back(i);
        else
            xpos.push_back(i);
    }

    std::vector<Symbol> qv(E.size()), xv(ext_cells.size()), full(W.size());
    for (std::uint64_t qc = 0; qc < n_q; ++qc) {
        decode_into(qc, q, qv);
        bool all_in = true;
        for (std::uint64_t xc = 0; xc < n_ext && all_in; ++xc) {
            decode_into(xc, q, xv);
            for (std::size_t i = 0; i < epos.size(); ++i) full[epos[i]] = qv[i];
            for (std::size_t i = 0; i < xpos.size(); ++i) full[xpos[i]] = xv[i];
            std::uint64_t code = 0;
            for (Symbol s : full) code = code * std::uint64_t(q) + s;
            if (!member.count(code)) all_in = false;
            if ((xc & 0xfff) == 0) budget.check_time("image_open_probe");
        }
        if (all_in) return Pattern(E, qv);
    }
    return std::nullopt;
}

}  // namespace nucalab
