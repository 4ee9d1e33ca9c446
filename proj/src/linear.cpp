#include "nucalab/linear.hpp"

#include <algorithm>

#include "nucalab/intmath.hpp"

namespace nucalab {

LinearAssignment::LinearAssignment(int dim, FieldSpec field, int vdim, FiniteSet memory,
                                   LinearRule default_rule,
                                   std::vector<std::pair<LatticeSet, LinearRule>> regions)
    : dim_(dim),
      field_(field),
      vdim_(vdim),
      memory_(std::move(memory)),
      default_(std::move(default_rule)),
      regions_(std::move(regions)) {
    if (vdim_ < 1) throw std::invalid_argument("vector dimension must be >= 1");
    if (memory_.dim() != dim_) throw std::invalid_argument("memory dimension mismatch");
    auto check = [&](const LinearRule& r) {
        if (r.coeffs.size() != memory_.size())
            throw std::invalid_argument("one coefficient matrix per memory offset required");
        for (const FqMatrix& m : r.coeffs)
            if (m.rows() != std::size_t(vdim_) || m.cols() != std::size_t(vdim_) ||
                !(m.field() == field_))
                throw std::invalid_argument("coefficient matrix shape/field mismatch");
    };
    check(default_);
    for (const auto& [region, rule] : regions_) {
        if (region.dim() != dim_) throw std::invalid_argument("region dimension mismatch");
        check(rule);
    }
}

const LinearRule& LinearAssignment::rule_at(const Cell& g) const {
    for (const auto& [region, rule] : regions_)
        if (region.contains(g)) return rule;
    return default_;
}

WindowMatrix window_matrix(const LinearAssignment& nuca, const FiniteSet& F) {
    const int k = nuca.vdim();
    WindowMatrix w;
    w.row_cells = F;
    w.col_cells = minkowski(F, nuca.memory());
    w.vdim = k;
    w.matrix = FqMatrix(nuca.field(), F.size() * std::size_t(k),
                        w.col_cells.size() * std::size_t(k));
    for (std::size_t gi = 0; gi < F.size(); ++gi) {
        const Cell& g = F.at(gi);
        const LinearRule& rule = nuca.rule_at(g);
        std::size_t mi = 0;
        for (const Cell& m : nuca.memory()) {
            std::size_t hi = w.col_cells.index_of(g + m);
            const FqMatrix& B = rule.coeffs[mi++];
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) {
                    std::size_t row = gi * std::size_t(k) + std::size_t(r);
                    std::size_t col = hi * std::size_t(k) + std::size_t(c);
                    w.matrix.set(row, col,
                                 nuca.field().add(w.matrix.at(row, col),
                                                  B.at(std::size_t(r), std::size_t(c))));
                }
        }
    }
    return w;
}

std::vector<Symbol> linear_evaluate_window(const LinearAssignment& nuca, const FiniteSet& F,
                                           const std::vector<Symbol>& input_on_fm) {
    FiniteSet fm = minkowski(F, nuca.memory());
    if (input_on_fm.size() != fm.size() * std::size_t(nuca.vdim()))
        throw std::invalid_argument("input vector size mismatch");
    std::vector<Symbol> out;
    out.reserve(F.size() * std::size_t(nuca.vdim()));
    auto value = [&](const Cell& c) -> const Symbol* {
        std::size_t i = fm.index_of(c);
        return &input_on_fm[i * std::size_t(nuca.vdim())];
    };
    for (const Cell& g : F) {
        std::vector<Symbol> v = nuca.apply_at(g, value);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

RuleAssignment to_rule_assignment(const LinearAssignment& nuca, const Budget& budget) {
    const int q = nuca.field().q;
    const int k = nuca.vdim();
    auto alpha = checked_pow(std::uint64_t(q), std::size_t(k));
    if (!alpha || *alpha > 255)
        throw BudgetExceeded("to_rule_assignment: alphabet q^k exceeds symbol range");
    const int big_alphabet = int(*alpha);
    std::uint64_t table_size = budget.require_enum_pow(std::uint64_t(big_alphabet),
                                                       nuca.memory().size(),
                                                       "to_rule_assignment");

    auto expand = [&](const LinearRule& rule) {
        std::vector<Symbol> out(table_size);
        std::vector<Symbol> comps(nuca.memory().size() * std::size_t(k));
        for (std::uint64_t code = 0; code < table_size; ++code) {
            // decode per-cell symbols (MSB first), then per-cell field components
            std::uint64_t c = code;
            for (std::size_t i = nuca.memory().size(); i-- > 0;) {
                std::uint64_t sym = c % std::uint64_t(big_alphabet);
                c /= std::uint64_t(big_alphabet);
                for (std::size_t j = std::size_t(k); j-- > 0;) {
                    comps[i * std::size_t(k) + j] = Symbol(sym % std::uint64_t(q));
                    sym /= std::uint64_t(q);
                }
            }
            std::vector<int> acc(std::size_t(k), 0);
            for (std::size_t mi = 0; mi < nuca.memory().size(); ++mi) {
                const FqMatrix& B = rule.coeffs[mi];
                for (int r = 0; r < k; ++r)
                    for (int cc = 0; cc < k; ++cc)
                        acc[std::size_t(r)] += int(B.at(std::size_t(r), std::size_t(cc))) *
                                               int(comps[mi * std::size_t(k) + std::size_t(cc)]);
            }
            std::uint64_t sym = 0;
            for (int r = 0; r < k; ++r) sym = sym * std::uint64_t(q) + std::uint64_t(acc[std::size_t(r)] % q);
            out[code] = Symbol(sym);
        }
        return RuleTable(big_alphabet, nuca.memory().size(), std::move(out));
    };

    std::vector<std::pair<LatticeSet, RuleTable>> regions;
    regions.reserve(nuca.regions().size());
    for (const auto& [region, rule] : nuca.regions()) regions.emplace_back(region, expand(rule));
    return RuleAssignment(nuca.dim(), big_alphabet, nuca.memory(), expand(nuca.default_rule()),
                          std::move(regions));
}

MdimReport mdim_sequence(const LinearAssignment& nuca, const BoxFolner& folner, int n_max,
                         const Budget& budget) {
    MdimReport report;
    for (int n = 1; n <= n_max; ++n) {
        FiniteSet F = folner.box(n);
        u128 entries = u128(F.size()) * u128(F.size()) * u128(nuca.memory().size()) *
                       u128(nuca.vdim()) * u128(nuca.vdim());
        try {
            budget.require_enum(entries, "mdim_sequence");
            budget.check_time("mdim_sequence");
        } catch (const BudgetExceeded& b) {
            report.truncated = true;
            report.truncation_reason = b.what();
            break;
        }
        WindowMatrix w = window_matrix(nuca, F);
        MdimRow row;
        row.n = n;
        row.window_size = F.size();
        row.rank = rank(w.matrix);
        row.ratio = Rat(std::int64_t(row.rank),
                        std::int64_t(F.size()) * std::int64_t(nuca.vdim()));
        report.rows.push_back(row);
    }
    return report;
}

namespace {

// Boxes inside [-R,R]^d with volume <= bound, by increasing volume then
// canonical corner order.
std::vector<std::pair<Cell, Cell>> candidate_boxes(int dim, std::int64_t radius,
                                                   std::int64_t bound) {
    std::vector<std::pair<Cell, Cell>> boxes;
    if (dim == 1) {
        for (std::int64_t len = 1; len <= std::min<std::int64_t>(bound, 2 * radius + 1); ++len)
            for (std::int64_t a = -radius; a + len - 1 <= radius; ++a)
                boxes.push_back({{a, 0}, {a + len - 1, 0}});
    } else {
        std::int64_t side = 2 * radius + 1;
        for (std::int64_t w = 1; w <= side; ++w)
            for (std::int64_t h = 1; h <= side && w * h <= bound; ++h)
                for (std::int64_t ax = -radius; ax + w - 1 <= radius; ++ax)
                    for (std::int64_t ay = -radius; ay + h - 1 <= radius; ++ay)
                        boxes.push_back({{ax, ay}, {ax + w - 1, ay + h - 1}});
    }
    std::stable_sort(boxes.begin(), boxes.end(), [](const auto& a, const auto& b) {
        auto vol = [](const std::pair<Cell, Cell>& box) {
            return (box.second.x - box.first.x + 1) * (box.second.y - box.first.y + 1);
        };
        if (vol(a) != vol(b)) return vol(a) < vol(b);
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    return boxes;
}

FqMatrix support_to_outputs_matrix(const LinearAssignment& nuca, const FiniteSet& support,
                                   const FiniteSet& outputs) {
    const int k = nuca.vdim();
    FqMatrix m(nuca.field(), outputs.size() * std::size_t(k),
               support.size() * std::size_t(k));
    for (std::size_t gi = 0; gi < outputs.size(); ++gi) {
        const Cell& g = outputs.at(gi);
        const LinearRule& rule = nuca.rule_at(g);
        std::size_t mi = 0;
        for (const Cell& off : nuca.memory()) {
            std::size_t hi = support.index_of(g + off);
            const FqMatrix& B = rule.coeffs[mi++];
            if (hi == FiniteSet::npos) continue;
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) {
                    std::size_t row = gi * std::size_t(k) + std::size_t(r);
                    std::size_t col = hi * std::size_t(k) + std::size_t(c);
                    m.set(row, col,
                          nuca.field().add(m.at(row, col), B.at(std::size_t(r), std::size_t(c))));
                }
        }
    }
    return m;
}

}  // namespace

KernelSearchResult kernel_preinjectivity(const LinearAssignment& nuca, const LatticeSet& S,
                                         int support_bound, std::int64_t radius,
                                         const Budget& budget) {
    if (support_bound < 1) throw std::invalid_argument("support_bound must be >= 1");
    KernelSearchResult result;
    const FiniteSet neg_m = negated(nuca.memory());
    std::string last;
    try {
        for (const auto& [lo, hi] : candidate_boxes(nuca.dim(), radius, support_bound)) {
            budget.check_time("kernel_preinjectivity");
            FiniteSet box = nuca.dim() == 1 ? FiniteSet::box1(lo.x, hi.x)
                                            : FiniteSet::box2(lo, hi);
            std::vector<Cell> free;
            for (const Cell& c : box)
                if (!S.contains(c)) free.push_back(c);
            if (free.empty()) continue;
            FiniteSet support(nuca.dim(), std::move(free));
            FiniteSet outputs = minkowski(support, neg_m);
            u128 work = u128(outputs.size()) * u128(support.size()) * u128(nuca.vdim()) *
                        u128(nuca.vdim()) * u128(support.size());
            budget.require_enum(work, "kernel_preinjectivity");
            FqMatrix m = support_to_outputs_matrix(nuca, support, outputs);
            FqMatrix basis = nullspace_basis(m);
            if (basis.rows() > 0) {
                std::vector<Symbol> vals(basis.cols());
                for (std::size_t c = 0; c < basis.cols(); ++c) vals[c] = basis.at(0, c);
                result.witness = KernelWitness{support, std::move(vals)};
                return result;
            }
            last = "box " + to_string(lo, nuca.dim()) + ".." + to_string(hi, nuca.dim());
        }
    } catch (const BudgetExceeded& b) {
        result.complete = false;
        result.exhausted = std::string(b.what()) +
                           (last.empty() ? "" : "; searched through " + last);
    }
    return result;
}

LocusResult preinjectivity_locus(const LinearAssignment& nuca, const QuasiTiling& tiling,
                                 const Rat& density_target, const Budget& budget) {
    LocusResult result;
    result.vdim_warning = nuca.vdim() > 1;
    FiniteSet memory_sq = minkowski(nuca.memory(), nuca.memory());
    const int k = nuca.vdim();

    std::vector<char> unpinned(tiling.region.size(), 0);
    bool all_injective = true;
    for (std::size_t ti = 0; ti < tiling.tiles.size(); ++ti) {
        budget.check_time("preinjectivity_locus");
        const Tile& tile = tiling.tiles[ti];
        FiniteSet e_cells = interior(tile.cells, memory_sq);
        if (e_cells.empty()) {
            result.skipped_tiles.push_back(ti);
            continue;
        }
        FiniteSet inputs = minkowski(e_cells, nuca.memory());  // E_i M
        u128 work = u128(inputs.size()) * u128(inputs.size()) * u128(e_cells.size()) *
                    u128(k) * u128(k);
        budget.require_enum(work, "preinjectivity_locus");
        FqMatrix phi = support_to_outputs_matrix(nuca, inputs, e_cells);
        FqMatrix basis = nullspace_basis(phi);

        // pivot coordinate of each reduced basis row -> cells to pin
        std::vector<Cell> pin_cells;
        for (std::size_t r = 0; r < basis.rows(); ++r) {
            for (std::size_t c = 0; c < basis.cols(); ++c) {
                if (basis.at(r, c) != 0) {
                    pin_cells.push_back(inputs.at(c / std::size_t(k)));
                    break;
                }
            }
        }
        FiniteSet pinned_here(nuca.dim(), std::move(pin_cells));

        // second rank computation: restrict inputs to E_i M \ S_i
        FiniteSet kept = set_difference(inputs, pinned_here);
        FqMatrix phi_kept = support_to_outputs_matrix(nuca, kept, e_cells);
        bool injective = rank(phi_kept) == kept.size() * std::size_t(k);
        all_injective = all_injective && injective;

        result.tiles.push_back(TileVerdict{ti, inputs.size(), basis.rows(),
                                           pinned_here.size(), injective});
        if (injective)
            for (const Cell& c : kept) {
                std::size_t idx = tiling.region.index_of(c);
                if (idx != FiniteSet::npos) unpinned[idx] = 1;
            }
    }

    std::vector<Cell> pinned_cells;
    for (std::size_t i = 0; i < tiling.region.size(); ++i)
        if (!unpinned[i]) pinned_cells.push_back(tiling.region.at(i));
    result.pinned = FiniteSet(tiling.dim, std::move(pinned_cells));
    result.measured_density =
        Rat(std::int64_t(result.pinned.size()), std::int64_t(tiling.region.size()));
    result.density_target_met = result.measured_density <= density_target;
    result.all_tiles_injective = all_injective;
    return result;
}

}  // namespace nucalab
