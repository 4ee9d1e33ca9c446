#include "nucalab/configuration.hpp"

#include <stdexcept>

#include "nucalab/intmath.hpp"

namespace nucalab {

PeriodLattice PeriodLattice::one_dim(std::int64_t a) {
    if (a == 0) throw std::invalid_argument("period lattice must have full rank");
    PeriodLattice L;
    L.dim_ = 1;
    L.e_ = a < 0 ? -a : a;
    return L;
}

PeriodLattice PeriodLattice::two_dim(Cell g1, Cell g2) {
    std::int64_t det = g1.cross(g2);
    if (det == 0) throw std::invalid_argument("period lattice must have full rank");
    // Hermite basis: w1 = (e, 0) with e = |det| / gcd(y-components),
    // w2 = (f, g) with g = gcd(y-components), f reduced mod e.
    ExtGcd eg = ext_gcd(g1.y, g2.y);
    std::int64_t gy = eg.g;  // > 0 unless both y-components are 0
    PeriodLattice L;
    L.dim_ = 2;
    if (gy == 0) {
        // Both generators horizontal: cannot be full rank unless cross != 0,
        // which forces gy != 0; keep this branch defensive.
        throw std::invalid_argument("degenerate period lattice");
    }
    std::int64_t adet = det < 0 ? -det : det;
    L.e_ = adet / gy;
    L.g_ = gy;
    std::int64_t fx = eg.x * g1.x + eg.y * g2.x;  // x-component of a vector with y = gy
    L.f_ = floor_mod(fx, L.e_);
    return L;
}

PeriodLattice PeriodLattice::scaled(int dim, std::int64_t scale) {
    if (dim == 1) return one_dim(scale);
    return two_dim({scale, 0}, {0, scale});
}

std::int64_t PeriodLattice::index() const { return dim_ == 1 ? e_ : e_ * g_; }

Cell PeriodLattice::reduce(const Cell& c) const {
    if (dim_ == 1) return {floor_mod(c.x, e_), 0};
    std::int64_t k2 = floor_div(c.y, g_);
    std::int64_t ry = c.y - k2 * g_;
    std::int64_t rx = floor_mod(c.x - k2 * f_, e_);
    return {rx, ry};
}

FiniteSet PeriodLattice::fundamental_cells() const {
    if (dim_ == 1) return FiniteSet::box1(0, e_ - 1);
    return FiniteSet::box2({0, 0}, {e_ - 1, g_ - 1});
}

Configuration Configuration::constant(int dim, Symbol s) {
    Configuration c;
    c.dim_ = dim;
    c.const_sym_ = s;
    return c;
}

Configuration Configuration::periodic(PeriodLattice lattice, Pattern fundamental) {
    if (fundamental.support() != lattice.fundamental_cells())
        throw std::invalid_argument("fundamental pattern must cover the fundamental domain");
    Configuration c;
    c.dim_ = lattice.dim();
    c.periodic_ = true;
    c.lattice_ = lattice;
    c.fundamental_ = std::move(fundamental);
    return c;
}

Configuration Configuration::with_overrides(Pattern overrides) const {
    if (!overrides.support().empty() && overrides.support().dim() != dim_)
        throw std::invalid_argument("dimension mismatch");
    Configuration c = *this;
    c.overrides_ = std::move(overrides);
    return c;
}

Symbol Configuration::background_at(const Cell& c) const {
    if (!periodic_) return const_sym_;
    return fundamental_.at(lattice_.reduce(c));
}

Symbol Configuration::at(const Cell& c) const {
    if (auto v = overrides_.try_at(c)) return *v;
    return background_at(c);
}

Configuration shift(const Configuration& x, const Cell& g) {
    Configuration y = x;
    if (!x.is_constant_background()) {
        // Resample the fundamental domain of the shifted background.
        const FiniteSet dom = x.lattice().fundamental_cells();
        std::vector<Symbol> vals;
        vals.reserve(dom.size());
        for (const Cell& r : dom) vals.push_back(x.background_at(r - g));
        y = Configuration::periodic(x.lattice(), Pattern(dom, std::move(vals)));
    }
    return y.with_overrides(x.overrides().translated(g));
}

Pattern restrict_to(const Configuration& x, const FiniteSet& F) {
    std::vector<Symbol> vals;
    vals.reserve(F.size());
    for (const Cell& c : F) vals.push_back(x.at(c));
    return Pattern(F, std::move(vals));
}

}  // namespace nucalab
