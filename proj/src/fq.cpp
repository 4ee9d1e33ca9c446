#include "nucalab/fq.hpp"

#include <stdexcept>

namespace nucalab {

FieldSpec::FieldSpec(int prime) : q(prime) {
    if (prime < 2 || prime > 251) throw std::invalid_argument("field prime out of range");
    for (int d = 2; d * d <= prime; ++d)
        if (prime % d == 0) throw std::invalid_argument("field order must be prime");
}

Symbol FieldSpec::inv(Symbol a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // Fermat: a^(q-2)
    int result = 1, base = a, e = q - 2;
    while (e > 0) {
        if (e & 1) result = (result * base) % q;
        base = (base * base) % q;
        e >>= 1;
    }
    return Symbol(result);
}

FqMatrix FqMatrix::identity(FieldSpec field, std::size_t n) {
    FqMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

std::vector<Symbol> FqMatrix::apply(const std::vector<Symbol>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("vector size mismatch");
    std::vector<Symbol> y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        int acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc += int(at(r, c)) * int(x[c]);
        y[r] = Symbol(acc % field_.q);
    }
    return y;
}

Rref reduced_row_echelon(FqMatrix m) {
    const FieldSpec& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                Symbol t = m.at(row, c);
                m.set(row, c, m.at(sel, c));
                m.set(sel, c, t);
            }
        Symbol s = f.inv(m.at(row, col));
        for (std::size_t c = 0; c < m.cols(); ++c) m.set(row, c, f.mul(m.at(row, c), s));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            Symbol factor = m.at(r, col);
            for (std::size_t c = 0; c < m.cols(); ++c)
                m.set(r, c, f.sub(m.at(r, c), f.mul(factor, m.at(row, c))));
        }
        pivots.push_back(col);
        ++row;
    }
    return Rref{std::move(m), std::move(pivots)};
}

std::size_t rank(const FqMatrix& m) { return reduced_row_echelon(m).rank(); }

FqMatrix nullspace_basis(const FqMatrix& m) {
    Rref r = reduced_row_echelon(m);
    const FieldSpec& f = m.field();
    std::vector<std::size_t> free_cols;
    {
        std::size_t p = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (p < r.pivot_cols.size() && r.pivot_cols[p] == c)
                ++p;
            else
                free_cols.push_back(c);
        }
    }
    FqMatrix basis(f, free_cols.size(), m.cols());
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
        std::size_t fc = free_cols[i];
        basis.set(i, fc, 1);
        for (std::size_t p = 0; p < r.pivot_cols.size(); ++p)
            basis.set(i, r.pivot_cols[p], f.neg(r.matrix.at(p, fc)));
    }
    return basis;
}

}  // namespace nucalab
