#pragma once

#include <cstdint>
#include <vector>

#include "nucalab/pattern.hpp"

namespace nucalab {

// Prime field F_q, q <= 251 so elements fit a byte.
struct FieldSpec {
    int q = 2;
    explicit FieldSpec(int prime);
    FieldSpec() = default;

    Symbol add(Symbol a, Symbol b) const { return Symbol((int(a) + int(b)) % q); }
    Symbol sub(Symbol a, Symbol b) const { return Symbol((int(a) - int(b) + q) % q); }
    Symbol mul(Symbol a, Symbol b) const { return Symbol((int(a) * int(b)) % q); }
    Symbol neg(Symbol a) const { return Symbol((q - int(a)) % q); }
    Symbol inv(Symbol a) const;  // a != 0

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Dense row-major matrix over F_q with exact elimination.
class FqMatrix {
  public:
    FqMatrix() = default;
    FqMatrix(FieldSpec field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    static FqMatrix identity(FieldSpec field, std::size_t n);

    const FieldSpec& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Symbol at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Symbol v) { a_[r * cols_ + c] = v; }

    std::vector<Symbol> apply(const std::vector<Symbol>& x) const;

    friend bool operator==(const FqMatrix&, const FqMatrix&) = default;

  private:
    FieldSpec field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Symbol> a_;
};

struct Rref {
    FqMatrix matrix;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

Rref reduced_row_echelon(FqMatrix m);
std::size_t rank(const FqMatrix& m);

// Rows form a basis of {x : m x = 0}, itself in reduced echelon form; the
// pivot coordinate of each basis row is its free column in m.
FqMatrix nullspace_basis(const FqMatrix& m);

}  // namespace nucalab
