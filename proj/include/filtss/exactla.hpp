#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace filtss {

using Scalar = std::uint32_t;
using Vector = std::vector<Scalar>;

class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const { return p_; }
    Scalar add(Scalar a, Scalar b) const { Scalar s = a + b; return s >= p_ ? s - p_ : s; }
    Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
    Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Scalar inv(Scalar a) const;
    Scalar from_int(long long v) const;
    // (-1)^e as a field element
    Scalar sign(long long e) const { return (e % 2 == 0) ? 1 : neg(1); }

private:
    std::uint32_t p_;
};

// Dense matrix over F_p. Rows are bit-packed when p = 2.
class Matrix {
public:
    Matrix() : Matrix(2, 0, 0) {}
    Matrix(std::uint32_t p, std::size_t rows, std::size_t cols);

    static Matrix identity(std::uint32_t p, std::size_t n);
    static Matrix from_rows(std::uint32_t p, std::size_t cols, const std::vector<Vector>& rows);
    static Matrix from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vector>& cols);

    std::uint32_t prime() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    PrimeField field() const { return PrimeField(p_); }

    Scalar get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, Scalar v);
    void add_to(std::size_t i, std::size_t j, Scalar v);

    Vector row(std::size_t i) const;
    Vector column(std::size_t j) const;
    void set_row(std::size_t i, std::span<const Scalar> v);
    bool row_is_zero(std::size_t i) const;
    bool is_zero() const;

    // row[dst] += c * row[src], touching only columns >= from_col
    void add_scaled_row(std::size_t dst, std::size_t src, Scalar c, std::size_t from_col = 0);
    void scale_row(std::size_t i, Scalar c);
    void swap_rows(std::size_t i, std::size_t j);

    Vector apply(std::span<const Scalar> v) const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator+(const Matrix& other) const;
    Matrix transpose() const;
    Matrix select_rows(std::span<const std::size_t> idx) const;
    Matrix select_cols(std::span<const std::size_t> idx) const;
    void append_row(std::span<const Scalar> v);

    bool operator==(const Matrix& other) const;

    // raw word access for the p = 2 kernels
    std::size_t words_per_row() const { return wpr_; }
    std::uint64_t* row_words(std::size_t i) { return bits_.data() + i * wpr_; }
    const std::uint64_t* row_words(std::size_t i) const { return bits_.data() + i * wpr_; }

private:
    std::uint32_t p_;
    std::size_t rows_;
    std::size_t cols_;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<Scalar> data_;
};

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank() const { return pivots.size(); }
};

// Pivot search is restricted to columns < col_limit (the rest is carried along).
RrefResult rref(Matrix m, std::size_t col_limit = SIZE_MAX);
RrefResult rref_serial(Matrix m, std::size_t col_limit = SIZE_MAX);
RrefResult rref_parallel(Matrix m, std::size_t col_limit = SIZE_MAX);

std::size_t rank(const Matrix& m);

class Subspace {
public:
    Subspace(std::uint32_t p, std::size_t ambient_dim);
    static Subspace span(std::uint32_t p, std::size_t ambient_dim, const std::vector<Vector>& vectors);
    static Subspace full(std::uint32_t p, std::size_t ambient_dim);

    std::uint32_t prime() const { return basis_.prime(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::vector<Vector> basis_vectors() const;

    // v minus its projection along the pivot columns; zero iff v is in the span
    Vector reduce(std::span<const Scalar> v) const;
    bool contains(std::span<const Scalar> v) const;
    bool contains(const Subspace& other) const;
    Subspace sum(const Subspace& other) const;
    Subspace intersect(const Subspace& other) const;
    bool operator==(const Subspace& other) const { return basis_ == other.basis_; }

private:
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

Subspace kernel(const Matrix& m);
Subspace image(const Matrix& m);

struct SolveResult {
    std::optional<Vector> particular;
    Subspace kernel;
    bool solvable() const { return particular.has_value(); }
};

SolveResult solve(const Matrix& m, std::span<const Scalar> b);

std::vector<Vector> quotient_basis(const Subspace& ambient, const Subspace& sub);

// Expresses vectors as combinations of a fixed list of linearly independent generators.
class Coordinates {
public:
    Coordinates(std::uint32_t p, std::size_t ambient_dim, const std::vector<Vector>& generators);
    std::size_t size() const { return count_; }
    std::optional<Vector> express(std::span<const Scalar> v) const;

private:
    std::size_t ambient_;
    std::size_t count_;
    Matrix echelon_;
    std::vector<std::size_t> pivots_;
};

// ambient / sub with chosen coset representatives
class Quotient {
public:
    Quotient(const Subspace& sub, std::vector<Vector> reps);
    std::size_t dim() const { return reps_.size(); }
    const std::vector<Vector>& reps() const { return reps_; }
    const Subspace& sub() const { return sub_; }
    // coordinates of the class of v; nullopt if v is outside reps + sub
    std::optional<Vector> coords(std::span<const Scalar> v) const;
    Vector lift(std::span<const Scalar> coords) const;

private:
    Subspace sub_;
    std::vector<Vector> reps_;
    Coordinates coords_;
};

class ContainmentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Vector zero_vector(std::size_t n);
bool is_zero(std::span<const Scalar> v);
void axpy(const PrimeField& f, Vector& y, Scalar a, std::span<const Scalar> x);
Vector scaled(const PrimeField& f, std::span<const Scalar> x, Scalar a);

}  // namespace filtss

namespace filtss {

// Echelon basis grown one vector at a time; reports whether each candidate was new.
class IncrementalBasis {
public:
    IncrementalBasis(std::uint32_t p, std::size_t ambient_dim) : field_(p), ambient_(ambient_dim) {}
    std::size_t dim() const { return rows_.size(); }
    Vector reduce(std::span<const Scalar> v) const;
    bool contains(std::span<const Scalar> v) const { return is_zero(reduce(v)); }
    // adds v if independent; returns true when added
    bool insert(std::span<const Scalar> v);

private:
    PrimeField field_;
    std::size_t ambient_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace filtss
