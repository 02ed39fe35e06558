#include "filtss/exactla.hpp"

#include <algorithm>
#include <bit>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace filtss {

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p > 65521) throw std::invalid_argument("unsupported prime " + std::to_string(p));
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

Scalar PrimeField::inv(Scalar a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
        if (e & 1) result = result * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<Scalar>(result);
}

Scalar PrimeField::from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Scalar>(r);
}

Matrix::Matrix(std::uint32_t p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols) {
    if (p_ == 2) {
        wpr_ = (cols + 63) / 64;
        bits_.assign(rows * wpr_, 0);
    } else {
        data_.assign(rows * cols, 0);
    }
}

Matrix Matrix::identity(std::uint32_t p, std::size_t n) {
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(std::uint32_t p, std::size_t cols, const std::vector<Vector>& rows) {
    Matrix m(p, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
}

Matrix Matrix::from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vector>& cols) {
    Matrix m(p, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            if (cols[j][i]) m.set(i, j, cols[j][i]);
    }
    return m;
}

Scalar Matrix::get(std::size_t i, std::size_t j) const {
    if (p_ == 2) return static_cast<Scalar>((bits_[i * wpr_ + j / 64] >> (j % 64)) & 1u);
    return data_[i * cols_ + j];
}

void Matrix::set(std::size_t i, std::size_t j, Scalar v) {
    if (p_ == 2) {
        std::uint64_t& w = bits_[i * wpr_ + j / 64];
        const std::uint64_t mask = std::uint64_t{1} << (j % 64);
        if (v & 1u) w |= mask; else w &= ~mask;
    } else {
        data_[i * cols_ + j] = v % p_;
    }
}

void Matrix::add_to(std::size_t i, std::size_t j, Scalar v) {
    if (p_ == 2) {
        if (v & 1u) bits_[i * wpr_ + j / 64] ^= std::uint64_t{1} << (j % 64);
    } else {
        Scalar& e = data_[i * cols_ + j];
        e = static_cast<Scalar>((e + v % p_) % p_);
    }
}

Vector Matrix::row(std::size_t i) const {
    Vector v(cols_);
    if (p_ == 2) {
        const std::uint64_t* w = row_words(i);
        for (std::size_t k = 0; k < wpr_; ++k) {
            std::uint64_t word = w[k];
            while (word) {
                const int b = std::countr_zero(word);
                v[k * 64 + b] = 1;
                word &= word - 1;
            }
        }
    } else {
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_), cols_, v.begin());
    }
    return v;
}

Vector Matrix::column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = get(i, j);
    return v;
}

void Matrix::set_row(std::size_t i, std::span<const Scalar> v) {
    if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
    if (p_ == 2) {
        std::uint64_t* w = row_words(i);
        std::fill_n(w, wpr_, 0);
        for (std::size_t j = 0; j < cols_; ++j)
            if (v[j] & 1u) w[j / 64] |= std::uint64_t{1} << (j % 64);
    } else {
        for (std::size_t j = 0; j < cols_; ++j) data_[i * cols_ + j] = v[j] % p_;
    }
}

bool Matrix::row_is_zero(std::size_t i) const {
    if (p_ == 2) {
        const std::uint64_t* w = row_words(i);
        return std::all_of(w, w + wpr_, [](std::uint64_t x) { return x == 0; });
    }
    auto b = data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
    return std::all_of(b, b + static_cast<std::ptrdiff_t>(cols_), [](Scalar x) { return x == 0; });
}

bool Matrix::is_zero() const {
    if (p_ == 2) return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t x) { return x == 0; });
    return std::all_of(data_.begin(), data_.end(), [](Scalar x) { return x == 0; });
}

void Matrix::add_scaled_row(std::size_t dst, std::size_t src, Scalar c, std::size_t from_col) {
    if (p_ == 2) {
        if (!(c & 1u)) return;
        std::uint64_t* d = row_words(dst);
        const std::uint64_t* s = row_words(src);
        for (std::size_t k = from_col / 64; k < wpr_; ++k) d[k] ^= s[k];
        return;
    }
    c %= p_;
    if (c == 0) return;
    Scalar* d = data_.data() + dst * cols_;
    const Scalar* s = data_.data() + src * cols_;
    for (std::size_t j = from_col; j < cols_; ++j)
        if (s[j]) d[j] = static_cast<Scalar>((d[j] + static_cast<std::uint64_t>(c) * s[j]) % p_);
}

void Matrix::scale_row(std::size_t i, Scalar c) {
    if (p_ == 2) {
        if (!(c & 1u)) std::fill_n(row_words(i), wpr_, 0);
        return;
    }
    Scalar* d = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) d[j] = static_cast<Scalar>(static_cast<std::uint64_t>(d[j]) * c % p_);
}

void Matrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    if (p_ == 2) {
        std::swap_ranges(row_words(i), row_words(i) + wpr_, row_words(j));
    } else {
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>(j * cols_));
    }
}

Vector Matrix::apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw std::invalid_argument("apply: length mismatch");
    Vector out(rows_, 0);
    if (p_ == 2) {
        std::vector<std::uint64_t> packed(wpr_, 0);
        for (std::size_t j = 0; j < cols_; ++j)
            if (v[j] & 1u) packed[j / 64] |= std::uint64_t{1} << (j % 64);
        for (std::size_t i = 0; i < rows_; ++i) {
            const std::uint64_t* w = row_words(i);
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < wpr_; ++k) acc ^= w[k] & packed[k];
            out[i] = static_cast<Scalar>(std::popcount(acc) & 1);
        }
        return out;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        const Scalar* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (r[j] && v[j]) acc = (acc + static_cast<std::uint64_t>(r[j]) * v[j]) % p_;
        }
        out[i] = static_cast<Scalar>(acc);
    }
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_ || p_ != other.p_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix out(p_, rows_, other.cols_);
    if (p_ == 2) {
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint64_t* o = out.row_words(i);
            for (std::size_t k = 0; k < cols_; ++k) {
                if (!get(i, k)) continue;
                const std::uint64_t* s = other.row_words(k);
                for (std::size_t w = 0; w < out.wpr_; ++w) o[w] ^= s[w];
            }
        }
        return out;
    }
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar a = data_[i * cols_ + k];
            if (!a) continue;
            const Scalar* s = other.data_.data() + k * other.cols_;
            Scalar* o = out.data_.data() + i * out.cols_;
            for (std::size_t j = 0; j < other.cols_; ++j)
                if (s[j]) o[j] = static_cast<Scalar>((o[j] + static_cast<std::uint64_t>(a) * s[j]) % p_);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_ || p_ != other.p_)
        throw std::invalid_argument("matrix sum shape mismatch");
    Matrix out = *this;
    if (p_ == 2) {
        for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] ^= other.bits_[k];
    } else {
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = (data_[k] + other.data_[k]) % p_;
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Scalar v = get(i, j);
            if (v) out.set(j, i, v);
        }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
    Matrix out(p_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (p_ == 2) std::copy_n(row_words(idx[i]), wpr_, out.row_words(i));
        else std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[i] * cols_), cols_,
                         out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
    Matrix out(p_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const Scalar v = get(i, idx[j]);
            if (v) out.set(i, j, v);
        }
    return out;
}

void Matrix::append_row(std::span<const Scalar> v) {
    if (v.size() != cols_) throw std::invalid_argument("append_row: length mismatch");
    ++rows_;
    if (p_ == 2) bits_.resize(rows_ * wpr_, 0);
    else data_.resize(rows_ * cols_, 0);
    set_row(rows_ - 1, v);
}

bool Matrix::operator==(const Matrix& other) const {
    return p_ == other.p_ && rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_ &&
           data_ == other.data_;
}

namespace {

constexpr std::size_t kParallelThreshold = 1u << 16;

template <bool Parallel>
RrefResult rref_impl(Matrix m, std::size_t col_limit) {
    const PrimeField f(m.prime());
    const std::size_t rows = m.rows();
    const std::size_t limit = std::min(col_limit, m.cols());
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    const bool use_omp = Parallel && rows * m.cols() >= kParallelThreshold;
    for (std::size_t c = 0; c < limit && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (m.get(i, c)) { piv = i; break; }
        if (piv == rows) continue;
        m.swap_rows(piv, r);
        const Scalar lead = m.get(r, c);
        if (lead != 1) m.scale_row(r, f.inv(lead));
        const auto n = static_cast<std::ptrdiff_t>(rows);
        if (use_omp) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                if (ui == r) continue;
                const Scalar a = m.get(ui, c);
                if (a) m.add_scaled_row(ui, r, f.neg(a), c);
            }
        } else {
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == r) continue;
                const Scalar a = m.get(i, c);
                if (a) m.add_scaled_row(i, r, f.neg(a), c);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

}  // namespace

RrefResult rref_serial(Matrix m, std::size_t col_limit) { return rref_impl<false>(std::move(m), col_limit); }
RrefResult rref_parallel(Matrix m, std::size_t col_limit) { return rref_impl<true>(std::move(m), col_limit); }
RrefResult rref(Matrix m, std::size_t col_limit) { return rref_parallel(std::move(m), col_limit); }

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

Vector zero_vector(std::size_t n) { return Vector(n, 0); }

bool is_zero(std::span<const Scalar> v) {
    return std::all_of(v.begin(), v.end(), [](Scalar x) { return x == 0; });
}

void axpy(const PrimeField& f, Vector& y, Scalar a, std::span<const Scalar> x) {
    if (a == 0) return;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) y[i] = f.add(y[i], f.mul(a, x[i]));
}

Vector scaled(const PrimeField& f, std::span<const Scalar> x, Scalar a) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f.mul(a, x[i]);
    return out;
}

Subspace::Subspace(std::uint32_t p, std::size_t ambient_dim) : basis_(p, 0, ambient_dim) {}

Subspace Subspace::span(std::uint32_t p, std::size_t ambient_dim, const std::vector<Vector>& vectors) {
    Subspace s(p, ambient_dim);
    if (vectors.empty()) return s;
    auto res = rref(Matrix::from_rows(p, ambient_dim, vectors));
    std::vector<std::size_t> keep(res.rank());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    s.basis_ = res.reduced.select_rows(keep);
    s.pivots_ = std::move(res.pivots);
    return s;
}

Subspace Subspace::full(std::uint32_t p, std::size_t ambient_dim) {
    Subspace s(p, ambient_dim);
    s.basis_ = Matrix::identity(p, ambient_dim);
    s.pivots_.resize(ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) s.pivots_[i] = i;
    return s;
}

std::vector<Vector> Subspace::basis_vectors() const {
    std::vector<Vector> out;
    out.reserve(dim());
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
    return out;
}

Vector Subspace::reduce(std::span<const Scalar> v) const {
    if (v.size() != ambient_dim()) throw std::invalid_argument("reduce: length mismatch");
    if (prime() == 2) {
        const std::size_t wpr = basis_.words_per_row();
        std::vector<std::uint64_t> w(wpr, 0);
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] & 1u) w[j / 64] |= std::uint64_t{1} << (j % 64);
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            const std::size_t c = pivots_[i];
            if (!((w[c / 64] >> (c % 64)) & 1u)) continue;
            const std::uint64_t* b = basis_.row_words(i);
            for (std::size_t k = c / 64; k < wpr; ++k) w[k] ^= b[k];
        }
        Vector out(v.size(), 0);
        for (std::size_t j = 0; j < v.size(); ++j) out[j] = (w[j / 64] >> (j % 64)) & 1u;
        return out;
    }
    const PrimeField f(prime());
    Vector w(v.begin(), v.end());
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
        const Scalar a = w[pivots_[i]];
        if (a == 0) continue;
        const Vector b = basis_.row(i);
        axpy(f, w, f.neg(a), b);
    }
    return w;
}

bool Subspace::contains(std::span<const Scalar> v) const { return is_zero(reduce(v)); }

namespace {

// Rows of m reduced against an RREF subspace basis (pivot columns cleared).
void reduce_rows(Matrix& m, const Matrix& basis, const std::vector<std::size_t>& pivots) {
    const PrimeField f(m.prime());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.prime() == 2) {
            std::uint64_t* w = m.row_words(r);
            for (std::size_t i = 0; i < pivots.size(); ++i) {
                const std::size_t c = pivots[i];
                if (!((w[c / 64] >> (c % 64)) & 1u)) continue;
                const std::uint64_t* b = basis.row_words(i);
                for (std::size_t k = c / 64; k < m.words_per_row(); ++k) w[k] ^= b[k];
            }
            continue;
        }
        Vector v = m.row(r);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const Scalar a = v[pivots[i]];
            if (a) axpy(f, v, f.neg(a), basis.row(i));
        }
        m.set_row(r, v);
    }
}

}  // namespace

bool Subspace::contains(const Subspace& other) const {
    if (other.dim() == 0) return true;
    Matrix rest = other.basis_;
    reduce_rows(rest, basis_, pivots_);
    return rest.is_zero();
}

Subspace Subspace::sum(const Subspace& other) const {
    auto vs = basis_vectors();
    auto ws = other.basis_vectors();
    vs.insert(vs.end(), ws.begin(), ws.end());
    return span(prime(), ambient_dim(), vs);
}

Subspace Subspace::intersect(const Subspace& other) const {
    // kernel of [A^T | -B^T] gives the coefficient pairs
    const std::size_t a = dim(), b = other.dim(), n = ambient_dim();
    if (a == 0 || b == 0) return Subspace(prime(), n);
    const PrimeField f(prime());
    Matrix m(prime(), n, a + b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(j, i, basis_.get(i, j));
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(j, a + i, f.neg(other.basis_.get(i, j)));
    const Subspace k = kernel(m);
    std::vector<Vector> vs;
    for (std::size_t r = 0; r < k.dim(); ++r) {
        Vector coeffs = k.basis().row(r);
        Vector v(n, 0);
        for (std::size_t i = 0; i < a; ++i)
            if (coeffs[i]) axpy(f, v, coeffs[i], basis_.row(i));
        vs.push_back(std::move(v));
    }
    return span(prime(), n, vs);
}

Subspace kernel(const Matrix& m) {
    const PrimeField f(m.prime());
    const auto res = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : res.pivots) is_pivot[c] = true;
    std::vector<Vector> vs;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < res.pivots.size(); ++i) {
            const Scalar a = res.reduced.get(i, free);
            if (a) v[res.pivots[i]] = f.neg(a);
        }
        vs.push_back(std::move(v));
    }
    return Subspace::span(m.prime(), m.cols(), vs);
}

Subspace image(const Matrix& m) {
    Subspace s(m.prime(), m.rows());
    if (m.cols() == 0 || m.rows() == 0) return s;
    std::vector<Vector> cols;
    cols.reserve(m.cols());
    const Matrix t = m.transpose();
    for (std::size_t j = 0; j < t.rows(); ++j) cols.push_back(t.row(j));
    return Subspace::span(m.prime(), m.rows(), cols);
}

SolveResult solve(const Matrix& m, std::span<const Scalar> b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
    Matrix aug(m.prime(), m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Scalar v = m.get(i, j);
            if (v) aug.set(i, j, v);
        }
        aug.set(i, m.cols(), b[i] % m.prime());
    }
    const auto res = rref(std::move(aug), m.cols());
    SolveResult out{std::nullopt, kernel(m)};
    for (std::size_t i = res.rank(); i < m.rows(); ++i)
        if (res.reduced.get(i, m.cols())) return out;
    Vector x(m.cols(), 0);
    for (std::size_t i = 0; i < res.rank(); ++i) x[res.pivots[i]] = res.reduced.get(i, m.cols());
    out.particular = std::move(x);
    return out;
}

std::vector<Vector> quotient_basis(const Subspace& ambient, const Subspace& sub) {
    if (!ambient.contains(sub)) throw ContainmentError("quotient_basis: subspace is not contained in ambient");
    // Greedy in ambient-basis order: keep a basis vector when it is independent of sub and of the
    // vectors kept so far. Residues mod sub are formed in one pass.
    const PrimeField f(ambient.prime());
    Matrix residues = ambient.basis();
    reduce_rows(residues, sub.basis(), sub.pivots());
    std::vector<Vector> reps;
    std::vector<Vector> echelon;
    std::vector<std::size_t> echelon_pivots;
    for (std::size_t i = 0; i < residues.rows(); ++i) {
        if (residues.row_is_zero(i)) continue;
        Vector v = residues.row(i);
        for (std::size_t k = 0; k < echelon.size(); ++k) {
            const Scalar a = v[echelon_pivots[k]];
            if (a) axpy(f, v, f.neg(a), echelon[k]);
        }
        auto nz = std::find_if(v.begin(), v.end(), [](Scalar x) { return x != 0; });
        if (nz == v.end()) continue;
        const std::size_t pc = static_cast<std::size_t>(nz - v.begin());
        v = scaled(f, v, f.inv(v[pc]));
        echelon.push_back(std::move(v));
        echelon_pivots.push_back(pc);
        reps.push_back(ambient.basis().row(i));
    }
    return reps;
}

Coordinates::Coordinates(std::uint32_t p, std::size_t ambient_dim, const std::vector<Vector>& generators)
    : ambient_(ambient_dim), count_(generators.size()), echelon_(p, 0, 0) {
    Matrix aug(p, count_, ambient_ + count_);
    for (std::size_t i = 0; i < count_; ++i) {
        if (generators[i].size() != ambient_) throw std::invalid_argument("Coordinates: generator length mismatch");
        for (std::size_t j = 0; j < ambient_; ++j)
            if (generators[i][j]) aug.set(i, j, generators[i][j]);
        aug.set(i, ambient_ + i, 1);
    }
    auto res = rref(std::move(aug), ambient_);
    if (res.rank() != count_) throw std::invalid_argument("Coordinates: generators are linearly dependent");
    echelon_ = std::move(res.reduced);
    pivots_ = std::move(res.pivots);
}

std::optional<Vector> Coordinates::express(std::span<const Scalar> v) const {
    if (v.size() != ambient_) throw std::invalid_argument("express: length mismatch");
    const PrimeField f(echelon_.prime());
    Vector w(v.begin(), v.end());
    Vector coef(count_, 0);
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
        const Scalar a = w[pivots_[i]];
        if (a == 0) continue;
        const Vector row = echelon_.row(i);
        const Scalar na = f.neg(a);
        for (std::size_t j = 0; j < ambient_; ++j)
            if (row[j]) w[j] = f.add(w[j], f.mul(na, row[j]));
        for (std::size_t k = 0; k < count_; ++k)
            if (row[ambient_ + k]) coef[k] = f.add(coef[k], f.mul(a, row[ambient_ + k]));
    }
    if (!is_zero(w)) return std::nullopt;
    return coef;
}

namespace {
std::vector<Vector> concat(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    std::vector<Vector> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}
}  // namespace

Quotient::Quotient(const Subspace& sub, std::vector<Vector> reps)
    : sub_(sub), reps_(std::move(reps)),
      coords_(sub.prime(), sub.ambient_dim(), concat(reps_, sub.basis_vectors())) {}

std::optional<Vector> Quotient::coords(std::span<const Scalar> v) const {
    auto c = coords_.express(v);
    if (!c) return std::nullopt;
    c->resize(reps_.size());
    return c;
}

Vector Quotient::lift(std::span<const Scalar> coords) const {
    const PrimeField f(sub_.prime());
    Vector v(sub_.ambient_dim(), 0);
    for (std::size_t i = 0; i < coords.size(); ++i) axpy(f, v, coords[i], reps_[i]);
    return v;
}

}  // namespace filtss

namespace filtss {

Vector IncrementalBasis::reduce(std::span<const Scalar> v) const {
    if (v.size() != ambient_) throw std::invalid_argument("vector length does not match the ambient space");
    Vector out(v.begin(), v.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Scalar c = out[pivots_[k]];
        if (c) axpy(field_, out, field_.neg(c), rows_[k]);
    }
    return out;
}

bool IncrementalBasis::insert(std::span<const Scalar> v) {
    Vector r = reduce(v);
    std::size_t piv = 0;
    while (piv < r.size() && r[piv] == 0) ++piv;
    if (piv == r.size()) return false;
    const Scalar inv = field_.inv(r[piv]);
    for (auto& e : r) e = field_.mul(e, inv);
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    return true;
}

}  // namespace filtss
