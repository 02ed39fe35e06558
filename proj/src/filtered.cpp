#include "filtss/filtered.hpp"

#include <algorithm>

namespace filtss {

FilteredDGA::FilteredDGA(DGAlgebra algebra, std::vector<int> levels, std::size_t validation_limit)
    : algebra_(std::move(algebra)), levels_(std::move(levels)) {
    if (levels_.size() != algebra_.size()) throw ValidationError("one filtration level per basis element is required");
    if (!levels_.empty()) {
        n_min_ = *std::min_element(levels_.begin(), levels_.end());
        n_max_ = *std::max_element(levels_.begin(), levels_.end());
    }
    for (const auto& g : grades()) {
        auto& bl = block_levels_[g];
        for (std::size_t i : algebra_.block(g)) bl.push_back(levels_[i]);
    }
    for (const auto& g : grades()) {
        const Matrix m = d(g);
        const auto& src = block_levels(g);
        const auto& tgt = block_levels(g.below());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (m.get(r, c) && tgt[r] < src[c])
                    throw ValidationError("d lowers filtration on " + algebra_.element(algebra_.block(g)[c]).name);
    }
    if (!algebra_.is_multiplicative()) return;
    if (levels_[*algebra_.unit()] != 0) throw ValidationError("the unit must have filtration level 0");
    const std::size_t n = algebra_.size();
    const std::size_t step = n <= validation_limit ? 1 : n / validation_limit + 1;
    for (std::size_t i = 0; i < n; i += step)
        for (std::size_t j = 0; j < n; j += step)
            for (const auto& [k, c] : algebra_.multiply_basis(i, j))
                if (c % prime() && levels_[k] < levels_[i] + levels_[j])
                    throw ValidationError("product " + algebra_.element(i).name + "*" + algebra_.element(j).name +
                                          " drops filtration");
}

const std::vector<int>& FilteredDGA::block_levels(const Grade& g) const {
    static const std::vector<int> empty;
    auto it = block_levels_.find(g);
    return it == block_levels_.end() ? empty : it->second;
}

std::vector<std::size_t> FilteredDGA::local_between(const Grade& g, int lo, int hi) const {
    std::vector<std::size_t> out;
    const auto& bl = block_levels(g);
    for (std::size_t k = 0; k < bl.size(); ++k)
        if (bl[k] >= lo && bl[k] < hi) out.push_back(k);
    return out;
}

std::vector<int> FilteredDGA::levels_in(const Grade& g) const {
    std::vector<int> out = block_levels(g);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Vector FiltrationQuotient::restrict(const Grade& g, std::span<const Scalar> v) const {
    auto it = indices.find(g);
    if (it == indices.end()) return {};
    Vector out;
    out.reserve(it->second.size());
    for (std::size_t k : it->second) out.push_back(v[k]);
    return out;
}

Vector FiltrationQuotient::extend(const Grade& g, std::span<const Scalar> v, std::size_t block_dim) const {
    Vector out(block_dim, 0);
    auto it = indices.find(g);
    if (it == indices.end()) return out;
    for (std::size_t k = 0; k < it->second.size(); ++k) out[it->second[k]] = v[k];
    return out;
}

FiltrationQuotient quotient(const FilteredDGA& x, int n, int m) {
    if (n >= m) throw RangeError("quotient F_n/F_m needs n < m");
    FiltrationQuotient q{n, m, {}, {}};
    std::map<Grade, std::size_t> dims;
    for (const auto& g : x.grades()) {
        auto idx = x.local_between(g, n, m);
        if (idx.empty()) continue;
        dims[g] = idx.size();
        q.indices.emplace(g, std::move(idx));
    }
    std::map<Grade, Matrix> d;
    for (const auto& [g, idx] : q.indices) {
        auto below = q.indices.find(g.below());
        if (below == q.indices.end()) continue;
        d.emplace(g, x.d(g).select_rows(below->second).select_cols(idx));
    }
    q.complex = GradedComplex(x.prime(), std::move(dims), std::move(d));
    return q;
}

Matrix induced_map(const FiltrationQuotient& from, const FiltrationQuotient& to, const Grade& g) {
    if (to.n > from.n || to.m > from.m) throw RangeError("no induced map between these quotients");
    const auto fi = from.indices.find(g);
    const auto ti = to.indices.find(g);
    const std::size_t cols = fi == from.indices.end() ? 0 : fi->second.size();
    const std::size_t rows = ti == to.indices.end() ? 0 : ti->second.size();
    Matrix out(from.complex.prime(), rows, cols);
    if (!rows || !cols) return out;
    for (std::size_t c = 0; c < cols; ++c) {
        auto pos = std::lower_bound(ti->second.begin(), ti->second.end(), fi->second[c]);
        if (pos != ti->second.end() && *pos == fi->second[c])
            out.set(static_cast<std::size_t>(pos - ti->second.begin()), c, 1);
    }
    return out;
}

namespace {

// vectors of block g supported on the given local indices, as block vectors
std::vector<Vector> embed(const std::vector<Vector>& vs, const std::vector<std::size_t>& idx, std::size_t dim) {
    std::vector<Vector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        Vector w(dim, 0);
        for (std::size_t k = 0; k < idx.size(); ++k) w[idx[k]] = v[k];
        out.push_back(std::move(w));
    }
    return out;
}

// cycles of F_n in block g, as block vectors
std::vector<Vector> filtered_cycles(const FilteredDGA& x, int n, const Grade& g) {
    const auto cols = x.local_between(g, n);
    return embed(kernel(x.d(g).select_cols(cols)).basis_vectors(), cols, x.block_dim(g));
}

// d(F_n) landing in block g
Subspace filtered_boundaries(const FilteredDGA& x, int n, const Grade& g) {
    const auto cols = x.local_between(g.above(), n);
    return image(x.d(g.above()).select_cols(cols));
}

}  // namespace

SustainedGroup sustained_homotopy(const FilteredDGA& x, int k, int n, const Grade& g) {
    if (k < 0) throw RangeError("sustained homotopy needs k >= 0");
    const Subspace b = filtered_boundaries(x, n - k, g);
    IncrementalBasis span(x.prime(), x.block_dim(g));
    for (const auto& v : b.basis_vectors()) span.insert(v);
    SustainedGroup out;
    for (auto& z : filtered_cycles(x, n, g))
        if (span.insert(z)) out.reps.push_back(std::move(z));
    return out;
}

std::size_t sustained_homotopy_coker_dim(const FilteredDGA& x, int k, int n, const Grade& g) {
    if (k < 0) throw RangeError("sustained homotopy needs k >= 0");
    const std::size_t z = filtered_cycles(x, n, g).size();
    const std::size_t b = filtered_boundaries(x, n, g).dim();
    // relative cycles of F_{n-k}/F_n one degree up, and their boundaries in F_n
    const Grade up = g.above();
    const auto cols = x.local_between(up, n - k);
    const auto low_rows = x.local_between(g, INT_MIN, n);
    const Matrix dup = x.d(up).select_cols(cols);
    const auto rel = kernel(dup.select_rows(low_rows)).basis_vectors();
    std::vector<Vector> images;
    for (const auto& v : rel) images.push_back(dup.apply(v));
    const std::size_t delta_plus_b = Subspace::span(x.prime(), x.block_dim(g), images).dim();
    return z - b - (delta_plus_b - b);
}

std::map<int, GradedComplex> associated_graded(const FilteredDGA& x) {
    std::map<int, GradedComplex> out;
    for (int n = x.n_min(); n <= x.n_max(); ++n) out.emplace(n, quotient(x, n, n + 1).complex);
    return out;
}

FilteredDGA inverse_filtration(const GradedComplex& c) {
    std::vector<BasisElement> basis;
    std::map<Grade, std::size_t> first;
    for (const auto& [g, n] : c.dims()) {
        first[g] = basis.size();
        for (std::size_t i = 0; i < n; ++i)
            basis.push_back({"e" + to_string(g) + "_" + std::to_string(i), g});
    }
    std::map<std::size_t, SparseVec> diff;
    for (const auto& [g, n] : c.dims()) {
        const Matrix m = c.d(g);
        for (std::size_t col = 0; col < m.cols(); ++col) {
            SparseVec img;
            for (std::size_t r = 0; r < m.rows(); ++r)
                if (Scalar v = m.get(r, col)) img.emplace_back(first[g.below()] + r, v);
            if (!img.empty()) diff.emplace(first[g] + col, std::move(img));
        }
    }
    std::vector<int> levels;
    for (const auto& e : basis) levels.push_back(-e.grade.degree);
    return FilteredDGA(DGAlgebra(c.prime(), std::move(basis), diff, std::nullopt, std::nullopt), std::move(levels));
}

FilteredDGA inverse_filtration(const DGAlgebra& u) {
    std::vector<int> levels;
    for (const auto& e : u.basis()) levels.push_back(-e.grade.degree);
    return FilteredDGA(u, std::move(levels));
}

FiltrationQuotient InverseFiltered::stage(int n, int i) const {
    const int lo = std::max(i, n);
    return quotient(*u_, lo, std::max(lo + 1, u_->n_max() + 1));
}

FiltrationQuotient InverseFiltered::graded_piece(int n, int i) const {
    const int lo = std::max(i, n), hi = std::max(i, n + 1);
    if (lo < hi) return quotient(*u_, lo, hi);
    return {lo, lo, GradedComplex(u_->prime(), {}, {}), {}};
}

}  // namespace filtss
