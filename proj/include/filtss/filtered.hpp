#pragma once

#include "filtss/dga.hpp"

#include <climits>

namespace filtss {

// Decreasing filtration by an adapted basis: F_n = span of basis elements of level >= n.
class FilteredDGA {
public:
    FilteredDGA(DGAlgebra algebra, std::vector<int> levels, std::size_t validation_limit = 200);

    const DGAlgebra& algebra() const { return algebra_; }
    std::uint32_t prime() const { return algebra_.prime(); }
    int level(std::size_t i) const { return levels_[i]; }
    const std::vector<int>& levels() const { return levels_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    int width() const { return n_max_ - n_min_; }
    bool is_multiplicative() const { return algebra_.is_multiplicative(); }

    std::vector<Grade> grades() const { return algebra_.complex().grades(); }
    std::size_t block_dim(const Grade& g) const { return algebra_.block_dim(g); }
    // level of each element of block g, in block order
    const std::vector<int>& block_levels(const Grade& g) const;
    // local indices of block g with lo <= level < hi
    std::vector<std::size_t> local_between(const Grade& g, int lo, int hi = INT_MAX) const;
    // levels present in block g
    std::vector<int> levels_in(const Grade& g) const;
    Matrix d(const Grade& g) const { return algebra_.complex().d(g); }

private:
    DGAlgebra algebra_;
    std::vector<int> levels_;
    std::map<Grade, std::vector<int>> block_levels_;
    int n_min_ = 0;
    int n_max_ = -1;
};

// F_n / F_m presented on the basis elements with n <= level < m.
struct FiltrationQuotient {
    int n;
    int m;
    GradedComplex complex;
    std::map<Grade, std::vector<std::size_t>> indices;  // local indices in the parent block

    // parent block vector (of F_n) -> quotient coordinates
    Vector restrict(const Grade& g, std::span<const Scalar> v) const;
    // quotient coordinates -> parent block vector
    Vector extend(const Grade& g, std::span<const Scalar> v, std::size_t block_dim) const;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

FiltrationQuotient quotient(const FilteredDGA& x, int n, int m);

// Map F_n/F_m -> F_n'/F_m' induced by inclusion (n' <= n, m' <= m).
Matrix induced_map(const FiltrationQuotient& from, const FiltrationQuotient& to, const Grade& g);

// im(H_t(F_n) -> H_t(F_{n-k})), with cycle representatives in F_n (parent block coordinates)
struct SustainedGroup {
    std::size_t dim() const { return reps.size(); }
    std::vector<Vector> reps;
};

SustainedGroup sustained_homotopy(const FilteredDGA& x, int k, int n, const Grade& g);
// dim H_t(F_n) - rank(H_{t+1}(F_{n-k}/F_n) -> H_t(F_n))
std::size_t sustained_homotopy_coker_dim(const FilteredDGA& x, int k, int n, const Grade& g);

std::map<int, GradedComplex> associated_graded(const FilteredDGA& x);

// Level of an element in degree i is -i, so F_n holds the degrees <= -n.
FilteredDGA inverse_filtration(const GradedComplex& c);
FilteredDGA inverse_filtration(const DGAlgebra& u);

// Second filtration of a filtered object: stage n is the filtered object i -> U_{max(i,n)}.
class InverseFiltered {
public:
    explicit InverseFiltered(const FilteredDGA& u) : u_(&u) {}
    const FilteredDGA& base() const { return *u_; }
    // the subcomplex U_{max(i,n)}
    FiltrationQuotient stage(int n, int i) const;
    // stage(n, i) / stage(n+1, i) = U_{max(i,n)} / U_{max(i,n+1)}
    FiltrationQuotient graded_piece(int n, int i) const;

private:
    const FilteredDGA* u_;
};

}  // namespace filtss
