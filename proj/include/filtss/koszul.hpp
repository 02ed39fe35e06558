#pragma once

#include "filtss/dga.hpp"
#include "filtss/filtered.hpp"

#include <map>
#include <vector>

namespace filtss {

// Words of the bar construction are taken up to a weight bound. Every element of the
// augmentation ideal must have negative degree and positive weight, so each weight slice of
// the bar complex is finite and exact.
struct BarBounds {
    int s_max = 4;
    int weight_max = 8;
};

using BarWord = std::vector<std::size_t>;  // algebra basis indices, all in IU

// Reduced bar construction B(R, U, R) of a connected augmented algebra.
class BarComplex {
public:
    BarComplex(const DGAlgebra& u, BarBounds bounds);

    const DGAlgebra& algebra() const { return *u_; }
    const BarBounds& bounds() const { return bounds_; }
    bool has_internal_differential() const { return internal_; }

    // words of length s whose letters add up to g
    const std::vector<BarWord>& words(int s, const Grade& g) const;
    std::size_t dim(int s, const Grade& g) const { return words(s, g).size(); }
    // internal grades carrying words of length s
    std::vector<Grade> grades(int s) const;
    int max_length() const { return max_len_; }

    // [a_1|...|a_s] -> sum of merges a_i a_{i+1}; (s, g) -> (s-1, g)
    Matrix bar_d(int s, const Grade& g) const;
    // d applied letterwise; (s, g) -> (s, g.below())
    Matrix internal_d(int s, const Grade& g) const;
    // total complex of one weight slice, graded by n = s + t
    GradedComplex total(int weight) const;

private:
    Scalar letter_sign(const BarWord& w, std::size_t upto) const;
    std::size_t index_of(int s, const Grade& g, const BarWord& w) const;

    const DGAlgebra* u_;
    BarBounds bounds_;
    bool internal_ = false;
    int max_len_ = 0;
    std::vector<std::size_t> ideal_;
    std::map<std::pair<int, Grade>, std::vector<BarWord>> words_;
    std::map<std::pair<int, Grade>, std::map<BarWord, std::size_t>> lookup_;
};

// Total complex of one weight slice, filtered by bar length (level -s, so F_n holds s <= -n).
// Its spectral sequence is the Eilenberg-Moore one.
FilteredDGA bar_filtration(const BarComplex& bar, int weight);

// Throws ValidationError unless u is connected, augmented and positively weighted as above.
void check_connected(const DGAlgebra& u);

// The same algebra with the differential dropped.
DGAlgebra underlying_graded(const DGAlgebra& u);

struct TorCell {
    int s = 0;
    Grade g;
    std::size_t dim = 0;
};

// Tor_s at internal grade g from the bar differential (zero internal differential required).
HomologyGroup tor(const BarComplex& bar, int s, const Grade& g);
// Homology of the total complex at n = s + t.
HomologyGroup derived_tor(const BarComplex& bar, int n, int weight);

struct KoszulReport {
    bool koszul = true;
    BarBounds bounds;
    // classical: (s, internal grade); derived: s holds n and g.weight the weight slice
    std::vector<TorCell> offending;
    std::vector<TorCell> nonzero;
};

KoszulReport is_koszul_classical(const DGAlgebra& u, BarBounds bounds);
KoszulReport is_koszul_derived(const DGAlgebra& u, BarBounds bounds);

// Minimal free resolution P_s -> ... -> P_0 = U -> R of a graded algebra (zero differential),
// computed one grade at a time in increasing weight.
class MinimalResolution {
public:
    MinimalResolution(const DGAlgebra& u, BarBounds bounds);

    const DGAlgebra& algebra() const { return *u_; }
    const BarBounds& bounds() const { return bounds_; }
    // generator grades of P_s, s = 0..s_max
    const std::vector<Grade>& generators(int s) const { return gens_.at(static_cast<std::size_t>(s)); }
    std::size_t tor_dim(int s, const Grade& g) const;
    // (algebra index, generator) pairs spanning P_s at grade g
    std::vector<std::pair<std::size_t, std::size_t>> module_basis(int s, const Grade& g) const;
    // P_s(g) -> P_{s-1}(g); for s = 0 the augmentation onto R (one row at grade 0)
    Matrix boundary(int s, const Grade& g) const;
    // grades with weight <= weight_max where P_s is nonzero
    std::vector<Grade> grades(int s) const;
    // boundary of generator k of P_s, over module_basis(s-1, its grade)
    const Vector& generator_boundary(int s, std::size_t k) const {
        return bounds_of_.at(static_cast<std::size_t>(s)).at(k);
    }

private:
    const DGAlgebra* u_;
    BarBounds bounds_;
    std::vector<std::vector<Grade>> gens_;
    std::vector<std::vector<Vector>> bounds_of_;
};

// sigma(x) = class of y (x) 1 for any lift d y = x, as coordinates over the generators of
// P_1 in the grade of x. Two different lifts are compared; disagreement throws logic_error.
Vector suspension_classical(const MinimalResolution& res, const Chain& x);

// Span of products a b of augmentation-ideal elements in grade g.
Subspace decomposables(const DGAlgebra& u, const Grade& g);

}  // namespace filtss
