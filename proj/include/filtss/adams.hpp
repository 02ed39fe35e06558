#pragma once

#include "filtss/dga.hpp"
#include "filtss/filtered.hpp"
#include "filtss/massey.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>

namespace filtss {

class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// The mod 2 dual Steenrod algebra F_2[xi_1, xi_2, ...], deg xi_i = 2^i - 1, spanned by
// monomials of degree <= bound, with the Milnor coproduct.
class TruncatedDualSteenrod {
public:
    // a nonzero seed shuffles the monomial basis (the unit stays first)
    explicit TruncatedDualSteenrod(int bound, unsigned permutation_seed = 0);

    int bound() const { return bound_; }
    std::size_t size() const { return exps_.size(); }
    std::size_t unit() const { return 0; }
    const std::vector<int>& exponents(std::size_t i) const { return exps_.at(i); }
    int degree(std::size_t i) const { return degree_.at(i); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    std::optional<std::size_t> index_of(const std::vector<int>& exps) const;
    std::size_t index_of_xi(int i, int power = 1) const;

    // product of monomials; nullopt when it overflows the bound (and the overflow is recorded)
    std::optional<std::size_t> multiply(std::size_t a, std::size_t b) const;
    bool overflowed() const { return overflow_; }

    // full coproduct as a list of (left, right) terms, each with coefficient 1
    const std::vector<std::pair<std::size_t, std::size_t>>& coproduct(std::size_t i) const { return psi_.at(i); }

    // throw ValidationError on failure
    void check_coassociative() const;
    void check_counit() const;

private:
    int bound_;
    std::vector<std::vector<int>> exps_;
    std::vector<int> degree_;
    std::vector<std::string> names_;
    std::map<std::vector<int>, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> psi_;
    mutable bool overflow_ = false;
};

// Cobar construction on the reduced coalgebra: words [a_1|...|a_s] in degree -s and weight
// t = sum deg a_i, t <= bound, product by concatenation.
class CobarDGA {
public:
    CobarDGA(std::shared_ptr<const TruncatedDualSteenrod> coalgebra, int bound);

    const TruncatedDualSteenrod& coalgebra() const { return *coalg_; }
    const DGAlgebra& algebra() const { return *alg_; }
    int bound() const { return bound_; }
    static Grade grade(int s, int t) { return {-s, t}; }

    const std::vector<std::size_t>& word(std::size_t i) const { return words_->at(i); }
    std::optional<std::size_t> index_of(const std::vector<std::size_t>& w) const;
    // the cobar element [xi_1^{a}|...], letters given as exponent vectors
    Chain word_chain(const std::vector<std::vector<int>>& letters) const;
    // number of words per (s, t)
    std::map<std::pair<int, int>, std::size_t> dims() const;

    // d^2 = 0 on every basis element (sparse), ValidationError otherwise
    void check_d_squared() const;

private:
    std::shared_ptr<const TruncatedDualSteenrod> coalg_;
    int bound_;
    std::shared_ptr<std::vector<std::vector<std::size_t>>> words_;
    std::shared_ptr<std::map<std::vector<std::size_t>, std::size_t>> lookup_;
    std::shared_ptr<std::map<std::size_t, SparseVec>> diff_;
    std::shared_ptr<DGAlgebra> alg_;
};

struct CobarLimits {
    int max_bound = 16;
};

// Validated cobar for t <= bound. Throws CapacityError above the limit.
CobarDGA build_cobar(int bound, unsigned permutation_seed = 0, CobarLimits limits = {});

struct NamedClass {
    std::string name;
    int s = 0;
    int t = 0;
    Vector coords;
};

struct ChartRange {
    int s_max = -1;     // default: the bound
    int stem_max = -1;  // default: no limit
};

struct ExtChart {
    int bound = 0;
    std::map<std::pair<int, int>, std::size_t> dims;  // (s, t), nonzero cells only
    std::vector<NamedClass> named;
    std::size_t dim(int s, int t) const;
    const NamedClass* find(const std::string& name) const;
};

// Ext^{s,t} for t <= bound. h_i is named at (1, 2^i) and c_0 at (3, 11) when that cell is
// one-dimensional.
ExtChart ext_chart(const CobarDGA& cobar, ChartRange range = {}, HomologyCache* cache = nullptr);

// the h_i class and the cycle representing it
Chain h_cycle(const CobarDGA& cobar, int i);

struct C0Verdict {
    bool h0_h22_zero = false;
    bool h22_h1_zero = false;
    BracketResult bracket;
    Vector c0;  // coordinates at (3, 11)
    bool contains_c0 = false;
    bool holds() const { return h0_h22_zero && h22_h1_zero && bracket.defined && contains_c0; }
};

// <h_0, h_2^2, h_1> on the cobar; needs bound >= 12.
C0Verdict verify_c0_bracket(const CobarDGA& cobar, HomologyCache* cache = nullptr);

}  // namespace filtss
