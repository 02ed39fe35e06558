#pragma once

#include "filtss/exactla.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace filtss {

// Homological degree plus an auxiliary weight that d preserves and products add.
struct Grade {
    int degree = 0;
    int weight = 0;
    auto operator<=>(const Grade&) const = default;
    Grade below() const { return {degree - 1, weight}; }
    Grade above() const { return {degree + 1, weight}; }
    Grade operator+(const Grade& o) const { return {degree + o.degree, weight + o.weight}; }
};

std::string to_string(const Grade& g);

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GradedComplex {
public:
    GradedComplex() = default;
    // differential.at(g) maps the g block to the g.below() block (rows = dim of target)
    GradedComplex(std::uint32_t p, std::map<Grade, std::size_t> dims, std::map<Grade, Matrix> differential);

    std::uint32_t prime() const { return p_; }
    const std::map<Grade, std::size_t>& dims() const { return dims_; }
    std::size_t dim(const Grade& g) const;
    std::vector<Grade> grades() const;
    // d out of the g block (zero matrix if nothing is stored)
    Matrix d(const Grade& g) const;
    std::pair<int, int> degree_bounds() const;

private:
    std::uint32_t p_ = 2;
    std::map<Grade, std::size_t> dims_;
    std::map<Grade, Matrix> d_;
};

class HomologyGroup {
public:
    HomologyGroup(Subspace cycles, Subspace boundaries);
    std::size_t dim() const { return quotient_.dim(); }
    const Subspace& cycles() const { return cycles_; }
    const Subspace& boundaries() const { return boundaries_; }
    const std::vector<Vector>& reps() const { return quotient_.reps(); }
    // class coordinates of a cycle; throws if v is not a cycle
    Vector coords(std::span<const Scalar> v) const;
    bool is_boundary(std::span<const Scalar> v) const { return boundaries_.contains(v); }

private:
    Subspace cycles_;
    Subspace boundaries_;
    Quotient quotient_;
};

HomologyGroup homology(const GradedComplex& c, const Grade& g);

GradedComplex shift(const GradedComplex& c, int i);

struct ChainMap {
    const GradedComplex* source;
    const GradedComplex* target;
    std::map<Grade, Matrix> components;  // source block g -> target block g
    Matrix at(const Grade& g) const;
};

// Throws ValidationError if f does not commute with the differentials.
void check_chain_map(const ChainMap& f);

// X[1] + Y with differential -d_X + d_Y + f; the X part sits first in each block.
GradedComplex mapping_cone(const ChainMap& f);

Scalar bar_sign(std::uint32_t p, int degree);

using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

struct BasisElement {
    std::string name;
    Grade grade;
};

struct Chain {
    Grade grade;
    Vector coeffs;
};

class DGAlgebra {
public:
    using ProductFn = std::function<SparseVec(std::size_t, std::size_t)>;

    // differential: element index -> image; product is optional (a plain based complex otherwise)
    DGAlgebra(std::uint32_t p, std::vector<BasisElement> basis, const std::map<std::size_t, SparseVec>& differential,
              std::optional<ProductFn> product, std::optional<std::size_t> unit);

    static DGAlgebra from_table(std::uint32_t p, std::vector<BasisElement> basis,
                                const std::map<std::size_t, SparseVec>& differential,
                                const std::map<std::pair<std::size_t, std::size_t>, SparseVec>& products,
                                std::size_t unit);

    std::uint32_t prime() const { return complex_.prime(); }
    PrimeField field() const { return PrimeField(prime()); }
    const GradedComplex& complex() const { return complex_; }
    std::size_t size() const { return basis_.size(); }
    const BasisElement& element(std::size_t i) const { return basis_[i]; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index(const std::string& name) const;

    const std::vector<std::size_t>& block(const Grade& g) const;
    std::size_t local_index(std::size_t i) const { return local_[i]; }
    std::size_t block_dim(const Grade& g) const { return complex_.dim(g); }

    bool is_multiplicative() const { return product_.has_value(); }
    std::optional<std::size_t> unit() const { return unit_; }
    SparseVec multiply_basis(std::size_t i, std::size_t j) const;
    SparseVec differential_of(std::size_t i) const;
    Scalar augmentation(std::size_t i) const { return unit_ && i == *unit_ ? 1 : 0; }

    Chain basis_chain(std::size_t i) const;
    Chain zero_chain(const Grade& g) const;
    Chain d(const Chain& c) const;
    Chain multiply(const Chain& a, const Chain& b) const;
    Chain add(const Chain& a, const Chain& b) const;
    Chain scale(const Chain& a, Scalar s) const;

    // Exhaustive when the basis is small, otherwise over a deterministic sample.
    void validate(std::size_t exhaustive_limit = 80) const;

private:
    std::vector<BasisElement> basis_;
    std::vector<std::size_t> local_;
    std::map<Grade, std::vector<std::size_t>> blocks_;
    std::map<std::string, std::size_t> by_name_;
    GradedComplex complex_;
    std::optional<ProductFn> product_;
    std::optional<std::size_t> unit_;
};

HomologyGroup homology(const DGAlgebra& a, const Grade& g);

}  // namespace filtss

namespace filtss {

// Free graded algebra on letters, modulo monomial relations and truncations; differential
// given on letters and extended as a derivation.
struct WordAlgebraSpec {
    struct Letter {
        std::string name;
        Grade grade;
        int level = 1;
    };
    std::uint32_t prime = 2;
    std::vector<Letter> letters;
    std::size_t max_length = 4;
    std::optional<int> max_weight;
    std::optional<int> min_degree;
    std::vector<std::vector<int>> forbidden;  // monomials that vanish
    // letter index -> list of (coefficient, word)
    std::map<int, std::vector<std::pair<Scalar, std::vector<int>>>> differential;
    std::string separator = "*";
};

struct WordAlgebra {
    DGAlgebra algebra;
    std::vector<std::vector<int>> words;  // by basis index
    std::vector<int> levels;              // sum of letter levels
};

WordAlgebra build_word_algebra(const WordAlgebraSpec& spec, std::size_t validation_limit = 80);

}  // namespace filtss
