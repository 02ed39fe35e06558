#pragma once

#include "filtss/dga.hpp"

#include <memory>
#include <set>

namespace filtss {

// Matrix of homogeneous chains; each entry carries its grade even when zero.
struct ChainMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Chain> entries;  // row-major
    const Chain& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
    Chain& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
};

ChainMatrix single(const Chain& c);

// Homology groups of one algebra, shared across bracket evaluations.
class HomologyCache {
public:
    explicit HomologyCache(const DGAlgebra& u) : u_(&u) {}
    const DGAlgebra& algebra() const { return *u_; }
    const HomologyGroup& at(const Grade& g);

private:
    const DGAlgebra* u_;
    std::map<Grade, std::unique_ptr<HomologyGroup>> memo_;
};

struct BracketOptions {
    std::size_t budget = std::size_t{1} << 20;
    // enumerate free parts over cycles mod boundaries (default) or over all cycles
    bool all_cycles = false;
    // compute signs even when p = 2
    bool force_signed = false;
    // optional; used only when it belongs to the algebra being bracketed
    HomologyCache* cache = nullptr;
};

// A union of cosets base + W inside the flattened homology of the target matrix.
struct BracketResult {
    bool defined = false;
    bool exhaustive = true;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Grade> entry_grades;      // row-major
    std::vector<std::size_t> entry_dims;  // homology dims per entry
    Subspace indeterminacy{2, 0};
    std::set<Vector> cosets;  // representatives reduced modulo the indeterminacy
    std::size_t systems = 0;

    std::size_t flat_dim() const { return indeterminacy.ambient_dim(); }
    bool contains(std::span<const Scalar> flat) const;
    bool contains_zero() const;
    // every value, when there are at most `limit` of them
    std::optional<std::vector<Vector>> values(std::size_t limit = 4096) const;
    bool same_values(const BracketResult& other) const;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// <V_1, ..., V_m>, m >= 3. Entries must be cycles (ValidationError otherwise).
BracketResult matric_massey(const DGAlgebra& u, const std::vector<ChainMatrix>& v, const BracketOptions& opt = {});
BracketResult smash_toda(const DGAlgebra& u, const std::vector<ChainMatrix>& v, const BracketOptions& opt = {});

// Flattened homology coordinates of a matrix of cycles at the given grades.
Vector homology_coords(const DGAlgebra& u, const ChainMatrix& m);

// Maps between layers: f_ij : X_j -> X_i raising degree by j - i - 1, one matrix per source grade.
struct LayerMap {
    std::map<Grade, Matrix> blocks;
};

struct LayeredSystem {
    std::uint32_t prime = 2;
    std::vector<GradedComplex> layers;               // X_0 .. X_n
    std::map<std::pair<int, int>, LayerMap> maps;  // (i, j), i < j
    int n() const { return static_cast<int>(layers.size()) - 1; }
    // f_ij out of grade g of X_j (zero when absent); f_jj = d
    Matrix f(int i, int j, const Grade& g) const;
};

class RelationError : public ValidationError {
public:
    RelationError(int i, int k, Grade g, const std::string& what)
        : ValidationError(what), i(i), k(k), grade(g) {}
    int i;
    int k;
    Grade grade;
};

// Sum_{j=i}^{k} (-1)^j f_ij f_jk = 0 for all i < k; throws RelationError at the first failure.
void check_relations(const LayeredSystem& s);

// Z_0^n: Z_K = (X_0)_{K+n} + ... + (X_n)_K with d = (-1)^n (sum_j (-1)^j f_ij x_j)_i.
// Block order inside Z_K is X_0 first.
GradedComplex z_complex(const LayeredSystem& s);
// Same complex built as iterated homotopy fibers, one layer at a time.
GradedComplex z_complex_by_induction(const LayeredSystem& s);
// C_0^n built by iterated mapping cones; the newest layer comes first in each block.
GradedComplex iterated_cofiber(const LayeredSystem& s);

struct CofiberFiberWitness {
    GradedComplex cofiber;
    GradedComplex shifted_fiber;               // Sigma^n Z_0^n
    std::map<Grade, Matrix> iso;               // shifted_fiber block -> cofiber block
};

// Builds both sides and a degreewise isomorphism; throws ValidationError if it fails to be a chain map.
CofiberFiberWitness iterated_cofiber_vs_fiber(const LayeredSystem& s);

}  // namespace filtss
