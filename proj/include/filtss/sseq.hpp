#pragma once

#include "filtss/filtered.hpp"

#include <memory>
#include <mutex>
#include <tuple>

namespace filtss {

struct CellKey {
    int n = 0;
    Grade g;
    auto operator<=>(const CellKey&) const = default;
    int t() const { return g.degree; }
};

std::string to_string(const CellKey& k);

// Homology of all filtration quotients, presented as subquotients of the full blocks:
// H(i,j) at g = {c in F_i : dc in F_j} / (d F_i + F_j).
class CESystem {
public:
    explicit CESystem(const FilteredDGA& x) : x_(&x) {}
    const HomologyGroup& H(int i, int j, const Grade& g) const;
    // H(i,j) -> H(i2,j2) for i2 <= i, j2 <= j
    Matrix eta(int i, int j, int i2, int j2, const Grade& g) const;
    // connecting map H(i,j) at g -> H(j,k) at g.below()
    Matrix delta(int i, int j, int k, const Grade& g) const;

private:
    const FilteredDGA* x_;
    mutable std::mutex mutex_;
    mutable std::map<std::tuple<int, int, Grade>, std::shared_ptr<HomologyGroup>> memo_;
};

// E_r at (n, g): level-n parts of chains c in F_n with dc in F_{n+r}, modulo level-n parts of
// boundaries dy with y in F_{n-r+1} and dy in F_n.
struct Cell {
    int r;
    CellKey key;
    std::vector<std::size_t> level_indices;  // local indices of the level-n basis elements
    Subspace almost_cycles;                  // in level-n coordinates
    Subspace boundaries;                     // in level-n coordinates
    std::vector<Vector> reps;                // level-n coordinates
    std::vector<Vector> lifts;               // block vectors in F_n with d into F_{n+r}
    Quotient classes;

    std::size_t dim() const { return reps.size(); }
    Vector project(std::span<const Scalar> block_vector) const;
    // class coordinates of a level-n vector; nullopt if it is not an r-almost-cycle part
    std::optional<Vector> coords(std::span<const Scalar> level_vector) const { return classes.coords(level_vector); }
    Vector lift(std::span<const Scalar> coords) const;
};

struct Page {
    int r;
    std::map<CellKey, std::shared_ptr<const Cell>> cells;
    std::map<CellKey, Matrix> differentials;  // out of each cell
    std::size_t dim(const CellKey& k) const;
};

class SpectralSequence {
public:
    explicit SpectralSequence(const FilteredDGA& x) : x_(&x), ce_(x) {}

    const FilteredDGA& source() const { return *x_; }
    const CESystem& ce() const { return ce_; }
    // E_r = E_infinity from this page on
    int stabilization_page() const { return x_->width() + 1; }
    // (n, g) pairs with at least one level-n basis element in block g
    std::vector<CellKey> support() const;

    std::shared_ptr<const Cell> cell(int r, const CellKey& k) const;
    // d_r: E_r(n, g) -> E_r(n + r, g.below())
    Matrix differential(int r, const CellKey& k) const;
    Page page(int r) const;
    // product of two classes on page r, in coordinates of the target cell
    Vector product(int r, const CellKey& a, std::span<const Scalar> ca, const CellKey& b,
                   std::span<const Scalar> cb) const;
    // E_infinity classes that come from cycles of F_n
    Subspace permanent_cycles(const CellKey& k) const;

private:
    std::shared_ptr<Cell> compute_cell(int r, const CellKey& k) const;

    const FilteredDGA* x_;
    CESystem ce_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, CellKey>, std::shared_ptr<const Cell>> memo_;
};

// Classical dimension formula: dim Z_r^n - dim(Z_{r-1}^{n+1} + d Z_{r-1}^{n-r+1}).
std::map<CellKey, std::size_t> zb_oracle_page(const FilteredDGA& x, int r);
// Rank of H(n, n+r) -> H(n-r+1, n+1) from the CE system.
std::map<CellKey, std::size_t> ce_image_page(const FilteredDGA& x, int r);

// Verification helpers; each returns an empty string on success, otherwise a description.
std::string check_page_recurrence(const SpectralSequence& ss, int r_max);
std::string check_page_leibniz(const SpectralSequence& ss, int r_max);
std::string check_d_squared(const SpectralSequence& ss, int r_max);

// E_{2,j} inside E_2 coordinates, for j = 2..r_max, plus permanent cycles.
struct SurvivorChain {
    CellKey key;
    std::size_t e2_dim = 0;
    std::vector<Subspace> by_page;  // by_page[j - 2] = E_{2,j}
    Subspace permanent{2, 0};
};

struct SurvivorTable {
    int r_max;
    std::map<CellKey, SurvivorChain> chains;
};

// image form: classes of E_2 represented by j-almost-cycles
SurvivorTable survivors(const SpectralSequence& ss, int r_max);
// iterative form: S_{r+1} = ker(d_r restricted to S_r)
SurvivorTable survivors_iterative(const SpectralSequence& ss, int r_max);

struct CrossingWitness {
    int ell;
    int page;
    CellKey key;
    Vector rep;  // level-n coordinates of the offending class
};

struct CrossingReport {
    bool ok = true;
    std::vector<CrossingWitness> witnesses;
};

// For every l > 0, all of E_{k+l+1} at (n-k-l, t+1) must consist of permanent cycles.
CrossingReport crossing_differentials_ok(const SpectralSequence& ss, int k, const CellKey& at);

struct ChartClass {
    std::string name;
    int n = 0;
    int t = 0;
    int weight = 0;
};

struct ChartDifferential {
    int page;
    std::string from;
    std::string to;
    Scalar coeff = 1;
};

struct ChartProduct {
    std::string left;
    std::string right;
    std::vector<std::pair<std::string, Scalar>> result;
};

struct AbstractChart {
    std::uint32_t prime = 2;
    std::vector<ChartClass> classes;
    std::vector<ChartDifferential> differentials;
    std::vector<ChartProduct> products;
    std::optional<std::string> unit;
};

// Throws ValidationError on malformed charts (non-bijective differentials, Leibniz failures).
FilteredDGA realize_ss(const AbstractChart& chart);

// Page dims and d_r ranks read off the chart directly.
struct ChartPage {
    std::map<CellKey, std::size_t> dims;
    std::map<CellKey, std::size_t> ranks;
};
ChartPage chart_page(const AbstractChart& chart, int r);

}  // namespace filtss
