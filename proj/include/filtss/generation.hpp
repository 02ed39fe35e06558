#pragma once

#include "filtss/koszul.hpp"
#include "filtss/massey.hpp"
#include "filtss/sseq.hpp"

#include <functional>

namespace filtss {

// A combination of earlier certified classes of one grade.
struct ClassRef {
    Grade grade;
    std::vector<std::pair<std::size_t, Scalar>> terms;  // (class id, coefficient)
};

struct RefMatrix {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<ClassRef> entries;  // row-major
};

enum class CertificateKind { generator, product, bracket };

struct CertifiedClass {
    std::size_t id = 0;
    Grade grade;
    Vector value;  // homology coordinates
    Chain rep;     // a cycle in that class
    CertificateKind kind = CertificateKind::generator;
    std::vector<RefMatrix> factors;  // product: two 1x1; bracket: V_1..V_m
    std::string label;
};

struct GenerationOptions {
    std::size_t budget = std::size_t{1} << 14;           // bracket evaluations in total
    std::size_t systems_budget = std::size_t{1} << 20;   // defining systems per bracket
    int max_length = 4;
    bool matric = true;
    // grades whose certified span has at most this dimension contribute every combination
    std::size_t combination_dim = 3;
    // the s-grading; every class searched must have s >= 1
    std::function<int(const Grade&)> s_of = [](const Grade& g) { return -g.degree; };
};

struct GradeStatus {
    Grade grade;
    std::size_t homology_dim = 0;
    std::size_t certified_dim = 0;
    bool target_covered = true;
};

struct GenerationReport {
    std::vector<CertifiedClass> classes;
    std::map<Grade, std::vector<std::size_t>> inputs;     // usable as bracket entries
    std::map<Grade, std::vector<std::size_t>> certified;  // spanning the certified subspace
    std::map<Grade, std::vector<Vector>> seeds;
    std::vector<GradeStatus> grades;
    std::uint32_t prime = 2;
    bool exhaustive = true;
    std::size_t brackets_tried = 0;

    // every target grade covered
    bool complete() const;
    Subspace certified_span(const Grade& g, std::size_t homology_dim) const;
    std::string render(std::size_t id) const;
};

// Seeds are generators; other classes in the window are searched for among products and
// brackets of certified classes. Targets (optional, per grade) stop the search early once
// covered; without targets the whole homology of each grade is the target.
GenerationReport massey_generation(const DGAlgebra& u, std::vector<Grade> window,
                                   const std::map<Grade, std::vector<Vector>>& seeds,
                                   const GenerationOptions& opt = {},
                                   const std::map<Grade, std::vector<Vector>>* targets = nullptr,
                                   HomologyCache* cache = nullptr);

// Span of products and brackets of classes from other grades of the window, one step deep.
GenerationReport massey_decomposables(const DGAlgebra& u, std::vector<Grade> window, const GenerationOptions& opt = {},
                                      HomologyCache* cache = nullptr);

// Recomputes every certificate from its factors; empty string on success.
std::string check_certificates(const DGAlgebra& u, const GenerationReport& r);

// Page E_r of a multiplicative filtered algebra as a DGA with d_r. A cell (n, t, w) sits in
// degree t and weight (n + r t) + stride * w, so d_r keeps the weight, signs follow t, and
// weight truncation of the source stays exact.
struct PageAlgebra {
    DGAlgebra algebra;
    int r = 1;
    std::vector<CellKey> key_of;               // per basis element
    std::map<CellKey, std::size_t> first;      // first basis index of each cell
    std::map<Grade, CellKey> cell_of;          // the cell of each occupied grade
    int stride = 1;
    std::optional<CellKey> unit_cell;
    Scalar unit_scale = 1;                     // unit class = unit_scale * page basis vector

    Grade grade_of(const CellKey& k) const { return {k.t(), k.n + r * k.t() + stride * k.g.weight}; }
    // n of an occupied grade, -1 elsewhere
    int s_of(const Grade& g) const;
    // cell coordinates <-> chains of the page algebra
    Chain chain_of(const CellKey& k, std::span<const Scalar> cell_coords) const;
    Vector cell_coords(const CellKey& k, const Chain& c) const;
    // E_2 cell coordinates -> homology coordinates of the E_1 algebra (r = 1 only)
    Vector e2_to_homology(const SpectralSequence& ss, const CellKey& k, std::span<const Scalar> c,
                          HomologyCache& cache) const;
};

PageAlgebra page_algebra(const SpectralSequence& ss, int r);
inline PageAlgebra e1_algebra(const SpectralSequence& ss) { return page_algebra(ss, 1); }
// E_1 regraded by {-n, w} without differential, for the Koszul hypothesis.
DGAlgebra e1_koszul_view(const PageAlgebra& e1);

struct GenerationWindow {
    int s_max = 5;
    int t_abs = 10;
};

struct GenerationTarget {
    CellKey key;
    std::size_t dim = 0;        // dim E_{2,r} at key
    std::size_t certified = 0;  // dim of the part certified
};

struct GenerationVerdict {
    int r = 2;
    GenerationWindow window;
    bool hypothesis_ok = true;
    std::string hypothesis_report;
    KoszulReport koszul;
    GenerationReport closure;
    std::vector<GenerationTarget> targets;
    bool all_certified() const;
};

// E_{2,r} classes with s >= r in the window, certified from E_{2,r} classes with 0 < s < r.
GenerationVerdict generation_verifier(const SpectralSequence& ss, int r, GenerationWindow window,
                                      const GenerationOptions& opt = {});

}  // namespace filtss
