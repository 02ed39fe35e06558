#include "doctest.h"
#include "filtss/adams.hpp"
#include "filtss/generation.hpp"
#include "filtss/koszul.hpp"
#include "filtss/sseq.hpp"

using namespace filtss;

namespace {

const CobarDGA& cobar14() {
    static const CobarDGA c = build_cobar(14);
    return c;
}

// Ext window seeded by s = 1, for the generation checks
GenerationReport gm_closure(const CobarDGA& c, int s_max, int stem_max, HomologyCache& cache) {
    std::vector<Grade> window;
    std::map<Grade, std::vector<Vector>> seeds;
    for (const auto& [st, n] : c.dims()) {
        const auto [s, t] = st;
        if (s < 1 || s > s_max || t - s > stem_max) continue;
        const Grade g = CobarDGA::grade(s, t);
        window.push_back(g);
        if (s == 1)
            for (std::size_t i = 0; i < cache.at(g).dim(); ++i) {
                Vector e(cache.at(g).dim(), 0);
                e[i] = 1;
                seeds[g].push_back(e);
            }
    }
    return massey_generation(c.algebra(), window, seeds, {}, nullptr, &cache);
}

}  // namespace

TEST_CASE("dual Steenrod coalgebra: degrees, coassociativity, counit") {
    const TruncatedDualSteenrod a(14);
    std::vector<std::size_t> by_degree(15, 0);
    for (std::size_t i = 0; i < a.size(); ++i) by_degree[static_cast<std::size_t>(a.degree(i))]++;
    // partitions of n into parts 1, 3, 7
    const std::vector<std::size_t> expect{1, 1, 1, 2, 2, 2, 3, 4, 4, 5, 6, 6, 7, 8, 9};
    CHECK(by_degree == expect);
    CHECK(a.degree(a.index_of_xi(2)) == 3);
    CHECK(a.degree(a.index_of_xi(3)) == 7);
    CHECK_NOTHROW(a.check_coassociative());
    CHECK_NOTHROW(a.check_counit());
    // psi(xi_2) = xi_2 (x) 1 + xi_1^2 (x) xi_1 + 1 (x) xi_2
    const auto& psi = a.coproduct(a.index_of_xi(2));
    CHECK(psi.size() == 3);
    CHECK(std::count(psi.begin(), psi.end(), std::pair(a.index_of_xi(1, 2), a.index_of_xi(1))) == 1);
    CHECK(a.multiply(a.index_of_xi(3), a.index_of_xi(3)).has_value());
    CHECK_FALSE(a.overflowed());
    CHECK_FALSE(a.multiply(a.index_of_xi(3), a.index_of_xi(2, 3)).has_value());
    CHECK(a.overflowed());
}

TEST_CASE("cobar construction: sizes, d^2 = 0, capacity guard") {
    const CobarDGA& c = cobar14();
    CHECK(c.algebra().size() == 60014);
    CHECK(c.dims().at({7, 14}) == 7246);
    CHECK_NOTHROW(c.check_d_squared());
    CHECK_THROWS_AS(build_cobar(40), CapacityError);
    // [xi_1] is a cycle whose class is h_0
    const Chain h0 = h_cycle(c, 0);
    CHECK(is_zero(c.algebra().d(h0).coeffs));
    // d [xi_2] = [xi_1^2 | xi_1]
    const Chain x2 = c.word_chain({{0, 1}});
    CHECK(c.algebra().d(x2).coeffs == c.word_chain({{2}, {1}}).coeffs);
}

TEST_CASE("Ext chart through stem 8 and s <= 6") {
    const CobarDGA& c = cobar14();
    const ExtChart chart = ext_chart(c, {6, 8});
    // standard low-stem Ext over the mod 2 Steenrod algebra
    std::map<std::pair<int, int>, std::size_t> expect{{{0, 0}, 1}, {{1, 2}, 1}, {{2, 4}, 1}, {{1, 4}, 1},
                                                      {{2, 5}, 1}, {{3, 6}, 1}, {{2, 8}, 1}, {{1, 8}, 1},
                                                      {{2, 9}, 1}, {{3, 10}, 1}, {{4, 11}, 1}, {{2, 10}, 1},
                                                      {{3, 11}, 1}};
    for (int s = 1; s <= 6; ++s) expect[{s, s}] = 1;
    CHECK(chart.dims == expect);
    for (int i = 0; i <= 3; ++i) {
        const NamedClass* h = chart.find("h" + std::to_string(i));
        REQUIRE(h);
        CHECK(h->s == 1);
        CHECK(h->t == (1 << i));
        CHECK(chart.dim(1, 1 << i) == 1);
    }
    const NamedClass* c0 = chart.find("c0");
    REQUIRE(c0);
    CHECK(c0->s == 3);
    CHECK(c0->t == 11);
    // no class at s = 8, t = 11
    CHECK(ext_chart(c, {8, 3}).dim(8, 11) == 0);
}

TEST_CASE("Ext chart is invariant under reordering the monomial basis") {
    const CobarDGA base = build_cobar(10);
    for (unsigned seed : {7u, 19u}) {
        const CobarDGA perm = build_cobar(10, seed);
        CHECK(ext_chart(base, {10, 6}).dims == ext_chart(perm, {10, 6}).dims);
    }
}

TEST_CASE("c0 lies in <h0, h2^2, h1>") {
    const C0Verdict v = verify_c0_bracket(cobar14());
    CHECK(v.h0_h22_zero);
    CHECK(v.h22_h1_zero);
    CHECK(v.bracket.defined);
    CHECK(v.contains_c0);
    CHECK(v.bracket.indeterminacy.dim() == 0);
    CHECK_THROWS_AS(verify_c0_bracket(build_cobar(11)), CapacityError);
}

TEST_CASE("cobar is Koszul in a small range") {
    const CobarDGA c = build_cobar(5);
    CHECK(is_koszul_classical(underlying_graded(c.algebra()), {3, 5}).koszul);
    CHECK(is_koszul_derived(c.algebra(), {3, 5}).koszul);
}

TEST_CASE("Ext for 2 <= s <= 6 and stem <= 8 is generated from s = 1") {
    const CobarDGA& c = cobar14();
    HomologyCache cache(c.algebra());
    const GenerationReport rep = gm_closure(c, 6, 8, cache);
    CHECK(rep.complete());
    CHECK(rep.exhaustive);
    CHECK(check_certificates(c.algebra(), rep).empty());
    // c0 needs a bracket
    bool bracket = false;
    for (const auto& cl : rep.classes)
        if (cl.kind == CertificateKind::bracket && cl.grade == CobarDGA::grade(3, 11)) bracket = true;
    CHECK(bracket);
}

TEST_CASE("every class with s >= 2, s <= 8, t <= 12 is decomposable") {
    const CobarDGA c = build_cobar(12);
    std::vector<Grade> window;
    for (const auto& [st, n] : c.dims())
        if (st.first >= 1 && st.first <= 8) window.push_back(CobarDGA::grade(st.first, st.second));
    const GenerationReport rep = massey_decomposables(c.algebra(), window);
    CHECK(check_certificates(c.algebra(), rep).empty());
    for (const auto& g : rep.grades) {
        if (-g.grade.degree == 1) CHECK(g.certified_dim == 0);
        else CHECK_MESSAGE(g.certified_dim == g.homology_dim, to_string(g.grade));
    }
}

TEST_CASE("cobar filtered by s: no crossing differentials at the c0 bracket") {
    const CobarDGA c = build_cobar(12);
    std::vector<int> levels;
    for (const auto& b : c.algebra().basis()) levels.push_back(-b.grade.degree);
    const FilteredDGA x(c.algebra(), levels);
    const SpectralSequence ss(x);
    CHECK(crossing_differentials_ok(ss, 1, {3, CobarDGA::grade(3, 11)}).ok);
    CHECK(crossing_differentials_ok(ss, 2, {3, CobarDGA::grade(3, 11)}).ok);
}
