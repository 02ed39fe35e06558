// One line per acceptance criterion; exit status is nonzero if any fails.
#include "filtss/adams.hpp"
#include "filtss/generation.hpp"
#include "filtss/koszul.hpp"
#include "filtss/massey.hpp"
#include "filtss/moss.hpp"
#include "filtss/sseq.hpp"
#include "fixtures.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace filtss;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " (" << o.detail.str()
              << ", " << std::fixed;
    std::cout.precision(1);
    std::cout << secs << " s)" << std::endl;
    return o.pass ? 0 : 1;
}

// ------------------------------------------------------------------ 1, 2

const CobarDGA& cobar14() {
    static const CobarDGA c = build_cobar(14);
    return c;
}

void adams_bracket(Outcome& o) {
    const CobarDGA& c = cobar14();
    HomologyCache cache(c.algebra());
    const C0Verdict v = verify_c0_bracket(c, &cache);
    o.require(v.h0_h22_zero, "h0 h2^2 != 0");
    o.require(v.h22_h1_zero, "h2^2 h1 != 0");
    o.require(v.bracket.defined, "bracket undefined");
    o.require(v.contains_c0, "c0 not in the bracket");
    const ExtChart chart = ext_chart(c, {3, 8}, &cache);
    const NamedClass* c0 = chart.find("c0");
    o.require(c0 && c0->s == 3 && c0->t == 11 && chart.dim(3, 11) == 1, "no unique class at (s,t) = (3,11)");
    o.require(ext_chart(c, {8, 3}, &cache).dim(8, 11) == 0, "unexpected class at s = 8, t = 11");
    o.detail << "T = 14, " << c.algebra().size() << " cobar words; <h0, h2^2, h1> = {c0} with indeterminacy "
             << v.bracket.indeterminacy.dim() << "; c0 is the unique class at s = 3, t = 11 (stem 8); "
             << "the stated (8,11) is read as (stem, t) since Ext^{8,11} = 0";
}

void gugenheim_may(Outcome& o) {
    const CobarDGA& c = cobar14();
    HomologyCache cache(c.algebra());
    std::vector<Grade> window;
    std::map<Grade, std::vector<Vector>> seeds;
    std::size_t targets = 0;
    for (const auto& [st, n] : c.dims()) {
        const auto [s, t] = st;
        if (s < 1 || s > 6 || t - s > 8) continue;
        const Grade g = CobarDGA::grade(s, t);
        window.push_back(g);
        const std::size_t h = cache.at(g).dim();
        if (s == 1) {
            for (std::size_t i = 0; i < h; ++i) {
                Vector e(h, 0);
                e[i] = 1;
                seeds[g].push_back(e);
            }
        } else {
            targets += h;
        }
    }
    const GenerationReport rep = massey_generation(c.algebra(), window, seeds, {}, nullptr, &cache);
    std::size_t certified = 0;
    for (const auto& g : rep.grades)
        if (-g.grade.degree >= 2) certified += g.certified_dim;
    o.require(rep.complete(), "some class is not certified");
    o.require(rep.exhaustive, "search was truncated");
    const std::string bad = check_certificates(c.algebra(), rep);
    o.require(bad.empty(), "certificate check: " + bad);
    std::size_t brackets = 0;
    for (const auto& cl : rep.classes) brackets += cl.kind == CertificateKind::bracket;
    o.detail << certified << "/" << targets << " classes with 2 <= s <= 6, t - s <= 8 certified from s = 1 ("
             << brackets << " via brackets), certificates re-checked";
}

// ------------------------------------------------------------------ 3

void generation_theorem(Outcome& o) {
    struct Case {
        std::string name;
        FilteredDGA x;
        int r;
    };
    std::vector<Case> cases;
    cases.push_back({"cube F2", fixtures::cube_fixture(2), 3});
    cases.push_back({"cube F3", fixtures::cube_fixture(3), 3});
    cases.push_back({"fourth power F3", fixtures::fourth_power_fixture(3), 4});
    cases.push_back({"mixed F2", fixtures::mixed_fixture(2, 7), 3});
    std::size_t total = 0;
    for (const auto& c : cases) {
        const SpectralSequence ss(c.x);
        const GenerationVerdict v = generation_verifier(ss, c.r, {5, 10});
        o.require(v.hypothesis_ok, c.name + ": E_1 not Koszul (" + v.hypothesis_report + ")");
        o.require(v.all_certified(), c.name + ": uncertified classes");
        o.require(v.closure.exhaustive, c.name + ": truncated search");
        const std::string bad = check_certificates(e1_algebra(ss).algebra, v.closure);
        o.require(bad.empty(), c.name + ": " + bad);
        bool higher = false;
        for (int r = 2; r < c.r + 1; ++r)
            for (const auto& [k, m] : ss.page(r).differentials) higher = higher || rank(m) > 0;
        o.require(higher, c.name + ": no d_2 or d_3");
        std::size_t dims = 0;
        for (const auto& t : v.targets) dims += t.dim;
        o.require(dims > 0, c.name + ": empty target");
        total += dims;
    }
    o.detail << cases.size() << " fixtures (r = 3, 3, 4, 3), " << total
             << " E_{2,r} classes with s >= r in s <= 5, |t| <= 10 certified, exhaustive";
}

// ------------------------------------------------------------------ 4, 5

std::vector<FilteredDGA> structured_fixtures() {
    std::vector<FilteredDGA> out{fixtures::two_cell(),           fixtures::dying_class(),
                                 fixtures::cube_fixture(2),      fixtures::cube_fixture(3),
                                 fixtures::fourth_power_fixture(2), fixtures::fourth_power_fixture(3),
                                 fixtures::mixed_fixture(2, 7),  fixtures::mixed_fixture(3, 7)};
    for (std::uint32_t p : {2u, 3u})
        for (int k : {2, 3}) out.push_back(fixtures::moss_fixture(p, k, false));
    out.push_back(fixtures::moss_fixture(2, 2, true));
    const CobarDGA c = build_cobar(7);
    std::vector<int> levels;
    for (const auto& b : c.algebra().basis()) levels.push_back(-b.grade.degree);
    out.emplace_back(c.algebra(), levels);
    return out;
}

bool pages_match_oracle(const FilteredDGA& x, std::string& why) {
    const SpectralSequence ss(x);
    for (int r = 1; r <= ss.stabilization_page() + 1; ++r) {
        const auto zb = zb_oracle_page(x, r);
        const auto page = ss.page(r);
        for (const auto& [k, cell] : page.cells) {
            auto it = zb.find(k);
            if ((it == zb.end() ? 0 : it->second) != cell->dim()) {
                why = "E_" + std::to_string(r) + " at " + to_string(k);
                return false;
            }
        }
        for (const auto& [k, d] : zb)
            if (d && !page.cells.count(k)) {
                why = "oracle cell missing from page at " + to_string(k);
                return false;
            }
    }
    return true;
}

void page_formula(Outcome& o) {
    std::size_t n_fixed = 0, n_f2 = 0, n_f3 = 0;
    std::string why;
    for (const auto& x : structured_fixtures()) {
        o.require(pages_match_oracle(x, why), "fixture " + std::to_string(n_fixed) + ": " + why);
        ++n_fixed;
    }
    for (unsigned seed = 0; seed < 25; ++seed, ++n_f2) {
        const auto x = fixtures::random_filtered(2, 1000 + seed, 12);
        o.require(x.algebra().size() == 12, "random complex is not 12-dimensional");
        o.require(pages_match_oracle(x, why), "F2 seed " + std::to_string(seed) + ": " + why);
    }
    for (unsigned seed = 0; seed < 10; ++seed, ++n_f3) {
        const auto x = fixtures::random_filtered(3, 2000 + seed, 12);
        o.require(pages_match_oracle(x, why), "F3 seed " + std::to_string(seed) + ": " + why);
    }
    o.detail << n_fixed << " fixtures, " << n_f2 << " random over F2 and " << n_f3
             << " over F3 (12-dim), every page through stabilization";
}

void recurrence_leibniz(Outcome& o) {
    std::size_t checked = 0, multiplicative = 0;
    for (const auto& x : structured_fixtures()) {
        const SpectralSequence ss(x);
        const std::string rec = check_page_recurrence(ss, ss.stabilization_page() + 1);
        o.require(rec.empty(), "recurrence: " + rec);
        ++checked;
        if (x.is_multiplicative()) {
            const std::string lb = check_page_leibniz(ss, ss.stabilization_page());
            o.require(lb.empty(), "Leibniz: " + lb);
            ++multiplicative;
        }
    }
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto x = fixtures::random_filtered(seed % 2 ? 3 : 2, 3000 + seed, 12);
        const SpectralSequence ss(x);
        const std::string rec = check_page_recurrence(ss, ss.stabilization_page() + 1);
        o.require(rec.empty(), "recurrence (random): " + rec);
        ++checked;
    }
    o.detail << "E_{r+1} = H(E_r, d_r) on " << checked << " filtered objects; Leibniz on " << multiplicative
             << " multiplicative fixtures, all pages";
}

// ------------------------------------------------------------------ 6

void realization(Outcome& o) {
    std::size_t charts = 0, max_classes = 0;
    int max_page = 0;
    for (unsigned seed = 0; charts < 10; ++seed) {
        const AbstractChart chart = fixtures::random_chart(seed % 2 ? 3 : 2, 500 + seed);
        int top = 1;
        for (const auto& d : chart.differentials) top = std::max(top, d.page);
        if (chart.classes.size() > 20 || top > 4) continue;
        ++charts;
        max_classes = std::max(max_classes, chart.classes.size());
        max_page = std::max(max_page, top);
        const FilteredDGA x = realize_ss(chart);
        const SpectralSequence ss(x);
        for (int r = 1; r <= top + 1; ++r) {
            const ChartPage want = chart_page(chart, r);
            const Page got = ss.page(r);
            for (const auto& [k, cell] : got.cells) {
                auto it = want.dims.find(k);
                o.require(cell->dim() == (it == want.dims.end() ? 0 : it->second),
                          "dims differ on E_" + std::to_string(r) + " at " + to_string(k));
                auto rt = want.ranks.find(k);
                o.require(rank(got.differentials.at(k)) == (rt == want.ranks.end() ? 0 : rt->second),
                          "d_" + std::to_string(r) + " rank differs at " + to_string(k));
            }
            for (const auto& [k, d] : want.dims) o.require(got.cells.count(k) > 0, "chart cell missing at " + to_string(k));
        }
    }
    o.detail << charts << " random charts (<= " << max_classes << " classes, pages <= " << max_page
             << ") reproduced from E_1 on";
}

// ------------------------------------------------------------------ 7

void massey_toda(Outcome& o) {
    using fixtures::named;
    std::size_t triples = 0, quadruples = 0, cases = 0;
    const std::vector<std::array<int, 4>> degrees{{-1, -1, -1, -1}, {0, -1, -2, -1}, {-2, 0, -1, 0}, {0, 0, -1, -2}};
    auto compare = [&](const DGAlgebra& u, const std::vector<ChainMatrix>& v, const std::string& name) {
        const BracketResult m = matric_massey(u, v);
        const BracketResult t = smash_toda(u, v);
        o.require(m.exhaustive && t.exhaustive, name + ": not exhaustive");
        o.require(t.same_values(m), name + ": value sets differ");
        ++cases;
        if (m.defined && !m.contains_zero()) (v.size() == 3 ? triples : quadruples)++;
    };
    for (std::uint32_t p : {2u, 3u}) {
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            const auto w3 = fixtures::bracket_fixture(p, degrees[i], 1, true);
            const DGAlgebra& u = w3.algebra;
            const auto s = [&](const DGAlgebra& a, const char* n) { return single(named(a, n)); };
            compare(u, {s(u, "a"), s(u, "b"), s(u, "c")}, "triple abc");
            compare(u, {s(u, "b"), s(u, "c"), s(u, "d")}, "triple bcd");
            compare(u, {s(u, "a"), s(u, "a"), s(u, "b")}, "triple aab");
            if (i == 1) continue;
            const auto w4 = fixtures::bracket_fixture(p, degrees[i], 2, true);
            const DGAlgebra& q = w4.algebra;
            compare(q, {s(q, "a"), s(q, "b"), s(q, "c"), s(q, "d")}, "quadruple abcd");
        }
        const auto wm = fixtures::matric_fixture(p);
        const DGAlgebra& u = wm.algebra;
        compare(u, {ChainMatrix{1, 2, {named(u, "a"), named(u, "b")}}, ChainMatrix{2, 1, {named(u, "c"), named(u, "d")}},
                    single(named(u, "x"))},
                "matric");
    }
    const DGAlgebra t = fixtures::triple_fixture(3);
    compare(t, {single(fixtures::named(t, "a")), single(fixtures::named(t, "b")), single(fixtures::named(t, "c"))},
            "triple fixture");
    o.require(triples >= 5, "fewer than 5 nonzero triple brackets");
    o.require(quadruples >= 2, "fewer than 2 nonzero quadruple brackets");
    o.detail << cases << " brackets equal as value sets, " << triples << " nonzero triples and " << quadruples
             << " nonzero quadruples among them, all exhaustive";
}

// ------------------------------------------------------------------ 8

std::map<Grade, std::size_t> homology_dims(const GradedComplex& c) {
    std::map<Grade, std::size_t> out;
    for (const auto& g : c.grades())
        if (const auto h = homology(c, g).dim(); h > 0) out[g] = h;
    return out;
}

void fiber_cofiber(Outcome& o) {
    std::size_t towers = 0;
    for (std::uint32_t p : {2u, 3u})
        for (int n = 1; n <= 3; ++n)
            for (unsigned seed = 0; seed < 3; ++seed) {
                const auto s = fixtures::gauge(fixtures::strict_tower(p, n, 700 + seed), 800 + seed);
                check_relations(s);
                const CofiberFiberWitness w = iterated_cofiber_vs_fiber(s);
                const std::string tag = "F" + std::to_string(p) + " n = " + std::to_string(n);
                o.require(homology_dims(w.cofiber) == homology_dims(w.shifted_fiber), tag + ": homology differs");
                o.require(homology_dims(z_complex(s)) == homology_dims(z_complex_by_induction(s)),
                          tag + ": inductive fiber differs");
                ++towers;
            }
    o.detail << towers << " towers (n = 1, 2, 3 over F2 and F3, nonzero higher maps): degreewise homology of C_0^n "
             << "equals that of the n-fold shift of Z_0^n";
}

// ------------------------------------------------------------------ 9

void sigma_kernel(Outcome& o) {
    std::vector<std::pair<std::string, WordAlgebra>> cases;
    cases.emplace_back("free on 2 over F2", fixtures::free_fixture(2, 2, 4));
    cases.emplace_back("F3<a,b>/(ab)", fixtures::monomial_fixture(3, 5));
    cases.emplace_back("low generator over F2", fixtures::low_generator_fixture(2, 4));
    cases.emplace_back("exterior over F3", fixtures::exterior_fixture(3, 4));
    std::size_t grades = 0;
    for (const auto& [name, w] : cases) {
        const DGAlgebra& u = w.algebra;
        int wmax = 0;
        for (const Grade& g : u.complex().grades()) wmax = std::max(wmax, g.weight);
        const MinimalResolution res(u, {1, wmax});
        for (const Grade& g : u.complex().grades()) {
            if (g == Grade{0, 0}) continue;
            std::vector<Vector> cols;
            for (std::size_t i : u.block(g)) cols.push_back(suspension_classical(res, u.basis_chain(i)));
            const std::size_t t = res.tor_dim(1, g);
            const Subspace ker =
                t ? kernel(Matrix::from_columns(u.prime(), t, cols)) : Subspace::full(u.prime(), u.block_dim(g));
            const Subspace dec = decomposables(u, g);
            o.require(ker.contains(dec), name + ": decomposable outside the kernel at " + to_string(g));
            o.require(dec.contains(ker), name + ": kernel element not decomposable at " + to_string(g));
            ++grades;
        }
    }
    o.detail << cases.size() << " graded algebras, " << grades << " grades, both containments";
}

// ------------------------------------------------------------------ 10

PageClass class_of(const SpectralSequence& ss, int r, const std::string& name) {
    const FilteredDGA& x = ss.source();
    const std::size_t i = x.algebra().index(name);
    const CellKey k{x.level(i), x.algebra().element(i).grade};
    const auto cell = ss.cell(r, k);
    auto c = cell->coords(cell->project(x.algebra().basis_chain(i).coeffs));
    if (!c) throw std::logic_error(name + " is not a class on E_" + std::to_string(r));
    return {k, *c};
}

void moss(Outcome& o) {
    std::size_t good = 0, caught = 0;
    for (std::uint32_t p : {2u, 3u})
        for (int k : {2, 3}) {
            const auto x = fixtures::moss_fixture(p, k, false);
            const SpectralSequence ss(x);
            const MossReport rep =
                moss_check(ss, k, {class_of(ss, k, "a"), class_of(ss, k, "b"), class_of(ss, k, "c")});
            const std::string tag = "F" + std::to_string(p) + " k = " + std::to_string(k);
            o.require(rep.hypothesis_ok(), tag + ": hypothesis fails");
            o.require(rep.detected_nonzero(), tag + ": no matching nonzero leading term");
            good += rep.hypothesis_ok() && rep.detected_nonzero();
        }
    for (int k : {2, 3}) {
        const auto x = fixtures::moss_fixture(2, k, true);
        const SpectralSequence ss(x);
        const MossReport rep = moss_check(ss, k, {class_of(ss, k, "a"), class_of(ss, k, "b"), class_of(ss, k, "c")});
        o.require(!rep.crossing.ok && !rep.crossing.witnesses.empty(), "crossing violation not reported");
        caught += !rep.crossing.ok;
    }
    o.detail << good << " fixtures satisfying the crossing condition with detection, " << caught
             << " violating fixtures reported with witnesses";
}

}  // namespace

int main() {
    int failures = 0;
    failures += run(1, "Adams bracket c0 in <h0, h2^2, h1>", adams_bracket);
    failures += run(2, "Ext for 2 <= s <= 6, t - s <= 8 generated from s = 1", gugenheim_may);
    failures += run(3, "generation theorem on filtered fixtures", generation_theorem);
    failures += run(4, "pages against the classical formula", page_formula);
    failures += run(5, "page recurrence and Leibniz", recurrence_leibniz);
    failures += run(6, "chart realization round-trip", realization);
    failures += run(7, "Massey and Toda value sets coincide", massey_toda);
    failures += run(8, "iterated cofiber vs shifted iterated fiber", fiber_cofiber);
    failures += run(9, "suspension kernel is the decomposables", sigma_kernel);
    failures += run(10, "Moss detection and crossing violations", moss);
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria pass"))
              << std::endl;
    return failures ? 1 : 0;
}
