#include "doctest.h"
#include "filtss/massey.hpp"
#include "fixtures.hpp"

#include <random>
#include <set>

using namespace filtss;
using fixtures::named;

namespace {

std::vector<Vector> all_vectors(std::uint32_t p, std::size_t n) {
    std::vector<Vector> out;
    Vector v(n, 0);
    while (true) {
        out.push_back(v);
        std::size_t i = 0;
        while (i < n && ++v[i] == p) v[i++] = 0;
        if (i == n) break;
    }
    return out;
}

// Every defining system, straight from the definition: each A_ij ranges over all chains of its grade.
struct BruteForce {
    const DGAlgebra& u;
    std::vector<ChainMatrix> v;
    std::size_t m;
    std::vector<std::size_t> k;
    std::map<std::pair<int, int>, ChainMatrix> a;
    std::map<std::pair<int, int>, std::vector<Grade>> grades;  // known entry grades, row-major
    std::set<Vector> values;
    std::size_t leaves = 0;
    std::size_t cap = 20000;

    BruteForce(const DGAlgebra& alg, std::vector<ChainMatrix> mats) : u(alg), v(std::move(mats)), m(v.size()) {
        k.push_back(v[0].rows);
        for (const auto& x : v) k.push_back(x.cols);
        for (std::size_t s = 0; s < m; ++s) a[{int(s), int(s) + 1}] = v[s];
    }

    Chain bar(const Chain& c) const { return u.scale(c, u.field().sign(1 + c.grade.degree)); }

    // entry grade of A_ij, read off from the diagonal chain V_{i+1} ... V_j
    Grade grade(int i, int j, std::size_t p, std::size_t q) const {
        Grade g{j - i - 1, 0};
        std::size_t row = p;
        for (int s = i; s < j; ++s) {
            const std::size_t col = (s == j - 1) ? q : 0;
            g = g + v[s].at(row, col).grade;
            row = col;
        }
        return g;
    }

    ChainMatrix tilde(int i, int j) const {
        ChainMatrix out{k[i], k[j], {}};
        for (std::size_t p = 0; p < k[i]; ++p)
            for (std::size_t q = 0; q < k[j]; ++q) {
                Chain c = u.zero_chain(grade(i, j, p, q).below());
                for (int mid = i + 1; mid < j; ++mid)
                    for (std::size_t t = 0; t < k[mid]; ++t)
                        c = u.add(c, u.multiply(bar(a.at({i, mid}).at(p, t)), a.at({mid, j}).at(t, q)));
                out.entries.push_back(c);
            }
        return out;
    }

    void fill(const std::vector<std::pair<int, int>>& slots, std::size_t idx) {
        if (leaves > cap) return;
        if (idx == slots.size()) {
            ++leaves;
            values.insert(homology_coords(u, tilde(0, int(m))));
            return;
        }
        const auto [i, j] = slots[idx];
        const ChainMatrix rhs = tilde(i, j);
        std::vector<std::vector<Chain>> options(rhs.entries.size());
        for (std::size_t e = 0; e < rhs.entries.size(); ++e) {
            const Grade g = rhs.entries[e].grade.above();
            double size = 1;
            for (std::size_t i = 0; i < u.block_dim(g); ++i) size *= u.prime();
            if (size > 2e4) {
                leaves = cap + 1;
                return;
            }
            for (const auto& x : all_vectors(u.prime(), u.block_dim(g))) {
                const Chain c{g, x};
                if (u.d(c).coeffs == rhs.entries[e].coeffs) options[e].push_back(c);
            }
            if (options[e].empty()) return;
        }
        std::vector<std::size_t> pick(options.size(), 0);
        while (true) {
            ChainMatrix am{rhs.rows, rhs.cols, {}};
            for (std::size_t e = 0; e < options.size(); ++e) am.entries.push_back(options[e][pick[e]]);
            a[{i, j}] = am;
            fill(slots, idx + 1);
            if (leaves > cap) break;
            std::size_t e = 0;
            while (e < pick.size() && ++pick[e] == options[e].size()) pick[e++] = 0;
            if (e == pick.size()) break;
        }
        a.erase({i, j});
    }

    // nullopt when there are too many defining systems to list
    std::optional<std::set<Vector>> run() {
        std::vector<std::pair<int, int>> slots;
        for (int gap = 2; gap <= int(m) - 1; ++gap)
            for (int i = 0; i + gap <= int(m); ++i) slots.emplace_back(i, i + gap);
        fill(slots, 0);
        if (leaves > cap) return std::nullopt;
        return values;
    }
};

std::set<Vector> value_set(const BracketResult& r) {
    auto v = r.values(1 << 16);
    REQUIRE(v.has_value());
    return {v->begin(), v->end()};
}

ChainMatrix row(std::vector<Chain> c) { return {1, c.size(), std::move(c)}; }
ChainMatrix column(std::vector<Chain> c) { return {c.size(), 1, std::move(c)}; }

struct Case {
    std::string name;
    const DGAlgebra* u;
    std::vector<ChainMatrix> v;
};

}  // namespace

TEST_CASE("triple fixture bracket is the single class of w") {
    for (std::uint32_t p : {2u, 3u}) {
        const auto u = fixtures::triple_fixture(p);
        const std::vector<ChainMatrix> v{single(named(u, "a")), single(named(u, "b")), single(named(u, "c"))};
        const auto r = matric_massey(u, v);
        CHECK(r.defined);
        CHECK(r.exhaustive);
        CHECK(r.indeterminacy.dim() == 0);
        REQUIRE(r.cosets.size() == 1);
        const Vector w = homology_coords(u, single(named(u, "w")));
        CHECK(!is_zero(w));
        CHECK(r.contains(w));
        CHECK(value_set(r) == BruteForce(u, v).run().value());
        CHECK(smash_toda(u, v).same_values(r));
    }
}

TEST_CASE("a bracket with a zero entry contains zero") {
    for (std::uint32_t p : {2u, 3u}) {
        const auto u = fixtures::triple_fixture(p);
        const std::vector<ChainMatrix> v{single(named(u, "a")), single(u.zero_chain({-1, 0})), single(named(u, "c"))};
        CHECK(matric_massey(u, v).contains_zero());
        CHECK(smash_toda(u, v).contains_zero());
    }
}

TEST_CASE("non-cycles and mismatched shapes are rejected") {
    const auto u = fixtures::triple_fixture(2);
    CHECK_THROWS_AS(matric_massey(u, {single(named(u, "e")), single(named(u, "b")), single(named(u, "c"))}),
                    ValidationError);
    CHECK_THROWS_AS(matric_massey(u, {single(named(u, "a")), single(named(u, "b"))}), ValidationError);
    CHECK_THROWS_AS(matric_massey(u, {row({named(u, "a"), named(u, "b")}), single(named(u, "b")), single(named(u, "c"))}),
                    ValidationError);
}

TEST_CASE("both engines agree with exhaustive defining systems") {
    struct Alg {
        std::string tag;
        WordAlgebra w;
    };
    std::vector<Alg> algebras;
    const std::vector<std::array<int, 4>> degrees{{-1, -1, -1, -1}, {0, -1, -2, -1}, {-2, 0, -1, 0}, {0, 0, -1, -2}};
    for (std::uint32_t p : {2u, 3u}) {
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            const std::string tag = "F" + std::to_string(p) + " degrees #" + std::to_string(i);
            algebras.push_back({"triple " + tag, fixtures::bracket_fixture(p, degrees[i], 1, true)});
            if (i != 1) algebras.push_back({"quadruple " + tag, fixtures::bracket_fixture(p, degrees[i], 2, true)});
        }
        algebras.push_back({"matric F" + std::to_string(p), fixtures::matric_fixture(p)});
    }
    std::vector<Case> cases;
    for (const auto& a : algebras) {
        const DGAlgebra& u = a.w.algebra;
        const auto s = [&](const char* n) { return single(named(u, n)); };
        if (a.tag.rfind("matric", 0) == 0) {
            cases.push_back({a.tag, &u, {row({named(u, "a"), named(u, "b")}), column({named(u, "c"), named(u, "d")}), s("x")}});
        } else if (a.tag.rfind("triple", 0) == 0) {
            cases.push_back({a.tag + " abc", &u, {s("a"), s("b"), s("c")}});
            cases.push_back({a.tag + " bcd", &u, {s("b"), s("c"), s("d")}});
            cases.push_back({a.tag + " aab", &u, {s("a"), s("a"), s("b")}});
        } else {
            cases.push_back({a.tag + " abcd", &u, {s("a"), s("b"), s("c"), s("d")}});
        }
    }
    std::size_t triples = 0, quadruples = 0, with_choices = 0, with_indeterminacy = 0;
    std::size_t brute_checked = 0, brute_quadruples = 0;
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const auto massey = matric_massey(*c.u, c.v);
        const auto toda = smash_toda(*c.u, c.v);
        CHECK(massey.exhaustive);
        CHECK(toda.exhaustive);
        const auto brute = BruteForce(*c.u, c.v).run();
        if (brute) {
            ++brute_checked;
            if (c.v.size() > 3) ++brute_quadruples;
            CHECK(massey.defined == !brute->empty());
            if (massey.defined) CHECK(value_set(massey) == *brute);
        }
        CHECK(toda.same_values(massey));
        if (massey.systems <= 1000) {
            BracketOptions full;
            full.all_cycles = true;
            CHECK(matric_massey(*c.u, c.v, full).same_values(massey));
            CHECK(smash_toda(*c.u, c.v, full).same_values(massey));
        }
        const bool nontrivial = massey.defined && !massey.contains_zero();
        if (nontrivial) (c.v.size() == 3 ? triples : quadruples)++;
        if (massey.cosets.size() > 1) ++with_choices;
        if (massey.indeterminacy.dim() > 0) ++with_indeterminacy;
    }
    CHECK(triples >= 5);
    CHECK(quadruples >= 2);
    CHECK(with_choices >= 2);
    CHECK(with_indeterminacy >= 2);
    CHECK(brute_checked >= 20);
    CHECK(brute_quadruples >= 2);
}

namespace {

Matrix random_matrix(std::uint32_t p, std::size_t r, std::size_t c, std::mt19937& rng) {
    Matrix m(p, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng() % p);
    return m;
}

Grade at(const Grade& g, int k) { return {g.degree + k, g.weight}; }

// d_Z assembled without any validation; returns whether d^2 vanishes everywhere
bool raw_d_squared_zero(const LayeredSystem& s) {
    const int n = s.n();
    const PrimeField f(s.prime);
    std::set<Grade> grades;
    for (int i = 0; i <= n; ++i)
        for (const auto& g : s.layers[i].grades()) grades.insert(at(g, -(n - i)));
    const auto offsets = [&](const Grade& k) {
        std::vector<std::size_t> off{0};
        for (int i = 0; i <= n; ++i) off.push_back(off.back() + s.layers[i].dim(at(k, n - i)));
        return off;
    };
    const auto dz = [&](const Grade& k) {
        const auto src = offsets(k), dst = offsets(k.below());
        Matrix m(s.prime, dst.back(), src.back());
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i) {
                const Matrix b = s.f(i, j, at(k, n - j));
                for (std::size_t r = 0; r < b.rows(); ++r)
                    for (std::size_t c = 0; c < b.cols(); ++c)
                        m.add_to(dst[i] + r, src[j] + c, f.mul(f.sign(n + j), b.get(r, c)));
            }
        return m;
    };
    for (const auto& k : grades)
        if (!(dz(k.below()) * dz(k)).is_zero()) return false;
    return true;
}

std::map<Grade, std::size_t> homology_dims(const GradedComplex& c) {
    std::map<Grade, std::size_t> out;
    for (const auto& g : c.grades())
        if (const auto h = homology(c, g).dim(); h > 0) out[g] = h;
    return out;
}

}  // namespace

TEST_CASE("two layers give the mapping cone of the single map") {
    for (std::uint32_t p : {2u, 3u}) {
        const auto s = fixtures::gauge(fixtures::strict_tower(p, 1, 3), 4);
        const GradedComplex x1 = s.layers[1];
        const GradedComplex x0 = s.layers[0];
        ChainMap minus_f{&x1, &x0, {}};
        const PrimeField f(p);
        for (const auto& [g, m] : s.maps.at({0, 1}).blocks) {
            Matrix neg = m;
            for (std::size_t r = 0; r < neg.rows(); ++r) neg.scale_row(r, f.neg(1));
            minus_f.components.emplace(g, neg);
        }
        const auto cone = mapping_cone(minus_f);
        const auto w = iterated_cofiber_vs_fiber(s);
        for (const auto& g : cone.grades()) CHECK(cone.d(g) == w.cofiber.d(g));
        CHECK(homology_dims(cone) == homology_dims(w.shifted_fiber));
    }
}

TEST_CASE("a nonzero secondary homotopy gives d^2 = 0 over F_2") {
    std::mt19937 rng(8);
    const std::uint32_t p = 2;
    LayeredSystem s{p, {}, {}};
    const auto c = fixtures::random_complex(p, 21), x0 = fixtures::random_complex(p, 22);
    s.layers = {x0, c, c};
    LayerMap h, f01, f12;
    for (const auto& g : c.grades()) {
        f12.blocks.emplace(g, Matrix::identity(p, c.dim(g)));
        h.blocks.emplace(g, random_matrix(p, x0.dim(g.above()), c.dim(g), rng));
    }
    const auto hm = [&](const Grade& g) {
        auto it = h.blocks.find(g);
        return it == h.blocks.end() ? Matrix(p, x0.dim(g.above()), c.dim(g)) : it->second;
    };
    for (const auto& g : c.grades()) f01.blocks.emplace(g, x0.d(g.above()) * hm(g) + hm(g.below()) * c.d(g));
    s.maps = {{{0, 1}, f01}, {{1, 2}, f12}, {{0, 2}, h}};
    bool nonzero = false;
    for (const auto& [g, m] : h.blocks) nonzero = nonzero || !m.is_zero();
    REQUIRE(nonzero);
    CHECK_NOTHROW(check_relations(s));
    const auto z = z_complex(s);
    for (const auto& g : z.grades()) CHECK((z.d(g.below()) * z.d(g)).is_zero());
    CHECK(raw_d_squared_zero(s));
}

TEST_CASE("the direct formula matches the inductive fiber construction") {
    for (std::uint32_t p : {2u, 3u})
        for (int n = 1; n <= 3; ++n)
            for (unsigned seed = 0; seed < 3; ++seed) {
                const auto s = fixtures::gauge(fixtures::strict_tower(p, n, seed), 40 + seed);
                std::size_t higher = 0;
                for (const auto& [key, m] : s.maps)
                    if (key.second - key.first >= 2)
                        for (const auto& [g, b] : m.blocks) higher += !b.is_zero();
                if (n >= 2) CHECK(higher > 0);
                const auto a = z_complex(s);
                const auto b = z_complex_by_induction(s);
                CHECK(a.dims() == b.dims());
                for (const auto& g : a.grades()) CHECK(a.d(g) == b.d(g));
            }
}

TEST_CASE("relation violations are exactly the systems with d^2 != 0") {
    std::mt19937 rng(77);
    std::size_t rejected = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const std::uint32_t p = trial % 2 ? 3 : 2;
        const int n = 1 + trial % 3;
        auto s = fixtures::gauge(fixtures::strict_tower(p, n, trial), trial + 500);
        const int j = 1 + static_cast<int>(rng() % n);
        const int i = static_cast<int>(rng() % j);
        std::vector<Grade> gs = s.layers[j].grades();
        const Grade g = gs[rng() % gs.size()];
        const std::size_t rows = s.layers[i].dim(at(g, j - i - 1)), cols = s.layers[j].dim(g);
        if (rows == 0 || cols == 0) continue;
        Matrix m = s.f(i, j, g);
        m.add_to(rng() % rows, rng() % cols, 1 + rng() % (p - 1));
        s.maps[{i, j}].blocks[g] = m;
        bool relations_hold = true;
        try {
            check_relations(s);
        } catch (const RelationError& e) {
            relations_hold = false;
            CHECK(e.i < e.k);
            ++rejected;
        }
        CHECK(relations_hold == raw_d_squared_zero(s));
        if (relations_hold) {
            CHECK_NOTHROW(z_complex(s));
        } else {
            CHECK_THROWS_AS(z_complex(s), RelationError);
        }
    }
    CHECK(rejected > 50);
}

TEST_CASE("iterated cofibers agree with shifted iterated fibers") {
    for (std::uint32_t p : {2u, 3u})
        for (int n = 1; n <= 3; ++n)
            for (unsigned seed = 0; seed < 4; ++seed) {
                const auto s = fixtures::gauge(fixtures::strict_tower(p, n, seed + 10), seed + 90);
                const auto w = iterated_cofiber_vs_fiber(s);
                CHECK(w.cofiber.dims() == w.shifted_fiber.dims());
                CHECK(homology_dims(w.cofiber) == homology_dims(w.shifted_fiber));
                for (const auto& [g, m] : w.iso) CHECK(rank(m) == m.rows());
            }
}

TEST_CASE("a tower of zero maps gives a sum of shifts on both sides") {
    for (std::uint32_t p : {2u, 3u}) {
        LayeredSystem s{p, {}, {}};
        for (unsigned i = 0; i < 3; ++i) s.layers.push_back(fixtures::random_complex(p, 60 + i));
        const auto w = iterated_cofiber_vs_fiber(s);
        std::map<Grade, std::size_t> dims, hom;
        for (int i = 0; i <= 2; ++i) {
            for (const auto& [g, d] : s.layers[i].dims()) dims[at(g, i)] += d;
            for (const auto& [g, h] : homology_dims(s.layers[i])) hom[at(g, i)] += h;
        }
        CHECK(w.cofiber.dims() == dims);
        CHECK(homology_dims(w.cofiber) == hom);
        CHECK(homology_dims(w.shifted_fiber) == hom);
    }
}

TEST_CASE("signed arithmetic at p = 2 matches the unsigned fast path") {
    for (const std::array<int, 4> deg : {std::array<int, 4>{0, -1, -2, -1}, std::array<int, 4>{-1, -1, -1, -1}}) {
        const auto w = fixtures::bracket_fixture(2, deg, 1, true);
        const auto& u = w.algebra;
        const std::vector<ChainMatrix> v{single(named(u, "a")), single(named(u, "b")), single(named(u, "c"))};
        BracketOptions signed_opt;
        signed_opt.force_signed = true;
        CHECK(matric_massey(u, v, signed_opt).same_values(matric_massey(u, v)));
        CHECK(smash_toda(u, v, signed_opt).same_values(smash_toda(u, v)));
    }
}

TEST_CASE("triple-product indeterminacy is a H + H c") {
    for (std::uint32_t p : {2u, 3u})
        for (const std::array<int, 4> deg :
             {std::array<int, 4>{0, -1, -2, -1}, std::array<int, 4>{-2, 0, -1, 0}, std::array<int, 4>{0, 0, -1, -2}}) {
            const auto w = fixtures::bracket_fixture(p, deg, 1, true);
            const auto& u = w.algebra;
            const Chain a = named(u, "a"), b = named(u, "b"), c = named(u, "c");
            const auto r = matric_massey(u, {single(a), single(b), single(c)});
            REQUIRE(r.defined);
            const Grade target = r.entry_grades[0];
            std::vector<Vector> gens;
            const Grade left{target.degree - a.grade.degree, target.weight - a.grade.weight};
            const Grade right{target.degree - c.grade.degree, target.weight - c.grade.weight};
            const auto hl = homology(u, left), hr = homology(u, right);
            for (const auto& h : hl.reps())
                gens.push_back(homology_coords(u, single(u.multiply(a, Chain{left, h}))));
            for (const auto& h : hr.reps())
                gens.push_back(homology_coords(u, single(u.multiply(Chain{right, h}, c))));
            const auto expected = Subspace::span(p, r.flat_dim(), gens);
            CHECK(r.indeterminacy == expected);
            CHECK(r.cosets.size() == 1);
        }
}

TEST_CASE("a small budget marks the search as partial") {
    const auto w = fixtures::bracket_fixture(3, {-2, 0, -1, 0}, 2, true);
    const auto& u = w.algebra;
    const std::vector<ChainMatrix> v{single(named(u, "a")), single(named(u, "b")), single(named(u, "c")),
                                     single(named(u, "d"))};
    BracketOptions opt;
    opt.budget = 5;
    const auto r = matric_massey(u, v, opt);
    CHECK_FALSE(r.exhaustive);
    CHECK(r.systems == 5);
    CHECK_FALSE(smash_toda(u, v, opt).exhaustive);
}
