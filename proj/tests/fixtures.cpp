#include "fixtures.hpp"

#include <random>
#include <set>

using namespace filtss;

namespace fixtures {

DGAlgebra triple_fixture(std::uint32_t p) {
    std::vector<BasisElement> basis{{"1", {0, 0}}};
    for (const char* n : {"a", "b", "c", "e", "f"}) basis.push_back({n, {-1, 0}});
    for (const char* n : {"x", "y", "w"}) basis.push_back({n, {-2, 0}});
    // indices: 1=0 a=1 b=2 c=3 e=4 f=5 x=6 y=7 w=8
    std::map<std::size_t, SparseVec> d{{4, {{6, 1}}}, {5, {{7, 1}}}};
    std::map<std::pair<std::size_t, std::size_t>, SparseVec> prod{
        {{1, 2}, {{6, 1}}}, {{2, 3}, {{7, 1}}}, {{1, 5}, {{8, 1}}}};
    return DGAlgebra::from_table(p, basis, d, prod, 0);
}

GradedComplex random_complex(std::uint32_t p, unsigned seed, std::size_t max_dim) {
    std::mt19937 rng(seed);
    std::map<Grade, std::size_t> dims;
    for (int t = 0; t < 4; ++t) dims[{t, 0}] = 1 + rng() % max_dim;
    std::map<Grade, Matrix> d;
    // d_t = random map composed so that d_{t-1} d_t = 0: pick d_t with image inside ker d_{t-1}
    for (int t = 1; t < 4; ++t) {
        const Grade g{t, 0};
        const std::size_t rows = dims[g.below()], cols = dims[g];
        const Subspace ker = t == 1 ? Subspace::full(p, rows) : kernel(d.at(g.below()));
        Matrix m(p, rows, cols);
        const auto kb = ker.basis_vectors();
        for (std::size_t c = 0; c < cols; ++c) {
            Vector col(rows, 0);
            for (const auto& v : kb) axpy(PrimeField(p), col, rng() % p, v);
            for (std::size_t r = 0; r < rows; ++r) m.set(r, c, col[r]);
        }
        d.emplace(g, std::move(m));
    }
    return GradedComplex(p, dims, d);
}

}  // namespace fixtures

namespace fixtures {

Matrix inverse(const Matrix& m) {
    const std::size_t n = m.rows();
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0);
        e[j] = 1;
        auto res = solve(m, e);
        if (!res.solvable()) throw std::invalid_argument("matrix is not invertible");
        cols.push_back(*res.particular);
    }
    return Matrix::from_columns(m.prime(), n, cols);
}

FilteredDGA random_filtered(std::uint32_t p, unsigned seed, std::size_t dim, int max_level) {
    std::mt19937 rng(seed);
    const PrimeField f(p);
    struct Elem { int degree; int level; };
    std::vector<Elem> elems;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (elems.size() < dim) {
        const int deg = static_cast<int>(rng() % 3);
        const int lev = static_cast<int>(rng() % static_cast<unsigned>(max_level + 1));
        if (deg > 0 && elems.size() + 2 <= dim && rng() % 3 != 0) {
            const int lev2 = lev + static_cast<int>(rng() % static_cast<unsigned>(max_level + 1 - lev));
            pairs.emplace_back(elems.size(), elems.size() + 1);
            elems.push_back({deg, lev});
            elems.push_back({deg - 1, lev2});
        } else {
            elems.push_back({deg, lev});
        }
    }
    // order each degree block by level so that basis order is deterministic
    std::vector<std::size_t> order(elems.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(elems[a].degree, elems[a].level) < std::pair(elems[b].degree, elems[b].level);
    });
    std::vector<std::size_t> pos(elems.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::map<Grade, std::vector<std::size_t>> blocks;  // grade -> new indices
    for (std::size_t i = 0; i < order.size(); ++i) blocks[{elems[order[i]].degree, 0}].push_back(i);
    std::map<std::size_t, std::size_t> local;
    for (auto& [g, b] : blocks)
        for (std::size_t k = 0; k < b.size(); ++k) local[b[k]] = k;
    // elementary differential in block coordinates
    std::map<Grade, Matrix> d0;
    for (auto& [g, b] : blocks) d0.emplace(g, Matrix(p, blocks.count(g.below()) ? blocks[g.below()].size() : 0, b.size()));
    for (auto [x, y] : pairs) {
        const Grade g{elems[x].degree, 0};
        d0.at(g).set(local[pos[y]], local[pos[x]], 1 + rng() % (p - 1));
    }
    // random filtration-preserving automorphisms per block
    std::map<Grade, Matrix> change;
    for (auto& [g, b] : blocks) {
        Matrix m(p, b.size(), b.size());
        for (std::size_t r = 0; r < b.size(); ++r)
            for (std::size_t c = 0; c < b.size(); ++c) {
                const int lr = elems[order[b[r]]].level, lc = elems[order[b[c]]].level;
                if (r == c) m.set(r, c, 1 + rng() % (p - 1));
                else if (lr > lc || (lr == lc && r > c)) m.set(r, c, rng() % p);
            }
        change.emplace(g, m);
    }
    std::vector<BasisElement> basis;
    std::vector<int> levels;
    for (std::size_t i = 0; i < order.size(); ++i) {
        basis.push_back({"g" + std::to_string(i), {elems[order[i]].degree, 0}});
        levels.push_back(elems[order[i]].level);
    }
    std::map<std::size_t, SparseVec> diff;
    for (auto& [g, b] : blocks) {
        if (!blocks.count(g.below())) continue;
        const Matrix d = change.at(g.below()) * d0.at(g) * inverse(change.at(g));
        const auto& tb = blocks[g.below()];
        for (std::size_t c = 0; c < d.cols(); ++c) {
            SparseVec img;
            for (std::size_t r = 0; r < d.rows(); ++r)
                if (Scalar v = d.get(r, c)) img.emplace_back(tb[r], v);
            if (!img.empty()) diff.emplace(b[c], std::move(img));
        }
    }
    return FilteredDGA(DGAlgebra(p, std::move(basis), diff, std::nullopt, std::nullopt), std::move(levels));
}

FilteredDGA dying_class() {
    std::vector<BasisElement> basis{{"a", {0, 0}}, {"b", {1, 0}}};
    std::map<std::size_t, SparseVec> d{{1, {{0, 1}}}};
    return FilteredDGA(DGAlgebra(2, basis, d, std::nullopt, std::nullopt), {1, 0});
}

}  // namespace fixtures

namespace fixtures {

namespace {

FilteredDGA word_fixture(const WordAlgebraSpec& spec) {
    const auto w = build_word_algebra(spec);
    return FilteredDGA(w.algebra, w.levels);
}

}  // namespace

FilteredDGA cube_fixture(std::uint32_t p, int max_weight) {
    WordAlgebraSpec spec;
    spec.prime = p;
    spec.letters = {{"x", {0, 1}}, {"y", {1, 3}}};
    spec.max_length = static_cast<std::size_t>(max_weight);
    spec.max_weight = max_weight;
    spec.differential[1] = {{1, {0, 0, 0}}};
    return word_fixture(spec);
}

FilteredDGA fourth_power_fixture(std::uint32_t p, int max_weight) {
    WordAlgebraSpec spec;
    spec.prime = p;
    spec.letters = {{"x", {0, 1}}, {"y", {1, 4}}};
    spec.max_length = static_cast<std::size_t>(max_weight);
    spec.max_weight = max_weight;
    spec.differential[1] = {{1, {0, 0, 0, 0}}};
    return word_fixture(spec);
}

FilteredDGA mixed_fixture(std::uint32_t p, int max_weight) {
    WordAlgebraSpec spec;
    spec.prime = p;
    spec.letters = {{"x", {0, 1}}, {"y", {1, 3}}, {"z", {2, 4}}};
    spec.max_length = static_cast<std::size_t>(max_weight);
    spec.max_weight = max_weight;
    spec.differential[1] = {{1, {0, 0, 0}}};
    spec.differential[2] = {{1, {0, 1}}, {p - 1, {1, 0}}};
    return word_fixture(spec);
}

FilteredDGA two_cell() {
    std::vector<BasisElement> basis{{"a", {1, 0}}, {"b", {0, 0}}};
    std::map<std::size_t, SparseVec> d{{0, {{1, 1}}}};
    return FilteredDGA(DGAlgebra(2, basis, d, std::nullopt, std::nullopt), {0, 2});
}

}  // namespace fixtures

namespace fixtures {

WordAlgebra quadruple_fixture(std::uint32_t p) {
    WordAlgebraSpec s;
    s.prime = p;
    s.letters = {{"a", {-1, 1}}, {"b", {-1, 1}}, {"c", {-1, 1}}, {"d", {-1, 1}},
                 {"eab", {-1, 2}}, {"ebc", {-1, 2}}, {"ecd", {-1, 2}},
                 {"gabc", {-1, 3}}, {"gbcd", {-1, 3}}};
    s.max_length = 4;
    s.max_weight = 4;
    s.differential = {{4, {{1, {0, 1}}}}, {5, {{1, {1, 2}}}}, {6, {{1, {2, 3}}}},
                      {7, {{1, {4, 2}}, {1, {0, 5}}}}, {8, {{1, {5, 3}}, {1, {1, 6}}}}};
    return build_word_algebra(s, 200);
}

WordAlgebra matric_fixture(std::uint32_t p) {
    WordAlgebraSpec s;
    s.prime = p;
    s.letters = {{"a", {-1, 1}}, {"b", {-1, 1}}, {"c", {-1, 1}}, {"d", {-1, 1}}, {"x", {-1, 1}},
                 {"e", {-1, 2}}, {"f", {-1, 2}}, {"g", {-1, 2}}};
    s.max_length = 3;
    s.max_weight = 3;
    s.differential = {{5, {{1, {0, 2}}, {1, {1, 3}}}}, {6, {{1, {2, 4}}}}, {7, {{1, {3, 4}}}}};
    return build_word_algebra(s, 200);
}

Chain named(const DGAlgebra& u, const std::string& name, Scalar c) {
    return u.scale(u.basis_chain(u.index(name)), c);
}

}  // namespace fixtures

namespace fixtures {

WordAlgebra bracket_fixture(std::uint32_t p, std::array<int, 4> deg, int killers, bool extra) {
    const PrimeField f(p);
    WordAlgebraSpec s;
    s.prime = p;
    s.max_length = 4;
    s.max_weight = 4;
    const auto letter = [&](const std::string& name, int degree, int weight) {
        s.letters.push_back({name, {degree, weight}});
        return static_cast<int>(s.letters.size()) - 1;
    };
    const auto bar = [&](int degree) { return f.sign(1 + degree); };
    int x[4];
    for (int i = 0; i < 4; ++i) x[i] = letter(std::string(1, char('a' + i)), deg[i], 1);
    int e[3];
    for (int i = 0; i < 3; ++i) {
        const std::string name = std::string("e") + char('a' + i) + char('b' + i);
        e[i] = letter(name, deg[i] + deg[i + 1] + 1, 2);
        s.differential[e[i]] = {{bar(deg[i]), {x[i], x[i + 1]}}};
    }
    int z = -1;
    if (extra) z = letter("z", deg[0] + deg[1] + 1, 2);
    if (killers >= 2) {
        for (int i = 0; i < 2; ++i) {
            const std::string name = std::string("g") + char('a' + i) + char('b' + i) + char('c' + i);
            const int ed = deg[i] + deg[i + 1] + 1;
            const int g = letter(name, ed + deg[i + 2] + 1, 3);
            s.differential[g] = {{bar(ed), {e[i], x[i + 2]}}, {bar(deg[i]), {x[i], e[i + 1]}}};
        }
        if (extra) {
            const int zd = deg[0] + deg[1] + 1;
            const int h = letter("h", zd + deg[2] + 1, 3);
            s.differential[h] = {{bar(zd), {z, x[2]}}};
        }
    }
    return build_word_algebra(s, 200);
}

}  // namespace fixtures

namespace fixtures {

namespace {

WordAlgebra graded(std::uint32_t p, std::vector<WordAlgebraSpec::Letter> letters, int max_weight,
                   std::vector<std::vector<int>> forbidden = {}) {
    WordAlgebraSpec s;
    s.prime = p;
    s.letters = std::move(letters);
    s.max_weight = max_weight;
    s.max_length = static_cast<std::size_t>(max_weight);
    s.forbidden = std::move(forbidden);
    return build_word_algebra(s, 120);
}

}  // namespace

WordAlgebra exterior_fixture(std::uint32_t p, int max_weight) {
    return graded(p, {{"x", {-1, 1}}}, max_weight, {{0, 0}});
}

WordAlgebra free_fixture(std::uint32_t p, int letters, int max_weight) {
    std::vector<WordAlgebraSpec::Letter> ls;
    for (int i = 0; i < letters; ++i) ls.push_back({std::string(1, static_cast<char>('a' + i)), {-1, 1}});
    return graded(p, ls, max_weight);
}

WordAlgebra monomial_fixture(std::uint32_t p, int max_weight) {
    return graded(p, {{"a", {-1, 1}}, {"b", {-1, 1}}}, max_weight, {{0, 1}});
}

WordAlgebra low_generator_fixture(std::uint32_t p, int max_weight) {
    return graded(p, {{"a", {-1, 1}}, {"c", {-2, 1}}}, max_weight);
}

WordAlgebra random_free_dga(unsigned seed, int max_weight) {
    std::mt19937 rng(seed);
    WordAlgebraSpec s;
    s.prime = 2;
    s.letters = {{"a", {-1, 1}}, {"b", {-1, 1}}, {"c", {-1, 1}}, {"e", {-1, 2}}, {"f", {-1, 2}}, {"g", {-1, 3}}};
    s.max_weight = max_weight;
    s.max_length = static_cast<std::size_t>(max_weight);
    for (int attempt = 0; attempt < 50; ++attempt) {
        for (int letter : {3, 4}) {
            s.differential[letter].clear();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (rng() % 2) s.differential[letter].push_back({1, {i, j}});
        }
        if (!s.differential[3].empty() || !s.differential[4].empty()) break;
    }
    // d g: a random cycle among the two-letter words of its grade, so d^2 = 0 holds by construction
    s.differential[5].clear();
    const auto base = build_word_algebra(s, 30);
    const Grade gg{-2, 3};
    const Subspace z = kernel(base.algebra.complex().d(gg));
    Vector pick(base.algebra.block_dim(gg), 0);
    for (const Vector& v : z.basis_vectors())
        if (rng() % 2) axpy(base.algebra.field(), pick, 1, v);
    for (std::size_t k = 0; k < pick.size(); ++k)
        if (pick[k]) s.differential[5].push_back({1, base.words[base.algebra.block(gg)[k]]});
    return build_word_algebra(s, 30);
}

}  // namespace fixtures

namespace fixtures {

FilteredDGA moss_fixture(std::uint32_t p, int k, bool crossing) {
    std::vector<BasisElement> basis{{"1", {0, 0}}};
    for (const char* n : {"a", "b", "c", "e", "f"}) basis.push_back({n, {-1, 0}});
    for (const char* n : {"x", "y", "w"}) basis.push_back({n, {-2, 0}});
    std::vector<int> levels{0, k, k, k, k, k, 2 * k, 2 * k, 2 * k};
    std::map<std::size_t, SparseVec> d{{4, {{6, 1}}}, {5, {{7, 1}}}};
    std::map<std::pair<std::size_t, std::size_t>, SparseVec> prod{
        {{1, 2}, {{6, 1}}}, {{2, 3}, {{7, 1}}}, {{1, 5}, {{8, 1}}}};
    if (crossing) {
        basis.push_back({"u", {-1, 0}});
        basis.push_back({"v", {-2, 0}});
        levels.push_back(k - 1);
        levels.push_back(2 * k + 1);
        d[9] = {{10, 1}};
    }
    return FilteredDGA(DGAlgebra::from_table(p, basis, d, prod, 0), levels);
}

}  // namespace fixtures

namespace fixtures {

namespace {

Grade shifted(const Grade& g, int k) { return {g.degree + k, g.weight}; }

}  // namespace

// X_0 = X_1 = C, X_2 = X_3 = D (as many as n asks for), f_{i,i+1} alternating identity and zero
LayeredSystem strict_tower(std::uint32_t p, int n, unsigned seed) {
    LayeredSystem s{p, {}, {}};
    const auto c = fixtures::random_complex(p, seed);
    const auto d = fixtures::random_complex(p, seed + 100);
    for (int i = 0; i <= n; ++i) s.layers.push_back(i / 2 % 2 == 0 ? c : d);
    for (int i = 0; i < n; ++i) {
        if (i % 2 != 0) continue;
        LayerMap m;
        for (const auto& g : s.layers[i + 1].grades()) m.blocks.emplace(g, Matrix::identity(p, s.layers[i + 1].dim(g)));
        s.maps.emplace(std::make_pair(i, i + 1), m);
    }
    return s;
}

// Conjugates the total differential by a random unipotent block-upper-triangular automorphism and
// reads the new layer maps back off; the result satisfies the relations with nonzero higher maps.
LayeredSystem gauge(const LayeredSystem& s, unsigned seed) {
    std::mt19937 rng(seed);
    const int n = s.n();
    const PrimeField f(s.prime);
    const GradedComplex z = z_complex(s);
    std::set<Grade> grades;
    for (const auto& g : z.grades()) {
        grades.insert(g);
        grades.insert(g.below());
    }
    const auto offsets = [&](const Grade& k) {
        std::vector<std::size_t> off{0};
        for (int i = 0; i <= n; ++i) off.push_back(off.back() + s.layers[i].dim(shifted(k, n - i)));
        return off;
    };
    std::map<Grade, Matrix> phi;
    for (const auto& k : grades) {
        const auto off = offsets(k);
        Matrix m = Matrix::identity(s.prime, off.back());
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (std::size_t r = off[i]; r < off[i + 1]; ++r)
                    for (std::size_t c = off[j]; c < off[j + 1]; ++c) m.set(r, c, rng() % s.prime);
        phi.emplace(k, std::move(m));
    }
    LayeredSystem out{s.prime, s.layers, {}};
    for (const auto& k : z.grades()) {
        const Matrix dk = inverse(phi.at(k.below())) * z.d(k) * phi.at(k);
        const auto src = offsets(k), dst = offsets(k.below());
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i) {
                const Grade g = shifted(k, n - j);
                Matrix b(s.prime, dst[i + 1] - dst[i], src[j + 1] - src[j]);
                for (std::size_t r = 0; r < b.rows(); ++r)
                    for (std::size_t c = 0; c < b.cols(); ++c)
                        b.set(r, c, f.mul(f.sign(n + j), dk.get(dst[i] + r, src[j] + c)));
                if (b.rows() && b.cols()) out.maps[{i, j}].blocks.emplace(g, std::move(b));
            }
    }
    return out;
}


AbstractChart random_chart(std::uint32_t p, unsigned seed) {
    std::mt19937 rng(seed);
    AbstractChart chart;
    chart.prime = p;
    int id = 0;
    auto fresh = [&](int n, int t) {
        chart.classes.push_back({"c" + std::to_string(id++), n, t, 0});
        return chart.classes.back().name;
    };
    while (chart.classes.size() < 18) {
        const int n = static_cast<int>(rng() % 4), t = static_cast<int>(rng() % 4);
        if (rng() % 3 == 0) {
            fresh(n, t);
            continue;
        }
        const int r = 1 + static_cast<int>(rng() % 4);
        const int m = 1 + static_cast<int>(rng() % 2);  // block size of the bijection
        std::vector<std::string> s, tg;
        for (int i = 0; i < m; ++i) s.push_back(fresh(n, t));
        for (int i = 0; i < m; ++i) tg.push_back(fresh(n + r, t - 1));
        // upper unitriangular block times a random nonzero diagonal
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const Scalar c = i == j ? 1 + rng() % (p - 1) : rng() % p;
                if (c) chart.differentials.push_back({r, s[static_cast<std::size_t>(j)], tg[static_cast<std::size_t>(i)], c});
            }
    }
    return chart;
}

}  // namespace fixtures
