#include "filtss/massey.hpp"

#include <algorithm>
#include <functional>

namespace filtss {

ChainMatrix single(const Chain& c) { return {1, 1, {c}}; }

bool BracketResult::contains(std::span<const Scalar> flat) const {
    if (flat.size() != flat_dim()) return false;
    return cosets.count(indeterminacy.reduce(flat)) > 0;
}

bool BracketResult::contains_zero() const { return contains(Vector(flat_dim(), 0)); }

std::optional<std::vector<Vector>> BracketResult::values(std::size_t limit) const {
    const auto w = indeterminacy.basis_vectors();
    const std::uint32_t p = indeterminacy.prime();
    std::size_t per = 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        per *= p;
        if (per > limit) return std::nullopt;
    }
    if (per * cosets.size() > limit) return std::nullopt;
    const PrimeField f(p);
    std::vector<Vector> out;
    for (const auto& base : cosets) {
        Vector c(w.size(), 0);
        while (true) {
            Vector v = base;
            for (std::size_t i = 0; i < w.size(); ++i) axpy(f, v, c[i], w[i]);
            out.push_back(std::move(v));
            std::size_t i = 0;
            while (i < c.size() && ++c[i] == p) c[i++] = 0;
            if (i == c.size()) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool BracketResult::same_values(const BracketResult& o) const {
    return defined == o.defined && entry_grades == o.entry_grades && entry_dims == o.entry_dims &&
           indeterminacy == o.indeterminacy && cosets == o.cosets;
}

namespace {

Grade minus(const Grade& a, const Grade& b) { return {a.degree - b.degree, a.weight - b.weight}; }
Grade up(const Grade& a, int k) { return {a.degree + k, a.weight}; }
long long choose2(long long n) { return n * (n - 1) / 2; }

using Table = std::map<std::pair<int, int>, ChainMatrix>;

// Grade bookkeeping: V_s[p][q] sits at delta[s-1][p] - delta[s][q], normalized by delta[m][0] = 0.
struct Shape {
    std::size_t m = 0;
    std::vector<std::size_t> k;
    std::vector<std::vector<Grade>> delta;

    Grade entry(int i, int j, std::size_t p, std::size_t q) const {
        return up(minus(delta[i][p], delta[j][q]), j - i - 1);
    }
};

Shape make_shape(const DGAlgebra& u, const std::vector<ChainMatrix>& v) {
    if (!u.is_multiplicative()) throw ValidationError("brackets need a multiplicative algebra");
    if (v.size() < 3) throw ValidationError("a bracket needs at least three matrices");
    Shape sh;
    sh.m = v.size();
    sh.k.push_back(v[0].rows);
    for (std::size_t s = 0; s < v.size(); ++s) {
        const auto& a = v[s];
        if (a.rows == 0 || a.cols == 0 || a.entries.size() != a.rows * a.cols)
            throw ValidationError("matrix " + std::to_string(s + 1) + " has an inconsistent shape");
        if (a.rows != sh.k.back())
            throw ValidationError("matrices " + std::to_string(s) + " and " + std::to_string(s + 1) +
                                  " are not multipliable");
        sh.k.push_back(a.cols);
    }
    std::vector<std::vector<std::optional<Grade>>> d(sh.m + 1);
    for (std::size_t s = 0; s <= sh.m; ++s) d[s].resize(sh.k[s]);
    d[sh.m][0] = Grade{0, 0};
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 1; s <= sh.m; ++s) {
            const auto& a = v[s - 1];
            for (std::size_t p = 0; p < a.rows; ++p)
                for (std::size_t q = 0; q < a.cols; ++q) {
                    const Grade g = a.at(p, q).grade;
                    auto& lo = d[s - 1][p];
                    auto& hi = d[s][q];
                    if (lo && !hi) { hi = minus(*lo, g); changed = true; }
                    else if (hi && !lo) { lo = *hi + g; changed = true; }
                    else if (lo && hi && minus(*lo, *hi) != g)
                        throw ValidationError("matrix " + std::to_string(s) + " has entry grades that are not multipliable");
                }
        }
    }
    sh.delta.resize(sh.m + 1);
    for (std::size_t s = 0; s <= sh.m; ++s)
        for (const auto& g : d[s]) sh.delta[s].push_back(*g);

    for (std::size_t s = 0; s < v.size(); ++s)
        for (std::size_t e = 0; e < v[s].entries.size(); ++e) {
            const Chain& c = v[s].entries[e];
            if (c.coeffs.size() != u.block_dim(c.grade))
                throw ValidationError("matrix " + std::to_string(s + 1) + " entry " + std::to_string(e) +
                                      " does not match its grade");
            if (!is_zero(u.d(c).coeffs))
                throw ValidationError("matrix " + std::to_string(s + 1) + " entry " + std::to_string(e) +
                                      " is not a cycle");
        }
    return sh;
}

struct Engine {
    const DGAlgebra& u;
    PrimeField f;
    bool sgn;
    Shape sh;
    bool all_cycles;
    HomologyCache* shared;
    std::map<Grade, HomologyGroup> hom;

    Engine(const DGAlgebra& alg, const std::vector<ChainMatrix>& v, const BracketOptions& opt)
        : u(alg), f(alg.prime()), sgn(alg.prime() != 2 || opt.force_signed), sh(make_shape(alg, v)),
          all_cycles(opt.all_cycles), shared(opt.cache && &opt.cache->algebra() == &alg ? opt.cache : nullptr) {}

    Scalar sign(long long e) const { return sgn ? f.sign(e) : 1; }
    Chain bar(const Chain& c) const { return sgn ? u.scale(c, f.sign(1 + c.grade.degree)) : c; }

    const HomologyGroup& homology_at(const Grade& g) {
        if (shared) return shared->at(g);
        auto it = hom.find(g);
        if (it == hom.end()) it = hom.emplace(g, homology(u, g)).first;
        return it->second;
    }

    ChainMatrix zeros(std::size_t rows, std::size_t cols, const std::function<Grade(std::size_t, std::size_t)>& grade) const {
        ChainMatrix out{rows, cols, {}};
        for (std::size_t p = 0; p < rows; ++p)
            for (std::size_t q = 0; q < cols; ++q) out.entries.push_back(u.zero_chain(grade(p, q)));
        return out;
    }

    // sum over i < k < j of bar(A_ik) A_kj
    ChainMatrix tilde(const Table& a, int i, int j) const {
        ChainMatrix out = zeros(sh.k[i], sh.k[j], [&](std::size_t p, std::size_t q) { return sh.entry(i, j, p, q).below(); });
        for (int mid = i + 1; mid < j; ++mid) {
            const ChainMatrix& l = a.at({i, mid});
            const ChainMatrix& r = a.at({mid, j});
            for (std::size_t p = 0; p < out.rows; ++p)
                for (std::size_t t = 0; t < l.cols; ++t) {
                    const Chain lb = bar(l.at(p, t));
                    if (is_zero(lb.coeffs)) continue;
                    for (std::size_t q = 0; q < out.cols; ++q) {
                        const Chain& rc = r.at(t, q);
                        if (is_zero(rc.coeffs)) continue;
                        out.at(p, q) = u.add(out.at(p, q), u.multiply(lb, rc));
                    }
                }
        }
        return out;
    }

    Vector flatten(const ChainMatrix& m) {
        Vector out;
        for (const auto& c : m.entries) {
            const auto v = homology_at(c.grade).coords(c.coeffs);
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    // particular solution of dA = rhs entrywise, plus the free directions (entry, vector)
    struct Lift {
        ChainMatrix particular;
        std::vector<std::pair<std::size_t, Vector>> free;
    };

    std::optional<Lift> lift(const ChainMatrix& rhs, bool with_free) {
        Lift out{rhs, {}};
        for (std::size_t e = 0; e < rhs.entries.size(); ++e) {
            const Grade g = rhs.entries[e].grade.above();
            auto res = solve(u.complex().d(g), rhs.entries[e].coeffs);
            if (!res.solvable()) return std::nullopt;
            out.particular.entries[e] = Chain{g, *res.particular};
            if (!with_free) continue;
            const auto dirs = all_cycles ? res.kernel.basis_vectors() : homology_at(g).reps();
            for (const auto& d : dirs) out.free.emplace_back(e, d);
        }
        return out;
    }

    std::vector<Grade> value_grades() const {
        std::vector<Grade> out;
        for (std::size_t p = 0; p < sh.k[0]; ++p)
            for (std::size_t q = 0; q < sh.k[sh.m]; ++q) out.push_back(sh.entry(0, static_cast<int>(sh.m), p, q).below());
        return out;
    }

    BracketResult start() {
        BracketResult r;
        r.rows = sh.k[0];
        r.cols = sh.k[sh.m];
        r.entry_grades = value_grades();
        std::size_t total = 0;
        for (const auto& g : r.entry_grades) {
            r.entry_dims.push_back(homology_at(g).dim());
            total += r.entry_dims.back();
        }
        r.indeterminacy = Subspace(u.prime(), total);
        return r;
    }
};

// Level-by-level enumeration of the entries in `slots`; `leaf` runs on each complete choice.
class SlotSearch {
public:
    SlotSearch(Engine& e, std::vector<std::pair<int, int>> slots, std::size_t budget, std::function<void(Table&)> leaf)
        : e_(e), slots_(std::move(slots)), budget_(budget), leaf_(std::move(leaf)) {}

    // false when the budget cut the search short
    bool run(Table& t) { return step(t, 0); }
    std::size_t visited() const { return visited_; }

private:
    bool step(Table& t, std::size_t idx) {
        if (idx == slots_.size()) {
            if (visited_ >= budget_) return false;
            ++visited_;
            leaf_(t);
            return true;
        }
        const auto [i, j] = slots_[idx];
        auto sol = e_.lift(e_.tilde(t, i, j), true);
        if (!sol) return true;
        const std::uint32_t p = e_.u.prime();
        Vector c(sol->free.size(), 0);
        while (true) {
            ChainMatrix a = sol->particular;
            for (std::size_t d = 0; d < c.size(); ++d)
                if (c[d] != 0) {
                    auto& entry = a.entries[sol->free[d].first];
                    axpy(e_.f, entry.coeffs, c[d], sol->free[d].second);
                }
            t[{i, j}] = std::move(a);
            if (!step(t, idx + 1)) return false;
            std::size_t d = 0;
            while (d < c.size() && ++c[d] == p) c[d++] = 0;
            if (d == c.size()) break;
        }
        t.erase({i, j});
        return true;
    }

    Engine& e_;
    std::vector<std::pair<int, int>> slots_;
    std::size_t budget_;
    std::function<void(Table&)> leaf_;
    std::size_t visited_ = 0;
};

Table initial_table(const std::vector<ChainMatrix>& v) {
    Table t;
    for (std::size_t s = 1; s <= v.size(); ++s) t[{static_cast<int>(s) - 1, static_cast<int>(s)}] = v[s - 1];
    return t;
}

void finish(BracketResult& r, const std::vector<Vector>& w, const std::vector<Vector>& bases, bool complete,
            std::size_t visited) {
    r.indeterminacy = Subspace::span(r.indeterminacy.prime(), r.indeterminacy.ambient_dim(), w);
    for (const auto& b : bases) r.cosets.insert(r.indeterminacy.reduce(b));
    r.defined = !r.cosets.empty();
    if (!r.defined) r.indeterminacy = Subspace(r.indeterminacy.prime(), r.indeterminacy.ambient_dim());
    r.exhaustive = complete;
    r.systems = visited;
}

}  // namespace

const HomologyGroup& HomologyCache::at(const Grade& g) {
    auto it = memo_.find(g);
    if (it == memo_.end()) it = memo_.emplace(g, std::make_unique<HomologyGroup>(homology(*u_, g))).first;
    return *it->second;
}

Vector homology_coords(const DGAlgebra& u, const ChainMatrix& m) {
    Vector out;
    for (const auto& c : m.entries) {
        const auto v = homology(u, c.grade).coords(c.coeffs);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

BracketResult matric_massey(const DGAlgebra& u, const std::vector<ChainMatrix>& v, const BracketOptions& opt) {
    Engine e(u, v, opt);
    const int m = static_cast<int>(e.sh.m);
    BracketResult r = e.start();

    // Free choices in A_{0,m-1} and A_{1,m} move the value along a fixed subspace.
    std::vector<Vector> w;
    const auto value_zero = [&] {
        return e.zeros(e.sh.k[0], e.sh.k[m], [&](std::size_t p, std::size_t q) { return e.sh.entry(0, m, p, q).below(); });
    };
    for (std::size_t p = 0; p < e.sh.k[0]; ++p)
        for (std::size_t t = 0; t < e.sh.k[m - 1]; ++t)
            for (const auto& z : e.homology_at(e.sh.entry(0, m - 1, p, t)).reps()) {
                const Chain zb = e.bar(Chain{e.sh.entry(0, m - 1, p, t), z});
                ChainMatrix c = value_zero();
                for (std::size_t q = 0; q < c.cols; ++q) c.at(p, q) = u.multiply(zb, v[m - 1].at(t, q));
                w.push_back(e.flatten(c));
            }
    for (std::size_t t = 0; t < e.sh.k[1]; ++t)
        for (std::size_t q = 0; q < e.sh.k[m]; ++q)
            for (const auto& z : e.homology_at(e.sh.entry(1, m, t, q)).reps()) {
                const Chain zc{e.sh.entry(1, m, t, q), z};
                ChainMatrix c = value_zero();
                for (std::size_t p = 0; p < c.rows; ++p) c.at(p, q) = u.multiply(e.bar(v[0].at(p, t)), zc);
                w.push_back(e.flatten(c));
            }

    std::vector<std::pair<int, int>> slots;
    for (int gap = 2; gap <= m - 2; ++gap)
        for (int i = 0; i + gap <= m; ++i) slots.emplace_back(i, i + gap);

    std::vector<Vector> bases;
    SlotSearch search(e, slots, opt.budget, [&](Table& t) {
        auto left = e.lift(e.tilde(t, 0, m - 1), false);
        if (!left) return;
        auto right = e.lift(e.tilde(t, 1, m), false);
        if (!right) return;
        t[{0, m - 1}] = left->particular;
        t[{1, m}] = right->particular;
        bases.push_back(e.flatten(e.tilde(t, 0, m)));
        t.erase({0, m - 1});
        t.erase({1, m});
    });
    Table t = initial_table(v);
    const bool complete = search.run(t);
    finish(r, w, bases, complete, search.visited());
    return r;
}

Matrix LayeredSystem::f(int i, int j, const Grade& g) const {
    if (i == j) return layers[i].d(g);
    const Grade target = up(g, j - i - 1);
    auto it = maps.find({i, j});
    if (it != maps.end()) {
        auto b = it->second.blocks.find(g);
        if (b != it->second.blocks.end()) return b->second;
    }
    return Matrix(prime, layers[i].dim(target), layers[j].dim(g));
}

void check_relations(const LayeredSystem& s) {
    const PrimeField fld(s.prime);
    for (const auto& [key, map] : s.maps) {
        const auto [i, j] = key;
        if (i < 0 || j > s.n() || i >= j) throw ValidationError("layer map index out of range");
        for (const auto& [g, m] : map.blocks)
            if (m.rows() != s.layers[i].dim(up(g, j - i - 1)) || m.cols() != s.layers[j].dim(g))
                throw RelationError(i, j, g, "layer map f_" + std::to_string(i) + std::to_string(j) + " out of " +
                                                 to_string(g) + " has the wrong shape");
    }
    for (int k = 1; k <= s.n(); ++k)
        for (int i = 0; i < k; ++i)
            for (const auto& g : s.layers[k].grades()) {
                const Grade target = up(g, k - i - 2);
                Matrix sum(s.prime, s.layers[i].dim(target), s.layers[k].dim(g));
                for (int j = i; j <= k; ++j) {
                    const Grade mid = up(g, k - j - 1);
                    Matrix prod = s.f(i, j, mid) * s.f(j, k, g);
                    if (j % 2 != 0)
                        for (std::size_t r = 0; r < prod.rows(); ++r) prod.scale_row(r, fld.neg(1));
                    sum = sum + prod;
                }
                if (!sum.is_zero())
                    throw RelationError(i, k, g, "relation for (" + std::to_string(i) + "," + std::to_string(k) +
                                                     ") fails out of degree " + to_string(g));
            }
}

namespace {

void place(Matrix& dst, const Matrix& src, std::size_t r0, std::size_t c0, Scalar s) {
    const PrimeField f(dst.prime());
    for (std::size_t r = 0; r < src.rows(); ++r)
        for (std::size_t c = 0; c < src.cols(); ++c) {
            const Scalar x = src.get(r, c);
            if (x != 0) dst.add_to(r0 + r, c0 + c, f.mul(x, s));
        }
}

// offsets of X_0 .. X_n inside Z_K (last entry is the total)
std::vector<std::size_t> z_offsets(const LayeredSystem& s, const Grade& k) {
    std::vector<std::size_t> off{0};
    for (int i = 0; i <= s.n(); ++i) off.push_back(off.back() + s.layers[i].dim(up(k, s.n() - i)));
    return off;
}

std::set<Grade> z_grades(const LayeredSystem& s) {
    std::set<Grade> out;
    for (int i = 0; i <= s.n(); ++i)
        for (const auto& g : s.layers[i].grades()) out.insert(up(g, -(s.n() - i)));
    return out;
}

}  // namespace

GradedComplex z_complex(const LayeredSystem& s) {
    check_relations(s);
    const int n = s.n();
    const PrimeField fld(s.prime);
    std::map<Grade, std::size_t> dims;
    std::map<Grade, Matrix> d;
    for (const auto& k : z_grades(s)) {
        const auto src = z_offsets(s, k);
        const auto dst = z_offsets(s, k.below());
        dims[k] = src.back();
        Matrix m(s.prime, dst.back(), src.back());
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i) place(m, s.f(i, j, up(k, n - j)), dst[i], src[j], fld.sign(n + j));
        d.emplace(k, std::move(m));
    }
    return GradedComplex(s.prime, std::move(dims), std::move(d));
}

GradedComplex z_complex_by_induction(const LayeredSystem& s) {
    check_relations(s);
    const PrimeField fld(s.prime);
    GradedComplex z = s.layers[0];
    for (int t = 1; t <= s.n(); ++t) {
        // Z^t_K = Z^{t-1}_{K+1} + (X_t)_K with d(z, x) = (-dz + f(x), dx)
        LayeredSystem prefix{s.prime, {}, {}};
        for (int i = 0; i < t; ++i) prefix.layers.push_back(s.layers[i]);
        std::set<Grade> grades;
        for (const auto& g : z.grades()) grades.insert(g.below());
        for (const auto& g : s.layers[t].grades()) grades.insert(g);
        std::map<Grade, std::size_t> dims;
        std::map<Grade, Matrix> d;
        for (const auto& k : grades) {
            const std::size_t zs = z.dim(k.above()), xs = s.layers[t].dim(k);
            const std::size_t zt = z.dim(k), xt = s.layers[t].dim(k.below());
            dims[k] = zs + xs;
            Matrix m(s.prime, zt + xt, zs + xs);
            place(m, z.d(k.above()), 0, 0, fld.neg(1));
            const auto off = z_offsets(prefix, k);
            for (int i = 0; i < t; ++i) place(m, s.f(i, t, k), off[i], zs, 1);
            place(m, s.layers[t].d(k), zt, zs, 1);
            d.emplace(k, std::move(m));
        }
        z = GradedComplex(s.prime, std::move(dims), std::move(d));
    }
    return z;
}

GradedComplex iterated_cofiber(const LayeredSystem& s) {
    check_relations(s);
    const PrimeField fld(s.prime);
    GradedComplex c = s.layers[0];
    for (int k = 1; k <= s.n(); ++k) {
        const GradedComplex src = shift(s.layers[k], k - 1);
        ChainMap f{&src, &c, {}};
        for (const auto& g : src.grades()) {
            Matrix m(s.prime, c.dim(g), src.dim(g));
            std::size_t off = 0;
            for (int j = k - 1; j >= 0; --j) {
                place(m, s.f(j, k, up(g, -(k - 1))), off, 0, fld.sign(k));
                off += s.layers[j].dim(up(g, -j));
            }
            f.components.emplace(g, std::move(m));
        }
        c = mapping_cone(f);
    }
    return c;
}

CofiberFiberWitness iterated_cofiber_vs_fiber(const LayeredSystem& s) {
    const int n = s.n();
    CofiberFiberWitness w{iterated_cofiber(s), shift(z_complex(s), n), {}};
    std::set<Grade> grades;
    for (const auto& g : w.cofiber.grades()) grades.insert(g);
    for (const auto& g : w.shifted_fiber.grades()) grades.insert(g);
    // the shifted fiber lists X_0 .. X_n, the cofiber lists X_n .. X_0
    const auto iso_at = [&](const Grade& g) {
        const std::size_t dim = w.shifted_fiber.dim(g);
        if (w.cofiber.dim(g) != dim) throw ValidationError("cofiber and shifted fiber differ in size at " + to_string(g));
        std::vector<std::size_t> zoff{0}, coff(n + 2, 0);
        for (int i = 0; i <= n; ++i) zoff.push_back(zoff.back() + s.layers[i].dim(up(g, -i)));
        std::size_t acc = 0;
        for (int i = n; i >= 0; --i) {
            coff[i] = acc;
            acc += s.layers[i].dim(up(g, -i));
        }
        Matrix m(s.prime, dim, dim);
        for (int i = 0; i <= n; ++i)
            for (std::size_t b = 0; b < zoff[i + 1] - zoff[i]; ++b) m.set(coff[i] + b, zoff[i] + b, 1);
        return m;
    };
    for (const auto& g : grades) w.iso.emplace(g, iso_at(g));
    for (const auto& g : grades) {
        const Matrix lhs = iso_at(g.below()) * w.shifted_fiber.d(g);
        const Matrix rhs = w.cofiber.d(g) * w.iso.at(g);
        if (!(lhs == rhs)) throw ValidationError("the comparison map fails to commute with d at " + to_string(g));
    }
    return w;
}

namespace {

// P = sum_r U e_r with generators at the given grades
std::vector<std::size_t> free_offsets(const DGAlgebra& u, const std::vector<Grade>& gens, const Grade& g) {
    std::vector<std::size_t> off{0};
    for (const auto& e : gens) off.push_back(off.back() + u.block_dim(minus(g, e)));
    return off;
}

GradedComplex free_complex(const DGAlgebra& u, const std::vector<Grade>& gens) {
    std::set<Grade> grades;
    for (const auto& ug : u.complex().grades())
        for (const auto& e : gens) grades.insert(ug + e);
    std::map<Grade, std::size_t> dims;
    std::map<Grade, Matrix> d;
    for (const auto& g : grades) {
        const auto src = free_offsets(u, gens, g);
        const auto dst = free_offsets(u, gens, g.below());
        dims[g] = src.back();
        Matrix m(u.prime(), dst.back(), src.back());
        for (std::size_t r = 0; r < gens.size(); ++r) place(m, u.complex().d(minus(g, gens[r])), dst[r], src[r], 1);
        d.emplace(g, std::move(m));
    }
    return GradedComplex(u.prime(), std::move(dims), std::move(d));
}

Chain slice(const DGAlgebra& u, const Vector& v, std::size_t from, const Grade& g) {
    Chain c = u.zero_chain(g);
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + c.coeffs.size()),
              c.coeffs.begin());
    return c;
}

void put(Vector& v, std::size_t from, const Chain& c, const PrimeField& f, Scalar s) {
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) v[from + i] = f.add(v[from + i], f.mul(s, c.coeffs[i]));
}

// Layers X_i = P_{l-i} built from the inner part of a defining system; f_ij multiplies by A_{l-j,l-i}.
struct TodaModel {
    Engine& e;
    int l;
    int n;
    std::vector<std::vector<Grade>> gens;  // gens[i] for X_i
    LayeredSystem sys;
    GradedComplex z;

    TodaModel(Engine& eng, const Table& a) : e(eng), l(static_cast<int>(eng.sh.m) - 1), n(l - 1) {
        const DGAlgebra& u = e.u;
        sys.prime = u.prime();
        for (int i = 0; i <= n; ++i) {
            gens.push_back(e.sh.delta[l - i]);
            sys.layers.push_back(free_complex(u, gens.back()));
        }
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i) {
                const int len = j - i;
                const ChainMatrix& am = a.at({l - j, l - i});
                LayerMap lm;
                for (const auto& g : sys.layers[j].grades()) {
                    const Grade target = up(g, len - 1);
                    const auto src = free_offsets(u, gens[j], g);
                    const auto dst = free_offsets(u, gens[i], target);
                    Matrix m(u.prime(), dst.back(), src.back());
                    for (std::size_t p = 0; p < gens[j].size(); ++p) {
                        const auto& blk = u.block(minus(g, gens[j][p]));
                        for (std::size_t b = 0; b < blk.size(); ++b) {
                            const Chain x = u.basis_chain(blk[b]);
                            for (std::size_t r = 0; r < gens[i].size(); ++r) {
                                const Chain& entry = am.at(p, r);
                                if (is_zero(entry.coeffs)) continue;
                                const Chain prod = u.multiply(x, entry);
                                const Scalar s = e.sign(choose2(len) + static_cast<long long>(g.degree) * (len + 1) +
                                                        gens[i][r].degree);
                                for (std::size_t c = 0; c < prod.coeffs.size(); ++c)
                                    if (prod.coeffs[c] != 0) m.add_to(dst[r] + c, src[p] + b, e.f.mul(s, prod.coeffs[c]));
                            }
                        }
                    }
                    lm.blocks.emplace(g, std::move(m));
                }
                sys.maps.emplace(std::make_pair(i, j), std::move(lm));
            }
        z = z_complex(sys);
    }

    // g(x) for the U-linear map with generator images b[i][r]: g(u e_r) = (-1)^{|u| i} u b_i[r]
    Chain apply(const Vector& x, const Grade& k, const std::vector<std::vector<Chain>>& b, const Grade& value) const {
        const DGAlgebra& u = e.u;
        Chain out = u.zero_chain(value);
        const auto comp = z_offsets(sys, k);
        for (int i = 0; i <= n; ++i) {
            const Grade gi = up(k, n - i);
            const auto off = free_offsets(u, gens[i], gi);
            for (std::size_t r = 0; r < gens[i].size(); ++r) {
                const Chain xr = slice(u, x, comp[i] + off[r], minus(gi, gens[i][r]));
                if (is_zero(xr.coeffs) || is_zero(b[i][r].coeffs)) continue;
                out = u.add(out, u.scale(u.multiply(xr, b[i][r]), e.sign(static_cast<long long>(xr.grade.degree) * i)));
            }
        }
        return out;
    }
};

struct RowChoice {
    Grade k;
    Vector particular;
    std::vector<Vector> free;   // enumerated
    std::vector<Vector> layer0; // spanned
};

struct ColumnChoice {
    std::vector<std::vector<std::pair<std::size_t, Grade>>> layout;  // [i][r] -> (offset, grade), i >= 1
    Vector particular;
    std::vector<Vector> free;
    std::vector<Vector> top;  // directions living on the last layer only
};

}  // namespace

BracketResult smash_toda(const DGAlgebra& u, const std::vector<ChainMatrix>& v, const BracketOptions& opt) {
    Engine e(u, v, opt);
    const int m = static_cast<int>(e.sh.m);
    const int l = m - 1, n = l - 1;
    for (const auto& g : e.sh.delta[m])
        if (g.degree % 2 != 0)
            throw ValidationError("the last matrix must have columns whose degrees agree mod 2");
    BracketResult res = e.start();
    std::vector<std::pair<int, int>> slots;
    for (int gap = 2; gap <= l - 1; ++gap)
        for (int i = 1; i + gap <= l; ++i) slots.emplace_back(i, i + gap);

    const std::size_t rows = e.sh.k[0], cols = e.sh.k[m];
    std::vector<Vector> w, bases;
    std::size_t combos = 0;
    bool complete = true;
    const Scalar chain_sign = e.sign(n);  // g commutes with d up to (-1)^{deg g}

    SlotSearch search(e, slots, opt.budget, [&](Table& a) {
        if (!complete) return;
        const TodaModel model(e, a);
        const auto& z = model.z;

        std::vector<RowChoice> rowc;
        for (std::size_t p = 0; p < rows; ++p) {
            RowChoice rc{e.sh.delta[0][p], {}, {}, {}};
            const auto off = z_offsets(model.sys, rc.k);
            const std::size_t fixed_at = off[n];
            Vector xn(off.back(), 0);
            const auto foff = free_offsets(u, model.gens[n], rc.k);
            for (std::size_t r = 0; r < model.gens[n].size(); ++r)
                put(xn, fixed_at + foff[r], v[0].at(p, r), e.f, e.sign(model.gens[n][r].degree));
            const Matrix dz = z.d(rc.k);
            std::vector<std::size_t> lead(fixed_at), tail(off.back() - fixed_at);
            for (std::size_t c = 0; c < lead.size(); ++c) lead[c] = c;
            for (std::size_t c = 0; c < tail.size(); ++c) tail[c] = fixed_at + c;
            Vector rhs = dz.select_cols(tail).apply(std::span<const Scalar>(xn).subspan(fixed_at));
            for (auto& x : rhs) x = e.f.neg(x);
            auto sol = solve(dz.select_cols(lead), rhs);
            if (!sol.solvable()) return;
            rc.particular = xn;
            std::copy(sol.particular->begin(), sol.particular->end(), rc.particular.begin());
            const auto embed = [&](const Vector& head) {
                Vector full(off.back(), 0);
                std::copy(head.begin(), head.end(), full.begin());
                return full;
            };
            std::vector<Vector> kv;
            for (const auto& h : sol.kernel.basis_vectors()) kv.push_back(embed(h));
            const Subspace ks = Subspace::span(u.prime(), off.back(), kv);
            for (const auto& c : kernel(model.sys.layers[0].d(up(rc.k, n))).basis_vectors()) rc.layer0.push_back(embed(c));
            Subspace drop = Subspace::span(u.prime(), off.back(), rc.layer0);
            if (!e.all_cycles) {
                std::vector<Vector> units;
                for (std::size_t c = 0; c < fixed_at; ++c) {
                    Vector unit(off.back(), 0);
                    unit[c] = 1;
                    units.push_back(unit);
                }
                const Subspace head = Subspace::span(u.prime(), off.back(), units);
                drop = drop.sum(image(z.d(rc.k.above())).intersect(head));
            }
            rc.free = quotient_basis(ks, drop);
            rowc.push_back(std::move(rc));
        }

        std::vector<ColumnChoice> colc;
        for (std::size_t q = 0; q < cols; ++q) {
            ColumnChoice cc;
            cc.layout.resize(n + 1);
            std::size_t unknowns = 0;
            for (int i = 1; i <= n; ++i)
                for (std::size_t r = 0; r < model.gens[i].size(); ++r) {
                    const Grade g = up(minus(model.gens[i][r], e.sh.delta[m][q]), i);
                    cc.layout[i].emplace_back(unknowns, g);
                    unknowns += u.block_dim(g);
                }
            std::vector<std::vector<std::size_t>> eq(n + 1);
            std::size_t equations = 0;
            for (int i = 1; i <= n; ++i)
                for (std::size_t r = 0; r < model.gens[i].size(); ++r) {
                    eq[i].push_back(equations);
                    equations += u.block_dim(cc.layout[i][r].second.below());
                }
            Matrix sys(u.prime(), equations, unknowns);
            Vector rhs(equations, 0);
            for (int i = 1; i <= n; ++i)
                for (std::size_t r = 0; r < model.gens[i].size(); ++r) {
                    const auto [uo, ug] = cc.layout[i][r];
                    place(sys, u.complex().d(ug), eq[i][r], uo, 1);
                    for (int i2 = 0; i2 < i; ++i2) {
                        const int len = i - i2;
                        const ChainMatrix& am = a.at({l - i, l - i2});
                        for (std::size_t t = 0; t < model.gens[i2].size(); ++t) {
                            const Chain& entry = am.at(r, t);
                            if (is_zero(entry.coeffs)) continue;
                            const Scalar c = e.f.mul(
                                chain_sign,
                                e.sign(n + i + choose2(len) + static_cast<long long>(model.gens[i][r].degree) * (len + 1) +
                                       model.gens[i2][t].degree + static_cast<long long>(entry.grade.degree) * i2));
                            if (i2 == 0) {
                                put(rhs, eq[i][r], u.multiply(entry, v[m - 1].at(t, q)), e.f, c);
                                continue;
                            }
                            const auto [to, tg] = cc.layout[i2][t];
                            const auto& blk = u.block(tg);
                            for (std::size_t b = 0; b < blk.size(); ++b) {
                                const Chain prod = u.multiply(entry, u.basis_chain(blk[b]));
                                for (std::size_t x = 0; x < prod.coeffs.size(); ++x)
                                    if (prod.coeffs[x] != 0)
                                        sys.add_to(eq[i][r] + x, to + b, e.f.neg(e.f.mul(c, prod.coeffs[x])));
                            }
                        }
                    }
                }
            auto sol = solve(sys, rhs);
            if (!sol.solvable()) return;
            cc.particular = *sol.particular;
            std::vector<Vector> units;
            for (std::size_t r = 0; r < model.gens[n].size(); ++r) {
                const auto [o, g] = cc.layout[n][r];
                for (std::size_t x = 0; x < u.block_dim(g); ++x) {
                    Vector unit(unknowns, 0);
                    unit[o + x] = 1;
                    units.push_back(unit);
                }
            }
            const Subspace top = sol.kernel.intersect(Subspace::span(u.prime(), unknowns, units));
            cc.top = top.basis_vectors();
            cc.free = quotient_basis(sol.kernel, top);
            colc.push_back(std::move(cc));
        }

        const auto images = [&](const Vector& coords, std::size_t q, bool with_last) {
            std::vector<std::vector<Chain>> b(n + 1);
            for (std::size_t r = 0; r < model.gens[0].size(); ++r)
                b[0].push_back(with_last ? v[m - 1].at(r, q) : u.zero_chain(v[m - 1].at(r, q).grade));
            for (int i = 1; i <= n; ++i)
                for (const auto& [o, g] : colc[q].layout[i]) b[i].push_back(slice(u, coords, o, g));
            return b;
        };
        const auto value_at = [&](std::size_t p, std::size_t q) { return res.entry_grades[p * cols + q]; };
        const auto row_sign = [&](std::size_t p) {
            return e.sign(choose2(n) + static_cast<long long>(e.sh.delta[0][p].degree) * (n + 1) + 1);
        };
        const auto zero_matrix = [&] {
            return e.zeros(rows, cols, [&](std::size_t p, std::size_t q) { return value_at(p, q); });
        };

        std::vector<std::pair<std::size_t, const Vector*>> dirs;  // (slot, direction): rows first, then columns
        for (std::size_t p = 0; p < rows; ++p)
            for (const auto& d : rowc[p].free) dirs.emplace_back(p, &d);
        for (std::size_t q = 0; q < cols; ++q)
            for (const auto& d : colc[q].free) dirs.emplace_back(rows + q, &d);
        Vector c(dirs.size(), 0);
        while (true) {
            if (combos >= opt.budget) {
                complete = false;
                return;
            }
            ++combos;
            std::vector<Vector> xs;
            for (const auto& rc : rowc) xs.push_back(rc.particular);
            std::vector<Vector> bs;
            for (const auto& cc : colc) bs.push_back(cc.particular);
            for (std::size_t d = 0; d < dirs.size(); ++d) {
                if (c[d] == 0) continue;
                const auto [slot, dir] = dirs[d];
                axpy(e.f, slot < rows ? xs[slot] : bs[slot - rows], c[d], *dir);
            }
            std::vector<std::vector<std::vector<Chain>>> gq;
            for (std::size_t q = 0; q < cols; ++q) gq.push_back(images(bs[q], q, true));
            ChainMatrix val = zero_matrix();
            for (std::size_t p = 0; p < rows; ++p)
                for (std::size_t q = 0; q < cols; ++q)
                    val.at(p, q) = u.scale(model.apply(xs[p], rowc[p].k, gq[q], value_at(p, q)), row_sign(p));
            bases.push_back(e.flatten(val));
            for (std::size_t p = 0; p < rows; ++p)
                for (const auto& kv : rowc[p].layer0) {
                    ChainMatrix s = zero_matrix();
                    for (std::size_t q = 0; q < cols; ++q)
                        s.at(p, q) = u.scale(model.apply(kv, rowc[p].k, gq[q], value_at(p, q)), row_sign(p));
                    w.push_back(e.flatten(s));
                }
            for (std::size_t q = 0; q < cols; ++q)
                for (const auto& h : colc[q].top) {
                    const auto hb = images(h, q, false);
                    ChainMatrix s = zero_matrix();
                    for (std::size_t p = 0; p < rows; ++p)
                        s.at(p, q) = u.scale(model.apply(xs[p], rowc[p].k, hb, value_at(p, q)), row_sign(p));
                    w.push_back(e.flatten(s));
                }
            std::size_t d = 0;
            while (d < c.size() && ++c[d] == u.prime()) c[d++] = 0;
            if (d == c.size()) break;
        }
    });
    Table t = initial_table(v);
    const bool inner_complete = search.run(t);
    finish(res, w, bases, complete && inner_complete, combos);
    return res;
}

}  // namespace filtss
