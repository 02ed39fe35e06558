#include "filtss/koszul.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace filtss {

namespace {

Grade minus(const Grade& a, const Grade& b) { return {a.degree - b.degree, a.weight - b.weight}; }

bool has_differential(const DGAlgebra& u) {
    for (const Grade& g : u.complex().grades())
        if (!u.complex().d(g).is_zero()) return true;
    return false;
}

SparseVec sparse_of(const DGAlgebra& u, const Chain& c) {
    SparseVec out;
    if (c.coeffs.empty()) return out;
    const auto& blk = u.block(c.grade);
    for (std::size_t k = 0; k < c.coeffs.size(); ++k)
        if (c.coeffs[k]) out.emplace_back(blk[k], c.coeffs[k]);
    return out;
}

}  // namespace

void check_connected(const DGAlgebra& u) {
    if (!u.is_multiplicative() || !u.unit()) throw ValidationError("algebra must be unital and multiplicative");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i == *u.unit()) continue;
        const Grade g = u.element(i).grade;
        if (g.degree >= 0)
            throw ValidationError("not connected: " + u.element(i).name + " sits in degree " +
                                  std::to_string(g.degree) + " (augmentation ideal must be in negative degrees)");
        if (g.weight <= 0)
            throw ValidationError("augmentation ideal element " + u.element(i).name +
                                  " needs positive weight to bound the bar construction");
    }
}

DGAlgebra underlying_graded(const DGAlgebra& u) {
    if (!u.is_multiplicative()) throw ValidationError("algebra has no product");
    auto keep = std::make_shared<DGAlgebra>(u);
    DGAlgebra::ProductFn fn = [keep](std::size_t i, std::size_t j) { return keep->multiply_basis(i, j); };
    return DGAlgebra(u.prime(), u.basis(), {}, fn, u.unit());
}

BarComplex::BarComplex(const DGAlgebra& u, BarBounds bounds) : u_(&u), bounds_(bounds) {
    check_connected(u);
    internal_ = has_differential(u);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (i != *u.unit() && u.element(i).grade.weight <= bounds_.weight_max) ideal_.push_back(i);

    std::map<Grade, std::vector<BarWord>> level;
    level[Grade{0, 0}].push_back({});
    words_[{0, Grade{0, 0}}] = level[Grade{0, 0}];
    for (int s = 1; !level.empty(); ++s) {
        std::map<Grade, std::vector<BarWord>> next;
        for (const auto& [g, ws] : level)
            for (const BarWord& w : ws)
                for (std::size_t a : ideal_) {
                    const Grade h = g + u.element(a).grade;
                    if (h.weight > bounds_.weight_max) continue;
                    BarWord v = w;
                    v.push_back(a);
                    next[h].push_back(std::move(v));
                }
        if (next.empty()) break;
        max_len_ = s;
        for (auto& [g, ws] : next) {
            std::sort(ws.begin(), ws.end());
            words_[{s, g}] = ws;
        }
        level = std::move(next);
    }
    for (const auto& [key, ws] : words_) {
        auto& lk = lookup_[key];
        for (std::size_t i = 0; i < ws.size(); ++i) lk.emplace(ws[i], i);
    }
}

const std::vector<BarWord>& BarComplex::words(int s, const Grade& g) const {
    static const std::vector<BarWord> none;
    auto it = words_.find({s, g});
    return it == words_.end() ? none : it->second;
}

std::vector<Grade> BarComplex::grades(int s) const {
    std::vector<Grade> out;
    for (const auto& [key, ws] : words_)
        if (key.first == s) out.push_back(key.second);
    return out;
}

std::size_t BarComplex::index_of(int s, const Grade& g, const BarWord& w) const {
    return lookup_.at({s, g}).at(w);
}

Scalar BarComplex::letter_sign(const BarWord& w, std::size_t upto) const {
    long long e = 0;
    for (std::size_t j = 0; j < upto; ++j) e += u_->element(w[j]).grade.degree + 1;
    return u_->field().sign(e);
}

Matrix BarComplex::bar_d(int s, const Grade& g) const {
    const PrimeField f = u_->field();
    const auto& src = words(s, g);
    Matrix m(u_->prime(), dim(s - 1, g), src.size());
    if (s < 2) return m;
    for (std::size_t col = 0; col < src.size(); ++col) {
        const BarWord& w = src[col];
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            const Scalar sg = f.mul(letter_sign(w, i), f.sign(u_->element(w[i]).grade.degree));
            for (const auto& [k, c] : u_->multiply_basis(w[i], w[i + 1])) {
                BarWord v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                v.push_back(k);
                v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
                m.add_to(index_of(s - 1, g, v), col, f.mul(sg, f.from_int(c)));
            }
        }
    }
    return m;
}

Matrix BarComplex::internal_d(int s, const Grade& g) const {
    const PrimeField f = u_->field();
    const auto& src = words(s, g);
    const Grade tg = g.below();
    Matrix m(u_->prime(), dim(s, tg), src.size());
    if (!internal_) return m;
    std::map<std::size_t, SparseVec> cache;
    for (std::size_t col = 0; col < src.size(); ++col) {
        const BarWord& w = src[col];
        for (std::size_t i = 0; i < w.size(); ++i) {
            auto it = cache.find(w[i]);
            if (it == cache.end()) it = cache.emplace(w[i], sparse_of(*u_, u_->d(u_->basis_chain(w[i])))).first;
            const Scalar sg = f.neg(letter_sign(w, i));
            for (const auto& [k, c] : it->second) {
                BarWord v = w;
                v[i] = k;
                m.add_to(index_of(s, tg, v), col, f.mul(sg, f.from_int(c)));
            }
        }
    }
    return m;
}

GradedComplex BarComplex::total(int weight) const {
    // block n lists the words of each length s in increasing s
    std::map<int, std::vector<std::pair<int, Grade>>> parts;
    for (const auto& [key, ws] : words_)
        if (key.second.weight == weight) parts[key.first + key.second.degree].push_back(key);
    auto offset = [&](int n, int s) {
        std::size_t off = 0;
        for (const auto& [ss, g] : parts[n]) {
            if (ss == s) return off;
            off += dim(ss, g);
        }
        return off;
    };
    std::map<Grade, std::size_t> dims;
    for (auto& [n, ps] : parts) {
        std::size_t total_dim = 0;
        for (const auto& [s, g] : ps) total_dim += dim(s, g);
        dims[Grade{n, weight}] = total_dim;
    }
    std::map<Grade, Matrix> d;
    for (auto& [n, ps] : parts) {
        const Grade src{n, weight};
        Matrix m(u_->prime(), dims.count(src.below()) ? dims[src.below()] : 0, dims[src]);
        for (const auto& [s, g] : ps) {
            const std::size_t co = offset(n, s);
            if (s >= 1 && dim(s - 1, g)) {
                const Matrix b = bar_d(s, g);
                const std::size_t ro = offset(n - 1, s - 1);
                for (std::size_t r = 0; r < b.rows(); ++r)
                    for (std::size_t c = 0; c < b.cols(); ++c)
                        if (Scalar v = b.get(r, c)) m.add_to(ro + r, co + c, v);
            }
            if (internal_ && dim(s, g.below())) {
                const Matrix b = internal_d(s, g);
                const std::size_t ro = offset(n - 1, s);
                for (std::size_t r = 0; r < b.rows(); ++r)
                    for (std::size_t c = 0; c < b.cols(); ++c)
                        if (Scalar v = b.get(r, c)) m.add_to(ro + r, co + c, v);
            }
        }
        d.emplace(src, std::move(m));
    }
    return GradedComplex(u_->prime(), std::move(dims), std::move(d));
}

FilteredDGA bar_filtration(const BarComplex& bar, int weight) {
    const GradedComplex c = bar.total(weight);
    std::vector<BasisElement> basis;
    std::vector<int> levels;
    std::map<Grade, std::size_t> first;
    for (const Grade& g : c.grades()) {
        first[g] = basis.size();
        for (int s = 0; s <= bar.max_length(); ++s)
            for (const BarWord& w : bar.words(s, {g.degree - s, weight})) {
                std::string name = "[";
                for (std::size_t k = 0; k < w.size(); ++k) {
                    if (k) name += "|";
                    name += bar.algebra().element(w[k]).name;
                }
                basis.push_back({name + "]", g});
                levels.push_back(-s);
            }
    }
    std::map<std::size_t, SparseVec> diff;
    for (const Grade& g : c.grades()) {
        const Matrix m = c.d(g);
        for (std::size_t col = 0; col < m.cols(); ++col) {
            SparseVec img;
            for (std::size_t r = 0; r < m.rows(); ++r)
                if (Scalar v = m.get(r, col)) img.emplace_back(first.at(g.below()) + r, v);
            if (!img.empty()) diff[first.at(g) + col] = std::move(img);
        }
    }
    return FilteredDGA(DGAlgebra(bar.algebra().prime(), std::move(basis), diff, std::nullopt, std::nullopt),
                       std::move(levels));
}

HomologyGroup tor(const BarComplex& bar, int s, const Grade& g) {
    if (bar.has_internal_differential())
        throw ValidationError("tor: the algebra has a differential; use the total complex");
    if (s < 0 || s > bar.bounds().s_max || g.weight > bar.bounds().weight_max)
        throw RangeError("tor: (" + std::to_string(s) + ", " + to_string(g) + ") is outside the bar bounds");
    const Subspace z = kernel(bar.bar_d(s, g));
    const Subspace b = image(bar.bar_d(s + 1, g));
    return HomologyGroup(z, b);
}

HomologyGroup derived_tor(const BarComplex& bar, int n, int weight) {
    if (weight < 0 || weight > bar.bounds().weight_max)
        throw RangeError("derived_tor: weight " + std::to_string(weight) + " is outside the bar bounds");
    return homology(bar.total(weight), Grade{n, weight});
}

KoszulReport is_koszul_classical(const DGAlgebra& u, BarBounds bounds) {
    check_connected(u);
    if (has_differential(u)) throw ValidationError("classical Koszulity needs a graded algebra (zero differential)");
    const BarComplex bar(u, bounds);
    KoszulReport rep;
    rep.bounds = bounds;
    for (int s = 1; s <= bounds.s_max; ++s)
        for (const Grade& g : bar.grades(s)) {
            const std::size_t k = tor(bar, s, g).dim();
            if (!k) continue;
            rep.nonzero.push_back({s, g, k});
            if (g.degree != -s) {
                rep.koszul = false;
                rep.offending.push_back({s, g, k});
            }
        }
    return rep;
}

KoszulReport is_koszul_derived(const DGAlgebra& u, BarBounds bounds) {
    check_connected(u);
    const BarComplex bar(u, bounds);
    KoszulReport rep;
    rep.bounds = bounds;
    for (int w = 0; w <= bounds.weight_max; ++w) {
        const GradedComplex c = bar.total(w);
        for (const Grade& g : c.grades()) {
            const std::size_t k = homology(c, g).dim();
            if (!k) continue;
            rep.nonzero.push_back({g.degree, g, k});
            if (g.degree != 0) {
                rep.koszul = false;
                rep.offending.push_back({g.degree, g, k});
            }
        }
    }
    return rep;
}

MinimalResolution::MinimalResolution(const DGAlgebra& u, BarBounds bounds) : u_(&u), bounds_(bounds) {
    check_connected(u);
    if (has_differential(u)) throw ValidationError("minimal resolution needs a graded algebra (zero differential)");
    gens_.assign(static_cast<std::size_t>(bounds_.s_max) + 1, {});
    bounds_of_.assign(static_cast<std::size_t>(bounds_.s_max) + 1, {});
    gens_[0].push_back(Grade{0, 0});
    bounds_of_[0].push_back({});
    for (int s = 1; s <= bounds_.s_max; ++s) {
        std::vector<Grade> todo = grades(s - 1);
        std::sort(todo.begin(), todo.end(),
                  [](const Grade& a, const Grade& b) { return std::pair(a.weight, -a.degree) < std::pair(b.weight, -b.degree); });
        for (const Grade& g : todo) {
            const Subspace k = kernel(boundary(s - 1, g));
            if (!k.dim()) continue;
            const Subspace im = image(boundary(s, g));
            for (Vector& v : quotient_basis(k, im)) {
                gens_[static_cast<std::size_t>(s)].push_back(g);
                bounds_of_[static_cast<std::size_t>(s)].push_back(std::move(v));
            }
        }
    }
}

std::size_t MinimalResolution::tor_dim(int s, const Grade& g) const {
    const auto& gs = generators(s);
    return static_cast<std::size_t>(std::count(gs.begin(), gs.end(), g));
}

std::vector<std::pair<std::size_t, std::size_t>> MinimalResolution::module_basis(int s, const Grade& g) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& gs = generators(s);
    for (std::size_t k = 0; k < gs.size(); ++k) {
        const Grade h = minus(g, gs[k]);
        if (!u_->block_dim(h)) continue;
        for (std::size_t idx : u_->block(h)) out.emplace_back(idx, k);
    }
    return out;
}

std::vector<Grade> MinimalResolution::grades(int s) const {
    std::set<Grade> out;
    for (const Grade& gk : generators(s))
        for (const Grade& h : u_->complex().grades()) {
            const Grade g = gk + h;
            if (g.weight <= bounds_.weight_max) out.insert(g);
        }
    return {out.begin(), out.end()};
}

Matrix MinimalResolution::boundary(int s, const Grade& g) const {
    const PrimeField f = u_->field();
    const auto src = module_basis(s, g);
    if (s == 0) {
        Matrix m(u_->prime(), g == Grade{0, 0} ? 1 : 0, src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            if (Scalar a = u_->augmentation(src[c].first)) m.set(0, c, a);
        return m;
    }
    const auto tgt = module_basis(s - 1, g);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;
    for (std::size_t r = 0; r < tgt.size(); ++r) row_of.emplace(tgt[r], r);
    Matrix m(u_->prime(), tgt.size(), src.size());
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> gen_basis;
    for (std::size_t c = 0; c < src.size(); ++c) {
        const auto [a, k] = src[c];
        const Grade gk = generators(s)[k];
        auto it = gen_basis.find(k);
        if (it == gen_basis.end()) it = gen_basis.emplace(k, module_basis(s - 1, gk)).first;
        const Vector& bk = generator_boundary(s, k);
        for (std::size_t j = 0; j < bk.size(); ++j) {
            if (!bk[j]) continue;
            const auto [b, k2] = it->second[j];
            for (const auto& [prod, v] : u_->multiply_basis(a, b))
                m.add_to(row_of.at({prod, k2}), c, f.mul(bk[j], f.from_int(v)));
        }
    }
    return m;
}

Vector suspension_classical(const MinimalResolution& res, const Chain& x) {
    const DGAlgebra& u = res.algebra();
    if (x.grade.weight > res.bounds().weight_max)
        throw RangeError("suspension: grade " + to_string(x.grade) + " is outside the resolution bounds");
    if (res.bounds().s_max < 1) throw RangeError("suspension needs the resolution through P_1");
    if (x.grade == Grade{0, 0}) {
        if (!is_zero(x.coeffs)) throw ValidationError("suspension: element is not in the augmentation ideal");
    }
    const auto src = res.module_basis(1, x.grade);
    std::vector<std::size_t> gens_here;
    for (std::size_t k = 0; k < res.generators(1).size(); ++k)
        if (res.generators(1)[k] == x.grade) gens_here.push_back(k);
    if (is_zero(x.coeffs) || src.empty()) return Vector(gens_here.size(), 0);
    const SolveResult sol = solve(res.boundary(1, x.grade), x.coeffs);
    if (!sol.particular) throw std::logic_error("suspension: element has no lift (resolution not exact)");
    auto read = [&](const Vector& y) {
        Vector out(gens_here.size(), 0);
        for (std::size_t c = 0; c < src.size(); ++c) {
            if (src[c].first != *u.unit() || !y[c]) continue;
            auto it = std::find(gens_here.begin(), gens_here.end(), src[c].second);
            out[static_cast<std::size_t>(it - gens_here.begin())] = y[c];
        }
        return out;
    };
    const Vector first = read(*sol.particular);
    Vector other = *sol.particular;
    for (const Vector& k : sol.kernel.basis_vectors()) axpy(u.field(), other, 1, k);
    if (read(other) != first) throw std::logic_error("suspension depends on the chosen lift");
    return first;
}

Subspace decomposables(const DGAlgebra& u, const Grade& g) {
    const std::size_t n = u.block_dim(g);
    std::vector<Vector> vs;
    const auto unit = u.unit();
    for (const Grade& h : u.complex().grades()) {
        const Grade h2 = minus(g, h);
        if (h == Grade{0, 0} || h2 == Grade{0, 0} || !u.block_dim(h2)) continue;
        for (std::size_t a : u.block(h))
            for (std::size_t b : u.block(h2)) {
                if ((unit && a == *unit) || (unit && b == *unit)) continue;
                Vector v(n, 0);
                for (const auto& [k, c] : u.multiply_basis(a, b))
                    v[u.local_index(k)] = u.field().add(v[u.local_index(k)], u.field().from_int(c));
                if (!is_zero(v)) vs.push_back(std::move(v));
            }
    }
    return Subspace::span(u.prime(), n, vs);
}

}  // namespace filtss
