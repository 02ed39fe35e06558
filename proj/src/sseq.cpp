#include "filtss/sseq.hpp"

#include <algorithm>
#include <set>

namespace filtss {

std::string to_string(const CellKey& k) {
    return "(n=" + std::to_string(k.n) + ",t=" + std::to_string(k.g.degree) +
           (k.g.weight ? ",w=" + std::to_string(k.g.weight) : std::string()) + ")";
}

namespace {

Vector embed(std::span<const Scalar> v, const std::vector<std::size_t>& idx, std::size_t dim) {
    Vector w(dim, 0);
    for (std::size_t k = 0; k < idx.size(); ++k) w[idx[k]] = v[k];
    return w;
}

Vector pick(std::span<const Scalar> v, const std::vector<std::size_t>& idx) {
    Vector out;
    out.reserve(idx.size());
    for (std::size_t k : idx) out.push_back(v[k]);
    return out;
}

// block vectors c in F_lo (block g) with dc in F_hi
std::vector<Vector> almost_cycles_full(const FilteredDGA& x, const Grade& g, int lo, int hi) {
    const auto cols = x.local_between(g, lo);
    if (cols.empty()) return {};
    const auto rows = x.local_between(g.below(), INT_MIN, hi);
    const Matrix m = x.d(g).select_cols(cols).select_rows(rows);
    std::vector<Vector> out;
    for (const auto& v : kernel(m).basis_vectors()) out.push_back(embed(v, cols, x.block_dim(g)));
    return out;
}

// dy for y in F_lo (block g.above()) with dy in F_hi, as block-g vectors
std::vector<Vector> restricted_boundaries(const FilteredDGA& x, const Grade& g, int lo, int hi) {
    const Grade up = g.above();
    const auto cols = x.local_between(up, lo);
    if (cols.empty()) return {};
    const Matrix dy = x.d(up).select_cols(cols);
    const auto rows = x.local_between(g, INT_MIN, hi);
    std::vector<Vector> out;
    for (const auto& v : kernel(dy.select_rows(rows)).basis_vectors()) out.push_back(dy.apply(v));
    return out;
}

std::vector<Vector> coordinate_vectors(const std::vector<std::size_t>& idx, std::size_t dim) {
    std::vector<Vector> out;
    for (std::size_t k : idx) {
        Vector e(dim, 0);
        e[k] = 1;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

const HomologyGroup& CESystem::H(int i, int j, const Grade& g) const {
    const auto key = std::make_tuple(i, j, g);
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return *it->second;
    }
    const std::uint32_t p = x_->prime();
    const std::size_t dim = x_->block_dim(g);
    std::shared_ptr<HomologyGroup> h;
    if (i >= j) {
        h = std::make_shared<HomologyGroup>(Subspace(p, dim), Subspace(p, dim));
    } else {
        auto z = almost_cycles_full(*x_, g, i, j);
        // no constraint on dy: every boundary of F_i
        std::vector<Vector> b = restricted_boundaries(*x_, g, i, INT_MIN);
        for (auto& e : coordinate_vectors(x_->local_between(g, j), dim)) b.push_back(std::move(e));
        h = std::make_shared<HomologyGroup>(Subspace::span(p, dim, z), Subspace::span(p, dim, b));
    }
    std::lock_guard lock(mutex_);
    return *memo_.emplace(key, std::move(h)).first->second;
}

Matrix CESystem::eta(int i, int j, int i2, int j2, const Grade& g) const {
    if (i2 > i || j2 > j) throw RangeError("eta needs i2 <= i and j2 <= j");
    const auto& from = H(i, j, g);
    const auto& to = H(i2, j2, g);
    std::vector<Vector> cols;
    for (const auto& r : from.reps()) cols.push_back(to.coords(r));
    return Matrix::from_columns(x_->prime(), to.dim(), cols);
}

Matrix CESystem::delta(int i, int j, int k, const Grade& g) const {
    if (!(i <= j && j <= k)) throw RangeError("delta needs i <= j <= k");
    const auto& from = H(i, j, g);
    const auto& to = H(j, k, g.below());
    const Matrix d = x_->d(g);
    std::vector<Vector> cols;
    for (const auto& r : from.reps()) cols.push_back(to.coords(d.apply(r)));
    return Matrix::from_columns(x_->prime(), to.dim(), cols);
}

Vector Cell::project(std::span<const Scalar> block_vector) const { return pick(block_vector, level_indices); }

Vector Cell::lift(std::span<const Scalar> c) const {
    if (c.size() != lifts.size()) throw std::invalid_argument("class coordinates have the wrong length");
    const PrimeField f(almost_cycles.prime());
    Vector out(lifts.empty() ? 0 : lifts[0].size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) axpy(f, out, c[i], lifts[i]);
    return out;
}

std::size_t Page::dim(const CellKey& k) const {
    auto it = cells.find(k);
    return it == cells.end() ? 0 : it->second->dim();
}

std::vector<CellKey> SpectralSequence::support() const {
    std::vector<CellKey> out;
    for (const auto& g : x_->grades())
        for (int n : x_->levels_in(g)) out.push_back({n, g});
    return out;
}

std::shared_ptr<Cell> SpectralSequence::compute_cell(int r, const CellKey& k) const {
    const FilteredDGA& x = *x_;
    const std::uint32_t p = x.prime();
    const Grade g = k.g;
    const int n = k.n;
    const auto level = x.local_between(g, n, n + 1);
    const std::size_t ld = level.size();
    const auto kernel_vectors = almost_cycles_full(x, g, n, n + r);
    std::vector<Vector> zbar, bbar;
    for (const auto& v : kernel_vectors) zbar.push_back(pick(v, level));
    for (const auto& v : restricted_boundaries(x, g, n - r + 1, n)) bbar.push_back(pick(v, level));
    Subspace bsub = Subspace::span(p, ld, bbar);
    IncrementalBasis span(p, ld);
    for (const auto& v : bsub.basis_vectors()) span.insert(v);
    std::vector<Vector> reps, lifts;
    for (std::size_t i = 0; i < kernel_vectors.size(); ++i)
        if (span.insert(zbar[i])) {
            reps.push_back(zbar[i]);
            lifts.push_back(kernel_vectors[i]);
        }
    Quotient q(bsub, reps);
    return std::make_shared<Cell>(Cell{r, k, level, Subspace::span(p, ld, zbar), std::move(bsub), std::move(reps),
                                       std::move(lifts), std::move(q)});
}

std::shared_ptr<const Cell> SpectralSequence::cell(int r, const CellKey& k) const {
    if (r < 1) throw RangeError("pages start at r = 1");
    const auto key = std::make_pair(r, k);
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    std::shared_ptr<const Cell> c = compute_cell(r, k);
    std::lock_guard lock(mutex_);
    return memo_.emplace(key, std::move(c)).first->second;
}

Matrix SpectralSequence::differential(int r, const CellKey& k) const {
    const auto src = cell(r, k);
    const auto tgt = cell(r, {k.n + r, k.g.below()});
    Matrix out(x_->prime(), tgt->dim(), src->dim());
    if (!src->dim() || !tgt->dim()) return out;
    const Matrix d = x_->d(k.g);
    for (std::size_t c = 0; c < src->dim(); ++c) {
        auto coords = tgt->coords(tgt->project(d.apply(src->lifts[c])));
        if (!coords) throw std::logic_error("page differential left the target cell at " + to_string(k));
        for (std::size_t r2 = 0; r2 < coords->size(); ++r2) out.set(r2, c, (*coords)[r2]);
    }
    return out;
}

Page SpectralSequence::page(int r) const {
    const auto keys = support();
    std::vector<std::shared_ptr<const Cell>> cells(keys.size());
    std::vector<Matrix> diffs(keys.size());
    const long count = static_cast<long>(keys.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) cells[static_cast<std::size_t>(i)] = cell(r, keys[static_cast<std::size_t>(i)]);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i)
        diffs[static_cast<std::size_t>(i)] = differential(r, keys[static_cast<std::size_t>(i)]);
    Page out{r, {}, {}};
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out.cells.emplace(keys[i], cells[i]);
        out.differentials.emplace(keys[i], std::move(diffs[i]));
    }
    return out;
}

Vector SpectralSequence::product(int r, const CellKey& a, std::span<const Scalar> ca, const CellKey& b,
                                 std::span<const Scalar> cb) const {
    if (!x_->is_multiplicative()) throw std::logic_error("page products need a multiplicative filtration");
    const DGAlgebra& u = x_->algebra();
    const Chain la{a.g, cell(r, a)->lift(ca)};
    const Chain lb{b.g, cell(r, b)->lift(cb)};
    const CellKey target{a.n + b.n, a.g + b.g};
    const auto tc = cell(r, target);
    if (!tc->dim()) return {};
    const Chain prod = u.multiply(la, lb);
    auto coords = tc->coords(tc->project(prod.coeffs));
    if (!coords) throw std::logic_error("page product left the target cell at " + to_string(target));
    return *coords;
}

Subspace SpectralSequence::permanent_cycles(const CellKey& k) const {
    return cell(std::max(1, stabilization_page()), k)->almost_cycles;
}

std::map<CellKey, std::size_t> zb_oracle_page(const FilteredDGA& x, int r) {
    std::map<CellKey, std::size_t> out;
    const SpectralSequence ss(x);
    for (const auto& k : ss.support()) {
        const std::size_t dim = x.block_dim(k.g);
        const auto z = almost_cycles_full(x, k.g, k.n, k.n + r);
        auto denom = almost_cycles_full(x, k.g, k.n + 1, k.n + r);
        for (auto& v : restricted_boundaries(x, k.g, k.n - r + 1, k.n)) denom.push_back(std::move(v));
        out[k] = Subspace::span(x.prime(), dim, z).dim() - Subspace::span(x.prime(), dim, denom).dim();
    }
    return out;
}

std::map<CellKey, std::size_t> ce_image_page(const FilteredDGA& x, int r) {
    std::map<CellKey, std::size_t> out;
    const SpectralSequence ss(x);
    for (const auto& k : ss.support())
        out[k] = rank(ss.ce().eta(k.n, k.n + r, k.n - r + 1, k.n + 1, k.g));
    return out;
}

std::string check_d_squared(const SpectralSequence& ss, int r_max) {
    for (int r = 1; r <= r_max; ++r)
        for (const auto& k : ss.support()) {
            const CellKey next{k.n + r, k.g.below()};
            if (!(ss.differential(r, next) * ss.differential(r, k)).is_zero())
                return "d_" + std::to_string(r) + " squares to a nonzero map at " + to_string(k);
        }
    return {};
}

std::string check_page_recurrence(const SpectralSequence& ss, int r_max) {
    for (int r = 1; r < r_max; ++r)
        for (const auto& k : ss.support()) {
            const std::size_t here = ss.cell(r, k)->dim();
            const std::size_t out_rank = rank(ss.differential(r, k));
            const std::size_t in_rank = rank(ss.differential(r, {k.n - r, k.g.above()}));
            const std::size_t next = ss.cell(r + 1, k)->dim();
            if (next + out_rank + in_rank != here)
                return "E_" + std::to_string(r + 1) + " at " + to_string(k) + " has dim " + std::to_string(next) +
                       " but H(E_" + std::to_string(r) + ") has dim " + std::to_string(here - out_rank - in_rank);
        }
    return {};
}

std::string check_page_leibniz(const SpectralSequence& ss, int r_max) {
    const FilteredDGA& x = ss.source();
    const PrimeField f(x.prime());
    const auto keys = ss.support();
    for (int r = 1; r <= r_max; ++r) {
        for (const auto& a : keys) {
            const auto ca = ss.cell(r, a);
            if (!ca->dim()) continue;
            const Matrix da = ss.differential(r, a);
            const CellKey a2{a.n + r, a.g.below()};
            for (const auto& b : keys) {
                const auto cb = ss.cell(r, b);
                if (!cb->dim()) continue;
                const CellKey ab{a.n + b.n, a.g + b.g};
                const CellKey ab2{ab.n + r, ab.g.below()};
                if (!ss.cell(r, ab2)->dim()) continue;
                const Matrix dab = ss.differential(r, ab);
                const Matrix db = ss.differential(r, b);
                const CellKey b2{b.n + r, b.g.below()};
                const Scalar sign = f.sign(a.g.degree);
                for (std::size_t i = 0; i < ca->dim(); ++i) {
                    Vector ei(ca->dim(), 0);
                    ei[i] = 1;
                    const Vector dei = da.apply(ei);
                    for (std::size_t j = 0; j < cb->dim(); ++j) {
                        Vector ej(cb->dim(), 0);
                        ej[j] = 1;
                        const Vector prod = ss.product(r, a, ei, b, ej);
                        Vector lhs = prod.empty() ? Vector(ss.cell(r, ab2)->dim(), 0) : dab.apply(prod);
                        Vector rhs(lhs.size(), 0);
                        if (ss.cell(r, a2)->dim()) {
                            const Vector t1 = ss.product(r, a2, dei, b, ej);
                            if (!t1.empty()) axpy(f, rhs, 1, t1);
                        }
                        if (ss.cell(r, b2)->dim()) {
                            const Vector t2 = ss.product(r, a, ei, b2, db.apply(ej));
                            if (!t2.empty()) axpy(f, rhs, sign, t2);
                        }
                        if (lhs != rhs)
                            return "page Leibniz rule fails on E_" + std::to_string(r) + " for classes " +
                                   std::to_string(i) + "@" + to_string(a) + " and " + std::to_string(j) + "@" +
                                   to_string(b);
                    }
                }
            }
        }
    }
    return {};
}

SurvivorTable survivors(const SpectralSequence& ss, int r_max) {
    if (r_max < 2) throw RangeError("survivors need r_max >= 2");
    SurvivorTable out{r_max, {}};
    const std::uint32_t p = ss.source().prime();
    for (const auto& k : ss.support()) {
        const auto c2 = ss.cell(2, k);
        SurvivorChain chain{k, c2->dim(), {}, Subspace(p, c2->dim())};
        auto to_e2 = [&](const Subspace& level_space) {
            std::vector<Vector> vs;
            for (const auto& v : level_space.basis_vectors()) {
                auto c = c2->coords(v);
                if (!c) throw std::logic_error("survivor outside E_2 at " + to_string(k));
                vs.push_back(*c);
            }
            return Subspace::span(p, c2->dim(), vs);
        };
        for (int j = 2; j <= r_max; ++j) chain.by_page.push_back(to_e2(ss.cell(j, k)->almost_cycles));
        chain.permanent = to_e2(ss.permanent_cycles(k));
        out.chains.emplace(k, std::move(chain));
    }
    return out;
}

SurvivorTable survivors_iterative(const SpectralSequence& ss, int r_max) {
    if (r_max < 2) throw RangeError("survivors need r_max >= 2");
    SurvivorTable out{r_max, {}};
    const std::uint32_t p = ss.source().prime();
    const PrimeField f(p);
    for (const auto& k : ss.support()) {
        const auto c2 = ss.cell(2, k);
        SurvivorChain chain{k, c2->dim(), {}, Subspace(p, c2->dim())};
        Subspace s = Subspace::full(p, c2->dim());
        chain.by_page.push_back(s);
        for (int r = 2; r < r_max; ++r) {
            const auto cr = ss.cell(r, k);
            const Matrix dr = ss.differential(r, k);
            const auto basis = s.basis_vectors();
            std::vector<Vector> cols;
            for (const auto& b : basis) {
                Vector level(c2->level_indices.size(), 0);
                for (std::size_t i = 0; i < b.size(); ++i) axpy(f, level, b[i], c2->reps[i]);
                auto c = cr->coords(level);
                if (!c) throw std::logic_error("survivor is not an almost-cycle at " + to_string(k));
                cols.push_back(dr.apply(*c));
            }
            const Matrix m = Matrix::from_columns(p, dr.rows(), cols);
            std::vector<Vector> next;
            for (const auto& combo : kernel(m).basis_vectors()) {
                Vector v(c2->dim(), 0);
                for (std::size_t i = 0; i < combo.size(); ++i) axpy(f, v, combo[i], basis[i]);
                next.push_back(std::move(v));
            }
            s = Subspace::span(p, c2->dim(), next);
            chain.by_page.push_back(s);
        }
        out.chains.emplace(k, std::move(chain));
    }
    return out;
}

CrossingReport crossing_differentials_ok(const SpectralSequence& ss, int k, const CellKey& at) {
    CrossingReport report;
    const FilteredDGA& x = ss.source();
    for (int ell = 1; at.n - k - ell >= x.n_min(); ++ell) {
        const CellKey key{at.n - k - ell, at.g.above()};
        if (x.local_between(key.g, key.n, key.n + 1).empty()) continue;
        const int r = k + ell + 1;
        const auto c = ss.cell(r, key);
        const Subspace perm = ss.permanent_cycles(key).sum(c->boundaries);
        for (const auto& rep : c->reps)
            if (!perm.contains(rep)) {
                report.ok = false;
                report.witnesses.push_back({ell, r, key, rep});
            }
    }
    return report;
}

FilteredDGA realize_ss(const AbstractChart& chart) {
    const PrimeField f(chart.prime);
    std::map<std::string, std::size_t> index;
    std::vector<BasisElement> basis;
    std::vector<int> levels;
    for (const auto& c : chart.classes) {
        if (!index.emplace(c.name, basis.size()).second) throw ValidationError("duplicate chart class '" + c.name + "'");
        basis.push_back({c.name, {c.t, c.weight}});
        levels.push_back(c.n);
    }
    auto find = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw ValidationError("chart refers to unknown class '" + name + "'");
        return it->second;
    };
    // role: page on which a class is a source (+r) or target (-r)
    std::map<std::size_t, int> role;
    std::map<std::pair<int, std::size_t>, std::map<std::size_t, Scalar>> rows;  // (page, source) -> target -> coeff
    for (const auto& d : chart.differentials) {
        if (d.page < 1) throw ValidationError("chart differential on page " + std::to_string(d.page));
        const std::size_t s = find(d.from), t = find(d.to);
        const auto& cs = chart.classes[s];
        const auto& ct = chart.classes[t];
        if (ct.n != cs.n + d.page || ct.t != cs.t - 1 || ct.weight != cs.weight)
            throw ValidationError("d_" + std::to_string(d.page) + " from " + d.from + " to " + d.to +
                                  " has the wrong bidegree");
        for (auto [idx, want] : {std::pair{s, d.page}, std::pair{t, -d.page}}) {
            auto [it, inserted] = role.emplace(idx, want);
            if (!inserted && it->second != want)
                throw ValidationError("class '" + chart.classes[idx].name + "' takes part in two differentials");
        }
        Scalar& slot = rows[{d.page, s}][t];
        slot = f.add(slot, f.from_int(d.coeff));
    }
    // group sources by (page, cell) and check each block is a bijection
    std::map<std::pair<int, CellKey>, std::vector<std::size_t>> sources;
    std::map<std::pair<int, CellKey>, std::set<std::size_t>> targets;
    for (const auto& [key, row] : rows) {
        const auto& c = chart.classes[key.second];
        const std::pair group{key.first, CellKey{c.n, {c.t, c.weight}}};
        sources[group].push_back(key.second);
        for (const auto& [t, v] : row) targets[group].insert(t);
    }
    std::map<std::size_t, SparseVec> diff;
    for (const auto& [group, srcs] : sources) {
        const std::vector<std::size_t> tgts(targets[group].begin(), targets[group].end());
        Matrix m(chart.prime, tgts.size(), srcs.size());
        for (std::size_t c = 0; c < srcs.size(); ++c)
            for (std::size_t r = 0; r < tgts.size(); ++r) {
                const auto& row = rows.at({group.first, srcs[c]});
                auto it = row.find(tgts[r]);
                if (it != row.end()) m.set(r, c, it->second);
            }
        if (tgts.size() != srcs.size() || rank(m) != srcs.size())
            throw ValidationError("d_" + std::to_string(group.first) + " out of " + to_string(group.second) +
                                  " is not a bijection");
        for (std::size_t c = 0; c < srcs.size(); ++c) {
            SparseVec img;
            for (std::size_t r = 0; r < tgts.size(); ++r)
                if (Scalar v = m.get(r, c)) img.emplace_back(tgts[r], v);
            diff.emplace(srcs[c], std::move(img));
        }
    }
    if (chart.products.empty()) {
        DGAlgebra alg(chart.prime, std::move(basis), diff, std::nullopt, std::nullopt);
        return FilteredDGA(std::move(alg), std::move(levels));
    }
    if (!chart.unit) throw ValidationError("a chart with products needs a unit class");
    const std::size_t unit = find(*chart.unit);
    std::map<std::pair<std::size_t, std::size_t>, SparseVec> table;
    for (const auto& pr : chart.products) {
        SparseVec v;
        for (const auto& [name, c] : pr.result)
            if (f.from_int(c)) v.emplace_back(find(name), f.from_int(c));
        table[{find(pr.left), find(pr.right)}] = std::move(v);
    }
    try {
        DGAlgebra alg = DGAlgebra::from_table(chart.prime, std::move(basis), diff, table, unit);
        return FilteredDGA(std::move(alg), std::move(levels));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("chart rejected: ") + e.what());
    }
}

ChartPage chart_page(const AbstractChart& chart, int r) {
    std::map<std::string, int> killed;  // page on which a class leaves
    std::map<std::string, int> source_page;
    for (const auto& d : chart.differentials) {
        killed[d.from] = d.page;
        killed[d.to] = d.page;
        source_page[d.from] = d.page;
    }
    ChartPage out;
    for (const auto& c : chart.classes) {
        const CellKey k{c.n, {c.t, c.weight}};
        auto it = killed.find(c.name);
        if (it != killed.end() && it->second < r) continue;
        ++out.dims[k];
        auto sp = source_page.find(c.name);
        if (sp != source_page.end() && sp->second == r) ++out.ranks[k];
    }
    return out;
}

}  // namespace filtss
