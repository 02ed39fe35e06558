#include "filtss/moss.hpp"

#include <sstream>

namespace filtss {

namespace {

Vector embed(std::size_t n, const std::vector<std::size_t>& idx, std::span<const Scalar> v) {
    Vector out(n, 0);
    for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = v[i];
    return out;
}

std::vector<std::size_t> levels_where(const FilteredDGA& x, const Grade& g, bool at_least, int n) {
    std::vector<std::size_t> out;
    const auto& lv = x.block_levels(g);
    for (std::size_t i = 0; i < lv.size(); ++i)
        if ((lv[i] >= n) == at_least) out.push_back(i);
    return out;
}

// move a cycle into F_n by a boundary, if possible
std::optional<Vector> push_into(const FilteredDGA& x, const Grade& g, int n, Vector z) {
    const std::vector<std::size_t> low = levels_where(x, g, false, n);
    Vector rhs;
    bool clean = true;
    for (std::size_t i : low) {
        rhs.push_back(x.prime() == 2 ? z[i] : PrimeField(x.prime()).neg(z[i]));
        if (z[i]) clean = false;
    }
    if (clean) return z;
    const std::size_t above = x.algebra().block_dim(g.above());
    if (!above) return std::nullopt;
    const Matrix din = x.algebra().complex().d(g.above());
    const SolveResult sol = solve(din.select_rows(low), rhs);
    if (!sol.solvable()) return std::nullopt;
    axpy(PrimeField(x.prime()), z, 1, din.apply(*sol.particular));
    return z;
}

}  // namespace

bool MossReport::detected_nonzero() const {
    return match && !is_zero(page_leading.at(match->first));
}

std::optional<Vector> permanent_lift(const SpectralSequence& ss, int r, const PageClass& c) {
    const FilteredDGA& x = ss.source();
    const Grade& g = c.key.g;
    const std::size_t n = x.algebra().block_dim(g);
    const auto cell = ss.cell(r, c.key);
    if (c.coords.size() != cell->dim()) throw ValidationError("class coordinates do not fit the cell");
    if (is_zero(c.coords)) return Vector(n, 0);
    const std::vector<std::size_t> fn = levels_where(x, g, true, c.key.n);
    const Matrix d = x.algebra().complex().d(g);
    const Subspace z = x.algebra().block_dim(g.below()) ? kernel(d.select_cols(fn)) : Subspace::full(x.prime(), fn.size());
    std::vector<Vector> cycles;
    std::vector<Vector> cols;
    for (const Vector& v : z.basis_vectors()) {
        Vector b = embed(n, fn, v);
        auto cc = cell->coords(cell->project(b));
        if (!cc) throw std::logic_error("a cycle of F_n is not an almost-cycle at " + to_string(c.key));
        cycles.push_back(std::move(b));
        cols.push_back(std::move(*cc));
    }
    if (cols.empty()) return std::nullopt;
    const SolveResult sol = solve(Matrix::from_columns(x.prime(), cell->dim(), cols), c.coords);
    if (!sol.solvable()) return std::nullopt;
    Vector out(n, 0);
    for (std::size_t j = 0; j < cycles.size(); ++j)
        if ((*sol.particular)[j]) axpy(PrimeField(x.prime()), out, (*sol.particular)[j], cycles[j]);
    return out;
}

MossReport moss_check(const SpectralSequence& ss, int k, const std::vector<PageClass>& entries,
                      const MossOptions& opt) {
    if (k < 1) throw RangeError("Moss check needs k >= 1");
    if (entries.size() < 3) throw ValidationError("a bracket needs at least three entries");
    const FilteredDGA& x = ss.source();
    const int m = static_cast<int>(entries.size());
    MossReport rep;
    rep.k = k;
    int n_sum = 0;
    Grade g_sum{m - 2, 0};
    for (const auto& e : entries) {
        n_sum += e.key.n;
        g_sum = g_sum + e.key.g;
    }
    rep.value_key = CellKey{n_sum - k * (m - 2), g_sum};
    rep.crossing = crossing_differentials_ok(ss, k, rep.value_key);

    std::ostringstream msg;
    std::vector<ChainMatrix> total;
    for (const auto& e : entries) {
        auto lift = permanent_lift(ss, k, e);
        if (!lift) {
            rep.entries_permanent = false;
            msg << "entry at " << to_string(e.key) << " is not a permanent cycle; ";
            continue;
        }
        total.push_back(single(Chain{e.key.g, std::move(*lift)}));
    }
    if (!rep.crossing.ok) msg << "crossing differentials: " << rep.crossing.witnesses.size() << " witness(es); ";

    const PageAlgebra page = page_algebra(ss, k);
    HomologyCache page_cache(page.algebra);
    std::vector<ChainMatrix> page_entries;
    for (const auto& e : entries) {
        if (!page.first.count(e.key)) throw ValidationError("entry cell is empty on the page");
        page_entries.push_back(single(page.chain_of(e.key, e.coords)));
    }
    BracketOptions bo;
    bo.budget = opt.systems_budget;
    bo.cache = &page_cache;
    const BracketResult pb = matric_massey(page.algebra, page_entries, bo);
    rep.page_defined = pb.defined;
    if (!pb.exhaustive) rep.exhaustive = false;

    const int stable = ss.stabilization_page();
    const auto inf_cell = ss.cell(stable, rep.value_key);
    const auto next_cell = ss.cell(k + 1, rep.value_key);
    if (pb.defined) {
        const auto vals = pb.values(opt.value_limit);
        if (!vals) {
            rep.exhaustive = false;
            msg << "page bracket has too many values; ";
        } else {
            rep.page_values = vals->size();
            const Grade gv = page.grade_of(rep.value_key);
            const bool occupied = page.first.count(rep.value_key) > 0;
            for (const Vector& v : *vals) {
                if (!occupied) {
                    rep.page_leading.push_back(Vector(inf_cell->dim(), 0));
                    continue;
                }
                const HomologyGroup& h = page_cache.at(gv);
                Chain ch = page.algebra.zero_chain(gv);
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (v[i]) axpy(page.algebra.field(), ch.coeffs, v[i], h.reps()[i]);
                const Vector cc = page.cell_coords(rep.value_key, ch);
                const auto kcell = ss.cell(k, rep.value_key);
                Vector level(kcell->level_indices.size(), 0);
                for (std::size_t i = 0; i < cc.size(); ++i)
                    if (cc[i]) axpy(page.algebra.field(), level, cc[i], kcell->reps[i]);
                if (!next_cell->coords(level)) throw std::logic_error("page bracket value is not a d_k cycle");
                if (auto e = inf_cell->coords(level)) rep.page_leading.push_back(std::move(*e));
            }
        }
    }

    if (rep.entries_permanent) {
        HomologyCache tc(x.algebra());
        BracketOptions to;
        to.budget = opt.systems_budget;
        to.cache = &tc;
        const BracketResult tb = matric_massey(x.algebra(), total, to);
        rep.total_defined = tb.defined;
        if (!tb.exhaustive) rep.exhaustive = false;
        if (tb.defined) {
            const auto vals = tb.values(opt.value_limit);
            if (!vals) {
                rep.exhaustive = false;
                msg << "total bracket has too many values; ";
            } else {
                rep.total_values = vals->size();
                const HomologyGroup& h = tc.at(rep.value_key.g);
                for (const Vector& v : *vals) {
                    Vector z(x.algebra().block_dim(rep.value_key.g), 0);
                    for (std::size_t i = 0; i < v.size(); ++i)
                        if (v[i]) axpy(x.algebra().field(), z, v[i], h.reps()[i]);
                    auto pushed = push_into(x, rep.value_key.g, rep.value_key.n, std::move(z));
                    if (!pushed) continue;  // leading term below the value filtration
                    auto e = inf_cell->coords(inf_cell->project(*pushed));
                    if (!e) throw std::logic_error("a cycle of F_n has no E_infinity class");
                    rep.total_leading.push_back(std::move(*e));
                }
            }
        } else {
            msg << "total bracket is not defined; ";
        }
    }
    if (!rep.page_defined) msg << "page bracket is not defined; ";

    // prefer a nonzero match
    for (int pass = 0; pass < 2 && !rep.match; ++pass)
        for (std::size_t i = 0; i < rep.page_leading.size() && !rep.match; ++i) {
            if (pass == 0 && is_zero(rep.page_leading[i])) continue;
            for (std::size_t j = 0; j < rep.total_leading.size(); ++j)
                if (rep.page_leading[i] == rep.total_leading[j]) {
                    rep.match = std::pair(i, j);
                    break;
                }
        }
    rep.message = msg.str();
    return rep;
}

}  // namespace filtss
