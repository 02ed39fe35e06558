#include "filtss/generation.hpp"

#include <algorithm>
#include <sstream>

namespace filtss {

namespace {

Chain chain_of(const DGAlgebra& u, const std::vector<CertifiedClass>& cs, const ClassRef& r) {
    Chain c = u.zero_chain(r.grade);
    for (const auto& [id, a] : r.terms) axpy(u.field(), c.coeffs, a, cs.at(id).rep.coeffs);
    return c;
}

ChainMatrix chains_of(const DGAlgebra& u, const std::vector<CertifiedClass>& cs, const RefMatrix& m) {
    ChainMatrix out{m.rows, m.cols, {}};
    for (const auto& e : m.entries) out.entries.push_back(chain_of(u, cs, e));
    return out;
}

std::string ref_text(const std::vector<CertifiedClass>& cs, const ClassRef& r) {
    std::string out;
    for (const auto& [id, a] : r.terms) {
        if (!out.empty()) out += " + ";
        if (a != 1) out += std::to_string(a) + "*";
        const auto& c = cs.at(id);
        out += c.kind == CertificateKind::generator ? c.label : "c" + std::to_string(id);
    }
    return out.empty() ? "0" : out;
}

std::string matrix_text(const std::vector<CertifiedClass>& cs, const RefMatrix& m) {
    if (m.rows == 1 && m.cols == 1) return ref_text(cs, m.entries[0]);
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows; ++r) {
        if (r) out += "; ";
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out += " ";
            out += ref_text(cs, m.entries[r * m.cols + c]);
        }
    }
    return out + "]";
}

struct Candidate {
    ClassRef ref;
    Chain chain;
};

class Closure {
public:
    Closure(const DGAlgebra& u, const GenerationOptions& opt, HomologyCache& cache, GenerationReport& rep,
            bool decomposables)
        : u_(u), opt_(opt), cache_(cache), rep_(rep), decomposables_(decomposables) {}

    std::size_t add_class(const Grade& g, const Vector& value, CertificateKind kind, std::vector<RefMatrix> factors,
                          std::string label) {
        const HomologyGroup& h = cache_.at(g);
        Chain rep = u_.zero_chain(g);
        for (std::size_t i = 0; i < value.size(); ++i)
            if (value[i]) axpy(u_.field(), rep.coeffs, value[i], h.reps()[i]);
        CertifiedClass c;
        c.id = rep_.classes.size();
        c.grade = g;
        c.value = value;
        c.rep = std::move(rep);
        c.kind = kind;
        c.factors = std::move(factors);
        c.label = std::move(label);
        rep_.classes.push_back(std::move(c));
        rep_.classes.back().label = rep_.render(rep_.classes.back().id);
        return rep_.classes.back().id;
    }

    // search grade g until `covered` holds or the candidates run out
    void search(const Grade& g, IncrementalBasis& span, const std::function<bool()>& covered) {
        target_ = g;
        span_ = &span;
        covered_ = &covered;
        if (done()) return;
        products();
        for (int m = 3; m <= opt_.max_length && !done(); ++m) scalar_brackets(m);
        if (opt_.matric && opt_.max_length >= 3 && !done()) matric_brackets();
    }

    bool out_of_budget() const { return out_of_budget_; }

private:
    bool done() const { return out_of_budget_ || (*covered_)(); }

    void offer(const Vector& v, CertificateKind kind, std::vector<RefMatrix> factors) {
        if (is_zero(v) || (*covered_)()) return;
        if (!span_->insert(v)) return;
        const std::size_t id = add_class(target_, v, kind, std::move(factors), "");
        rep_.certified[target_].push_back(id);
        if (!decomposables_) {
            rep_.inputs[target_].push_back(id);
            candidates_.erase(target_);
        }
    }

    std::vector<Grade> pool_grades() const {
        std::vector<Grade> out;
        for (const auto& [g, ids] : rep_.inputs)
            if (!ids.empty() && g != target_) out.push_back(g);
        return out;
    }

    const std::vector<Candidate>& candidates(const Grade& g, bool basis_only) {
        auto& memo = basis_only ? basis_candidates_ : candidates_;
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        std::vector<Candidate> out;
        const auto& ids = rep_.inputs.at(g);
        const std::uint32_t p = u_.prime();
        const std::size_t k = ids.size();
        if (basis_only || k > opt_.combination_dim) {
            if (!basis_only) rep_.exhaustive = false;
            for (std::size_t id : ids) out.push_back({{g, {{id, 1}}}, rep_.classes[id].rep});
        } else {
            std::size_t total = 1;
            for (std::size_t i = 0; i < k; ++i) total *= p;
            for (std::size_t code = 1; code < total; ++code) {
                ClassRef r{g, {}};
                std::size_t c = code;
                bool lead = false;
                bool normalized = true;
                for (std::size_t i = 0; i < k; ++i, c /= p) {
                    const Scalar a = static_cast<Scalar>(c % p);
                    if (!a) continue;
                    if (!lead && a != 1) normalized = false;
                    lead = true;
                    r.terms.emplace_back(ids[i], a);
                }
                if (!normalized) continue;
                out.push_back({r, chain_of(u_, rep_.classes, r)});
            }
        }
        return memo.emplace(g, std::move(out)).first->second;
    }

    Vector class_of(const Chain& c) { return cache_.at(c.grade).coords(c.coeffs); }

    bool product_vanishes(const Chain& a, const Chain& b) {
        const Grade g = a.grade + b.grade;
        if (!u_.block_dim(g)) return true;
        return is_zero(class_of(u_.multiply(a, b)));
    }

    void products() {
        for (const Grade& g1 : pool_grades()) {
            const Grade g2{target_.degree - g1.degree, target_.weight - g1.weight};
            if (!rep_.inputs.count(g2) || rep_.inputs.at(g2).empty() || g2 == target_) continue;
            if (opt_.s_of(g2) < 1) continue;
            for (const auto& a : candidates(g1, false))
                for (const auto& b : candidates(g2, false)) {
                    if (done()) return;
                    const Chain prod = u_.multiply(a.chain, b.chain);
                    offer(class_of(prod), CertificateKind::product, {RefMatrix{1, 1, {a.ref}}, RefMatrix{1, 1, {b.ref}}});
                }
        }
    }

    void evaluate(const std::vector<RefMatrix>& refs, const std::vector<ChainMatrix>& mats) {
        if (rep_.brackets_tried >= opt_.budget) {
            out_of_budget_ = true;
            rep_.exhaustive = false;
            return;
        }
        ++rep_.brackets_tried;
        BracketOptions bo;
        bo.budget = opt_.systems_budget;
        bo.cache = &cache_;
        const BracketResult res = matric_massey(u_, mats, bo);
        if (!res.exhaustive) rep_.exhaustive = false;
        if (!res.defined) return;
        const std::vector<Vector> reps(res.cosets.begin(), res.cosets.end());
        for (const Vector& c : reps) offer(c, CertificateKind::bracket, refs);
        const PrimeField f(u_.prime());
        for (const Vector& w : res.indeterminacy.basis_vectors()) {
            Vector v = reps.front();
            axpy(f, v, 1, w);
            offer(v, CertificateKind::bracket, refs);
        }
    }

    void scalar_brackets(int m) {
        const std::vector<Grade> pool = pool_grades();
        const int need = opt_.s_of(target_) + m - 2;
        const Grade goal{target_.degree - (m - 2), target_.weight};
        std::vector<Grade> tuple;
        std::function<void(Grade, int)> grades_rec = [&](Grade partial, int s_sum) {
            if (done()) return;
            const int slot = static_cast<int>(tuple.size());
            if (slot == m - 1) {
                const Grade last{goal.degree - partial.degree, goal.weight - partial.weight};
                if (!rep_.inputs.count(last) || rep_.inputs.at(last).empty() || last == target_) return;
                if (opt_.s_of(last) != need - s_sum) return;
                tuple.push_back(last);
                entries_for(tuple);
                tuple.pop_back();
                return;
            }
            for (const Grade& g : pool) {
                const int s = opt_.s_of(g);
                if (s < 1 || s_sum + s + (m - 1 - slot) > need) continue;
                tuple.push_back(g);
                grades_rec(partial + g, s_sum + s);
                tuple.pop_back();
            }
        };
        grades_rec(Grade{0, 0}, 0);
    }

    void entries_for(const std::vector<Grade>& tuple) {
        const std::size_t m = tuple.size();
        std::vector<const Candidate*> pick(m, nullptr);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (done()) return;
            if (i == m) {
                std::vector<RefMatrix> refs;
                std::vector<ChainMatrix> mats;
                for (const Candidate* c : pick) {
                    refs.push_back(RefMatrix{1, 1, {c->ref}});
                    mats.push_back(single(c->chain));
                }
                evaluate(refs, mats);
                return;
            }
            for (const auto& c : candidates(tuple[i], false)) {
                if (i > 0 && !product_vanishes(pick[i - 1]->chain, c.chain)) continue;
                pick[i] = &c;
                rec(i + 1);
            }
        };
        rec(0);
    }

    // <(x1 x2), (y1; y2), z> and <x, (y1 y2), (z1; z2)> over basis classes
    void matric_brackets() {
        const std::vector<Grade> pool = pool_grades();
        const Grade goal{target_.degree - 1, target_.weight};
        auto zero_sum = [&](const Chain& a1, const Chain& b1, const Chain& a2, const Chain& b2) {
            Chain s = u_.multiply(a1, b1);
            s = u_.add(s, u_.multiply(a2, b2));
            return is_zero(class_of(s));
        };
        for (const Grade& gs : pool) {
            const Grade k{goal.degree - gs.degree, goal.weight - gs.weight};
            std::vector<std::pair<Grade, Grade>> splits;
            for (const Grade& ga : pool) {
                const Grade gb{k.degree - ga.degree, k.weight - ga.weight};
                if (rep_.inputs.count(gb) && !rep_.inputs.at(gb).empty() && gb != target_ && opt_.s_of(gb) >= 1)
                    splits.emplace_back(ga, gb);
            }
            for (std::size_t i = 0; i < splits.size(); ++i)
                for (std::size_t j = i; j < splits.size(); ++j)
                    for (int shape = 0; shape < 2; ++shape) {
                        // shape 0: single entry z at gs on the right; shape 1: x at gs on the left
                        const auto& [a1, b1] = splits[i];
                        const auto& [a2, b2] = splits[j];
                        for (const auto& p1 : candidates(a1, true))
                            for (const auto& q1 : candidates(b1, true))
                                for (const auto& p2 : candidates(a2, true))
                                    for (const auto& q2 : candidates(b2, true)) {
                                        if (done()) return;
                                        if (i == j && std::pair(p1.ref.terms[0].first, q1.ref.terms[0].first) >=
                                                          std::pair(p2.ref.terms[0].first, q2.ref.terms[0].first))
                                            continue;
                                        if (!zero_sum(p1.chain, q1.chain, p2.chain, q2.chain)) continue;
                                        if (product_vanishes(p1.chain, q1.chain)) continue;
                                        for (const auto& o : candidates(gs, true)) {
                                            if (done()) return;
                                            std::vector<RefMatrix> refs;
                                            std::vector<ChainMatrix> mats;
                                            if (shape == 0) {
                                                if (!product_vanishes(q1.chain, o.chain) ||
                                                    !product_vanishes(q2.chain, o.chain))
                                                    continue;
                                                refs = {RefMatrix{1, 2, {p1.ref, p2.ref}}, RefMatrix{2, 1, {q1.ref, q2.ref}},
                                                        RefMatrix{1, 1, {o.ref}}};
                                                mats = {ChainMatrix{1, 2, {p1.chain, p2.chain}},
                                                        ChainMatrix{2, 1, {q1.chain, q2.chain}}, single(o.chain)};
                                            } else {
                                                if (!product_vanishes(o.chain, p1.chain) ||
                                                    !product_vanishes(o.chain, p2.chain))
                                                    continue;
                                                refs = {RefMatrix{1, 1, {o.ref}}, RefMatrix{1, 2, {p1.ref, p2.ref}},
                                                        RefMatrix{2, 1, {q1.ref, q2.ref}}};
                                                mats = {single(o.chain), ChainMatrix{1, 2, {p1.chain, p2.chain}},
                                                        ChainMatrix{2, 1, {q1.chain, q2.chain}}};
                                            }
                                            evaluate(refs, mats);
                                        }
                                    }
                    }
        }
    }

    const DGAlgebra& u_;
    const GenerationOptions& opt_;
    HomologyCache& cache_;
    GenerationReport& rep_;
    bool decomposables_;
    bool out_of_budget_ = false;
    Grade target_;
    IncrementalBasis* span_ = nullptr;
    const std::function<bool()>* covered_ = nullptr;
    std::map<Grade, std::vector<Candidate>> candidates_;
    std::map<Grade, std::vector<Candidate>> basis_candidates_;
};

void sort_window(std::vector<Grade>& window, const GenerationOptions& opt) {
    std::sort(window.begin(), window.end(), [&](const Grade& a, const Grade& b) {
        return std::tuple(opt.s_of(a), a.weight, a.degree) < std::tuple(opt.s_of(b), b.weight, b.degree);
    });
    window.erase(std::unique(window.begin(), window.end()), window.end());
    window.erase(std::remove_if(window.begin(), window.end(), [&](const Grade& g) { return opt.s_of(g) < 1; }),
                 window.end());
}

}  // namespace

bool GenerationReport::complete() const {
    return std::all_of(grades.begin(), grades.end(), [](const GradeStatus& s) { return s.target_covered; });
}

Subspace GenerationReport::certified_span(const Grade& g, std::size_t homology_dim) const {
    std::vector<Vector> vs;
    auto it = certified.find(g);
    if (it != certified.end())
        for (std::size_t id : it->second) vs.push_back(classes[id].value);
    return Subspace::span(prime, homology_dim, vs);
}

std::string GenerationReport::render(std::size_t id) const {
    const auto& c = classes.at(id);
    switch (c.kind) {
    case CertificateKind::generator:
        return c.label;
    case CertificateKind::product:
        return "(" + matrix_text(classes, c.factors[0]) + ")(" + matrix_text(classes, c.factors[1]) + ")";
    case CertificateKind::bracket: {
        std::string out = "<";
        for (std::size_t i = 0; i < c.factors.size(); ++i) {
            if (i) out += ", ";
            out += matrix_text(classes, c.factors[i]);
        }
        return out + ">";
    }
    }
    return {};
}

GenerationReport massey_generation(const DGAlgebra& u, std::vector<Grade> window,
                                   const std::map<Grade, std::vector<Vector>>& seeds, const GenerationOptions& opt,
                                   const std::map<Grade, std::vector<Vector>>* targets, HomologyCache* cache) {
    HomologyCache own(u);
    HomologyCache& hc = cache && &cache->algebra() == &u ? *cache : own;
    GenerationReport rep;
    rep.prime = u.prime();
    rep.seeds = seeds;
    Closure engine(u, opt, hc, rep, false);
    sort_window(window, opt);
    for (const Grade& g : window) {
        const std::size_t h = hc.at(g).dim();
        IncrementalBasis span(u.prime(), h);
        auto sit = seeds.find(g);
        if (sit != seeds.end())
            for (std::size_t i = 0; i < sit->second.size(); ++i)
                if (span.insert(sit->second[i])) {
                    const std::size_t id = engine.add_class(g, sit->second[i], CertificateKind::generator, {},
                                                            "g" + to_string(g) + "_" + std::to_string(i));
                    rep.inputs[g].push_back(id);
                    rep.certified[g].push_back(id);
                }
        const std::vector<Vector>* tg = nullptr;
        if (targets) {
            auto it = targets->find(g);
            if (it != targets->end()) tg = &it->second;
        }
        std::function<bool()> covered = [&]() {
            if (!tg) return !targets ? span.dim() == h : true;
            return std::all_of(tg->begin(), tg->end(), [&](const Vector& v) { return span.contains(v); });
        };
        if (h) engine.search(g, span, covered);
        rep.grades.push_back({g, h, span.dim(), covered()});
    }
    return rep;
}

GenerationReport massey_decomposables(const DGAlgebra& u, std::vector<Grade> window, const GenerationOptions& opt,
                                      HomologyCache* cache) {
    HomologyCache own(u);
    HomologyCache& hc = cache && &cache->algebra() == &u ? *cache : own;
    GenerationReport rep;
    rep.prime = u.prime();
    Closure engine(u, opt, hc, rep, true);
    sort_window(window, opt);
    for (const Grade& g : window) {
        const std::size_t h = hc.at(g).dim();
        for (std::size_t i = 0; i < h; ++i) {
            Vector e(h, 0);
            e[i] = 1;
            rep.inputs[g].push_back(
                engine.add_class(g, e, CertificateKind::generator, {}, "x" + to_string(g) + "_" + std::to_string(i)));
        }
    }
    for (const Grade& g : window) {
        const std::size_t h = hc.at(g).dim();
        IncrementalBasis span(u.prime(), h);
        std::function<bool()> covered = [&]() { return span.dim() == h; };
        if (h) engine.search(g, span, covered);
        rep.grades.push_back({g, h, span.dim(), covered()});
    }
    return rep;
}

std::string check_certificates(const DGAlgebra& u, const GenerationReport& r) {
    HomologyCache cache(u);
    std::ostringstream err;
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        const CertifiedClass& c = r.classes[i];
        const std::string who = "class " + std::to_string(i) + " " + r.render(i);
        if (c.id != i) return who + ": id out of order";
        if (c.rep.grade != c.grade || !is_zero(u.d(c.rep).coeffs)) return who + ": representative is not a cycle";
        if (cache.at(c.grade).coords(c.rep.coeffs) != c.value) return who + ": representative has the wrong class";
        for (const auto& m : c.factors)
            for (const auto& e : m.entries)
                for (const auto& [id, a] : e.terms)
                    if (id >= i || r.classes[id].grade != e.grade) return who + ": refers forward or to a wrong grade";
        switch (c.kind) {
        case CertificateKind::generator: {
            auto it = r.seeds.find(c.grade);
            if (!r.seeds.empty()) {
                if (it == r.seeds.end()) return who + ": generator outside the seeds";
                if (!Subspace::span(u.prime(), c.value.size(), it->second).contains(c.value))
                    return who + ": generator outside the seeds";
            }
            break;
        }
        case CertificateKind::product: {
            if (c.factors.size() != 2) return who + ": malformed product";
            const Chain a = chain_of(u, r.classes, c.factors[0].entries.at(0));
            const Chain b = chain_of(u, r.classes, c.factors[1].entries.at(0));
            if (a.grade + b.grade != c.grade) return who + ": product lands in the wrong grade";
            if (cache.at(c.grade).coords(u.multiply(a, b).coeffs) != c.value) return who + ": product value differs";
            break;
        }
        case CertificateKind::bracket: {
            std::vector<ChainMatrix> mats;
            for (const auto& m : c.factors) mats.push_back(chains_of(u, r.classes, m));
            BracketOptions bo;
            bo.cache = &cache;
            const BracketResult res = matric_massey(u, mats, bo);
            if (!res.defined) return who + ": bracket is not defined";
            if (res.entry_grades.size() != 1 || res.entry_grades[0] != c.grade) return who + ": bracket grade differs";
            if (!res.contains(c.value)) return who + ": value is not a member of the bracket";
            break;
        }
        }
    }
    for (const auto& [g, ids] : r.certified)
        for (std::size_t id : ids) {
            if (r.classes.at(id).grade != g) return "certified list at " + to_string(g) + " holds a foreign class";
            if (r.seeds.empty() && r.classes[id].kind == CertificateKind::generator)
                return "decomposable span at " + to_string(g) + " contains a bare input";
        }
    return {};
}

int PageAlgebra::s_of(const Grade& g) const {
    auto it = cell_of.find(g);
    return it == cell_of.end() ? -1 : it->second.n;
}

Chain PageAlgebra::chain_of(const CellKey& k, std::span<const Scalar> cell_coords) const {
    const PrimeField f(algebra.prime());
    Chain ch = algebra.zero_chain(grade_of(k));
    const std::size_t base = first.at(k);
    const Scalar inv = k == unit_cell ? f.inv(unit_scale) : 1;
    for (std::size_t i = 0; i < cell_coords.size(); ++i)
        ch.coeffs[algebra.local_index(base + i)] = f.mul(cell_coords[i], inv);
    return ch;
}

Vector PageAlgebra::cell_coords(const CellKey& k, const Chain& c) const {
    const PrimeField f(algebra.prime());
    const std::size_t base = first.at(k);
    const Scalar sc = k == unit_cell ? unit_scale : 1;
    Vector out;
    for (std::size_t i = base; i < key_of.size() && key_of[i] == k; ++i)
        out.push_back(f.mul(c.coeffs[algebra.local_index(i)], sc));
    return out;
}

Vector PageAlgebra::e2_to_homology(const SpectralSequence& ss, const CellKey& k, std::span<const Scalar> c,
                                   HomologyCache& cache) const {
    if (r != 1) throw std::logic_error("e2_to_homology needs the E_1 algebra");
    const PrimeField f(algebra.prime());
    const auto c2 = ss.cell(2, k);
    Vector level(c2->level_indices.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) axpy(f, level, c[i], c2->reps[i]);
    const auto c1 = ss.cell(1, k)->coords(level);
    if (!c1) throw std::logic_error("E_2 class does not come from E_1 at " + to_string(k));
    const Chain ch = chain_of(k, *c1);
    return cache.at(ch.grade).coords(ch.coeffs);
}

PageAlgebra page_algebra(const SpectralSequence& ss, int r) {
    if (r < 1) throw RangeError("page algebras start at r = 1");
    const FilteredDGA& x = ss.source();
    if (!x.is_multiplicative() || !x.algebra().unit())
        throw ValidationError("the page algebra needs a unital multiplicative filtration");
    const PrimeField f(x.prime());
    PageAlgebra pa{DGAlgebra(x.prime(), {}, {}, std::nullopt, std::nullopt), r, {}, {}, {}, 1, std::nullopt, 1};
    std::vector<BasisElement> basis;
    std::map<CellKey, std::size_t> dims;
    int lo = 0, hi = 0;
    for (const CellKey& k : ss.support())
        if (ss.cell(r, k)->dim()) {
            lo = std::min(lo, k.n + r * k.t());
            hi = std::max(hi, k.n + r * k.t());
        }
    pa.stride = hi - lo + 1;
    for (const CellKey& k : ss.support()) {
        const auto cell = ss.cell(r, k);
        if (!cell->dim()) continue;
        pa.first[k] = basis.size();
        dims[k] = cell->dim();
        const Grade g = pa.grade_of(k);
        pa.cell_of.emplace(g, k);
        for (std::size_t i = 0; i < cell->dim(); ++i) {
            basis.push_back({"E" + std::to_string(r) + to_string(k) + "_" + std::to_string(i), g});
            pa.key_of.push_back(k);
        }
    }
    // the unit class must be a basis element: scale the unit cell so it is
    const std::size_t u0 = *x.algebra().unit();
    const CellKey unit_key{x.level(u0), x.algebra().element(u0).grade};
    if (!dims.count(unit_key) || dims.at(unit_key) != 1)
        throw ValidationError("the unit cell of the page must be one-dimensional");
    {
        const auto cell = ss.cell(r, unit_key);
        const auto coords = cell->coords(cell->project(x.algebra().basis_chain(u0).coeffs));
        if (!coords || (*coords)[0] == 0) throw ValidationError("the unit does not survive to the page");
        pa.unit_cell = unit_key;
        pa.unit_scale = (*coords)[0];
    }
    auto to_coords = [&](const CellKey& k, std::size_t i) {
        Vector v(dims.at(k), 0);
        v[i] = k == unit_key ? pa.unit_scale : 1;
        return v;
    };
    auto from_coords = [&](const CellKey& k, Vector v) {
        if (k == unit_key)
            for (auto& a : v) a = f.mul(a, f.inv(pa.unit_scale));
        return v;
    };
    std::map<std::size_t, SparseVec> diff;
    for (const auto& [k, base] : pa.first) {
        const CellKey tk{k.n + r, k.g.below()};
        if (!pa.first.count(tk)) continue;
        const Matrix d = ss.differential(r, k);
        for (std::size_t i = 0; i < dims.at(k); ++i) {
            const Vector col = from_coords(tk, d.apply(to_coords(k, i)));
            SparseVec img;
            for (std::size_t j = 0; j < col.size(); ++j)
                if (col[j]) img.emplace_back(pa.first.at(tk) + j, col[j]);
            if (!img.empty()) diff[base + i] = std::move(img);
        }
    }
    std::map<std::pair<std::size_t, std::size_t>, SparseVec> table;
    for (const auto& [a, ba] : pa.first)
        for (const auto& [b, bb] : pa.first) {
            const CellKey tk{a.n + b.n, a.g + b.g};
            if (!pa.first.count(tk)) continue;
            for (std::size_t i = 0; i < dims.at(a); ++i)
                for (std::size_t j = 0; j < dims.at(b); ++j) {
                    const Vector prod = from_coords(tk, ss.product(r, a, to_coords(a, i), b, to_coords(b, j)));
                    SparseVec img;
                    for (std::size_t q = 0; q < prod.size(); ++q)
                        if (prod[q]) img.emplace_back(pa.first.at(tk) + q, prod[q]);
                    if (!img.empty()) table[{ba + i, bb + j}] = std::move(img);
                }
        }
    pa.algebra = DGAlgebra::from_table(x.prime(), basis, diff, table, pa.first.at(unit_key));
    return pa;
}

DGAlgebra e1_koszul_view(const PageAlgebra& e1) {
    std::vector<BasisElement> basis = e1.algebra.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const CellKey& k = e1.key_of[i];
        basis[i].grade = Grade{-k.n, k.g.weight};
    }
    auto keep = std::make_shared<DGAlgebra>(e1.algebra);
    DGAlgebra::ProductFn fn = [keep](std::size_t i, std::size_t j) { return keep->multiply_basis(i, j); };
    return DGAlgebra(e1.algebra.prime(), std::move(basis), {}, fn, e1.algebra.unit());
}

bool GenerationVerdict::all_certified() const {
    return hypothesis_ok &&
           std::all_of(targets.begin(), targets.end(), [](const GenerationTarget& t) { return t.certified == t.dim; });
}

GenerationVerdict generation_verifier(const SpectralSequence& ss, int r, GenerationWindow window,
                                      const GenerationOptions& opt) {
    if (r < 2) throw RangeError("generation_verifier needs r >= 2");
    GenerationVerdict v;
    v.r = r;
    v.window = window;
    const PageAlgebra e1 = e1_algebra(ss);
    try {
        const DGAlgebra view = e1_koszul_view(e1);
        int wmax = 0;
        for (const auto& b : view.basis()) wmax = std::max(wmax, b.grade.weight);
        v.koszul = is_koszul_classical(view, {window.s_max, wmax});
        v.hypothesis_ok = v.koszul.koszul;
        if (!v.hypothesis_ok) {
            std::ostringstream os;
            os << "E_1 is not Koszul:";
            for (const auto& c : v.koszul.offending)
                os << " Tor_" << c.s << " at internal degree " << c.g.degree << " (dim " << c.dim << ")";
            v.hypothesis_report = os.str();
        }
    } catch (const ValidationError& e) {
        v.hypothesis_ok = false;
        v.hypothesis_report = std::string("E_1 fails the Koszul precondition: ") + e.what();
    }
    if (!v.hypothesis_ok) return v;

    const SurvivorTable surv = survivors(ss, r);
    HomologyCache cache(e1.algebra);
    std::map<Grade, std::vector<Vector>> seeds;
    std::map<Grade, std::vector<Vector>> targets;
    std::map<CellKey, std::vector<Vector>> target_vectors;
    auto in_window = [&](const CellKey& k) { return k.n >= 1 && k.n <= window.s_max && std::abs(k.t()) <= window.t_abs; };
    for (const auto& [k, chain] : surv.chains) {
        if (!in_window(k) || !e1.first.count(k)) continue;
        const Grade g = e1.grade_of(k);
        for (const Vector& b : chain.by_page.at(static_cast<std::size_t>(r - 2)).basis_vectors()) {
            const Vector h = e1.e2_to_homology(ss, k, b, cache);
            if (k.n < r) seeds[g].push_back(h);
            else {
                targets[g].push_back(h);
                target_vectors[k].push_back(h);
            }
        }
        if (k.n >= r) target_vectors[k];
    }
    std::vector<Grade> grades;
    for (const auto& b : e1.algebra.basis()) {
        const int s = e1.s_of(b.grade);
        if (s >= 1 && s <= window.s_max && std::abs(b.grade.degree) <= window.t_abs) grades.push_back(b.grade);
    }
    GenerationOptions o = opt;
    o.s_of = [&e1](const Grade& g) { return e1.s_of(g); };
    v.closure = massey_generation(e1.algebra, grades, seeds, o, &targets, &cache);
    for (const auto& [k, vs] : target_vectors) {
        const Grade g = e1.grade_of(k);
        const std::size_t h = cache.at(g).dim();
        const Subspace t = Subspace::span(e1.algebra.prime(), h, vs);
        const Subspace c = v.closure.certified_span(g, h);
        v.targets.push_back({k, t.dim(), t.intersect(c).dim()});
    }
    return v;
}

}  // namespace filtss
